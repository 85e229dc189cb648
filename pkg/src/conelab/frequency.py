"""
Green's-function distance and frequency curves on rotationally symmetric models.

For ``dr^2 + f^2 g_{S^{n-1}}`` with f asymptotic to ``beta r + c`` the minimal
positive Green's function with pole at the origin is radial,

    G(r) = (n - 2) * int_r^inf f(s)^{1-n} ds,

normalized so that G ~ r^{2-n} at the pole.  The distance-like function is
``b = (V_M / V_0 * G)^{1/(2-n)}`` with ``V_M`` the asymptotic volume ratio and
``V_0 = omega_{n-1}/n`` the Euclidean one.  Its level sets are geodesic
spheres, so every functional of a separable harmonic function
``u = phi(r) Y_k`` reduces to one-dimensional radial quadrature.

With ``omega = omega_{n-1}`` and ``r = b(s)``:

    I(r) = r^{1-n} omega phi(s)^2 f(s)^{n-1} b'(s)
    D(r) = r^{2-n} omega int_0^s (phi'^2 + lambda phi^2 / f^2) f^{n-1}
    E(r) = same as D with the extra weight b'^2
    F(r) = r^{3-n} omega phi'(s)^2 f(s)^{n-1} b'(s)

and the frequency is D/I, W = E/I.  All curves are stored as logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import _GL_W, _GL_X, LogGridQuadrature
from .cone import sphere_volume, zonal_harmonic
from .errors import (DomainError, NonMaximalGrowthError, PreconditionError, RangeError,
                     UsageError)
from .profiles import SingleWarpMetric, asymptotic_volume_ratio

__all__ = [
    "AmbientConstants",
    "ambient_constants",
    "GreenRadial",
    "green_radial",
    "log_I",
    "FrequencyCurves",
    "frequency_curve",
    "log_grid",
    "check_derivative_identity",
    "w_defect",
    "DoublingScan",
    "d_doubling_scan",
    "e_over_d",
    "DGrowthCheck",
    "d_growth_from_i",
    "FrequencyBound",
    "frequency_bound_scan",
    "SupRatios",
    "sup_ratio_check",
]


@dataclass(frozen=True)
class AmbientConstants:
    """Dimension, asymptotic volume ratio and the Euclidean reference volumes."""

    n: int
    V_M: float

    def __post_init__(self):
        if self.n < 3:
            raise DomainError("dimension must be >= 3")
        if not 0 <= self.V_M <= self.V0 * (1 + 1e-12):
            raise DomainError(f"V_M = {self.V_M!r} must lie in [0, V_0 = {self.V0!r}]")

    @property
    def omega(self) -> float:
        """Volume of the unit (n-1)-sphere."""
        return sphere_volume(self.n - 1)

    @property
    def V0(self) -> float:
        """Volume of the Euclidean unit ball."""
        return sphere_volume(self.n - 1) / self.n

    @property
    def ratio(self) -> float:
        return self.V_M / self.V0


def ambient_constants(metric: SingleWarpMetric) -> AmbientConstants:
    return AmbientConstants(metric.n, asymptotic_volume_ratio(metric).value)


def log_grid(r_min: float, r_max: float, per_decade: int = 512) -> np.ndarray:
    """Log-uniform grid with nodes at integer multiples of ln(10)/per_decade."""
    if not 0 < r_min < r_max:
        raise UsageError("need 0 < r_min < r_max")
    h = math.log(10.0) / per_decade
    j0 = math.ceil(math.log(r_min) / h - 1e-9)
    j1 = math.floor(math.log(r_max) / h + 1e-9)
    return np.exp(h * np.arange(j0, j1 + 1))


# --------------------------------------------------------------------------
# Green's function and b


@dataclass
class GreenRadial:
    """Radial Green's function G(s), the distance b(s) and its inverse.

    G is integrated numerically (in log-radius, per grid interval, summed from
    the outside in) up to ``R_split`` where the profile agrees with its
    asymptote to 1e-8, and in closed form beyond.
    """

    metric: SingleWarpMetric
    constants: AmbientConstants
    R_split: float
    per_decade: int = 128
    s_min: float = 1e-8

    def __post_init__(self):
        prof = self.metric.profile
        asym = prof.asymptote
        self._slope, self._icpt = asym.slope, asym.intercept
        if self.R_split > self.s_min:
            nodes = log_grid(self.s_min, self.R_split, self.per_decade)
            nodes = np.unique(np.concatenate([[self.s_min], nodes, [self.R_split]]))
            self._quad = LogGridQuadrature(nodes)
            pieces = self._quad.pieces(self._integrand)
            # rev[j] = integral from nodes[j] to R_split
            self._rev = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
        else:
            self._quad = None
        self._f1 = float(prof(0.0, 1))

    def _integrand(self, s):
        return self.metric.profile(s) ** (1 - self.metric.n)

    def _tail(self, s):
        """(n-2) int_s^inf (beta t + c)^{1-n} dt."""
        n = self.metric.n
        return (self._slope * s + self._icpt) ** (2 - n) / self._slope

    def G(self, s):
        scalar = np.ndim(s) == 0
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if np.any(s < 0):
            raise DomainError("radius must be nonnegative")
        n = self.metric.n
        out = np.empty_like(s)
        far = s >= self.R_split
        out[far] = self._tail(s[far])
        near = ~far
        if np.any(near):
            x = s[near]
            tail = self._tail(self.R_split)
            q = self._quad
            res = np.empty_like(x)
            inner = x < q.nodes[0]
            if np.any(inner):
                # f ~ f'(0) s near the pole
                with np.errstate(divide="ignore"):
                    head = (x[inner] ** (2 - n) - q.nodes[0] ** (2 - n)) / ((n - 2) * self._f1 ** (n - 1))
                res[inner] = head + self._rev[0]
            mid = ~inner
            if np.any(mid):
                xm = x[mid]
                j = np.clip(np.searchsorted(q.nodes, xm, side="right"), 1, q.nodes.size - 1)
                # integral from xm up to nodes[j], then rev[j]
                tb = q.t[j]
                ta = np.log(xm)
                half = 0.5 * (tb - ta)
                tq = (0.5 * (ta + tb))[:, None] + half[:, None] * _GL_X[None, :]
                sq = np.exp(tq)
                part = np.sum(self._integrand(sq.ravel()).reshape(sq.shape) * sq * half[:, None] * _GL_W[None, :], axis=1)
                res[mid] = part + self._rev[j]
            out[near] = (n - 2) * res + tail
        return float(out[0]) if scalar else out

    @property
    def _c(self) -> float:
        return self.constants.ratio

    def b(self, s):
        scalar = np.ndim(s) == 0
        s = np.atleast_1d(np.asarray(s, dtype=float))
        n = self.metric.n
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = (self._c * self.G(s[pos])) ** (1.0 / (2 - n))
        return float(out[0]) if scalar else out

    def db(self, s):
        """b'(s) = b f^{1-n} / G, i.e. |grad b|."""
        scalar = np.ndim(s) == 0
        s = np.atleast_1d(np.asarray(s, dtype=float))
        n = self.metric.n
        out = np.empty_like(s)
        pos = s > 0
        sp = s[pos]
        out[pos] = self.b(sp) * self.metric.profile(sp) ** (1 - n) / self.G(sp)
        out[~pos] = self._c ** (1.0 / (2 - n)) / self._f1
        return float(out[0]) if scalar else out

    def inverse(self, r, tol: float = 1e-12):
        """s with b(s) = r, by bracketed Newton iteration seeded at s = r.

        b is increasing with b(0) = 0, so [0, r] is widened by doubling its top
        until it brackets the root; Newton steps that leave the bracket are
        replaced by bisection.  Converged when the step is below tol * r.
        """
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r < 0):
            raise DomainError("level must be nonnegative")
        out = np.zeros_like(r)
        pos = r > 0
        target = r[pos]
        lo = np.zeros_like(target)
        hi = target.copy()
        for _ in range(200):
            short = self.b(hi) < target
            if not np.any(short):
                break
            lo = np.where(short, hi, lo)
            hi = np.where(short, 2.0 * hi, hi)
        x = target.copy()
        for _ in range(100):
            bx = self.b(x)
            err = bx - target
            lo = np.where(err < 0, np.maximum(lo, x), lo)
            hi = np.where(err > 0, np.minimum(hi, x), hi)
            step = err / self.db(x)
            nx = x - step
            outside = (nx <= lo) | (nx >= hi)
            nx = np.where(outside, 0.5 * (lo + hi), nx)
            done = np.abs(nx - x) <= tol * target
            x = nx
            if np.all(done):
                break
        out[pos] = x
        return float(out[0]) if scalar else out


def green_radial(metric: SingleWarpMetric, constants: AmbientConstants | None = None, *,
                 split_tol: float = 1e-8) -> GreenRadial:
    """Build the radial Green's function and b for a maximal-volume-growth model.

    Raises :class:`NonMaximalGrowthError` for profiles with bounded asymptote:
    then V_M = 0 and b is undefined (for n = 3 and bounded f the Green's
    integral itself diverges).
    """
    if not isinstance(metric, SingleWarpMetric):
        raise UsageError("green_radial needs a rotationally symmetric model")
    constants = ambient_constants(metric) if constants is None else constants
    if metric.profile.asymptote.slope <= 0 or constants.V_M <= 0:
        raise NonMaximalGrowthError("asymptotic volume ratio is zero; b is undefined")
    R = metric.profile.asymptote_radius(split_tol)
    if not math.isfinite(R):
        raise DomainError("profile never approaches its declared asymptote")
    return GreenRadial(metric, constants, R)


class DistanceLevels:
    """Stand-in for b when V_M = 0: b = rho, |grad b| = 1 (levels are geodesic spheres)."""

    def __init__(self, metric: SingleWarpMetric):
        self.metric = metric
        self.constants = AmbientConstants(metric.n, 0.0)

    def b(self, s):
        return s

    def db(self, s):
        return np.ones_like(np.asarray(s, dtype=float)) if np.ndim(s) else 1.0

    def inverse(self, r, tol: float = 0.0):
        return r


def levels_for(metric: SingleWarpMetric):
    """Green's levels on maximal-growth models, distance levels otherwise."""
    try:
        return green_radial(metric)
    except NonMaximalGrowthError:
        return DistanceLevels(metric)


def _level_weight(levels) -> float:
    """ln of the factor in front of phi^2 f^{n-1} b' in I (omega, or omega for distance levels)."""
    return math.log(levels.constants.omega)


def log_I(levels, mode, r):
    """ln I(r) for a radial mode, r in b-units."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    n = mode.n
    s = levels.inverse(r)
    prof = mode.profile
    with np.errstate(divide="ignore"):
        return ((1 - n) * np.log(r) + _level_weight(levels) + 2.0 * mode.log_abs(s)
                + (n - 1) * np.log(prof(s)) + np.log(levels.db(s)))


# --------------------------------------------------------------------------
# frequency curves


@dataclass
class FrequencyCurves:
    """log I, D, E, F on a grid of b-levels, with the frequency and W."""

    r: np.ndarray
    s: np.ndarray
    log_I: np.ndarray
    log_D: np.ndarray
    log_E: np.ndarray
    log_F: np.ndarray
    n: int
    k: int
    levels: str = "green"

    @property
    def I(self):
        return np.exp(self.log_I)

    @property
    def D(self):
        return np.exp(self.log_D)

    @property
    def E(self):
        return np.exp(self.log_E)

    @property
    def F(self):
        return np.exp(self.log_F)

    @property
    def freq(self):
        """D/I."""
        with np.errstate(invalid="ignore"):
            out = np.exp(self.log_D - self.log_I)
        return np.where(np.isneginf(self.log_D), 0.0, out)

    @property
    def W(self):
        """E/I."""
        with np.errstate(invalid="ignore"):
            out = np.exp(self.log_E - self.log_I)
        return np.where(np.isneginf(self.log_E), 0.0, out)

    def interp(self, name: str, r):
        """Log-log interpolation of a stored curve ('I', 'D', 'E', 'F')."""
        r = np.asarray(r, dtype=float)
        lo, hi = self.r[0], self.r[-1]
        if np.any(r < lo * (1 - 1e-12)) or np.any(r > hi * (1 + 1e-12)):
            raise RangeError(f"radius outside the curve grid [{lo:.6g}, {hi:.6g}]")
        arr = getattr(self, "log_" + name)
        return np.interp(np.log(r), np.log(self.r), arr)

    def rows(self):
        I, D, E, F, fr, W = self.I, self.D, self.E, self.F, self.freq, self.W
        for i in range(self.r.size):
            yield (float(self.r[i]), float(I[i]), float(D[i]), float(E[i]), float(F[i]), float(fr[i]), float(W[i]))


def frequency_curve(metric: SingleWarpMetric, mode, grid, *, levels=None) -> FrequencyCurves:
    """I, D, E, F, the frequency and W on the b-levels in ``grid``.

    ``levels`` defaults to the Green's-function levels; on models without
    maximal volume growth geodesic spheres are used (b = rho).
    """
    if metric.profile is not mode.profile:
        raise UsageError("mode was solved on a different metric")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1 or np.any(grid <= 0):
        raise UsageError("grid must be a nonempty array of positive radii")
    levels = levels_for(metric) if levels is None else levels
    s = levels.inverse(grid)
    if np.any(s > mode.r_max * (1 + 1e-12)):
        raise RangeError(f"level {float(grid.max()):.6g} reaches s = {float(s.max()):.6g} beyond the solved "
                         f"range {mode.r_max:.6g}")
    n = mode.n
    prof = mode.profile
    lam = mode.lam
    log_omega = _level_weight(levels)
    quad = mode.quadrature

    def log_energy(x):
        q = mode.q(x)
        with np.errstate(divide="ignore"):
            return (2.0 * (mode.log_abs(x) - mode.log_scale) + np.log(q * q / x**2 + lam / prof(x) ** 2)
                    + (n - 1) * np.log(prof(x)))

    def log_energy_weighted(x):
        with np.errstate(divide="ignore"):
            return log_energy(x) + 2.0 * np.log(levels.db(x))

    with np.errstate(divide="ignore", invalid="ignore"):
        lD = quad.log_at(log_energy, s) + 2.0 * mode.log_scale
        lE = quad.log_at(log_energy_weighted, s) + 2.0 * mode.log_scale
        lr = np.log(grid)
        lD = (2 - n) * lr + log_omega + lD
        lE = (2 - n) * lr + log_omega + lE
        lI = log_I(levels, mode, grid)
        ldb = np.log(levels.db(s))
        lphi = mode.log_abs(s)
        lq = np.log(np.abs(mode.q(s)))
        lF = ((3 - n) * lr + log_omega + 2.0 * (lphi + lq - np.log(s)) + (n - 1) * np.log(prof(s)) + ldb)
    if lam == 0:
        lD = np.full_like(lD, -np.inf)
        lE = np.full_like(lE, -np.inf)
    kind = "green" if isinstance(levels, GreenRadial) else "distance"
    return FrequencyCurves(grid, s, lI, lD, lE, lF, n, mode.k, kind)


# --------------------------------------------------------------------------
# identities and lemma checks


def check_derivative_identity(curves: FrequencyCurves) -> float:
    """Largest residual of I'(r) = 2 D(r)/r on the grid interior.

    In logarithmic form the identity is d ln I / d ln r = 2 D/I; the residual
    at each sample is |d ln I/d ln r - 2 D/I| / max(2 D/I, 1), i.e. relative to
    2D/r for nonconstant modes.  Derivatives use centered differences (five
    points where available) on the log grid.
    """
    r = curves.r
    if r.size < 3:
        raise UsageError("need at least three grid points")
    t = np.log(r)
    y = curves.log_I
    if r.size >= 5 and np.allclose(np.diff(t), t[1] - t[0], rtol=1e-9, atol=0):
        h = t[1] - t[0]
        dy = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
        target = 2.0 * curves.freq[2:-2]
    else:
        dy = np.gradient(y, t)[1:-1]
        target = 2.0 * curves.freq[1:-1]
    res = np.abs(dy - target) / np.maximum(target, 1.0)
    return float(np.max(res))


def w_defect(curves: FrequencyCurves, r: float, factor: float = 4.0) -> float:
    """int_r^{factor r} min{(ln W)'(t), 0} dt from the sampled W.

    (ln W)' is taken by centered differences in ln t; since d(ln W)/dt dt =
    d(ln W)/d(ln t) d(ln t), the integral is a trapezoid sum in ln t over the
    samples inside [r, factor r].
    """
    if factor <= 1:
        raise DomainError("factor must exceed 1")
    lo, hi = curves.r[0], curves.r[-1]
    if r < lo * (1 - 1e-12) or factor * r > hi * (1 + 1e-12):
        raise RangeError(f"[{r:.6g}, {factor * r:.6g}] not inside the grid [{lo:.6g}, {hi:.6g}]")
    t = np.log(curves.r)
    with np.errstate(divide="ignore"):
        lw = np.log(curves.W)
    if not np.all(np.isfinite(lw)):
        return 0.0
    dlw = np.gradient(lw, t)
    neg = np.minimum(dlw, 0.0)
    a, b = math.log(r), math.log(factor * r)
    inside = (t > a) & (t < b)
    ts = np.concatenate([[a], t[inside], [b]])
    vs = np.concatenate([[np.interp(a, t, neg)], neg[inside], [np.interp(b, t, neg)]])
    return float(np.trapezoid(vs, ts)) if hasattr(np, "trapezoid") else float(np.trapz(vs, ts))


@dataclass
class DoublingScan:
    radii: np.ndarray
    qualifying: np.ndarray
    log_ratio: np.ndarray
    log_bound: float

    @property
    def qualifying_radii(self) -> np.ndarray:
        return self.radii[self.qualifying]

    def last_qualifying(self) -> float | None:
        q = self.qualifying_radii
        return float(q[-1]) if q.size else None


def d_doubling_scan(curves: FrequencyCurves, d: float, factor: float | None = None,
                    bound: float | None = None) -> DoublingScan:
    """Grid radii r with D(factor r) <= bound D(r).

    Defaults: factor = 2^{4n+1}, bound = 2^{10 n d}.  Only radii with
    factor * r inside the grid are examined.
    """
    n = curves.n
    factor = 2.0 ** (4 * n + 1) if factor is None else float(factor)
    log_bound = 10.0 * n * d * math.log(2.0) if bound is None else math.log(bound)
    rs = curves.r[curves.r * factor <= curves.r[-1] * (1 + 1e-12)]
    if rs.size == 0:
        raise RangeError("grid does not span the doubling factor")
    l0 = curves.interp("D", rs)
    l1 = curves.interp("D", np.minimum(rs * factor, curves.r[-1]))
    with np.errstate(invalid="ignore"):
        lr = np.where(np.isneginf(l0) & np.isneginf(l1), 0.0, l1 - l0)
    return DoublingScan(rs, lr <= log_bound, lr, log_bound)


def e_over_d(curves: FrequencyCurves, r) -> float:
    """ln(D(r)/E(r)); zero for constant modes."""
    ld = curves.interp("D", r)
    le = curves.interp("E", r)
    with np.errstate(invalid="ignore"):
        out = np.where(np.isneginf(ld), 0.0, ld - le)
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class DGrowthCheck:
    r: float
    gamma: float
    premise: bool
    conclusion: bool
    sides: tuple[float, float, float, float]

    @property
    def holds(self) -> bool:
        return self.conclusion or not self.premise


def d_growth_from_i(curves: FrequencyCurves, r: float, gamma: float | None = None) -> DGrowthCheck:
    """I(2^{4n+2} r) <= gamma I(r/2)  implies  D(2^{4n+1} r) <= 2^{n-2} gamma D(r).

    With ``gamma=None`` the smallest admissible gamma (the ratio itself) is
    used, which makes the premise hold with equality.
    """
    n = curves.n
    lI_hi = float(curves.interp("I", 2.0 ** (4 * n + 2) * r))
    lI_lo = float(curves.interp("I", r / 2.0))
    lD_hi = float(curves.interp("D", 2.0 ** (4 * n + 1) * r))
    lD_lo = float(curves.interp("D", r))
    lg = lI_hi - lI_lo if gamma is None else math.log(gamma)
    premise = lI_hi <= lI_lo + lg + 1e-12
    if math.isinf(lD_lo) and math.isinf(lD_hi):
        conclusion = True
    else:
        conclusion = lD_hi <= (n - 2) * math.log(2.0) + lg + lD_lo + 1e-12
    sides = tuple(math.exp(v) for v in (lI_hi, lI_lo, lD_hi, lD_lo))
    return DGrowthCheck(r, math.exp(lg), bool(premise), bool(conclusion), sides)


@dataclass
class FrequencyBound:
    sup: float
    argsup: float
    bound: float
    end_value: float

    @property
    def passes(self) -> bool:
        return self.sup <= self.bound


def frequency_bound_scan(metric: SingleWarpMetric, mode, d: float, r_range=(1.0, 1e3), *,
                         per_decade: int = 512, curves: FrequencyCurves | None = None,
                         growth_tol: float = 1e-2) -> FrequencyBound:
    """sup of the frequency over ``r_range`` against the bound 5 d.

    The precondition (the mode grows with exponent at most d) is checked from
    the frequency at the top of the range, which tends to the growth exponent.
    """
    if curves is None:
        curves = frequency_curve(metric, mode, log_grid(r_range[0], r_range[1], per_decade))
    sel = (curves.r >= r_range[0] * (1 - 1e-12)) & (curves.r <= r_range[1] * (1 + 1e-12))
    if not np.any(sel):
        raise RangeError("range does not meet the curve grid")
    fr = curves.freq[sel]
    end = float(fr[-1])
    if end > d + growth_tol:
        raise PreconditionError(f"mode grows with exponent about {end:.6g} > d = {d!r}")
    i = int(np.argmax(fr))
    return FrequencyBound(float(fr[i]), float(curves.r[sel][i]), 5.0 * d, end)


@dataclass
class SupRatios:
    radii: np.ndarray
    value_ratio: np.ndarray
    gradient_ratio: np.ndarray

    @staticmethod
    def _spread(a):
        a = a[np.isfinite(a) & (a > 0)]
        return float(a.max() / a.min()) if a.size else 1.0

    @property
    def spreads(self) -> tuple[float, float]:
        return self._spread(self.value_ratio), self._spread(self.gradient_ratio)

    def bounded(self, limit: float = 100.0) -> bool:
        return all(s < limit for s in self.spreads)


def sup_ratio_check(metric: SingleWarpMetric, mode, theta: float, radii, *, levels=None,
                    angular_samples: int = 721) -> SupRatios:
    """sup |u|^2 / I(r) and r^2 sup |grad u|^2 / I(r) over {b <= (1 - theta) r}.

    The sup is taken over the solved radial samples inside the level set plus
    its boundary, and over ``angular_samples`` polar angles (the harmonic is
    zonal).  |grad u|^2 = phi'^2 Y^2 + phi^2 |Y_theta|^2 / f^2.
    """
    if not 0 < theta < 1:
        raise DomainError("theta must lie in (0, 1)")
    levels = levels_for(metric) if levels is None else levels
    radii = np.asarray(radii, dtype=float)
    ang = np.linspace(0.0, math.pi, angular_samples)
    m = metric.n - 1
    Y = zonal_harmonic(m, mode.k, ang)
    Yt = zonal_harmonic(m, mode.k, ang, derivative=True)
    ymax = float(np.max(Y**2))
    vr, gr = [], []
    for r in radii:
        s_top = float(levels.inverse((1.0 - theta) * r))
        if s_top > mode.r_max:
            raise RangeError("level set beyond the solved range")
        s = np.concatenate([mode.r[mode.r < s_top], [s_top]])
        phi = mode.phi(s)
        dphi = mode.dphi(s)
        f = metric.profile(s)
        sup_u = float(np.max(phi**2)) * ymax
        grad = (dphi[:, None] * Y[None, :]) ** 2 + (phi[:, None] * Yt[None, :] / f[:, None]) ** 2
        sup_g = float(np.max(grad))
        I = float(np.exp(log_I(levels, mode, r))[0])
        vr.append(sup_u / I)
        gr.append(r * r * sup_g / I)
    return SupRatios(radii, np.asarray(vr), np.asarray(gr))
