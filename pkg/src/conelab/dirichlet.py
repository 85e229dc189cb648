"""
Radial harmonic modes and the existence pipeline.

On a rotationally symmetric model ``dr^2 + f^2 g_{S^{n-1}}`` a harmonic
function with single-mode angular dependence is ``u = phi(r) Y_k(theta)``
where ``Y_k`` is the zonal degree-``k`` harmonic (normalized to mean square
one over the unit sphere) and

    phi'' + (n-1) (f'/f) phi' - lambda_k phi / f^2 = 0,   lambda_k = k(k+n-2).

The regular branch is integrated in the logarithmic variables
``t = ln r``, ``y = ln phi`` and ``q = r phi'/phi``, which satisfy

    y' = q,   q' = q - (n-1)(r f'/f) q + lambda_k (r/f)^2 - q^2,

so polynomial modes never overflow and exponential modes are caught by an
explicit guard.  The second half of the module assembles the exhaustion
pipeline: Dirichlet solutions on dyadic balls, J-normalization, the doubling
scan, the dyadic cascade, the growth envelope and convergence of the
normalized levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from ._quad import LogGridQuadrature
from .cone import exponent_of, harmonic_multiplicity
from .errors import DomainError, RangeError, ZeroHarmonicError
from .profiles import SingleWarpMetric, WarpProfile

__all__ = [
    "RadialMode",
    "solve_radial_mode",
    "harmonicity_residual",
    "dirichlet_mode",
    "GrowthClass",
    "growth_classification",
]

OVERFLOW_LOG = 300.0 * math.log(10.0)


@dataclass
class RadialMode:
    """Samples of the regular radial solution for angular degree ``k``.

    ``log_phi`` is ln|phi| normalized so that phi(1) = 1, ``dlog`` is the
    logarithmic derivative r phi'/phi.  The represented function is
    ``sign * exp(log_phi + log_scale)``; ``sign = 0`` encodes the zero mode.
    """

    n: int
    k: int
    lam: float
    gamma: float
    r: np.ndarray
    log_phi: np.ndarray
    dlog: np.ndarray
    profile: WarpProfile
    log_scale: float = 0.0
    sign: float = 1.0
    overflow: bool = False
    tag: str = "unclassified"

    # -- evaluation -------------------------------------------------------

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    @property
    def r_min(self) -> float:
        return float(self.r[0])

    @property
    def angular_max(self) -> float:
        """max |Y_k| over the sphere for the mean-square-one zonal harmonic."""
        return math.sqrt(harmonic_multiplicity(self.n - 1, self.k))

    @property
    def eigenvalue(self) -> float:
        return self.lam

    def _rhs_q(self, r, q):
        f = self.profile(r)
        f1 = self.profile(r, 1)
        return q - (self.n - 1) * (r * f1 / f) * q + self.lam * (r / f) ** 2 - q * q

    @cached_property
    def _log_spline(self):
        return CubicHermiteSpline(np.log(self.r), self.log_phi, self.dlog)

    @cached_property
    def _q_spline(self):
        return CubicHermiteSpline(np.log(self.r), self.dlog, self._rhs_q(self.r, self.dlog))

    @cached_property
    def quadrature(self) -> LogGridQuadrature:
        return LogGridQuadrature(self.r)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise DomainError("radius must be nonnegative")
        if np.any(x > self.r_max * (1 + 1e-12)):
            raise RangeError(f"radius {float(np.max(x)):.6g} beyond solved range {self.r_max:.6g}")
        return np.minimum(x, self.r_max)

    def log_abs(self, x):
        """ln|phi(x)| including the scale; -inf at the pole when phi(0) = 0."""
        x = self._check(x)
        out = np.empty(np.shape(x))
        inner = x < self.r_min
        with np.errstate(divide="ignore"):
            lead = self.gamma * np.log(x[inner] / self.r_min) if self.gamma > 0 else 0.0
        out[inner] = self.log_phi[0] + lead
        out[~inner] = self._log_spline(np.log(x[~inner]))
        out = out + self.log_scale
        return float(out) if out.ndim == 0 else out

    def q(self, x):
        """Logarithmic derivative r phi'/phi."""
        x = np.maximum(self._check(x), self.r_min)
        out = self._q_spline(np.log(x))
        return float(out) if np.ndim(out) == 0 else out

    def phi(self, x):
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.sign == 0:
            out = np.zeros_like(x)
        else:
            out = self.sign * np.exp(self.log_abs(x))
        return float(out[0]) if scalar else out

    def dphi(self, x):
        scalar = np.ndim(x) == 0
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xs = np.maximum(x, self.r_min)
        out = self.phi(xs) * self.q(xs) / xs
        if self.sign != 0 and self.gamma > 1:
            out = np.where(x == 0, 0.0, out)
        return float(out[0]) if scalar else out

    def value(self, x, theta):
        """u(x, theta) = phi(x) Y_k(theta)."""
        from .cone import zonal_harmonic

        return self.phi(x) * zonal_harmonic(self.n - 1, self.k, theta)

    # -- transformations --------------------------------------------------

    def scaled(self, t: float) -> "RadialMode":
        if t == 0:
            return replace(self, sign=0.0)
        return replace(self, sign=self.sign * math.copysign(1.0, t), log_scale=self.log_scale + math.log(abs(t)))

    def rescaled_to(self, log_scale: float) -> "RadialMode":
        return replace(self, log_scale=log_scale)

    # -- integrals ----------------------------------------------------------

    def log_mean_square(self, x) -> np.ndarray:
        """ln of the mean of u^2 over the geodesic ball of radius x (the J-function)."""
        x = np.atleast_1d(self._check(x))
        if self.sign == 0:
            return np.full(x.shape, -np.inf)
        n = self.n
        quad = self.quadrature
        prof = self.profile
        log_u = lambda s: 2.0 * (self.log_abs(s) - self.log_scale) + (n - 1) * np.log(prof(s))
        log_v = lambda s: (n - 1) * np.log(prof(s))
        with np.errstate(divide="ignore", invalid="ignore"):
            num = quad.log_at(log_u, x)
            den = quad.log_at(log_v, x)
        with np.errstate(invalid="ignore"):
            out = num - den + 2.0 * self.log_scale
        # the mean over a shrinking ball tends to u(p)^2
        return np.where(x == 0, 2.0 * self.log_abs(x), out)

    def mean_square(self, x) -> np.ndarray:
        """J(x): mean of u^2 over the geodesic ball of radius x."""
        return np.exp(self.log_mean_square(x))


def _frobenius_start(profile: WarpProfile, n: int, lam: float):
    fp0 = float(profile(0.0, 1))
    if fp0 <= 0:
        raise DomainError("profile must have positive slope at the pole")
    lam_eff = lam / fp0**2
    gamma = float(exponent_of(lam_eff, n))
    e1 = float(profile(0.0, 2)) / (2.0 * fp0)
    q1 = -e1 * ((n - 1) * gamma + 2.0 * lam_eff) / (n - 1 + 2.0 * gamma)
    return gamma, q1


def solve_radial_mode(metric: SingleWarpMetric, k: int, r_max: float, *, r_start: float = 1e-6,
                      points_per_decade: int = 512, rtol: float = 1e-10, atol: float = 1e-12) -> RadialMode:
    """Regular-branch solution on [r_start, r_max], normalized so phi(1) = 1.

    Started from the Frobenius expansion ``phi ~ r^gamma (1 + q1 r)`` where
    gamma(gamma + n - 2) = lambda_k / f'(0)^2 and ``q1`` comes from f''(0)
    (it vanishes for profiles with f''(0) = 0).  Integration uses an adaptive
    Runge-Kutta 4(5) pair.  If |phi| would exceed 1e300 the solved prefix is
    returned with ``overflow=True``.
    """
    if k < 0 or int(k) != k:
        raise DomainError("mode index must be a nonnegative integer")
    if r_max <= 0:
        raise DomainError("r_max must be positive")
    n = metric.n
    prof = metric.profile
    lam = float(k * (k + n - 2))
    gamma, q1 = _frobenius_start(prof, n, lam)

    h = math.log(10.0) / points_per_decade
    j0 = math.floor(math.log(r_start) / h)
    j1 = math.ceil(math.log(max(r_max, 1.0)) / h - 1e-9)
    t_nodes = h * np.arange(j0, j1 + 1)
    r0 = math.exp(t_nodes[0])

    def rhs(t, y):
        r = math.exp(t)
        f = prof(r)
        f1 = prof(r, 1)
        q = y[1]
        return [q, q - (n - 1) * (r * f1 / f) * q + lam * (r / f) ** 2 - q * q]

    y0 = [gamma * math.log(r0) + q1 * r0, gamma + q1 * r0]
    inner = t_nodes[t_nodes <= 0.0]
    outer = t_nodes[t_nodes >= 0.0]
    sol1 = solve_ivp(rhs, (inner[0], 0.0), y0, method="RK45", t_eval=inner, rtol=rtol, atol=atol)
    if not sol1.success:
        raise RuntimeError(f"radial integration failed: {sol1.message}")
    y_one = sol1.y[:, -1]

    overflow = False
    if outer.size > 1:
        def blowup(t, y):
            return y[0] - y_one[0] - OVERFLOW_LOG

        blowup.terminal = True
        sol2 = solve_ivp(rhs, (0.0, outer[-1]), y_one, method="RK45", t_eval=outer, rtol=rtol,
                         atol=atol, events=blowup)
        if sol2.status == -1:
            raise RuntimeError(f"radial integration failed: {sol2.message}")
        overflow = sol2.status == 1
        t_all = np.concatenate([inner, sol2.t[1:]])
        y_all = np.concatenate([sol1.y, sol2.y[:, 1:]], axis=1)
    else:
        t_all, y_all = inner, sol1.y

    log_phi = y_all[0] - y_one[0]
    return RadialMode(n=n, k=int(k), lam=lam, gamma=gamma, r=np.exp(t_all), log_phi=log_phi,
                      dlog=y_all[1].copy(), profile=prof, overflow=overflow)


def harmonicity_residual(metric: SingleWarpMetric, mode: RadialMode, *, join_margin: int = 3) -> float:
    """Largest relative residual of the radial equation over interior samples.

    In t = ln r the equation is the pair y' = q and
    q' = q - (n-1)(r f'/f) q + lambda (r/f)^2 - q^2 for y = ln|phi|.  Both
    derivatives are taken from a five-point centered stencil on the stored
    samples (the log variables stay smooth even for exponentially growing
    modes) and compared with the right-hand sides, each relative to the
    largest term at that sample.  Samples whose stencil touches a profile join
    are skipped.
    """
    r = mode.r
    t = np.log(r)
    hs = np.diff(t)
    h = float(np.median(hs))
    if np.max(np.abs(hs - h)) > 1e-9 * max(h, 1.0):
        raise DomainError("mode samples must be log-uniform")
    if mode.sign == 0 or r.size < 5:
        return 0.0

    def d5(v):
        return (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)

    y, q = mode.log_phi, mode.dlog
    ri, qi = r[2:-2], q[2:-2]
    f = metric.profile(ri)
    f1 = metric.profile(ri, 1)
    terms = [qi, -(metric.n - 1) * (ri * f1 / f) * qi, mode.lam * (ri / f) ** 2, -qi * qi]
    dq = d5(q)
    res_q = np.abs(dq - sum(terms))
    scale_q = np.maximum.reduce([np.abs(dq)] + [np.abs(v) for v in terms])
    dy = d5(y)
    res_y = np.abs(dy - qi)
    scale_y = np.maximum(np.abs(dy), np.abs(qi))
    ok = (scale_q > 0) & (scale_y > 0)
    for j in metric.profile.joins:
        ok &= np.abs(np.log(ri / j)) > (join_margin + 2) * h
    if not np.any(ok):
        return 0.0
    return float(max(np.max(res_q[ok] / scale_q[ok]), np.max(res_y[ok] / scale_y[ok])))


def dirichlet_mode(metric: SingleWarpMetric, k: int, R: float, **solver) -> RadialMode:
    """Dirichlet solution on the ball B(R) with boundary datum Y_k: phi(R) = 1.

    In the separable setting this is the regular branch rescaled; it vanishes
    at the pole for k >= 1.  If the branch overflows before R the prefix is
    returned with ``overflow=True`` and the scale is left at phi(1) = 1.
    """
    mode = solve_radial_mode(metric, k, R, **solver)
    if mode.r_max < R * (1 - 1e-12):
        return mode
    return mode.rescaled_to(-mode.log_abs(R))


@dataclass
class GrowthClass:
    kind: str  # "polynomial" or "exponential"
    rate: float
    window: tuple[float, float]
    residual_poly: float
    residual_exp: float

    def __str__(self):
        return f"{self.kind}({self.rate:.6g})"


def growth_classification(metric: SingleWarpMetric, k: int, r_max: float = 1e4,
                          mode: RadialMode | None = None) -> GrowthClass:
    """Polynomial-versus-exponential growth of the regular branch.

    Fits ln phi linearly against ln r and against r over the outer half decade
    of the solved range and keeps the fit with the smaller RMS residual.  The
    polynomial rate is the fitted exponent, the exponential rate the fitted
    slope of ln phi in r.
    """
    mode = solve_radial_mode(metric, k, r_max) if mode is None else mode
    top = mode.r_max
    sel = mode.r >= top / math.sqrt(10.0)
    r = mode.r[sel]
    y = mode.log_phi[sel]
    window = (float(r[0]), float(r[-1]))
    if k == 0 or np.ptp(y) < 1e-12:
        return GrowthClass("polynomial", 0.0, window, 0.0, 0.0)

    def fit(x):
        coef, res, *_ = np.polyfit(x, y, 1, full=True)
        rms = math.sqrt(float(res[0]) / y.size) if res.size else 0.0
        return float(coef[0]), rms

    a_poly, rp = fit(np.log(r))
    a_exp, re = fit(r)
    if rp <= re:
        return GrowthClass("polynomial", a_poly, window, rp, re)
    return GrowthClass("exponential", a_exp, window, rp, re)


# --------------------------------------------------------------------------
# exhaustion pipeline


def normalize_by_J(metric: SingleWarpMetric, mode: RadialMode, k0: float) -> RadialMode:
    """Rescale so that the mean of u^2 over B(k0/2) equals one."""
    if metric.profile is not mode.profile:
        raise DomainError("mode was solved on a different metric")
    if mode.sign == 0:
        raise ZeroHarmonicError("cannot normalize the zero mode")
    lj = float(mode.log_mean_square(k0 / 2.0)[0])
    if not np.isfinite(lj):
        raise ZeroHarmonicError(f"J({k0 / 2!r}) vanishes; normalization undefined")
    return mode.rescaled_to(mode.log_scale - 0.5 * lj)


@dataclass
class Lemma53Scan:
    """Verdicts of J(r) <= 4^d J(r/2) for r in [r0 R, R]."""

    radii: np.ndarray
    log_ratio: np.ndarray
    holds: np.ndarray
    d: float
    R: float

    @property
    def all_hold(self) -> bool:
        return bool(np.all(self.holds))

    @property
    def worst_ratio(self) -> float:
        return float(np.exp(np.max(self.log_ratio)))


def lemma53_scan(metric: SingleWarpMetric, mode: RadialMode, d: float, r0: float = 0.25,
                 R: float | None = None, points: int = 64) -> Lemma53Scan:
    """Doubling of J on the outer part [r0 R, R] of the ball B(R)."""
    if not 0 < r0 < 1:
        raise DomainError("r0 must lie in (0, 1)")
    R = mode.r_max if R is None else float(R)
    radii = np.geomspace(r0 * R, R, points)
    lj = mode.log_mean_square(radii)
    lh = mode.log_mean_square(radii / 2.0)
    with np.errstate(invalid="ignore"):
        lr = np.where(np.isneginf(lj) & np.isneginf(lh), 0.0, lj - lh)
    return Lemma53Scan(radii, lr, lr <= 2.0 * d * math.log(2.0), d, R)


def lemma53_threshold(metric: SingleWarpMetric, k: int, d: float, R_values, r0: float = 0.25) -> float | None:
    """Smallest R in ``R_values`` from which on every larger R passes the scan."""
    R_values = np.sort(np.asarray(R_values, dtype=float))
    mode = solve_radial_mode(metric, k, float(R_values[-1]))
    ok = np.array([mode.r_max >= R * (1 - 1e-12) and lemma53_scan(metric, mode, d, r0, R).all_hold
                   for R in R_values])
    bad = np.nonzero(~ok)[0]
    if bad.size == 0:
        return float(R_values[0])
    if bad[-1] == R_values.size - 1:
        return None
    return float(R_values[bad[-1] + 1])


@dataclass
class GrowthEnvelope:
    """Smallest C with |u| <= C rho^d on [rho_min, rho_max] (sampled)."""

    C: float
    d: float
    window: tuple[float, float]
    end_slope: float
    divergent: bool


def growth_envelope(metric: SingleWarpMetric, mode: RadialMode, d: float, k0: float,
                    r_range: tuple[float, float] | None = None, slope_tol: float = 1e-2) -> GrowthEnvelope:
    """Envelope constant of a normalized mode over rho in [k0, R].

    ``max |u|`` on the sphere of radius rho is |phi(rho)| sqrt(N).  The
    envelope is flagged divergent when the logarithmic slope of phi at the top
    of the range exceeds d (so no C works on larger balls) or when the mode
    overflowed.
    """
    lo, hi = (k0, mode.r_max) if r_range is None else r_range
    hi = min(hi, mode.r_max)
    if mode.sign == 0:
        return GrowthEnvelope(0.0, d, (lo, hi), 0.0, False)
    if not 0 < lo < hi:
        raise DomainError("envelope range is empty")
    rho = np.concatenate([mode.r[(mode.r > lo) & (mode.r < hi)], [lo, hi]])
    lc = mode.log_abs(rho) + math.log(mode.angular_max) - d * np.log(rho)
    slope = float(mode.q(hi))
    divergent = bool(mode.overflow or slope > d + slope_tol)
    return GrowthEnvelope(float(np.exp(np.max(lc))), d, (float(lo), float(hi)), slope, divergent)


STAGES = ("precondition", "dirichlet", "normalize", "lemma53", "cascade", "envelope", "convergence", "certificate")


@dataclass
class PipelineReport:
    """Outcome of the exhaustion pipeline, one verdict per stage."""

    k: int
    d: float
    k0: float
    radii: list
    normalizers: list
    lemma53: list
    cascade: list
    envelope_C: float
    envelope_divergent: bool
    envelope_stability: float
    sup_differences: list
    u_at_pole: float
    J_half_k0: float
    verdicts: dict
    notes: list = field(default_factory=list)
    finest: RadialMode | None = None

    @property
    def success(self) -> bool:
        return all(v in ("pass", "skipped") for v in self.verdicts.values())

    @property
    def failed_stage(self) -> str | None:
        for s in STAGES:
            if self.verdicts.get(s) in ("fail", "precondition-failed"):
                return s
        return None

    @property
    def exit_code(self) -> int:
        if self.verdicts.get("precondition") == "precondition-failed":
            return 2
        return 0 if self.success else 1

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "k0": self.k0,
            "radii": self.radii,
            "normalizers": self.normalizers,
            "lemma53": self.lemma53,
            "cascade": self.cascade,
            "envelope_C": self.envelope_C,
            "envelope_divergent": self.envelope_divergent,
            "envelope_stability": self.envelope_stability,
            "sup_differences": self.sup_differences,
            "u_at_pole": self.u_at_pole,
            "J_half_k0": self.J_half_k0,
            "verdicts": dict(self.verdicts),
            "failed_stage": self.failed_stage,
            "success": self.success,
            "notes": list(self.notes),
        }


def tangent_cone_spectrum(metric: SingleWarpMetric, count: int = 12):
    """Degree spectrum of the tangent cone at infinity, or None if it is not a cone of power n."""
    from .cone import ConeSpace, sphere_spectrum

    beta = metric.profile.asymptote.slope
    if beta <= 0:
        return None
    return ConeSpace(float(metric.n), sphere_spectrum(metric.n - 1, beta, count))


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def existence_pipeline(metric: SingleWarpMetric, k: int, d: float, levels: int = 6, k0: float = 2.0, *,
                       r0: float = 0.25, sup_tol: float = 1e-6, spectrum_tol: float = 1e-6,
                       stability_tol: float = 0.05, **solver) -> PipelineReport:
    """Dirichlet exhaustion at R_i = k0 2^i (i = 1..levels) and its verification.

    Stages: precondition (d off the tangent-cone degree spectrum and above its
    smallest nonzero element; skipped for models whose tangent cone at
    infinity is not a cone of full power), Dirichlet solves, J-normalization
    at k0/2, the doubling scan on [r0 R_i, R_i], the dyadic cascade down to k0,
    the growth envelope on the finest level, sup-norm convergence of the
    normalized levels on {b <= k0}, and the nonconstancy certificate
    (u(p) = 0, J(k0/2) = 1).
    """
    from .cone import degree_spectrum, is_in_degree_spectrum
    from .frequency import levels_for
    from .three_circles import cascade as run_cascade

    if levels < 2:
        raise DomainError("need at least two levels")
    verdicts = {s: "skipped" for s in STAGES}
    notes = []
    cone = tangent_cone_spectrum(metric)
    if cone is None:
        notes.append("tangent cone at infinity is not a cone of full power; precondition not applicable")
    else:
        inside, dist = is_in_degree_spectrum(cone, d, spectrum_tol)
        ex = [a for a in degree_spectrum(cone).exponents if a > 0]
        if inside or not d > ex[0]:
            verdicts["precondition"] = "precondition-failed"
            notes.append(f"d = {d!r}: distance to degree spectrum {dist:.3g}, smallest nonzero exponent {ex[0]!r}")
            return PipelineReport(k, d, k0, [], [], [], [], math.nan, False, math.nan, [], math.nan, math.nan,
                                  verdicts, notes)
        verdicts["precondition"] = "pass"

    # levels are processed in order; the first failing level ends the exhaustion
    radii, normed, normalizers, lemma53, casc = [], [], [], [], []
    for i in range(1, levels + 1):
        R = k0 * 2.0**i
        mode = dirichlet_mode(metric, k, R, **solver)
        if mode.r_max < R * (1 - 1e-12):
            verdicts["dirichlet"] = "fail"
            notes.append(f"regular branch overflows before R = {R!r}")
            break
        verdicts["dirichlet"] = "pass"
        normalizers.append(float(np.exp(mode.log_mean_square(k0 / 2.0)[0])))
        if not (np.isfinite(normalizers[-1]) and normalizers[-1] > 0):
            verdicts["normalize"] = "fail"
            break
        verdicts["normalize"] = "pass"
        m = normalize_by_J(metric, mode, k0)
        radii.append(R)
        normed.append(m)
        scan = lemma53_scan(metric, m, d, r0, R)
        lemma53.append({"R": R, "holds": scan.all_hold, "worst_ratio": scan.worst_ratio})
        rs = k0 * 2.0 ** np.arange(0, i + 1)
        rep = run_cascade(rs, m.log_mean_square(rs), d, k0, log_values=True)
        casc.append({"R": R, "passes": rep.passes, "first_failure": rep.first_failure,
                     "envelope_constant": rep.envelope_constant})
        verdicts["lemma53"] = _verdict(scan.all_hold)
        verdicts["cascade"] = _verdict(rep.passes) if scan.all_hold else "skipped"
        if not (scan.all_hold and rep.passes):
            notes.append(f"level R = {R!r} fails; exhaustion stopped")
            break

    if not normed:
        return PipelineReport(k, d, k0, radii, normalizers, lemma53, casc, math.nan, False, math.nan, [],
                              math.nan, math.nan, verdicts, notes)

    fine = normed[-1]
    env = growth_envelope(metric, fine, d, k0, (k0, radii[-1]))
    stability = math.nan
    if len(normed) >= 2:
        prev = growth_envelope(metric, normed[-2], d, k0, (k0, radii[-2]))
        same_window = growth_envelope(metric, fine, d, k0, (k0, radii[-2]))
        stability = abs(prev.C / same_window.C - 1.0) if same_window.C > 0 else math.nan
    env_ok = math.isfinite(env.C) and not env.divergent and (len(normed) < 2 or stability <= stability_tol)
    verdicts["envelope"] = _verdict(env_ok)
    if env.divergent:
        notes.append(f"growth envelope diverges: log-slope {env.end_slope:.6g} exceeds d = {d!r}")

    diffs = []
    if len(normed) >= 2:
        lv = levels_for(metric)
        s_top = float(lv.inverse(k0))
        pts = np.concatenate([fine.r[fine.r <= s_top], [s_top]])
        amax = fine.angular_max
        diffs = [float(np.max(np.abs(a.phi(pts) - b.phi(pts))) * amax) for a, b in zip(normed[:-1], normed[1:])]
        verdicts["convergence"] = _verdict(all(x < sup_tol for x in diffs))

    u_p = float(abs(fine.phi(0.0)))
    j_half = float(np.exp(fine.log_mean_square(k0 / 2.0)[0]))
    verdicts["certificate"] = _verdict(u_p == 0.0 and abs(j_half - 1.0) <= 1e-10)
    if k == 0:
        notes.append("constant mode: u(p) != 0, the limit is constant")

    return PipelineReport(k, d, k0, radii, normalizers, lemma53, casc, env.C, env.divergent, stability, diffs,
                          u_p, j_half, verdicts, notes, fine)
