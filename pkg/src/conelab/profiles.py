"""
Warping profiles and warped-product model metrics.

A rotationally symmetric metric ``dr^2 + f(r)^2 g_{S^{n-1}}`` is described by
a :class:`SingleWarpMetric`; the eight-dimensional doubly warped metric
``dr^2 + f(r)^2 k_1 + h(r)^2 k_2`` over the Hopf fibration S^3 -> S^7 -> S^4
by a :class:`DoublyWarpedMetric`.

Profiles are piecewise closed forms.  Each profile evaluates its value and
first two derivatives exactly, and reports its join points so that C^2 gluing
can be checked from one-sided closed forms rather than finite differences.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .cone import sphere_volume
from .errors import ConstraintViolation, DomainError, PoleError, UsageError

__all__ = [
    "Asymptote",
    "WarpProfile",
    "ExactConeProfile",
    "AsymConicalProfile",
    "DingProfile",
    "NiParameters",
    "NiFProfile",
    "NiHProfile",
    "CustomPiecewiseProfile",
    "SingleWarpMetric",
    "DoublyWarpedMetric",
    "CurvatureSample",
    "AssumptionReport",
    "PositivityReport",
    "VolumeRatio",
    "PAPER_NI_PARAMETERS",
    "HOPF_LEVEL_COEFFICIENT",
    "eval_profile",
    "check_ni_assumptions",
    "derive_ni_parameters",
    "c2_gluing_residuals",
    "sectional_components_doubly",
    "ricci_components_single",
    "curvature_scan",
    "positivity_scan",
    "ni_comparison_functions",
    "volume_density",
    "volume",
    "growth_degree",
    "asymptotic_volume_ratio",
    "euclidean",
    "exact_cone",
    "asym_conical",
    "ding",
    "ni_metric",
]

# Vol(S^3) * Vol(S^4 with metric g/4) = 2 pi^2 * pi^2 / 6
HOPF_LEVEL_COEFFICIENT = math.pi**4 / 3.0


@dataclass(frozen=True)
class Asymptote:
    """Affine behaviour ``f(r) ~ slope * r + intercept`` at infinity.

    ``slope == 0`` means the profile tends to the constant ``intercept``.
    """

    slope: float
    intercept: float

    def __call__(self, r):
        return self.slope * np.asarray(r, dtype=float) + self.intercept


class WarpProfile:
    """Base class for piecewise closed-form warping functions.

    Subclasses implement ``_branch(index, r, order)`` for each smooth piece
    and set ``joins`` (ascending) and ``join_owner`` ("left" if the join point
    belongs to the lower branch, "right" otherwise).
    """

    kind: str = "custom-piecewise"
    join_owner: str = "left"

    @property
    def joins(self) -> tuple[float, ...]:
        return ()

    @property
    def asymptote(self) -> Asymptote:
        raise NotImplementedError

    def _branch(self, index: int, r: np.ndarray, order: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, r, order: int = 0):
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if order not in (0, 1, 2):
            raise DomainError("order must be 0, 1 or 2")
        joins = np.asarray(self.joins, dtype=float)
        if joins.size == 0:
            out = self._branch(0, r, order)
        else:
            side = "left" if self.join_owner == "left" else "right"
            idx = np.searchsorted(joins, r, side=side)
            out = np.empty_like(r)
            for i in np.unique(idx):
                sel = idx == i
                out[sel] = self._branch(int(i), r[sel], order)
        return float(out[0]) if scalar else out

    def asymptote_radius(self, tol: float = 1e-8, r_max: float = 1e8) -> float:
        """Smallest radius beyond which |f - asymptote| < tol on a fine log scan."""
        grid = np.concatenate([[0.0], np.geomspace(1e-6, r_max, 4000)])
        gap = np.abs(self(grid) - self.asymptote(grid))
        bad = np.nonzero(gap >= tol)[0]
        if bad.size == 0:
            return 0.0
        if bad[-1] == grid.size - 1:
            return math.inf
        return float(grid[bad[-1] + 1])


@dataclass(frozen=True, eq=True)
class ExactConeProfile(WarpProfile):
    """f(r) = beta * r: the cone over a round sphere of radius beta."""

    beta: float = 1.0
    kind = "exact-cone"

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise DomainError("beta must lie in (0, 1]")

    @property
    def asymptote(self) -> Asymptote:
        return Asymptote(self.beta, 0.0)

    def _branch(self, index, r, order):
        if order == 0:
            return self.beta * r
        if order == 1:
            return np.full_like(r, self.beta)
        return np.zeros_like(r)


@dataclass(frozen=True, eq=True)
class AsymConicalProfile(WarpProfile):
    """f(r) = beta r + (1 - beta)(1 - exp(-r)).

    Concave, f(0) = 0, f'(0) = 1 and f'(inf) = beta; the tangent cone at
    infinity is the cone over the sphere of radius beta.
    """

    beta: float = 0.8
    kind = "asym-conical"

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise DomainError("beta must lie in (0, 1]")

    @property
    def asymptote(self) -> Asymptote:
        return Asymptote(self.beta, 1.0 - self.beta)

    def _branch(self, index, r, order):
        b = self.beta
        e = np.exp(-r)
        if order == 0:
            return b * r + (1.0 - b) * (-np.expm1(-r))
        if order == 1:
            return b + (1.0 - b) * e
        return -(1.0 - b) * e


_DING_SHIFT = 3.0 ** -0.25
_DING_A = (1.0 - 3.0 ** -0.5) ** 2 / (2.0 * 3.0 ** -0.25)
_DING_LOG_B_OVER_A = 1.0 / (1.0 - 3.0 ** -0.5)


@dataclass(frozen=True, eq=True)
class DingProfile(WarpProfile):
    """Mollifier-based bounded profile with linear volume growth.

    f(r) = a - b exp(-1/(1 - (r + 3^-1/4)^2)) for r < 1 - 3^-1/4, and f = a
    afterwards, with b = a exp(1/(1 - 3^-1/2)).
    """

    kind = "ding"
    join_owner = "right"

    @property
    def a(self) -> float:
        return _DING_A

    @property
    def b(self) -> float:
        return _DING_A * math.exp(_DING_LOG_B_OVER_A)

    @property
    def join(self) -> float:
        return 1.0 - _DING_SHIFT

    @property
    def joins(self):
        return (self.join,)

    @property
    def asymptote(self) -> Asymptote:
        return Asymptote(0.0, _DING_A)

    def _branch(self, index, r, order):
        if index == 1:
            return np.full_like(r, _DING_A) if order == 0 else np.zeros_like(r)
        s = r + _DING_SHIFT
        u = 1.0 - s * s
        out = np.zeros_like(r) if order else np.full_like(r, _DING_A)
        live = u > 0
        if not np.any(live):
            return out
        s, u = s[live], u[live]
        expo = _DING_LOG_B_OVER_A - 1.0 / u
        # b * exp(-1/u), zero once it underflows (all derivatives vanish at the join)
        e = np.where(expo > -700.0, _DING_A * np.exp(np.maximum(expo, -700.0)), 0.0)
        if order == 0:
            out[live] = _DING_A - e
            return out
        g1 = -2.0 * s / u**2
        if order == 1:
            val = np.where(e > 0, -e * g1, 0.0)
        else:
            g2 = -2.0 / u**2 - 8.0 * s * s / u**3
            val = np.where(e > 0, -e * (g2 + g1 * g1), 0.0)
        out[live] = val
        return out


@dataclass(frozen=True)
class NiParameters:
    """Constants a, delta, c0..c6 of the doubly warped positive-curvature model."""

    a: float
    delta: float
    c0: float
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    def __post_init__(self):
        for name in ("a", "delta", "c0", "c1", "c2", "c3", "c4", "c5", "c6"):
            if not getattr(self, name) > 0:
                raise DomainError(f"parameter {name} must be positive")

    def replace(self, **changes) -> "NiParameters":
        data = {k: getattr(self, k) for k in ("a", "delta", "c0", "c1", "c2", "c3", "c4", "c5", "c6")}
        data.update(changes)
        return NiParameters(**data)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("a", "delta", "c0", "c1", "c2", "c3", "c4", "c5", "c6")}


PAPER_NI_PARAMETERS = NiParameters(
    a=1.0 / (2.0 * math.sqrt(3.0)),
    delta=2.0 * math.pi / math.sqrt(3.0),
    c0=13.0 / 4.0,
    c1=4.0,
    c2=1.0,
    c3=0.5,
    c4=0.25,
    c5=0.25,
    c6=1.0,
)


class _NiProfile(WarpProfile):
    params: NiParameters
    join_owner = "left"

    @property
    def joins(self):
        return (self.params.delta,)

    def _round(self, r, order):
        a = self.params.a
        if order == 0:
            return np.sin(a * r) / a
        if order == 1:
            return np.cos(a * r)
        return -a * np.sin(a * r)

    def _outer(self, x, order):
        raise NotImplementedError

    def outer(self, x, order: int = 0):
        """The exterior closed form evaluated at x = r - delta >= 0."""
        return self._outer(np.asarray(x, dtype=float), order)

    def _branch(self, index, r, order):
        if index == 0:
            return self._round(r, order)
        return self._outer(r - self.params.delta, order)


@dataclass(frozen=True)
class NiFProfile(_NiProfile):
    """f: round sine inside delta, c1 - c2 exp(-c3 x) outside."""

    params: NiParameters = field(default_factory=lambda: PAPER_NI_PARAMETERS)
    kind = "ni-f"

    @property
    def asymptote(self) -> Asymptote:
        return Asymptote(0.0, self.params.c1)

    def _outer(self, x, order):
        p = self.params
        e = np.exp(-p.c3 * x)
        if order == 0:
            return p.c1 - p.c2 * e
        if order == 1:
            return p.c2 * p.c3 * e
        return -p.c2 * p.c3**2 * e


@dataclass(frozen=True)
class NiHProfile(_NiProfile):
    """h: round sine inside delta, c0 + c4 x - c5 exp(-c6 x) outside."""

    params: NiParameters = field(default_factory=lambda: PAPER_NI_PARAMETERS)
    kind = "ni-h"

    @property
    def asymptote(self) -> Asymptote:
        p = self.params
        return Asymptote(p.c4, p.c0 - p.c4 * p.delta)

    def _outer(self, x, order):
        p = self.params
        e = np.exp(-p.c6 * x)
        if order == 0:
            return p.c0 + p.c4 * x - p.c5 * e
        if order == 1:
            return p.c4 + p.c5 * p.c6 * e
        return -p.c5 * p.c6**2 * e


@dataclass(frozen=True)
class CustomPiecewiseProfile(WarpProfile):
    """User-supplied pieces: ``branches[i](r, order)`` is valid between joins."""

    branches: tuple[Callable, ...]
    join_points: tuple[float, ...] = ()
    declared_asymptote: Asymptote = Asymptote(1.0, 0.0)
    kind = "custom-piecewise"

    def __post_init__(self):
        if len(self.branches) != len(self.join_points) + 1:
            raise DomainError("need exactly one more branch than join points")

    @property
    def joins(self):
        return tuple(self.join_points)

    @property
    def asymptote(self):
        return self.declared_asymptote

    def _branch(self, index, r, order):
        return np.asarray(self.branches[index](r, order), dtype=float) * np.ones_like(r)


def eval_profile(profile: WarpProfile, r, order: int = 0):
    """Closed-form value of the ``order``-th derivative of ``profile`` at ``r``."""
    if np.any(np.asarray(r, dtype=float) < 0):
        raise DomainError("radius must be nonnegative")
    return profile(r, order)


# --------------------------------------------------------------------------
# parameter constraints of the doubly warped model

_ASSUMPTIONS = (
    "a_from_c",
    "c1_from_c2_c3",
    "delta_from_arcsin",
    "h_value_match",
    "h_second_derivative_match",
    "h_slope_match",
    "h_decays_faster",
    "h_dominates_f",
)


@dataclass
class AssumptionReport:
    names: tuple[str, ...]
    holds: tuple[bool, ...]
    residuals: tuple[float, ...]

    @property
    def all_hold(self) -> bool:
        return all(self.holds)

    def failing(self) -> list[str]:
        return [n for n, ok in zip(self.names, self.holds) if not ok]

    def as_dict(self) -> dict:
        return {n: {"holds": h, "residual": r} for n, h, r in zip(self.names, self.holds, self.residuals)}


def check_ni_assumptions(params: NiParameters, tol: float = 1e-12) -> AssumptionReport:
    """Evaluate the eight constraints on (a, delta, c0..c6).

    Residuals are lhs - rhs.  The first six are equalities (hold when
    |residual| <= tol), ``h_decays_faster`` is the strict inequality c6 > c3,
    and ``h_dominates_f`` is c0 >= 3 c2 + c5 (holds when residual >= -tol).
    """
    p = params
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = p.c2 * p.c3**2 / (p.c1 - p.c2)
        a_rhs = math.sqrt(ratio) if ratio >= 0 else math.nan
        arg = p.a * (p.c1 - p.c2)
        d_rhs = math.asin(arg) / p.a if -1 <= arg <= 1 else math.nan
    res = (
        p.a - a_rhs,
        p.c1 - (p.c2 + (1.0 - p.c2**2 * p.c3**2) / (p.c2 * p.c3**2)),
        p.delta - d_rhs,
        (p.c0 - p.c5) - (p.c1 - p.c2),
        p.c5 * p.c6**2 - p.c2 * p.c3**2,
        p.c4 + p.c5 * p.c6 - p.c2 * p.c3,
        p.c6 - p.c3,
        p.c0 - (3.0 * p.c2 + p.c5),
    )
    holds = tuple(abs(r) <= tol for r in res[:6]) + (res[6] > 0, res[7] >= -tol)
    holds = tuple(bool(h) and not math.isnan(r) for h, r in zip(holds, res))
    return AssumptionReport(_ASSUMPTIONS, holds, tuple(float(r) for r in res))


def derive_ni_parameters(c2: float, c3: float, c6: float) -> NiParameters:
    """Solve the equality constraints for the remaining constants.

    Order: c1, a, delta, c5, c4, c0.  Raises :class:`ConstraintViolation` when
    the triple cannot produce positive constants; warns (and returns the set)
    when only ``h_dominates_f`` (equivalently c1 >= 4 c2) fails.
    """
    if min(c2, c3, c6) <= 0:
        raise DomainError("c2, c3, c6 must be positive")
    if not c6 > c3:
        raise ConstraintViolation("h_decays_faster", f"need c6 > c3, got c6={c6}, c3={c3}")
    if not c2 * c3 < 1:
        raise ConstraintViolation("c1_from_c2_c3", f"need c2*c3 < 1 for c1 > c2, got {c2 * c3}")
    c1 = c2 + (1.0 - c2**2 * c3**2) / (c2 * c3**2)
    a = math.sqrt(c2 * c3**2 / (c1 - c2))
    delta = math.asin(a * (c1 - c2)) / a
    c5 = c2 * c3**2 / c6**2
    c4 = c2 * c3 - c5 * c6
    c0 = c5 + c1 - c2
    params = NiParameters(a=a, delta=delta, c0=c0, c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6)
    if not c1 >= 4.0 * c2:
        warnings.warn(f"h_dominates_f violated: c1 = {c1:.6g} < 4 c2 = {4 * c2:.6g}", stacklevel=2)
    return params


def c2_gluing_residuals(profile: WarpProfile) -> list[tuple[float, float, float]]:
    """Jumps of value, first and second derivative at every join point.

    Each residual is (right branch - left branch) at the join, both evaluated
    from their closed forms.
    """
    joins = profile.joins
    if not joins:
        raise UsageError("profile has no join points")
    out = []
    for i, r0 in enumerate(joins):
        x = np.array([r0])
        out.append(tuple(float(profile._branch(i + 1, x, k)[0] - profile._branch(i, x, k)[0])
                         for k in range(3)))
    return out


# --------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class SingleWarpMetric:
    """dr^2 + f(r)^2 g_{S^{n-1}} on R^n."""

    profile: WarpProfile
    n: int = 3

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError("ambient dimension must be an integer >= 3")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def sphere_area(self) -> float:
        return sphere_volume(self.n - 1)

    def joins(self):
        return self.profile.joins


@dataclass(frozen=True)
class DoublyWarpedMetric:
    """dr^2 + f^2 k_1 + h^2 k_2 on R^8 over the Hopf fibration S^3 -> S^7 -> S^4."""

    f: WarpProfile
    h: WarpProfile
    level_coefficient: float = HOPF_LEVEL_COEFFICIENT
    fiber_dims: tuple[int, int] = (3, 4)

    def __post_init__(self):
        if tuple(self.f.joins) != tuple(self.h.joins):
            raise DomainError("f and h must share their join points")

    @property
    def dim(self) -> int:
        return 1 + sum(self.fiber_dims)

    def joins(self):
        return self.f.joins


@dataclass
class CurvatureSample:
    """Curvature components sampled at radii ``r`` (units 1/length^2)."""

    r: np.ndarray
    components: dict

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.components)

    def minimum(self) -> tuple[float, str, float]:
        """(smallest value, component name, radius where it occurs)."""
        best = (math.inf, "", math.nan)
        r = np.atleast_1d(self.r)
        for name, vals in self.components.items():
            vals = np.atleast_1d(vals)
            i = int(np.argmin(vals))
            if vals[i] < best[0]:
                best = (float(vals[i]), name, float(r[i]))
        return best

    def rows(self):
        r = np.atleast_1d(self.r)
        cols = [np.atleast_1d(v) for v in self.components.values()]
        for i in range(r.size):
            yield (float(r[i]),) + tuple(float(c[i]) for c in cols)


def sectional_components_doubly(metric: DoublyWarpedMetric, r) -> CurvatureSample:
    """The five coordinate-plane sectional curvatures of the doubly warped metric."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise PoleError("sectional curvatures at r = 0 are defined only as limits")
    f, f1, f2 = (metric.f(r, k) for k in range(3))
    h, h1, h2 = (metric.h(r, k) for k in range(3))
    comps = {
        "K_x1x2": 1.0 / f**2 - (f1 / f) ** 2,
        "K_xy": f**2 / h**4 - f1 * h1 / (f * h),
        "K_y1y2": 4.0 / h**2 - 3.0 * f**2 / h**4 - (h1 / h) ** 2,
        "K_rx": -f2 / f,
        "K_ry": -h2 / h,
    }
    return CurvatureSample(r, comps)


def ricci_components_single(metric: SingleWarpMetric, r) -> CurvatureSample:
    """Radial and tangential Ricci curvature of dr^2 + f^2 g_{S^{n-1}}.

    Ric_rr = -(n-1) f''/f,  Ric_tan = -f''/f + (n-2)(1 - f'^2)/f^2.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise PoleError("Ricci components at r = 0 are defined only as limits")
    n = metric.n
    f, f1, f2 = (metric.profile(r, k) for k in range(3))
    comps = {
        "ric_rr": -(n - 1) * f2 / f,
        "ric_tan": -f2 / f + (n - 2) * (1.0 - f1**2) / f**2,
    }
    return CurvatureSample(r, comps)


def curvature_scan(metric, r_min: float, r_max: float, points: int) -> CurvatureSample:
    """Curvature components on a log grid of ``points`` radii in [r_min, r_max]."""
    if not 0 < r_min < r_max or points < 2:
        raise UsageError("need 0 < r_min < r_max and at least two points")
    r = np.geomspace(r_min, r_max, points)
    if isinstance(metric, DoublyWarpedMetric):
        return sectional_components_doubly(metric, r)
    return ricci_components_single(metric, r)


@dataclass
class PositivityReport:
    minimum: float
    component: str
    radius: float
    points: int
    stable: bool
    history: list

    def passes(self, floor: float = 0.0, strict: bool = True) -> bool:
        ok = self.minimum > floor if strict else self.minimum >= floor
        return bool(ok and self.stable)


def positivity_scan(metric, r_min: float, r_max: float, points: int = 10_000,
                    rel_tol: float = 0.01, max_doublings: int = 6) -> PositivityReport:
    """Minimum of all curvature components, doubling the grid until it stabilizes.

    The components decay at infinity, so there is no uniform lower bound; the
    report carries the grid minimum and whether successive doublings agree to
    within ``rel_tol``.
    """
    history = []
    pts = points
    prev = None
    stable = False
    for _ in range(max_doublings + 1):
        m, name, where = curvature_scan(metric, r_min, r_max, pts).minimum()
        history.append((pts, m))
        if prev is not None and abs(m - prev) <= rel_tol * max(abs(prev), abs(m)):
            stable = True
            break
        prev = m
        pts *= 2
    return PositivityReport(m, name, where, history[-1][0], stable, history)


def ni_comparison_functions(params: NiParameters, x) -> dict:
    """Auxiliary functions of the exterior pieces used in the positivity argument.

    Returns h - f and its first two derivatives, h', and
    phi = f^3 - h^3 f' h', all as functions of x = r - delta >= 0.
    """
    x = np.asarray(x, dtype=float)
    F, H = NiFProfile(params), NiHProfile(params)
    f0, f1, f2 = (F.outer(x, k) for k in range(3))
    h0, h1, h2 = (H.outer(x, k) for k in range(3))
    return {
        "h_minus_f": h0 - f0,
        "h_minus_f_d1": h1 - f1,
        "h_minus_f_d2": h2 - f2,
        "h_d1": h1,
        "phi": f0**3 - h0**3 * f1 * h1,
    }


# --------------------------------------------------------------------------
# volumes


def volume_density(metric, s):
    """Area of the level set {r = s}."""
    s = np.asarray(s, dtype=float)
    if isinstance(metric, DoublyWarpedMetric):
        return metric.level_coefficient * metric.f(s) ** 3 * metric.h(s) ** 4
    return metric.sphere_area * metric.profile(s) ** (metric.n - 1)


def volume(metric, r, epsrel: float = 1e-13):
    """Volume of the geodesic ball of radius ``r`` about the pole.

    Adaptive quadrature of the level-set area between consecutive breakpoints
    (joins, a dyadic ladder and the requested radii), accumulated in order.
    """
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    top = float(r.max())
    ladder = [2.0**k for k in range(-12, 1 + int(math.ceil(math.log2(max(top, 1.0)))))]
    pts = np.unique(np.concatenate([[0.0], r, [j for j in metric.joins() if j < top],
                                    [x for x in ladder if x < top]]))

    def dens(s):
        return float(volume_density(metric, s))

    pieces = np.zeros(pts.size)
    for i in range(1, pts.size):
        val, _ = integrate.quad(dens, pts[i - 1], pts[i], epsabs=0.0, epsrel=epsrel, limit=200)
        pieces[i] = val
    cum = np.cumsum(pieces)
    out = cum[np.searchsorted(pts, r)]
    return float(out[0]) if scalar else out


def growth_degree(metric, window: Sequence[float], points: int = 33) -> float:
    """Least-squares slope of log V against log r over a log-spaced window."""
    lo, hi = float(window[0]), float(window[1])
    if not 0 < lo < hi or points < 2:
        raise UsageError(f"degenerate window {window!r}")
    r = np.geomspace(lo, hi, points)
    v = volume(metric, r)
    slope, _ = np.polyfit(np.log(r), np.log(v), 1)
    return float(slope)


@dataclass
class VolumeRatio:
    value: float
    euclidean_value: float
    maximal: bool

    @property
    def bounded_by_euclidean(self) -> bool:
        return self.value <= self.euclidean_value * (1 + 1e-12)


def asymptotic_volume_ratio(metric: SingleWarpMetric) -> VolumeRatio:
    """lim V(r)/r^n from the declared slope: omega_{n-1} beta^{n-1} / n."""
    n = metric.n
    beta = metric.profile.asymptote.slope
    euclid = sphere_volume(n - 1) / n
    if beta <= 0:
        return VolumeRatio(0.0, euclid, False)
    return VolumeRatio(euclid * beta ** (n - 1), euclid, True)


# --------------------------------------------------------------------------
# model factories


def euclidean(n: int = 3) -> SingleWarpMetric:
    return SingleWarpMetric(ExactConeProfile(1.0), n)


def exact_cone(beta: float, n: int = 3) -> SingleWarpMetric:
    return SingleWarpMetric(ExactConeProfile(beta), n)


def asym_conical(beta: float = 0.8, n: int = 3) -> SingleWarpMetric:
    return SingleWarpMetric(AsymConicalProfile(beta), n)


def ding(n: int = 3) -> SingleWarpMetric:
    return SingleWarpMetric(DingProfile(), n)


def ni_metric(params: NiParameters | None = None) -> DoublyWarpedMetric:
    params = PAPER_NI_PARAMETERS if params is None else params
    return DoublyWarpedMetric(NiFProfile(params), NiHProfile(params))
