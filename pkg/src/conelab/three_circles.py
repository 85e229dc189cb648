"""
Three-circles inequalities and the dyadic cascade.

The engine is a weighted inequality over growth exponents: for weights
``w_i >= 0`` attached to exponents ``0 = alpha_1 < alpha_2 <= ...`` and a
comparison exponent ``alpha``,

    sum w_i <= sum 2^{2(alpha - alpha_i)} w_i
        implies
    sum 2^{-2 alpha_i} w_i <= sum 2^{2(alpha - 2 alpha_i)} w_i,

with equality in the conclusion exactly when the weights live on
``alpha_i = alpha``.  On a cone the J- and I-functions of a harmonic function
are such weighted sums (weights ``c_i^2 r^{2 alpha_i}/(2 alpha_i + kappa)``
and ``c_i^2 r^{2 alpha_i}``), so the inequality becomes the statement that a
dyadic growth bound at (r, r/2) propagates to (r/2, r/4).  On warped models
the same predicates are evaluated numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cone import (ConeHarmonic, ConeSpace, cone_I, cone_J, degree_spectrum, is_in_degree_spectrum)
from .errors import DomainError, PreconditionError, UsageError

__all__ = [
    "WeightSystem",
    "Lemma31Result",
    "lemma31",
    "cone_weight_systems",
    "j_function_numeric",
    "ThreeCirclesResult",
    "three_circles_J",
    "three_circles_I",
    "CascadeReport",
    "cascade",
    "ThresholdScan",
    "empirical_threshold",
]

LN4 = 2.0 * math.log(2.0)


@dataclass(frozen=True)
class WeightSystem:
    """Weights on ascending exponents (first exponent 0) and a comparison exponent."""

    weights: tuple[float, ...]
    exponents: tuple[float, ...]
    alpha: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.exponents, dtype=float)
        if w.size == 0 or w.size != a.size:
            raise DomainError("weights and exponents must be nonempty and of equal length")
        if a[0] != 0.0:
            raise DomainError("the first exponent must be 0")
        if np.any(np.diff(a) < 0):
            raise DomainError("exponents must be ascending")
        if a.size > 1 and a[1] <= 0:
            raise DomainError("only the first exponent may be 0")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite and nonnegative")
        if not self.alpha > 0:
            raise DomainError("comparison exponent must be positive")


@dataclass(frozen=True)
class Lemma31Result:
    hypothesis: bool
    conclusion: bool
    equality: bool
    support_on_alpha: bool
    hypothesis_sides: tuple[float, float]
    conclusion_sides: tuple[float, float]

    @property
    def implication_holds(self) -> bool:
        return self.conclusion or not self.hypothesis


def lemma31(ws: WeightSystem, rtol: float = 1e-12) -> Lemma31Result:
    """Evaluate both sides of the hypothesis and the conclusion.

    Sums are formed with :func:`math.fsum`.  ``equality`` reports numerical
    equality of the conclusion (to ``rtol``); ``support_on_alpha`` reports the
    support condition (no weight on exponents other than ``alpha``, up to
    ``rtol`` in the exponent).  The two flags coincide whenever the hypothesis
    holds.
    """
    w = np.asarray(ws.weights, dtype=float)
    a = np.asarray(ws.exponents, dtype=float)
    al = ws.alpha
    h_lhs = math.fsum(w)
    h_rhs = math.fsum(np.exp2(2.0 * (al - a)) * w)
    c_lhs = math.fsum(np.exp2(-2.0 * a) * w)
    c_rhs = math.fsum(np.exp2(2.0 * (al - 2.0 * a)) * w)
    equal = abs(c_lhs - c_rhs) <= rtol * max(abs(c_lhs), abs(c_rhs))
    support = bool(np.all(w[np.abs(a - al) > rtol * max(al, 1.0)] == 0))
    return Lemma31Result(
        hypothesis=h_lhs <= h_rhs,
        conclusion=c_lhs <= c_rhs or equal,
        equality=bool(equal),
        support_on_alpha=support,
        hypothesis_sides=(h_lhs, h_rhs),
        conclusion_sides=(c_lhs, c_rhs),
    )


def cone_weight_systems(h: ConeHarmonic, r: float, alpha: float) -> tuple[WeightSystem, WeightSystem]:
    """Weight systems whose sums are J(r) and I(r) of a cone harmonic (up to constants).

    The zero mode is always present (possibly with weight 0) so that the first
    exponent is 0; repeated exponents are merged.
    """
    kappa = h.cone.kappa
    ex = np.concatenate([[0.0], h.alpha])
    wj = np.concatenate([[0.0], h.c**2 * r ** (2 * h.alpha) / (2 * h.alpha + kappa)])
    wi = np.concatenate([[0.0], h.c**2 * r ** (2 * h.alpha)])
    uniq, inv = np.unique(ex, return_inverse=True)
    J = np.bincount(inv, weights=wj, minlength=uniq.size)
    I = np.bincount(inv, weights=wi, minlength=uniq.size)
    return (WeightSystem(tuple(J), tuple(uniq), alpha), WeightSystem(tuple(I), tuple(uniq), alpha))


def j_function_numeric(metric, mode, r):
    """Mean of u^2 over the geodesic ball B(r) for a radial mode on a warped model.

    Radial quadrature with the f^{n-1} density; the angular factor has mean
    square one, so J reduces to a ratio of radial integrals.
    """
    if getattr(metric, "profile", None) is not mode.profile:
        raise UsageError("mode was solved on a different metric")
    out = mode.mean_square(np.asarray(r, dtype=float))
    return float(out[0]) if np.ndim(r) == 0 else out


@dataclass
class ThreeCirclesResult:
    """Premise f(r) <= 4^alpha f(r/2) and conclusion f(r/2) <= 4^alpha f(r/4)."""

    r: np.ndarray
    values: np.ndarray  # shape (3, len(r)): f(r), f(r/2), f(r/4)
    premise: np.ndarray
    conclusion: np.ndarray

    @property
    def implication(self) -> np.ndarray:
        return ~self.premise | self.conclusion

    @property
    def holds(self) -> bool:
        return bool(np.all(self.implication))


def _evaluate(r, log_fn, alpha, rtol):
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise DomainError("radii must be positive")
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    lv = np.vstack([log_fn(r), log_fn(r / 2.0), log_fn(r / 4.0)])
    step = alpha * LN4
    with np.errstate(invalid="ignore"):
        premise = lv[0] <= lv[1] + step
        # zero functions satisfy both sides with equality
        premise |= np.isneginf(lv[0])
        conclusion = (lv[1] <= lv[2] + step + rtol) | np.isneginf(lv[1])
    return ThreeCirclesResult(r, np.exp(lv), premise, conclusion)


def _check_off_spectrum(cone: ConeSpace, alpha: float, tol: float):
    inside, dist = is_in_degree_spectrum(cone, alpha, tol)
    if inside:
        _, nearest = degree_spectrum(cone).distance(alpha)
        raise PreconditionError(f"alpha = {alpha!r} lies in the degree spectrum (nearest element {nearest!r})")


def _log_of(fn):
    def wrapped(r):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(fn(r), dtype=float))
    return wrapped


def three_circles_J(target, harmonic, r, alpha: float, *, spectrum_tol: float = 1e-6,
                    rtol: float = 1e-12) -> ThreeCirclesResult:
    """Evaluate the J three-circles premise at (r, r/2) and conclusion at (r/2, r/4).

    ``target`` is a :class:`ConeSpace` (with a :class:`ConeHarmonic`) or a
    warped metric (with a radial mode).  For cones ``alpha`` must lie off the
    degree spectrum.  The conclusion is granted a relative slack ``rtol`` to
    absorb rounding when the premise holds with near equality.
    """
    if isinstance(target, ConeSpace):
        if harmonic.cone != target:
            raise UsageError("harmonic lives on a different cone")
        _check_off_spectrum(target, alpha, spectrum_tol)
        return _evaluate(r, _log_of(lambda s: cone_J(harmonic, s)), alpha, rtol)
    if getattr(target, "profile", None) is not harmonic.profile:
        raise UsageError("mode was solved on a different metric")
    return _evaluate(r, harmonic.log_mean_square, alpha, rtol)


def three_circles_I(target, harmonic, r, alpha: float, *, spectrum_tol: float = 1e-6,
                    rtol: float = 1e-12, green=None) -> ThreeCirclesResult:
    """Same contract as :func:`three_circles_J` with I on level sets of b.

    Requires u(p) = 0.  On warped models maximal volume growth is required
    as well, and I is computed from the Green's-function distance ``b``.
    """
    if isinstance(target, ConeSpace):
        if harmonic.cone != target:
            raise UsageError("harmonic lives on a different cone")
        if not harmonic.vanishes_at_vertex():
            raise PreconditionError("u(p) must vanish: the harmonic has a nonzero constant term")
        _check_off_spectrum(target, alpha, spectrum_tol)
        return _evaluate(r, _log_of(lambda s: cone_I(harmonic, s)), alpha, rtol)
    from .frequency import green_radial, log_I

    if harmonic.k == 0 and harmonic.sign != 0:
        raise PreconditionError("u(p) must vanish: constant modes are excluded")
    g = green_radial(target) if green is None else green
    return _evaluate(r, lambda s: log_I(g, harmonic, s), alpha, rtol)


@dataclass
class CascadeReport:
    radii: np.ndarray
    ratios: np.ndarray
    step_holds: np.ndarray
    first_failure: float | None
    envelope_constant: float
    envelope_holds: np.ndarray
    alpha: float
    k0: float

    @property
    def passes(self) -> bool:
        return bool(np.all(self.step_holds) and np.all(self.envelope_holds))

    def envelope(self, r):
        """(r/k0)^{2 alpha} 4^alpha J(k0)."""
        r = np.asarray(r, dtype=float)
        return (r / self.k0) ** (2 * self.alpha) * self.envelope_constant


def cascade(radii: Sequence[float], values: Sequence[float], alpha: float, k0: float, *,
            log_values: bool = False, rtol: float = 1e-12) -> CascadeReport:
    """Check the dyadic steps J(2s) <= 4^alpha J(s) for s = k0 2^j and the envelope.

    ``radii`` must contain k0 2^j for j = 0..J (other radii are ignored).
    ``values`` may be logarithms (``log_values=True``) for very large J.
    """
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    if radii.shape != values.shape:
        raise UsageError("radii and values must have the same shape")
    if not k0 > 0 or not alpha > 0:
        raise DomainError("k0 and alpha must be positive")
    lv = values if log_values else np.log(np.maximum(values, 0.0))
    top = int(math.floor(math.log2(radii.max() / k0) + 1e-9)) if radii.size else -1
    if top < 0:
        raise UsageError("no dyadic sample k0 2^j present")
    picked = []
    for j in range(top + 1):
        want = k0 * 2.0**j
        hit = np.nonzero(np.abs(radii - want) <= 1e-12 * want)[0]
        if hit.size == 0:
            raise UsageError(f"missing dyadic sample at r = {want!r}")
        picked.append(int(hit[0]))
    rs = radii[picked]
    lj = lv[picked]
    step = alpha * LN4
    with np.errstate(invalid="ignore"):
        dl = np.diff(lj)
        step_ok = (dl <= step + rtol) | np.isneginf(lj[1:])
        env_log = 2 * alpha * np.log(rs / k0) + step + lj[0]
        env_ok = (lj <= env_log + rtol) | np.isneginf(lj)
    fail = np.nonzero(~step_ok)[0]
    first = float(rs[fail[0] + 1]) if fail.size else None
    return CascadeReport(rs, np.exp(dl), step_ok, first, float(np.exp(step + lj[0])), env_ok, alpha, k0)


@dataclass
class ThresholdScan:
    """Implication check on a radius grid scanned from the top down."""

    radii: np.ndarray
    result: ThreeCirclesResult
    threshold: float | None

    @property
    def found(self) -> bool:
        return self.threshold is not None


def empirical_threshold(metric, mode, alpha: float, radii, *, which: str = "J", green=None) -> ThresholdScan:
    """Smallest sampled radius above which the implication holds at every sample.

    Scans ``radii`` downward from the largest; the threshold is the last radius
    reached before the first failure (None if the implication already fails at
    the largest radius).
    """
    radii = np.sort(np.asarray(radii, dtype=float))
    if which == "J":
        res = three_circles_J(metric, mode, radii, alpha)
    elif which == "I":
        res = three_circles_I(metric, mode, radii, alpha, green=green)
    else:
        raise UsageError("which must be 'J' or 'I'")
    ok = res.implication
    bad = np.nonzero(~ok)[0]
    if bad.size == 0:
        thr = float(radii[0])
    elif bad[-1] == radii.size - 1:
        thr = None
    else:
        thr = float(radii[bad[-1] + 1])
    return ThresholdScan(radii, res, thr)
