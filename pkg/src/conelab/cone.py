"""
Metric cones with conic measures.

A cone ``C(X)`` over a compact cross-section ``X`` carries a conic measure of
power ``kappa``: the measure of a ball of radius ``r`` is ``mass * r**kappa /
kappa`` where ``mass`` is the total cross-section measure.  Harmonic functions
separate as ``u = sum c_i r**alpha_i phi_i(x)`` with ``phi_i`` an orthonormal
eigenbasis of the cross-section Laplacian and

    lambda_i = alpha_i * (alpha_i + kappa - 2).

All functionals below (J, I, D and the frequency) are evaluated through the
orthonormality reductions; eigenfunctions are only evaluated pointwise for
sphere cross-sections, where zonal harmonics are available in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .errors import DomainError, PoleError, ZeroHarmonicError

__all__ = [
    "CrossSectionSpectrum",
    "ConeSpace",
    "DegreeSpectrum",
    "ConeHarmonic",
    "sphere_volume",
    "harmonic_multiplicity",
    "exponent_of",
    "eigenvalue_of",
    "sphere_spectrum",
    "degree_spectrum",
    "is_in_degree_spectrum",
    "conic_ball_measure",
    "cone_laplacian_residual",
    "cone_J",
    "cone_I",
    "cone_D",
    "cone_frequency",
    "zonal_harmonic",
    "hadamard_check",
]


def sphere_volume(m: int) -> float:
    """Volume of the unit round sphere S^m."""
    return 2.0 * math.pi ** ((m + 1) / 2.0) / math.gamma((m + 1) / 2.0)


def harmonic_multiplicity(m: int, k: int) -> int:
    """Dimension of the space of degree-``k`` spherical harmonics on S^m."""
    if k < 0:
        raise DomainError("degree must be nonnegative")
    if k == 0:
        return 1
    total = math.comb(k + m, m)
    lower = math.comb(k - 2 + m, m) if k >= 2 else 0
    return total - lower


def exponent_of(lam, kappa):
    """Nonnegative growth exponent alpha with alpha*(alpha + kappa - 2) = lam.

    Works elementwise on arrays.  The root is computed in the cancellation-free
    form ``2*lam / ((kappa-2) + sqrt((kappa-2)**2 + 4*lam))``.
    """
    lam = np.asarray(lam, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    if np.any(lam < 0):
        raise DomainError("eigenvalue must be nonnegative")
    if np.any(kappa < 2):
        raise DomainError("conic power must be >= 2")
    m = kappa - 2.0
    root = np.sqrt(m * m + 4.0 * lam)
    with np.errstate(invalid="ignore", divide="ignore"):
        alpha = np.where(lam == 0, 0.0, 2.0 * lam / (m + root))
    return float(alpha) if alpha.ndim == 0 else alpha


def eigenvalue_of(alpha, kappa):
    """Inverse of :func:`exponent_of`."""
    alpha = np.asarray(alpha, dtype=float)
    kappa = np.asarray(kappa, dtype=float)
    if np.any(alpha < 0):
        raise DomainError("exponent must be nonnegative")
    lam = alpha * (alpha + kappa - 2.0)
    return float(lam) if lam.ndim == 0 else lam


@dataclass(frozen=True)
class CrossSectionSpectrum:
    """Truncated spectrum of the cross-section Laplacian.

    ``eigenvalues`` are distinct and ascending, starting with 0 (multiplicity 1).
    ``mass`` is the total cross-section measure.
    """

    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]
    mass: float

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        mult = self.multiplicities
        if len(lam) == 0 or len(lam) != len(mult):
            raise DomainError("eigenvalues and multiplicities must be nonempty and of equal length")
        if lam[0] != 0.0 or mult[0] != 1:
            raise DomainError("first eigenvalue must be 0 with multiplicity 1")
        if np.any(np.diff(lam) <= 0):
            raise DomainError("eigenvalues must be strictly ascending")
        if any(int(m) != m or m < 1 for m in mult):
            raise DomainError("multiplicities must be positive integers")
        if not self.mass > 0:
            raise DomainError("cross-section mass must be positive")

    @property
    def count(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class ConeSpace:
    """Metric cone with a conic measure of power ``kappa``."""

    kappa: float
    spectrum: CrossSectionSpectrum

    def __post_init__(self):
        if not self.kappa >= 2:
            raise DomainError("conic power must be >= 2")

    @property
    def mass(self) -> float:
        return self.spectrum.mass

    def exponents(self) -> np.ndarray:
        return np.asarray(exponent_of(np.asarray(self.spectrum.eigenvalues), self.kappa), dtype=float)


@dataclass(frozen=True)
class DegreeSpectrum:
    exponents: tuple[float, ...]
    multiplicities: tuple[int, ...]

    def distance(self, alpha: float) -> tuple[float, float]:
        """Return (distance to nearest exponent, nearest exponent)."""
        ex = np.asarray(self.exponents)
        i = int(np.argmin(np.abs(ex - alpha)))
        return float(abs(ex[i] - alpha)), float(ex[i])


@dataclass(frozen=True)
class ConeHarmonic:
    """Finite combination ``sum c_j r**alpha_{i_j} phi_{i_j}``.

    Each term is one orthonormal eigenfunction; repeated mode indices denote
    distinct orthonormal eigenfunctions of the same eigenspace.
    """

    cone: ConeSpace
    coefficients: tuple[float, ...]
    modes: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != len(self.modes):
            raise DomainError("coefficients and modes must have equal length")
        for i in self.modes:
            if not 0 <= i < self.cone.spectrum.count:
                raise DomainError(f"mode index {i} outside truncated spectrum")

    @classmethod
    def from_terms(cls, cone: ConeSpace, terms: Sequence[tuple[float, int]]) -> "ConeHarmonic":
        coeffs = tuple(float(c) for c, _ in terms)
        modes = tuple(int(i) for _, i in terms)
        return cls(cone, coeffs, modes)

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    @property
    def alpha(self) -> np.ndarray:
        ex = self.cone.exponents()
        return ex[np.asarray(self.modes, dtype=int)] if self.modes else np.zeros(0)

    @property
    def lam(self) -> np.ndarray:
        lam = np.asarray(self.cone.spectrum.eigenvalues)
        return lam[np.asarray(self.modes, dtype=int)] if self.modes else np.zeros(0)

    def scaled(self, t: float) -> "ConeHarmonic":
        return ConeHarmonic(self.cone, tuple(t * c for c in self.coefficients), self.modes)

    def vanishes_at_vertex(self) -> bool:
        alpha = self.alpha
        return bool(np.all(self.c[alpha == 0] == 0))


def sphere_spectrum(m: int, beta: float = 1.0, count: int = 10) -> CrossSectionSpectrum:
    """First ``count`` distinct eigenvalues of the round sphere S^m of radius ``beta``.

    ``lambda_k = k(k+m-1)/beta**2`` with spherical-harmonic multiplicities;
    mass is ``beta**m * Vol(S^m)``.
    """
    if m < 1 or beta <= 0 or count < 1:
        raise DomainError("need m >= 1, beta > 0, count >= 1")
    ks = range(count)
    lam = tuple(k * (k + m - 1) / beta**2 for k in ks)
    mult = tuple(harmonic_multiplicity(m, k) for k in ks)
    return CrossSectionSpectrum(lam, mult, beta**m * sphere_volume(m))


def degree_spectrum(cone: ConeSpace, count: int | None = None) -> DegreeSpectrum:
    spec = cone.spectrum
    count = spec.count if count is None else min(count, spec.count)
    ex = cone.exponents()[:count]
    return DegreeSpectrum(tuple(float(a) for a in ex), tuple(spec.multiplicities[:count]))


def is_in_degree_spectrum(cone: ConeSpace, alpha: float, tolerance: float = 1e-6) -> tuple[bool, float]:
    """Membership of ``alpha`` in the (truncated) degree spectrum, and the distance to it."""
    dist, _ = degree_spectrum(cone).distance(alpha)
    return dist <= tolerance, dist


def conic_ball_measure(cone: ConeSpace, r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    out = cone.mass * r**cone.kappa / cone.kappa
    return float(out) if out.ndim == 0 else out


def _radial_operator(alpha, lam, kappa, r, c):
    """Terms of u'' + (kappa-1)/r u' - lam/r^2 u for u = c r^alpha, by centered differences."""
    h = r * 1e-4

    def u(s):
        return c * s**alpha

    d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / h**2
    d1 = (u(r + h) - u(r - h)) / (2.0 * h)
    return d2, (kappa - 1.0) / r * d1, -lam / r**2 * u(r)


def cone_laplacian_residual(h: ConeHarmonic, r: float) -> float:
    """Relative residual of the radial cone Laplacian applied termwise to ``h``.

    Each mode is checked separately (the eigenfunctions are orthogonal), and the
    largest per-mode residual relative to its largest term is returned.
    """
    if r <= 0:
        raise PoleError("cone Laplacian residual is evaluated for r > 0 only")
    worst = 0.0
    for c, a, lam in zip(h.c, h.alpha, h.lam):
        if c == 0:
            continue
        terms = _radial_operator(a, lam, h.cone.kappa, r, c)
        scale = max(abs(t) for t in terms)
        if scale == 0:
            continue
        worst = max(worst, abs(sum(terms)) / scale)
    return worst


def cone_J(h: ConeHarmonic, r):
    """Mean of u^2 over the cone ball of radius r.

    J(r) = (kappa/mass) * sum c_i^2 r^(2 alpha_i) / (2 alpha_i + kappa)
    """
    r = np.asarray(r, dtype=float)
    kappa = h.cone.kappa
    c2 = h.c**2
    a = h.alpha
    terms = c2[:, None] * np.power.outer(r.ravel(), 2 * a).T / (2 * a + kappa)[:, None]
    out = (kappa / h.cone.mass) * terms.sum(axis=0).reshape(r.shape)
    return float(out) if out.ndim == 0 else out


def cone_I(h: ConeHarmonic, r):
    r = np.asarray(r, dtype=float)
    terms = (h.c**2)[:, None] * np.power.outer(r.ravel(), 2 * h.alpha).T
    out = terms.sum(axis=0).reshape(r.shape)
    return float(out) if out.ndim == 0 else out


def cone_D(h: ConeHarmonic, r):
    r = np.asarray(r, dtype=float)
    terms = (h.c**2 * h.alpha)[:, None] * np.power.outer(r.ravel(), 2 * h.alpha).T
    out = terms.sum(axis=0).reshape(r.shape)
    return float(out) if out.ndim == 0 else out


def cone_frequency(h: ConeHarmonic, r):
    i = np.asarray(cone_I(h, r))
    if np.any(i <= 0):
        raise ZeroHarmonicError("frequency is undefined for the zero harmonic")
    out = np.asarray(cone_D(h, r)) / i
    return float(out) if out.ndim == 0 else out


def zonal_harmonic(m: int, k: int, theta, derivative: bool = False):
    """Axis-symmetric degree-``k`` harmonic on the unit S^m, normalized to mean square one.

    With this normalization the maximum absolute value is ``sqrt(N)``,
    attained at the pole ``theta = 0``, ``N`` being the multiplicity.  With
    ``derivative=True`` the theta-derivative is returned instead.
    """
    theta = np.asarray(theta, dtype=float)
    amp = math.sqrt(harmonic_multiplicity(m, k))
    x = np.cos(theta)
    if k == 0:
        return np.zeros_like(theta) if derivative else np.ones_like(theta)
    if m == 1:
        # circle: mean square of sqrt(2) cos(k theta) is one
        return -amp * k * np.sin(k * theta) if derivative else amp * np.cos(k * theta)
    mu = (m - 1) / 2.0
    p1 = special.eval_gegenbauer(k, mu, 1.0)
    if derivative:
        dp = 2.0 * mu * special.eval_gegenbauer(k - 1, mu + 1.0, x)
        return -amp * dp * np.sin(theta) / p1
    return amp * special.eval_gegenbauer(k, mu, x) / p1


@dataclass
class HadamardResult:
    holds: bool
    lhs: float
    rhs: float
    maxima: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))


def hadamard_check(h: ConeHarmonic, r: float, sphere_dim: int, beta: float = 1.0,
                   samples: int = 4001, rtol: float = 1e-12) -> HadamardResult:
    """Check M(r/2)/M(r/4) <= M(r)/M(r/2) for an axis-symmetric harmonic on a sphere cone.

    Mode index ``i`` is read as the degree-``i`` zonal harmonic on S^m of radius
    ``beta``; the orthonormal eigenfunction is the mean-square-one zonal
    harmonic scaled by ``mass**-1/2``.
    """
    if r <= 0:
        raise PoleError("radius must be positive")
    theta = np.linspace(0.0, math.pi, samples)
    scale = 1.0 / math.sqrt(h.cone.mass)
    profiles = [scale * zonal_harmonic(sphere_dim, i, theta) for i in h.modes]

    def M(s):
        u = np.zeros_like(theta)
        for c, a, y in zip(h.c, h.alpha, profiles):
            u = u + c * s**a * y
        return float(np.max(np.abs(u)))

    m1, m2, m4 = M(r), M(r / 2), M(r / 4)
    lhs = m2 / m4 if m4 > 0 else math.inf
    rhs = m1 / m2 if m2 > 0 else math.inf
    if m4 == 0 and m2 == 0:
        return HadamardResult(True, 1.0, 1.0, (m1, m2, m4))
    return HadamardResult(lhs <= rhs * (1 + rtol), lhs, rhs, (m1, m2, m4))
