import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conelab import cone as C
from conelab import dirichlet as Dm
from conelab import frequency as F
from conelab import profiles as P
from conelab.errors import DomainError, RangeError, ZeroHarmonicError

BETA = 0.8
ALPHA1 = C.exponent_of(2 / BETA**2, 3)


# -- radial modes --------------------------------------------------------------------


def test_euclidean_linear_mode(euclid3):
    mode = Dm.solve_radial_mode(euclid3, 1, 100.0)
    r = np.geomspace(1e-5, 100.0, 50)
    assert np.allclose(mode.phi(r), r, rtol=1e-10)
    assert np.allclose(mode.dphi(r), 1.0, rtol=1e-9)
    assert mode.gamma == 1.0 and mode.phi(0.0) == 0.0
    assert Dm.harmonicity_residual(euclid3, mode) < 1e-10


@pytest.mark.parametrize("beta, n, k", [(0.5, 3, 1), (0.8, 3, 3), (0.7, 4, 2)])
def test_exact_cone_power_law(beta, n, k):
    metric = P.exact_cone(beta, n)
    mode = Dm.solve_radial_mode(metric, k, 1e3)
    alpha = C.exponent_of(k * (k + n - 2) / beta**2, n)
    r = np.geomspace(1e-4, 1e3, 30)
    assert np.allclose(mode.phi(r), r**alpha, rtol=1e-8)
    cls = Dm.growth_classification(metric, k, mode=mode)
    assert cls.kind == "polynomial" and cls.rate == pytest.approx(alpha, abs=1e-3)


def test_ding_exponential_rate(ding3):
    mode = Dm.solve_radial_mode(ding3, 1, 40.0)
    a = ding3.profile.a
    sel = mode.r > 20.0
    slope = np.polyfit(mode.r[sel], mode.log_phi[sel], 1)[0]
    assert slope == pytest.approx(math.sqrt(2) / a, rel=1e-3)
    cls = Dm.growth_classification(ding3, 1, r_max=40.0, mode=mode)
    assert cls.kind == "exponential"
    assert cls.rate == pytest.approx(math.sqrt(2) / a, rel=1e-2)
    assert str(cls).startswith("exponential(")


def test_ding_overflow_returns_prefix(ding3):
    mode = Dm.solve_radial_mode(ding3, 1, 1e3)
    assert mode.overflow and mode.r_max < 1e3
    # the last stored sample precedes the 1e300 event by less than one grid step
    assert 680.0 < mode.log_phi[-1] <= 300 * math.log(10)
    with pytest.raises(RangeError):
        mode.phi(2 * mode.r_max)


def test_constant_mode_classification(asym):
    cls = Dm.growth_classification(asym, 0, r_max=100.0)
    assert cls.kind == "polynomial" and cls.rate == 0.0


def test_regular_branch_positive_and_vanishing(asym):
    for k in (1, 2, 3):
        mode = Dm.solve_radial_mode(asym, k, 100.0)
        assert mode.phi(0.0) == 0.0
        assert np.all(mode.phi(mode.r) > 0)
        assert mode.gamma == pytest.approx(C.exponent_of(k * (k + 1), 3))


def test_harmonicity_residuals(asym, ni):
    m2 = Dm.solve_radial_mode(asym, 2, 1e3)
    assert Dm.harmonicity_residual(asym, m2) < 1e-6


def test_harmonicity_detects_tampering(asym):
    mode = Dm.solve_radial_mode(asym, 2, 100.0)
    lp = mode.log_phi.copy()
    lp[lp.size // 2] += 1e-3
    bad = dataclasses.replace(mode, log_phi=lp)
    assert Dm.harmonicity_residual(asym, bad) > 1e-3


def test_solver_argument_validation(asym):
    with pytest.raises(DomainError):
        Dm.solve_radial_mode(asym, -1, 10.0)
    with pytest.raises(DomainError):
        Dm.solve_radial_mode(asym, 1, 0.0)


def test_mode_scaling_and_zero(asym):
    mode = Dm.solve_radial_mode(asym, 1, 10.0)
    neg = mode.scaled(-3.0)
    assert neg.phi(2.0) == pytest.approx(-3.0 * mode.phi(2.0))
    zero = mode.scaled(0.0)
    assert zero.phi(2.0) == 0.0
    assert np.isneginf(zero.log_mean_square(2.0)).all()
    with pytest.raises(ZeroHarmonicError):
        Dm.normalize_by_J(asym, zero, 2.0)


def test_value_uses_zonal_harmonic(euclid3):
    mode = Dm.solve_radial_mode(euclid3, 1, 10.0)
    # u = r * sqrt(3) cos(theta)
    assert mode.value(2.0, 0.0) == pytest.approx(2.0 * math.sqrt(3))
    assert mode.value(2.0, math.pi / 2) == pytest.approx(0.0, abs=1e-14)
    assert mode.angular_max == pytest.approx(math.sqrt(3))


# -- Dirichlet solutions -----------------------------------------------------------------


def test_dirichlet_euclidean(euclid3):
    mode = Dm.dirichlet_mode(euclid3, 1, 8.0)
    r = np.linspace(0.1, 8.0, 20)
    assert np.allclose(mode.phi(r), r / 8.0, rtol=1e-10)


def test_dirichlet_exact_cone():
    metric = P.exact_cone(0.6, 3)
    mode = Dm.dirichlet_mode(metric, 2, 16.0)
    a = C.exponent_of(6 / 0.36, 3)
    r = np.geomspace(0.01, 16.0, 15)
    assert np.allclose(mode.phi(r), (r / 16.0) ** a, rtol=1e-8)


def test_dirichlet_ding(ding3):
    mode = Dm.dirichlet_mode(ding3, 1, 20.0)
    assert mode.phi(20.0) == pytest.approx(1.0, rel=1e-12)
    assert mode.phi(10.0) < 1e-40


@settings(max_examples=20)
@given(st.sampled_from([1, 2, 3]), st.floats(2.0, 200.0))
def test_regular_branch_uniqueness(k, R):
    metric = P.asym_conical(BETA, 3)
    a = Dm.dirichlet_mode(metric, k, R)
    b = Dm.dirichlet_mode(metric, k, 2 * R)
    r = np.geomspace(1e-3, R, 40)
    ratio = a.phi(r) / b.phi(r)
    assert np.ptp(ratio) / ratio.mean() < 1e-8


# -- normalization -------------------------------------------------------------------------


def test_normalize_round_trip_idempotent_scaling(asym):
    mode = Dm.solve_radial_mode(asym, 1, 100.0)
    n1 = Dm.normalize_by_J(asym, mode, 2.0)
    assert float(n1.mean_square(1.0)[0]) == pytest.approx(1.0, abs=1e-10)
    n2 = Dm.normalize_by_J(asym, n1, 2.0)
    assert n2.log_scale == pytest.approx(n1.log_scale, abs=1e-12)
    n3 = Dm.normalize_by_J(asym, mode.scaled(123.0), 2.0)
    r = np.geomspace(0.1, 100.0, 10)
    assert np.allclose(n3.phi(r), n1.phi(r), rtol=1e-12)
    with pytest.raises(DomainError):
        Dm.normalize_by_J(P.euclidean(3), mode, 2.0)


def test_normalize_euclidean_closed_form(euclid3):
    # J(1) of phi = r with mean-square-one angular factor is 3/5
    mode = Dm.solve_radial_mode(euclid3, 1, 10.0)
    nm = Dm.normalize_by_J(euclid3, mode, 2.0)
    assert nm.phi(1.0) == pytest.approx(1 / math.sqrt(0.6), rel=1e-10)


# -- doubling scan and envelope ------------------------------------------------------------


def test_lemma53_exact_cone():
    metric = P.exact_cone(0.6, 3)
    mode = Dm.solve_radial_mode(metric, 1, 100.0)
    a = C.exponent_of(2 / 0.36, 3)
    up = Dm.lemma53_scan(metric, mode, a + 0.1, R=64.0)
    assert up.all_hold
    assert up.worst_ratio == pytest.approx(4**a, rel=1e-8)
    assert not Dm.lemma53_scan(metric, mode, a - 0.1, R=64.0).holds.any()
    with pytest.raises(DomainError):
        Dm.lemma53_scan(metric, mode, a, r0=1.0)


def test_lemma53_asym_threshold(asym):
    d = ALPHA1 + 0.3
    Rs = 2.0 ** np.arange(0, 11)
    thr = Dm.lemma53_threshold(asym, 1, d, Rs)
    assert thr is not None
    mode = Dm.solve_radial_mode(asym, 1, Rs[-1])
    for R in Rs[Rs >= thr]:
        assert Dm.lemma53_scan(asym, mode, d, 0.25, R).all_hold


def test_lemma53_ding_fails(ding3):
    mode = Dm.solve_radial_mode(ding3, 1, 40.0)
    assert Dm.lemma53_threshold(ding3, 1, 3.0, [8.0, 16.0, 32.0]) is None
    assert not Dm.lemma53_scan(ding3, mode, 3.0, R=32.0).all_hold


def test_envelope_exact_cone_closed_form():
    metric = P.exact_cone(0.6, 3)
    a = C.exponent_of(2 / 0.36, 3)
    mode = Dm.normalize_by_J(metric, Dm.solve_radial_mode(metric, 1, 100.0), 2.0)
    env = Dm.growth_envelope(metric, mode, a, 2.0)
    # |u| = phi(1) r^a sqrt(N): C = phi(1) sqrt(3)
    assert env.C == pytest.approx(mode.phi(1.0) * math.sqrt(3), rel=1e-8)
    assert not env.divergent


def test_envelope_zero_and_ding(asym, ding3):
    mode = Dm.solve_radial_mode(asym, 1, 100.0)
    assert Dm.growth_envelope(asym, mode.scaled(0.0), 2.0, 2.0).C == 0.0
    dm = Dm.normalize_by_J(ding3, Dm.solve_radial_mode(ding3, 1, 30.0), 2.0)
    assert Dm.growth_envelope(ding3, dm, 5.0, 2.0).divergent
    with pytest.raises(DomainError):
        Dm.growth_envelope(asym, mode, 2.0, 2.0, (5.0, 5.0))


# -- pipeline --------------------------------------------------------------------------------


def test_pipeline_euclidean(euclid3):
    rep = Dm.existence_pipeline(euclid3, 1, 1.5, levels=6, k0=2.0)
    assert rep.success and rep.exit_code == 0 and rep.failed_stage is None
    assert rep.radii == [4.0, 8.0, 16.0, 32.0, 64.0, 128.0]
    assert all(x < 1e-6 for x in rep.sup_differences)
    assert rep.u_at_pole == 0.0 and rep.J_half_k0 == pytest.approx(1.0, abs=1e-10)
    # the limit is proportional to the linear mode
    r = np.geomspace(0.1, 100.0, 9)
    assert np.allclose(rep.finest.phi(r) / r, rep.finest.phi(1.0), rtol=1e-9)
    assert rep.envelope_stability <= 0.05


def test_pipeline_asym(asym):
    rep = Dm.existence_pipeline(asym, 1, ALPHA1 + 0.3, levels=6, k0=2.0)
    assert rep.success, rep.as_dict()
    assert all(v > 0 for v in rep.normalizers)
    d = rep.as_dict()
    assert d["success"] and d["verdicts"]["certificate"] == "pass"


def test_pipeline_ding_fails(ding3):
    rep = Dm.existence_pipeline(ding3, 1, 2.0, levels=6, k0=2.0)
    assert not rep.success and rep.exit_code == 1
    assert rep.failed_stage in ("lemma53", "envelope")
    assert rep.envelope_divergent
    assert rep.verdicts["precondition"] == "skipped"


def test_pipeline_precondition(asym, euclid3):
    rep = Dm.existence_pipeline(asym, 1, 1.2, levels=3)
    assert rep.exit_code == 2 and rep.failed_stage == "precondition"
    assert Dm.existence_pipeline(euclid3, 1, 2.0, levels=3).exit_code == 2
    with pytest.raises(DomainError):
        Dm.existence_pipeline(euclid3, 1, 1.5, levels=1)


# -- frequency versus fitted growth ------------------------------------------------------------


@pytest.mark.parametrize("metric, k", [(P.euclidean(3), 1), (P.exact_cone(0.6, 3), 2),
                                       (P.asym_conical(BETA, 3), 1), (P.asym_conical(BETA, 3), 2),
                                       (P.asym_conical(0.5, 4), 1)])
def test_frequency_matches_fitted_exponent(metric, k):
    mode = Dm.solve_radial_mode(metric, k, 1e4)
    cls = Dm.growth_classification(metric, k, mode=mode)
    assert cls.kind == "polynomial"
    cv = F.frequency_curve(metric, mode, np.array([1e3, 5e3]))
    assert abs(cv.freq[-1] - cls.rate) < 1e-2
