"""Acceptance criteria, one test per criterion.

Each test is timed against its runtime budget and leaves a one-line verdict
that is printed in the "acceptance criteria" section of the pytest summary.
"""

import json

import numpy as np
import pytest
from scipy import integrate

from conelab import cli
from conelab import cone as C
from conelab import dirichlet as Dm
from conelab import frequency as F
from conelab import profiles as P
from conelab import three_circles as T

BETA = 0.8


def test_criterion_01_ni_parameters(acceptance):
    def body():
        rep = P.check_ni_assumptions(P.PAPER_NI_PARAMETERS)
        worst = max(abs(r) for r in rep.residuals[:6])
        assert worst < 1e-12
        assert rep.residuals[7] == 0.0
        assert rep.all_hold
        return f"8/8 hold, max equality residual {worst:.1e}, c0 - 3c2 - c5 = {rep.residuals[7]!r}"

    acceptance.run(1, "Ni parameter certification", 1.0, body)


def test_criterion_02_c2_gluing(acceptance):
    def body():
        ni = [abs(x) for prof in (P.NiFProfile(), P.NiHProfile()) for x in P.c2_gluing_residuals(prof)[0]]
        ding = [abs(x) for x in P.c2_gluing_residuals(P.DingProfile())[0]]
        assert P.NiFProfile().joins[0] == pytest.approx(P.PAPER_NI_PARAMETERS.delta)
        assert P.DingProfile().joins[0] == pytest.approx(1 - 3**-0.25)
        assert max(ni) < 1e-12 and max(ding) < 1e-10
        return f"max residual ni {max(ni):.1e}, ding {max(ding):.1e}"

    acceptance.run(2, "C2 gluing", 1.0, body)


def test_criterion_03_ni_positivity(acceptance):
    def body():
        metric = P.ni_metric()
        sample = P.curvature_scan(metric, 1e-3, 200.0, 10_000)
        assert len(sample.components) == 5
        mins = {k: float(v.min()) for k, v in sample.components.items()}
        assert all(m > 0 for m in mins.values()), mins
        rep = P.positivity_scan(metric, 1e-3, 200.0, 10_000, rel_tol=0.01)
        assert rep.minimum > 0 and rep.stable
        return f"min {rep.minimum:.4e} ({rep.component} at r = {rep.radius:.4g}), doubling stable"

    acceptance.run(3, "Ni curvature positivity", 10.0, body)


def test_criterion_04_volume_growth(acceptance):
    def body():
        ni = P.growth_degree(P.ni_metric(), (1e3, 1e6))
        ding = P.growth_degree(P.ding(3), (10.0, 1e4))
        eu = [P.growth_degree(P.euclidean(n), (1.0, 1e3)) for n in (3, 4, 8)]
        assert abs(ni - 5.0) <= 0.05
        assert abs(ding - 1.0) <= 0.05
        assert all(abs(e - n) < 1e-12 for e, n in zip(eu, (3, 4, 8)))
        return f"ni {ni:.4f}, ding {ding:.4f}, euclidean {', '.join(f'{e:.12g}' for e in eu)}"

    acceptance.run(4, "Volume growth", 10.0, body)


def test_criterion_05_lemma31(acceptance):
    def body():
        rng = np.random.default_rng(5)
        bad = tested = 0
        while tested < 10_000:
            m = int(rng.integers(1, 9))
            ex = np.concatenate([[0.0], np.sort(rng.uniform(0.01, 6.0, m - 1))])
            w = rng.exponential(size=m) * (rng.random(m) < 0.8)
            al = float(rng.uniform(0.01, 6.0))
            if np.min(np.abs(ex - al)) < 1e-6:
                continue
            tested += 1
            bad += not T.lemma31(T.WeightSystem(tuple(w), tuple(ex), al)).implication_holds
        assert bad == 0
        mismatches = 0
        for _ in range(100):
            m = int(rng.integers(2, 9))
            ex = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 6.0, m - 1))])
            j = int(rng.integers(1, m))
            w = np.zeros(m)
            w[j] = rng.exponential()
            eq = T.lemma31(T.WeightSystem(tuple(w), tuple(ex), float(ex[j])))
            w2 = w.copy()
            w2[(j + 1) % m] = 0.5
            ne = T.lemma31(T.WeightSystem(tuple(w2), tuple(ex), float(ex[j])))
            mismatches += (not eq.equality) + (not eq.support_on_alpha) + ne.equality + ne.support_on_alpha
        assert mismatches == 0
        return f"{tested} systems, {bad} violations; 100 equality cases exact"

    acceptance.run(5, "Weighted-sum inequality suite", 5.0, body)


def test_criterion_06_cone_three_circles(acceptance):
    def body():
        rng = np.random.default_rng(6)
        cases = violations = 0
        worst_quad = 0.0
        while cases < 1000:
            kappa = float(rng.uniform(2.0, 10.0))
            cone = C.ConeSpace(kappa, C.sphere_spectrum(int(rng.integers(1, 6)), float(rng.uniform(0.3, 1.0)), 8))
            k = int(rng.integers(1, 9))
            modes = rng.integers(0, 8, k).tolist()
            coeffs = rng.normal(size=k)
            alpha = float(rng.uniform(0.05, 8.0))
            if C.is_in_degree_spectrum(cone, alpha)[0]:
                continue
            cases += 1
            h = C.ConeHarmonic.from_terms(cone, list(zip(coeffs, modes)))
            radii = np.exp(rng.uniform(-4, 4, 5))
            violations += not T.three_circles_J(cone, h, radii, alpha).holds
            h0 = C.ConeHarmonic.from_terms(cone, [(c if i != 0 else 0.0, i) for c, i in zip(coeffs, modes)])
            violations += not T.three_circles_I(cone, h0, radii, alpha).holds
            if cases % 20 == 0:
                r = float(radii[0])
                a = h.alpha
                num = integrate.quad(lambda s: sum(c * c * s ** (2 * x) for c, x in zip(h.c, a)) * s ** (kappa - 1),
                                     0, r, epsabs=0, epsrel=1e-13, limit=200)[0]
                ref = num / (cone.mass * r**kappa / kappa)
                worst_quad = max(worst_quad, abs(C.cone_J(h, r) / ref - 1))
        assert violations == 0
        assert worst_quad < 1e-8
        return f"{cases} harmonics x 5 radii, {violations} violations (J and I); cone_J vs quad {worst_quad:.1e}"

    acceptance.run(6, "Cone three circles", 30.0, body)


def test_criterion_07_frequency_identities(acceptance):
    def body():
        freq_dev = ident = i1 = 0.0
        max_db = 0.0
        for metric in (P.euclidean(3), P.euclidean(5), P.exact_cone(0.6, 3), P.exact_cone(0.8, 4)):
            levels = F.green_radial(metric)
            beta = metric.profile.asymptote.slope
            n = metric.n
            for k in (0, 1, 2, 3):
                mode = Dm.solve_radial_mode(metric, k, 2e3)
                cv = F.frequency_curve(metric, mode, F.log_grid(1e-2, 1e3, 128))
                alpha = C.exponent_of(k * (k + n - 2) / beta**2, n)
                freq_dev = max(freq_dev, float(np.max(np.abs(cv.freq - alpha))))
                ident = max(ident, F.check_derivative_identity(cv))
                if k == 0:
                    i1 = max(i1, float(np.max(np.abs(cv.I / (n * levels.constants.V_M) - 1))))
            s = np.geomspace(1e-6, 1e5, 2000)
            max_db = max(max_db, float(np.max(levels.db(s))))
        asym = P.asym_conical(BETA, 3)
        g = F.green_radial(asym)
        rho = float(g.inverse(1e3))
        b_over_rho = 1e3 / rho
        asym_db = float(np.max(g.db(np.geomspace(1e-6, 1e5, 2000))))
        assert freq_dev < 1e-8
        assert ident < 1e-4
        assert i1 < 1e-4
        assert max_db <= 1 + 1e-6
        assert abs(b_over_rho - 1) < 1e-3
        return (f"freq dev {freq_dev:.1e}, I' residual {ident:.1e}, I1 {i1:.1e}, max|grad b| {max_db:.12g}, "
                f"asym b/rho(1e3) - 1 = {b_over_rho - 1:.2e}; finding: asym max|grad b| = {asym_db:.6g}")

    acceptance.run(7, "Frequency identities", 60.0, body)


def test_criterion_08_frequency_bound(acceptance):
    def body():
        metric = P.asym_conical(BETA, 3)
        parts = []
        for k in (1, 2, 3):
            d = C.exponent_of(k * (k + 1) / BETA**2, 3)
            mode = Dm.solve_radial_mode(metric, k, 2e3)
            cv = F.frequency_curve(metric, mode, F.log_grid(1.0, 1e3, 512))
            fb = F.frequency_bound_scan(metric, mode, d, curves=cv)
            assert fb.sup <= 5 * d
            assert abs(cv.freq[-1] - d) < 1e-3
            parts.append(f"k={k}: sup {fb.sup:.6f} <= {5 * d:.4f}, end - alpha {cv.freq[-1] - d:.1e}")
        return "; ".join(parts)

    acceptance.run(8, "Frequency bound", 60.0, body)


def test_criterion_09_existence_pipeline(acceptance):
    def body():
        out = []
        for name, metric in (("euclidean", P.euclidean(3)), ("asym-conical", P.asym_conical(BETA, 3))):
            a1 = C.exponent_of(2 / metric.profile.asymptote.slope ** 2, 3)
            rep = Dm.existence_pipeline(metric, 1, a1 + 0.3, levels=6, k0=2.0)
            assert rep.success, rep.verdicts
            assert rep.u_at_pole == 0.0 and abs(rep.J_half_k0 - 1) <= 1e-10
            out.append(f"{name} pass")
        ding = Dm.existence_pipeline(P.ding(3), 1, 2.0, levels=6, k0=2.0)
        assert not ding.success and ding.failed_stage == "lemma53" and ding.envelope_divergent
        out.append(f"ding fails at {ding.failed_stage} (envelope divergent)")
        return ", ".join(out)

    acceptance.run(9, "Existence pipeline", 60.0, body)


def test_criterion_10_ding_curvature(acceptance):
    def body():
        sample = P.curvature_scan(P.ding(3), 1e-3, 3.0, 10_000)
        mins = {k: float(v.min()) for k, v in sample.components.items()}
        assert set(mins) == {"ric_rr", "ric_tan"}
        assert all(m >= -1e-9 for m in mins.values()), f"finding: Ricci minimum {mins}"
        return ", ".join(f"min {k} {v:.3e}" for k, v in mins.items())

    acceptance.run(10, "Ding curvature", 5.0, body)


SCENARIOS = [
    ("verify-ni", None),
    ("verify-ding", None),
    ("curvature", {"metric": {"kind": "ding"}, "operation": {"r_min": 0.001, "r_max": 3.0, "points": 500}}),
    ("frequency", {"metric": {"kind": "asym-conical", "beta": 0.8}, "operation": {"k": 1, "r_min": 1.0,
                                                                                    "r_max": 100.0}}),
    ("three-circles", {"metric": {"kind": "asym-conical", "beta": 0.8}, "operation": {"k": 1, "alpha": 2.0}}),
    ("spectrum", {"metric": {"kind": "euclidean"}, "cone": {"sphere_dim": 2, "beta": 0.8, "count": 6},
                  "operation": {}}),
    ("existence", {"metric": {"kind": "asym-conical", "beta": 0.8}, "operation": {"k": 1, "d": 1.6371,
                                                                                    "levels": 3}}),
    ("classify", {"metric": {"kind": "ding"}, "operation": {"k": 1}}),
]


def test_criterion_11_reproducibility(acceptance, tmp_path):
    def body():
        files = 0
        for cmd, config in SCENARIOS:
            argv = [cmd, "--grid-per-decade", "64"]
            if config is not None:
                path = tmp_path / f"{cmd}.json"
                path.write_text(json.dumps(config))
                argv += ["--config", str(path)]
            runs = []
            for tag in ("a", "b"):
                out = tmp_path / f"{cmd}-{tag}"
                assert cli.main(argv + ["--out", str(out)]) in (0, 1)
                runs.append(out)
            ma, mb = (json.loads((o / "run.json").read_text()) for o in runs)
            assert ma["config_digest"] == mb["config_digest"]
            assert ma["verdicts"] == mb["verdicts"] and ma["artifacts"] == mb["artifacts"]
            for art in ma["artifacts"]:
                assert (runs[0] / art).read_bytes() == (runs[1] / art).read_bytes(), art
                files += 1
        return f"{len(SCENARIOS)} scenarios, {files} artifacts byte-identical, digests equal"

    acceptance.run(11, "Reproducibility", None, body)
