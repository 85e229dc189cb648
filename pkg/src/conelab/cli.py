"""
Command-line scenario runner.

Every command reads a JSON scenario (``--config``), writes CSV artifacts and
a ``run.json`` manifest into the output directory, and exits with 0 when all
checks pass, 1 when a verification fails and 2 for usage, configuration or
precondition errors.

Scenario layout::

    {
      "metric":    {"kind": "asym-conical", "beta": 0.8, "n": 3},
      "cone":      {"sphere_dim": 2, "beta": 1.0, "count": 8, "terms": [[1.0, 1]]},
      "operation": {"k": 1, "d": 1.64, "r_min": 1.0, "r_max": 1000.0}
    }

``metric.kind`` is one of euclidean, exact-cone, asym-conical, ding, ni.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from . import cone as C
from . import dirichlet as DR
from . import frequency as FQ
from . import profiles as PR
from . import three_circles as TC
from .errors import ConelabError, PreconditionError, UsageError

COMMANDS = ("verify-ni", "verify-ding", "curvature", "frequency", "three-circles", "spectrum", "existence",
            "classify")

_POS = {"type": "number", "exclusiveMinimum": 0}

METRIC_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["euclidean", "exact-cone", "asym-conical", "ding", "ni"]},
        "beta": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "n": {"type": "integer", "minimum": 3},
        "params": {"type": "object", "additionalProperties": _POS},
    },
    "additionalProperties": False,
}

CONE_SCHEMA = {
    "type": "object",
    "required": ["sphere_dim"],
    "properties": {
        "sphere_dim": {"type": "integer", "minimum": 1},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "count": {"type": "integer", "minimum": 2},
        "terms": {"type": "array", "items": {"type": "array", "prefixItems": [{"type": "number"},
                                                                                {"type": "integer", "minimum": 0}],
                                               "minItems": 2, "maxItems": 2}},
    },
    "additionalProperties": False,
}

OPERATION_SCHEMA = {
    "type": "object",
    "properties": {
        "k": {"type": "integer", "minimum": 0},
        "ks": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "alpha": _POS,
        "d": _POS,
        "k0": _POS,
        "levels": {"type": "integer", "minimum": 2},
        "r_min": _POS,
        "r_max": _POS,
        "points": {"type": "integer", "minimum": 3},
        "theta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "factor": {"type": "number", "exclusiveMinimum": 1},
        "tol": _POS,
        "expect": {"enum": ["polynomial", "exponential"]},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["metric", "operation"],
    "properties": {
        "metric": METRIC_SCHEMA,
        "cone": CONE_SCHEMA,
        "operation": OPERATION_SCHEMA,
        "output": {"type": "object", "properties": {"dir": {"type": "string"}}},
    },
    "additionalProperties": False,
}

DEFAULT_CONFIGS = {
    "verify-ni": {"metric": {"kind": "ni"}, "operation": {}},
    "verify-ding": {"metric": {"kind": "ding", "n": 3}, "operation": {}},
}


# --------------------------------------------------------------------------
# configuration


def validate_config(config) -> None:
    """Raise UsageError listing every schema problem (missing keys first)."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: (e.validator != "required", list(e.path)))
    if errors:
        missing = [e.message for e in errors if e.validator == "required"]
        other = [f"{'/'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors if e.validator != "required"]
        raise UsageError("invalid configuration: " + "; ".join(missing + other))
    op = config["operation"]
    if "r_min" in op and "r_max" in op and not op["r_min"] < op["r_max"]:
        raise UsageError("operation: r_min must be below r_max")


def config_digest(config) -> str:
    """sha256 of the canonical JSON form (sorted keys, compact separators)."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_metric(spec: dict):
    kind = spec["kind"]
    n = spec.get("n", 3)
    if kind == "euclidean":
        return PR.euclidean(n)
    if kind == "exact-cone":
        return PR.exact_cone(spec.get("beta", 1.0), n)
    if kind == "asym-conical":
        return PR.asym_conical(spec.get("beta", 0.8), n)
    if kind == "ding":
        return PR.ding(n)
    params = PR.PAPER_NI_PARAMETERS.replace(**spec["params"]) if "params" in spec else PR.PAPER_NI_PARAMETERS
    return PR.ni_metric(params)


def build_cone(spec: dict):
    m = spec["sphere_dim"]
    space = C.ConeSpace(float(m + 1), C.sphere_spectrum(m, spec.get("beta", 1.0), spec.get("count", 8)))
    terms = spec.get("terms", [[1.0, 1]])
    return space, C.ConeHarmonic.from_terms(space, [(c, i) for c, i in terms])


# --------------------------------------------------------------------------
# output


def fmt(x) -> str:
    """Shortest round-trip decimal for floats; booleans as true/false."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


class Run:
    """Collects verdicts, durations, artifacts and a summary for one command."""

    def __init__(self, command: str, config: dict, out: Path, seed: int | None):
        self.command = command
        self.config = config
        self.out = out
        self.seed = seed
        self.verdicts: dict[str, str] = {}
        self.durations: dict[str, float] = {}
        self.artifacts: list[str] = []
        self.summary: dict = {}

    @contextmanager
    def timed(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.durations[name] = time.perf_counter() - start

    def check(self, name: str, ok) -> bool:
        self.verdicts[name] = "pass" if bool(ok) else "fail"
        return bool(ok)

    def write_csv(self, name: str, header, rows) -> Path:
        path = self.out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
        self.artifacts.append(name)
        return path

    def write_json(self, name: str, data) -> Path:
        path = self.out / name
        path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")
        self.artifacts.append(name)
        return path

    def manifest(self) -> dict:
        return {
            "command": self.command,
            "version": __version__,
            "config_digest": config_digest(self.config),
            "seed": self.seed,
            "verdicts": self.verdicts,
            "durations": self.durations,
            "artifacts": self.artifacts,
            "summary": self.summary,
        }

    def exit_code(self) -> int:
        vals = set(self.verdicts.values())
        if "precondition-failed" in vals:
            return 2
        return 1 if "fail" in vals else 0


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if x is None or isinstance(x, str):
        return x
    return repr(x)


# --------------------------------------------------------------------------
# commands


def cmd_verify_ni(run: Run, metric, op, args):
    tol = args.tol if args.tol is not None else op.get("tol", 1e-12)
    f, h = metric.f, metric.h
    with run.timed("assumptions"):
        rep = PR.check_ni_assumptions(f.params, tol)
        for name, ok in zip(rep.names, rep.holds):
            run.check(f"assumption:{name}", ok)
        run.summary["assumption_residuals"] = dict(zip(rep.names, rep.residuals))
    with run.timed("gluing"):
        for prof in (f, h):
            res = PR.c2_gluing_residuals(prof)[0]
            run.check(f"c2-gluing:{prof.kind}", max(abs(v) for v in res) < tol)
            run.summary[f"gluing_{prof.kind}"] = list(res)
    with run.timed("positivity"):
        points = op.get("points", 10_000)
        pos = PR.positivity_scan(metric, op.get("r_min", 1e-3), op.get("r_max", 200.0), points)
        run.check("curvature-positivity", pos.passes())
        run.summary["curvature_minimum"] = {"value": pos.minimum, "component": pos.component, "r": pos.radius,
                                            "stable": pos.stable}
        sample = PR.curvature_scan(metric, op.get("r_min", 1e-3), op.get("r_max", 200.0), points)
        run.write_csv("curvature.csv", ["r", *sample.names], sample.rows())
    with run.timed("growth-degree"):
        deg = PR.growth_degree(metric, (1e3, 1e6))
        run.check("growth-degree", abs(deg - 5.0) <= 0.05)
        run.summary["growth_degree"] = deg


def cmd_verify_ding(run: Run, metric, op, args):
    tol = args.tol if args.tol is not None else op.get("tol", 1e-9)
    with run.timed("gluing"):
        res = PR.c2_gluing_residuals(metric.profile)[0]
        run.check("c2-gluing:ding", max(abs(v) for v in res) < 1e-10)
        run.summary["gluing_ding"] = list(res)
    with run.timed("ricci"):
        points = op.get("points", 10_000)
        sample = PR.curvature_scan(metric, op.get("r_min", 1e-3), op.get("r_max", 3.0), points)
        low, name, where = sample.minimum()
        run.check("ricci-nonnegative", low >= -tol)
        run.summary["ricci_minimum"] = {"value": low, "component": name, "r": where}
        run.write_csv("ricci.csv", ["r", *sample.names], sample.rows())
    with run.timed("growth-degree"):
        deg = PR.growth_degree(metric, (10.0, 1e4))
        run.check("linear-growth", abs(deg - 1.0) <= 0.05)
        run.summary["growth_degree"] = deg
    with run.timed("classification"):
        k = op.get("k", 1)
        cls = DR.growth_classification(metric, k, 1e4)
        lam = k * (k + metric.n - 2)
        expected = math.sqrt(lam) / metric.profile.a
        run.check("exponential-mode", cls.kind == "exponential" and abs(cls.rate / expected - 1) <= 0.01)
        run.summary["classification"] = {"k": k, "kind": cls.kind, "rate": cls.rate, "expected_rate": expected}


def cmd_curvature(run: Run, metric, op, args):
    r_min, r_max = op.get("r_min", 1e-3), op.get("r_max", 200.0)
    points = op.get("points", 10_000)
    with run.timed("scan"):
        sample = PR.curvature_scan(metric, r_min, r_max, points)
        name = "curvature.csv" if isinstance(metric, PR.DoublyWarpedMetric) else "ricci.csv"
        run.write_csv(name, ["r", *sample.names], sample.rows())
        low, comp, where = sample.minimum()
        run.summary["minimum"] = {"value": low, "component": comp, "r": where}
        if isinstance(metric, PR.DoublyWarpedMetric):
            run.check("positivity", low > 0)
        else:
            tol = args.tol if args.tol is not None else op.get("tol", 1e-9)
            run.check("nonnegativity", low >= -tol)


def _mode_for(metric, k, r_max, args):
    return DR.solve_radial_mode(metric, k, r_max, points_per_decade=args.grid_per_decade)


def cmd_frequency(run: Run, metric, op, args):
    if not isinstance(metric, PR.SingleWarpMetric):
        raise UsageError("frequency needs a rotationally symmetric metric")
    k = op.get("k", 1)
    r_min, r_max = op.get("r_min", 1.0), op.get("r_max", 1e3)
    n = metric.n
    with run.timed("curves"):
        levels = FQ.levels_for(metric)
        s_max = float(levels.inverse(r_max))
        mode = _mode_for(metric, k, 1.01 * s_max, args)
        grid = FQ.log_grid(r_min, r_max, args.grid_per_decade)
        curves = FQ.frequency_curve(metric, mode, grid, levels=levels)
        run.write_csv("frequency.csv", ["r", "I", "D", "E", "F", "freq", "W"], curves.rows())
    summary = run.summary
    summary["levels"] = curves.levels
    summary["sup_freq"] = float(np.max(curves.freq))
    summary["end_freq"] = float(curves.freq[-1])
    with run.timed("identities"):
        res = FQ.check_derivative_identity(curves)
        summary["derivative_identity_residual"] = res
        if curves.levels == "green":
            run.check("derivative-identity", res < 1e-4)
            avr = FQ.ambient_constants(metric)
            if k == 0:
                dev = float(np.max(np.abs(curves.I / (n * avr.V_M) - 1.0)))
                summary["I1_deviation"] = dev
                run.check("I1-constant", dev < 1e-4)
            summary["e_over_d_end"] = float(FQ.e_over_d(curves, r_max))
        else:
            run.verdicts["derivative-identity"] = "skipped"
    with run.timed("lemmas"):
        factor = 2.0 ** (4 * n) if args.paper_factors else op.get("factor", 4.0)
        if r_min * factor <= r_max:
            summary["w_defect"] = FQ.w_defect(curves, r_min, factor)
            summary["w_defect_factor"] = factor
        d = op.get("d", max(float(curves.freq[-1]), 1e-12))
        summary["d"] = d
        if k > 0:
            try:
                bound = FQ.frequency_bound_scan(metric, mode, d, (r_min, r_max), curves=curves)
                run.check("frequency-bound", bound.passes)
                summary["frequency_bound"] = {"sup": bound.sup, "at": bound.argsup, "bound": bound.bound}
            except PreconditionError as exc:
                run.verdicts["frequency-bound"] = "precondition-failed"
                summary["frequency_bound"] = {"error": str(exc)}
        span = 2.0 ** (4 * n + 3)
        if args.paper_factors and r_min * span <= r_max:
            chk = FQ.d_growth_from_i(curves, 2.0 * r_min)
            run.check("d-growth-from-i", chk.holds)
        if args.paper_factors and r_min * 2.0 ** (4 * n + 1) <= r_max:
            scan = FQ.d_doubling_scan(curves, d)
            summary["d_doubling_qualifying"] = int(np.sum(scan.qualifying))
            summary["d_doubling_examined"] = int(scan.radii.size)


def cmd_three_circles(run: Run, metric, op, args, cone_spec):
    alpha = op.get("alpha")
    if alpha is None:
        raise UsageError("operation.alpha is required for three-circles")
    r_min, r_max = op.get("r_min", 1.0), op.get("r_max", 1e3)
    radii = np.geomspace(r_min, r_max, op.get("points", 200))
    with run.timed("scan"):
        if cone_spec is not None:
            space, h = build_cone(cone_spec)
            try:
                res = TC.three_circles_J(space, h, radii, alpha)
            except PreconditionError as exc:
                run.verdicts["implication"] = "precondition-failed"
                run.summary["error"] = str(exc)
                return
            threshold = float(radii[0]) if res.holds else None
        else:
            k = op.get("k", 1)
            mode = _mode_for(metric, k, r_max, args)
            scan = TC.empirical_threshold(metric, mode, alpha, radii)
            res, threshold = scan.result, scan.threshold
        rows = ((r, a, b, c, p, q) for r, a, b, c, p, q in
                zip(res.r, res.values[0], res.values[1], res.values[2], res.premise, res.conclusion))
        run.write_csv("three_circles.csv", ["r", "J_r", "J_half", "J_quarter", "premise", "conclusion"], rows)
    run.check("implication", res.holds)
    run.summary["threshold"] = threshold
    run.summary["premise_count"] = int(np.sum(res.premise))
    run.summary["violations"] = int(np.sum(~res.implication))


def cmd_spectrum(run: Run, metric, op, args, cone_spec):
    if cone_spec is None:
        if not isinstance(metric, PR.SingleWarpMetric):
            raise UsageError("spectrum needs a cone section or a rotationally symmetric metric")
        space = DR.tangent_cone_spectrum(metric, op.get("points", 10))
        if space is None:
            run.verdicts["spectrum"] = "precondition-failed"
            run.summary["error"] = "tangent cone at infinity is not a cone of full power"
            return
        m = metric.n - 1
    else:
        space, _ = build_cone(cone_spec)
        m = cone_spec["sphere_dim"]
    with run.timed("spectrum"):
        spec = space.spectrum
        alphas = space.exponents()
        rows = ((i, lam, mult, a) for i, (lam, mult, a) in enumerate(zip(spec.eigenvalues, spec.multiplicities, alphas)))
        run.write_csv("spectrum.csv", ["k", "lambda", "multiplicity", "alpha"], rows)
        ok = all(mult == C.harmonic_multiplicity(m, i) for i, mult in enumerate(spec.multiplicities))
        run.check("multiplicities", ok)
        run.summary["kappa"] = space.kappa
        run.summary["mass"] = space.mass


def cmd_existence(run: Run, metric, op, args):
    if not isinstance(metric, PR.SingleWarpMetric):
        raise UsageError("existence needs a rotationally symmetric metric")
    k = op.get("k", 1)
    if "d" not in op:
        raise UsageError("operation.d is required for existence")
    with run.timed("pipeline"):
        rep = DR.existence_pipeline(metric, k, op["d"], op.get("levels", 6), op.get("k0", 2.0),
                                    points_per_decade=args.grid_per_decade)
    run.verdicts.update(rep.verdicts)
    run.write_json("pipeline.json", rep.as_dict())
    run.summary["failed_stage"] = rep.failed_stage
    if rep.finest is not None:
        fine = rep.finest
        r = fine.r[fine.r <= rep.radii[-1] * (1 + 1e-12)]
        phi = fine.phi(r)
        run.write_csv("u_finest.csv", ["r", "phi", "u_max"], zip(r, phi, np.abs(phi) * fine.angular_max))


def cmd_classify(run: Run, metric, op, args):
    if not isinstance(metric, PR.SingleWarpMetric):
        raise UsageError("classify needs a rotationally symmetric metric")
    ks = op.get("ks", [op.get("k", 1)])
    r_max = op.get("r_max", 1e4)
    out = {}
    with run.timed("classify"):
        for k in ks:
            cls = DR.growth_classification(metric, k, r_max)
            out[str(k)] = {"kind": cls.kind, "rate": cls.rate, "window": list(cls.window)}
            if "expect" in op:
                run.check(f"k={k}", cls.kind == op["expect"])
            else:
                run.verdicts[f"k={k}"] = "pass"
    run.summary["classification"] = out
    run.write_json("classification.json", out)


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conelab", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"conelab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", type=Path, help="JSON scenario file")
        s.add_argument("--out", type=Path, default=Path("conelab-out"), help="output directory")
        s.add_argument("--grid-per-decade", type=int, default=512, help="log-grid density")
        s.add_argument("--tol", type=float, default=None, help="override the command's main tolerance")
        s.add_argument("--paper-factors", action="store_true", help="use the full 2^(4n) windows")
        s.add_argument("--seed", type=int, default=0, help="seed recorded in the manifest")
    return p


def run_command(command: str, config: dict, out: Path, args) -> Run:
    validate_config(config)
    op = config["operation"]
    metric = build_metric(config["metric"])
    run = Run(command, config, out, args.seed)
    out.mkdir(parents=True, exist_ok=True)
    cone_spec = config.get("cone")
    if command == "verify-ni":
        if not isinstance(metric, PR.DoublyWarpedMetric):
            raise UsageError("verify-ni needs metric kind 'ni'")
        cmd_verify_ni(run, metric, op, args)
    elif command == "verify-ding":
        if not (isinstance(metric, PR.SingleWarpMetric) and isinstance(metric.profile, PR.DingProfile)):
            raise UsageError("verify-ding needs metric kind 'ding'")
        cmd_verify_ding(run, metric, op, args)
    elif command == "curvature":
        cmd_curvature(run, metric, op, args)
    elif command == "frequency":
        cmd_frequency(run, metric, op, args)
    elif command == "three-circles":
        cmd_three_circles(run, metric, op, args, cone_spec)
    elif command == "spectrum":
        cmd_spectrum(run, metric, op, args, cone_spec)
    elif command == "existence":
        cmd_existence(run, metric, op, args)
    elif command == "classify":
        cmd_classify(run, metric, op, args)
    (out / "run.json").write_text(json.dumps(_jsonable(run.manifest()), indent=2, sort_keys=True) + "\n")
    return run


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(os.environ["CONELAB_OUT"]) if os.environ.get("CONELAB_OUT") else args.out
    try:
        if args.config is None:
            if args.command not in DEFAULT_CONFIGS:
                raise UsageError(f"{args.command} needs --config")
            config = DEFAULT_CONFIGS[args.command]
        else:
            try:
                config = json.loads(args.config.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read configuration: {exc}") from exc
        run = run_command(args.command, config, out, args)
    except (UsageError, PreconditionError) as exc:
        print(f"conelab: error: {exc}", file=sys.stderr)
        return 2
    except ConelabError as exc:
        print(f"conelab: error: {exc}", file=sys.stderr)
        return 2
    code = run.exit_code()
    failed = [k for k, v in run.verdicts.items() if v != "pass" and v != "skipped"]
    status = {0: "PASS", 1: "FAIL", 2: "PRECONDITION-FAILED"}[code]
    print(f"{args.command}: {status} ({len(run.verdicts) - len(failed)}/{len(run.verdicts)} checks)"
          + (f" failing: {', '.join(failed)}" if failed else ""))
    return code


if __name__ == "__main__":
    sys.exit(main())
