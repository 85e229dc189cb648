import csv
import json
import subprocess
import sys

import pytest

from conelab import cli


def write_config(tmp_path, config, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return path


def run(argv, monkeypatch=None):
    return cli.main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def manifest(out):
    return json.loads((out / "run.json").read_text())


def test_verify_ni_defaults(tmp_path, capsys):
    out = tmp_path / "ni"
    assert run(["verify-ni", "--out", out]) == 0
    m = manifest(out)
    assumptions = [k for k in m["verdicts"] if k.startswith("assumption:")]
    assert len(assumptions) == 8
    assert set(m["verdicts"].values()) == {"pass"}
    for key in ("c2-gluing:ni-f", "c2-gluing:ni-h", "curvature-positivity", "growth-degree"):
        assert m["verdicts"][key] == "pass"
    assert "PASS" in capsys.readouterr().out


def test_verify_ding_defaults(tmp_path):
    out = tmp_path / "ding"
    assert run(["verify-ding", "--out", out]) == 0
    m = manifest(out)
    assert all(v == "pass" for v in m["verdicts"].values())
    assert len(m["verdicts"]) >= 3
    header, rows = read_csv(out / "ricci.csv")
    assert header[0] == "r" and rows


def test_empty_config_exit_2(tmp_path, capsys):
    cfg = write_config(tmp_path, {})
    assert run(["frequency", "--config", cfg, "--out", tmp_path / "o"]) == 2
    err = capsys.readouterr().err
    assert "'metric' is a required property" in err
    assert "'operation' is a required property" in err


def test_bad_values_exit_2(tmp_path, capsys):
    cfg = write_config(tmp_path, {"metric": {"kind": "torus"}, "operation": {}})
    assert run(["classify", "--config", cfg, "--out", tmp_path / "o"]) == 2
    cfg = write_config(tmp_path, {"metric": {"kind": "euclidean"}, "operation": {"r_min": 5, "r_max": 1}})
    assert run(["frequency", "--config", cfg, "--out", tmp_path / "o"]) == 2
    assert run(["frequency", "--out", tmp_path / "o"]) == 2
    assert run(["frequency", "--config", tmp_path / "missing.json", "--out", tmp_path / "o"]) == 2


def test_frequency_reproducible(tmp_path):
    cfg = write_config(tmp_path, {"metric": {"kind": "asym-conical", "beta": 0.8, "n": 3},
                                  "operation": {"k": 1, "r_min": 1.0, "r_max": 100.0}})
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["frequency", "--config", cfg, "--out", a, "--grid-per-decade", "64"]) == 0
    assert run(["frequency", "--config", cfg, "--out", b, "--grid-per-decade", "64"]) == 0
    assert (a / "frequency.csv").read_bytes() == (b / "frequency.csv").read_bytes()
    assert manifest(a)["config_digest"] == manifest(b)["config_digest"]
    header, rows = read_csv(a / "frequency.csv")
    assert header == ["r", "I", "D", "E", "F", "freq", "W"]
    assert all(len(r) == 7 for r in rows)
    # every float parses back exactly
    assert all(repr(float(x)) == x for x in rows[0])


def test_artifacts_exist_with_headers(tmp_path):
    cfg = write_config(tmp_path, {"metric": {"kind": "euclidean", "n": 3},
                                  "cone": {"sphere_dim": 2, "beta": 0.8, "count": 6, "terms": [[1.0, 1], [0.5, 2]]},
                                  "operation": {"alpha": 2.0}})
    for cmd, name, header in [
        ("three-circles", "three_circles.csv", ["r", "J_r", "J_half", "J_quarter", "premise", "conclusion"]),
        ("spectrum", "spectrum.csv", ["k", "lambda", "multiplicity", "alpha"]),
    ]:
        out = tmp_path / cmd
        assert run([cmd, "--config", cfg, "--out", out]) == 0
        m = manifest(out)
        assert name in m["artifacts"]
        for art in m["artifacts"]:
            assert (out / art).exists()
        assert read_csv(out / name)[0] == header


def test_existence_exit_codes(tmp_path):
    ok = write_config(tmp_path, {"metric": {"kind": "asym-conical", "beta": 0.8},
                                 "operation": {"k": 1, "d": 1.6371, "levels": 4}}, "ok.json")
    out = tmp_path / "ok"
    assert run(["existence", "--config", ok, "--out", out]) == 0
    assert json.loads((out / "pipeline.json").read_text())["success"] is True
    assert read_csv(out / "u_finest.csv")[0] == ["r", "phi", "u_max"]
    ding = write_config(tmp_path, {"metric": {"kind": "ding"}, "operation": {"k": 1, "d": 2.0, "levels": 4}},
                        "ding.json")
    assert run(["existence", "--config", ding, "--out", tmp_path / "ding"]) == 1
    pre = write_config(tmp_path, {"metric": {"kind": "asym-conical", "beta": 0.8},
                                  "operation": {"k": 1, "d": 1.2, "levels": 3}}, "pre.json")
    assert run(["existence", "--config", pre, "--out", tmp_path / "pre"]) == 2


def test_classify(tmp_path):
    cfg = write_config(tmp_path, {"metric": {"kind": "ding"}, "operation": {"k": 1, "expect": "exponential"}})
    out = tmp_path / "c"
    assert run(["classify", "--config", cfg, "--out", out]) == 0
    data = json.loads((out / "classification.json").read_text())
    assert "exponential" in json.dumps(data)


def test_env_override(tmp_path, monkeypatch):
    target = tmp_path / "env"
    monkeypatch.setenv("CONELAB_OUT", str(target))
    assert run(["verify-ding", "--out", tmp_path / "ignored"]) == 0
    assert (target / "run.json").exists()
    assert not (tmp_path / "ignored").exists()


def test_digest_key_order_invariant():
    a = {"metric": {"kind": "ding", "n": 3}, "operation": {"k": 1, "d": 2.0}}
    b = {"operation": {"d": 2.0, "k": 1}, "metric": {"n": 3, "kind": "ding"}}
    assert cli.config_digest(a) == cli.config_digest(b)
    assert cli.config_digest(a) != cli.config_digest({**a, "operation": {"k": 2, "d": 2.0}})


def test_fmt_round_trip():
    assert cli.fmt(0.1) == "0.1"
    assert cli.fmt(True) == "true"
    assert cli.fmt(3) == "3"
    assert float(cli.fmt(1 / 3)) == 1 / 3


def test_console_script_subprocess(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "conelab.cli", "verify-ding", "--out", str(tmp_path / "s")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("verify-ding: PASS")


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "conelab" in capsys.readouterr().out
