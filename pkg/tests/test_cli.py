import json
import subprocess
import sys
from pathlib import Path

import pytest

from alexnorm.cli import parse_manifest, run
from alexnorm.errors import SpecParseError
from alexnorm.registry import describe, function_from_spec, registry_list


# -- registry --------------------------------------------------------------


def test_registry_list_sorted_and_complete():
    names = registry_list()
    assert names == sorted(names)
    assert "sinc_primitive" in names
    assert "indicator_01" in names
    for expected in ("ramp", "gaussian", "bump", "cosine", "step_signal",
                     "reciprocal_quadratic", "exponential", "step_weight",
                     "constant"):
        assert expected in names


def test_describe():
    info = describe("sinc_primitive")
    assert info["kind"] == "function"
    assert describe("step_weight")["kind"] == "weight"
    with pytest.raises(KeyError):
        describe("wavelet")


def test_function_from_spec_kinds():
    f = function_from_spec({"kind": "indicator", "a": 0.0, "b": 2.0})
    assert f.primitive.eval(2.0) == 2.0
    g = function_from_spec({"kind": "table", "breakpoints": [0.0, 1.0],
                            "values": [0.0, 3.0]})
    assert g.primitive.eval(0.5) == 1.5
    h = function_from_spec({"kind": "closed_form", "name": "gaussian"})
    assert h.label == "gaussian"


# -- manifest parsing --------------------------------------------------------


def _scenario(**kw):
    base = {
        "name": "s",
        "kind": "norm",
        "function_spec": {"kind": "builtin", "name": "indicator_01"},
        "thresholds": {"tol": 1e-9},
        "output_path": "s.csv",
    }
    base.update(kw)
    return {"seed": 1, "scenarios": [base]}


def test_parse_unknown_kind():
    with pytest.raises(SpecParseError, match=r"scenarios\[0\].kind"):
        parse_manifest(_scenario(kind="wavelet_transform"))


def test_parse_unknown_builtin_names_field():
    with pytest.raises(SpecParseError, match=r"scenarios\[0\].function_spec.name"):
        parse_manifest(_scenario(function_spec={"kind": "builtin", "name": "wavelet"}))


def test_parse_missing_ladder():
    with pytest.raises(SpecParseError, match=r"scenarios\[0\].ladder"):
        parse_manifest(_scenario(kind="gap_sweep"))


def test_parse_bad_tolerance():
    with pytest.raises(SpecParseError, match=r"thresholds.tol"):
        parse_manifest(_scenario(thresholds={"tol": -1.0}))


def test_parse_missing_weight():
    with pytest.raises(SpecParseError, match=r"weight_spec"):
        parse_manifest(_scenario(kind="weighted_sweep", ladder=[0.5]))


def test_parse_constant_function_only_in_weighted_kinds():
    with pytest.raises(SpecParseError, match="constant boundary data"):
        parse_manifest(_scenario(function_spec={"kind": "constant", "value": 1.0}))


# -- runner ------------------------------------------------------------------


def test_empty_manifest_writes_nothing(tmp_path):
    report = run(parse_manifest({"scenarios": []}), out_dir=tmp_path / "out")
    assert report.exit_code == 0
    assert not (tmp_path / "out").exists()


MINI = {
    "seed": 11,
    "versions": "test",
    "scenarios": [
        {
            "name": "norm_box",
            "kind": "norm",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "thresholds": {"tol": 1e-12},
            "expected": 1.0,
            "output_path": "norm_box.csv",
        },
        {
            "name": "gaps_box",
            "kind": "gap_sweep",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "ladder": [0.5, 0.25, 0.125],
            "thresholds": {"tol": 1e-9, "final_gap": 0.2},
            "output_path": "gaps_box.csv",
        },
    ],
}


def test_run_mini_manifest(tmp_path):
    report = run(parse_manifest(MINI), out_dir=tmp_path)
    assert report.exit_code == 0
    assert (tmp_path / "norm_box.csv").read_text().splitlines()[0] == \
        "label,norm,expected,passed"
    gaps = (tmp_path / "gaps_box.csv").read_text().splitlines()
    assert gaps[0] == "x,gap,bound_lower,bound_upper,passed"
    # 17-significant-digit serialization is float round-trip exact
    x, gap = gaps[1].split(",")[:2]
    assert float(x) == 0.5 and float(gap) == 0.5
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["all_passed"] is True
    assert [s["name"] for s in summary["scenarios"]] == ["norm_box", "gaps_box"]


def test_run_deterministic_bytes(tmp_path):
    m1 = parse_manifest(MINI)
    m2 = parse_manifest(MINI)
    run(m1, out_dir=tmp_path / "a")
    run(m2, out_dir=tmp_path / "b")
    for name in ("norm_box.csv", "gaps_box.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_run_parallel_matches_serial(tmp_path):
    run(parse_manifest(MINI), out_dir=tmp_path / "serial", jobs=1)
    run(parse_manifest(MINI), out_dir=tmp_path / "par", jobs=2)
    for name in ("norm_box.csv", "gaps_box.csv", "summary.json"):
        assert (tmp_path / "serial" / name).read_bytes() == \
            (tmp_path / "par" / name).read_bytes()


def test_run_failing_scenario_exit_code(tmp_path):
    bad = {
        "seed": 0,
        "scenarios": [{
            "name": "wrong_expectation",
            "kind": "norm",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "thresholds": {"tol": 1e-12},
            "expected": 2.0,
            "output_path": "w.csv",
        }],
    }
    report = run(parse_manifest(bad), out_dir=tmp_path)
    assert report.exit_code == 1
    assert report.summary["scenarios"][0]["passed"] is False
    assert report.summary["scenarios"][0]["status"] == "ok"


def test_run_domain_error_is_scenario_error(tmp_path):
    # a decay target violating its preconditions surfaces as an error entry
    bad = {
        "seed": 0,
        "scenarios": [{
            "name": "bad_decay",
            "kind": "decay",
            "thresholds": {"tol": 1e-12},
            "psi": {"name": "power", "exponent": 0.0},  # constant: no decay
            "n_max": 16,
            "output_path": "d.csv",
        }],
    }
    report = run(parse_manifest(bad), out_dir=tmp_path)
    assert report.exit_code == 1
    entry = report.summary["scenarios"][0]
    assert entry["status"] == "error"
    assert "InvalidSpec" in entry["error"]
    assert not (tmp_path / "d.csv").exists()


# -- command line ------------------------------------------------------------


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "alexnorm", *args],
                          capture_output=True, text=True)


def test_cli_help():
    cp = run_cli("--help")
    assert cp.returncode == 0
    assert "run" in cp.stdout and "list-builtins" in cp.stdout


def test_cli_list_builtins():
    cp = run_cli("list-builtins")
    assert cp.returncode == 0
    names = cp.stdout.split()
    assert names == sorted(names) and "sinc_primitive" in names


def test_cli_describe():
    cp = run_cli("describe", "step_weight")
    assert cp.returncode == 0 and "weight" in cp.stdout
    cp = run_cli("describe", "nope")
    assert cp.returncode == 2


def test_cli_run_and_env_out(tmp_path):
    mpath = tmp_path / "m.json"
    mpath.write_text(json.dumps(MINI))
    env_dir = tmp_path / "envout"
    cp = subprocess.run(
        [sys.executable, "-m", "alexnorm", "run", str(mpath)],
        capture_output=True, text=True,
        env={"PATH": "/usr/bin:/bin", "ALEXNORM_OUT": str(env_dir)})
    assert cp.returncode == 0, cp.stderr
    assert (env_dir / "summary.json").exists()
    assert "PASS" in cp.stdout


def test_cli_run_parse_error(tmp_path):
    mpath = tmp_path / "bad.json"
    mpath.write_text(json.dumps(_scenario(
        function_spec={"kind": "builtin", "name": "wavelet"})))
    cp = run_cli("run", str(mpath), "--out", str(tmp_path / "o"))
    assert cp.returncode == 2
    assert "function_spec.name" in cp.stderr


def test_cli_run_invalid_json(tmp_path):
    mpath = tmp_path / "broken.json"
    mpath.write_text("{nope")
    cp = run_cli("run", str(mpath))
    assert cp.returncode == 2
    assert "invalid JSON" in cp.stderr


def test_canonical_manifest_file_matches_builder():
    from alexnorm.manifests import canonical_manifest
    path = Path(__file__).resolve().parents[1] / "manifests" / "canonical.json"
    assert json.loads(path.read_text()) == canonical_manifest()
