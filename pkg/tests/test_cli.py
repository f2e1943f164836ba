import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from make_golden import GOLDEN, cases, render
from weakval.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("filename,argv", list(cases()), ids=[c[0] for c in cases()])
def test_golden_tables(filename, argv):
    assert render(argv) == (GOLDEN / filename).read_text()


def test_spin_json_renders_imaginary_unit():
    doc = json.loads(render(["scenario", "spin", "--table", "pauli-y", "--format", "json"]))
    z = next(r for r in doc["rows"] if r["label"] == "sigma_z")
    assert z["cells"] == ["0+1i", "0-1i"]


def test_unknown_variant_exits_2(capsys):
    code, _ = run(["scenario", "hardy", "--table", "bogus"])
    assert code == 2
    err = capsys.readouterr().err
    assert "general, noncommuting, cancellation, orthogonal" in err


def test_bad_coeffs_exit_2():
    assert run(["scenario", "hardy", "--coeffs", "1,2"])[0] == 2
    assert run(["scenario", "hardy", "--coeffs", "0,0,0,0"])[0] == 2


@pytest.fixture
def hardy_doc(tmp_path):
    path = tmp_path / "hardy.json"
    assert run(["scenario", "hardy", "--export", str(path)])[0] == 0
    return path


def test_export_check_round_trip(hardy_doc):
    code, out = run(["check", str(hardy_doc)])
    assert code == 0
    assert out.count("PASS") == 10 and "FAIL" not in out


def test_check_json_report(hardy_doc):
    code, out = run(["check", str(hardy_doc), "--format", "json"])
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert max(c["residual"] for c in report["checks"]) < 1e-10


def test_spin_exports_check_clean(tmp_path):
    for table in ("pauli-y", "pauli"):
        path = tmp_path / f"{table}.json"
        assert run(["scenario", "spin", "--table", table, "--export", str(path)])[0] == 0
        assert run(["check", str(path), "--format", "csv"])[0] == 0


def test_equivalence_failure_exits_1(tmp_path, hardy_doc):
    doc = json.loads(hardy_doc.read_text())
    r = math.sqrt((1 - 0.01) / 3)
    doc["pre_state"] = [[0.1, 0], [r, 0], [r, 0], [r, 0]]
    doc["checks"] = [{"name": "equivalence", "observables": ["P[I_pO_e]", "P[I_p*id]"]}]
    path = tmp_path / "eta.json"
    path.write_text(json.dumps(doc))
    code, out = run(["check", str(path)])
    assert code == 1
    assert "FAIL" in out


def test_schema_error_exits_2(tmp_path, hardy_doc, capsys):
    doc = json.loads(hardy_doc.read_text())
    zero = [[0, 0]] * 4
    doc["observables"]["X"] = {"matrix": [[[0, 0], [1, 0], [0, 0], [0, 0]], zero, zero, zero]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert run(["check", str(path)])[0] == 2
    assert "observables.X.matrix: not Hermitian" in capsys.readouterr().err


def test_incomplete_basis_exits_2(tmp_path, hardy_doc, capsys):
    doc = json.loads(hardy_doc.read_text())
    doc["post_states"].pop("B_pB_e")
    doc["checks"] = ["born"]
    path = tmp_path / "partial.json"
    path.write_text(json.dumps(doc))
    assert run(["check", str(path)])[0] == 2
    assert "post_states" in capsys.readouterr().err


def test_missing_and_malformed_files(tmp_path):
    assert run(["check", str(tmp_path / "missing.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["check", str(bad)])[0] == 2


def test_optimize_hardy_matches_planar(hardy_doc):
    code, out = run(["optimize", str(hardy_doc), "--observable", "P[I_pO_e]",
                     "--xi", repr(math.pi / 3), "--format", "json"])
    report = json.loads(out)
    assert code == 0
    # cos(theta + xi) cos(theta) / cos(xi) with cos(theta) = 1/sqrt(3)
    theta = math.acos(1 / math.sqrt(3))
    planar = math.cos(theta + math.pi / 3) * math.cos(theta) / math.cos(math.pi / 3)
    assert abs(float(report["weak_value"]) - planar) < 1e-10
    assert abs(float(report["oracle_value"]) - planar) < 1e-6
    assert report["classification"] == "below_min"


def test_optimize_spin_sigma_x(tmp_path):
    path = tmp_path / "spin.json"
    run(["scenario", "spin", "--table", "pauli", "--export", str(path)])
    code, out = run(["optimize", str(path), "--observable", "sigma_x", "--xi", "1.0472",
                     "--format", "json"])
    report = json.loads(out)
    assert code == 0
    assert abs(float(report["weak_value"]) - float(report["oracle_value"])) < 1e-6
    assert report["classification"] in ("within", "above_max", "below_min")


@pytest.mark.parametrize("xi", ["0.0", "-1", "1.5707", "2"])
def test_optimize_bad_xi_exits_2(hardy_doc, xi, capsys):
    assert run(["optimize", str(hardy_doc), "--observable", "P[I_pO_e]", "--xi", xi])[0] == 2
    assert "xi must be in (0, xi_ceiling)" in capsys.readouterr().err


def test_optimize_complex_scenario_exits_2(tmp_path):
    path = tmp_path / "spin.json"
    run(["scenario", "spin", "--table", "pauli-y", "--export", str(path)])
    assert run(["optimize", str(path), "--observable", "sigma_y", "--xi", "0.5"])[0] == 2


def test_optimize_unknown_observable_exits_2(hardy_doc):
    assert run(["optimize", str(hardy_doc), "--observable", "nope", "--xi", "0.5"])[0] == 2


def test_optimize_nonconvergence_exits_1(hardy_doc, capsys):
    # a random-ish observable that needs iterations; one step is not enough
    doc = json.loads(hardy_doc.read_text())
    doc["observables"]["M"] = {"matrix": [
        [[1, 0], [0.3, 0], [0, 0], [0.2, 0]],
        [[0.3, 0], [-0.5, 0], [0.7, 0], [0, 0]],
        [[0, 0], [0.7, 0], [0.2, 0], [0.4, 0]],
        [[0.2, 0], [0, 0], [0.4, 0], [-1, 0]],
    ]}
    path = Path(hardy_doc.parent / "m.json")
    path.write_text(json.dumps(doc))
    code, out = run(["optimize", str(path), "--observable", "M", "--xi", "1.2",
                     "--max-iterations", "1", "--resolution", "64"])
    assert code == 1
    assert "converged              false" in out


def test_argparse_usage_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["optimize"])
    assert info.value.code == 2


def test_deterministic_text_output():
    assert render(["scenario", "hardy", "--table", "general"]) == render(["scenario", "hardy", "--table", "general"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weakval", "scenario", "spin"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "spin-pauli-y.txt").read_text()
