import io
import json
import math

import pytest

from specprofile.cli import run


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def k2(tmp_path):
    p = tmp_path / "k2.json"
    p.write_text(json.dumps({"num_vertices": 2, "edges": [[0, 1, 1.0]]}))
    return str(p)


@pytest.fixture
def disconnected(tmp_path):
    p = tmp_path / "dis.json"
    p.write_text(json.dumps({"num_vertices": 4, "edges": [[0, 1, 1], [2, 3, 1]]}))
    return str(p)


def test_tau(k2):
    code, out, _ = _run(["tau", "--input", k2, "--epsilon", "0.5"])
    assert code == 0
    assert json.loads(out)["tau_inf"] == pytest.approx(math.log(2) / 2, abs=1e-11)
    assert "0.34657359028" in out


def test_tau_disconnected(disconnected):
    code, _, err = _run(["tau", "--input", disconnected])
    assert code == 2 and "Disconnected" in err


def test_unknown_subcommand():
    code, _, err = _run(["bogus"])
    assert code == 2 and "UnknownSubcommand" in err


def test_unknown_flag(k2):
    code, _, err = _run(["tau", "--input", k2, "--nope"])
    assert code == 2 and "UsageError" in err


def test_bad_input(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"num_vertices": 2, "edges": [[1, 0, 1.0]]}')
    code, _, err = _run(["stationary", "--input", str(p)])
    assert code == 2 and "BadInputFile" in err and "edges[0]" in err


def test_stationary_rho_profile(k2):
    assert json.loads(_run(["stationary", "--input", k2])[1])["pi"] == [0.5, 0.5]
    assert json.loads(_run(["rho", "--input", k2])[1])["rho"] == pytest.approx(math.log(4), abs=1e-11)
    code, out, _ = _run(["profile", "--input", k2, "--format", "csv"])
    assert code == 0 and out.splitlines()[0] == "r_from,r_to,lambda"


def test_tau_from(k2):
    code, out, _ = _run(["tau-from", "--input", k2, "--start", "1", "--format", "csv"])
    assert code == 0 and out.splitlines()[1].startswith("1,0.5,0.34657")
    assert _run(["tau-from", "--input", k2, "--start", "7"])[0] == 2


def test_verify_gmt_default_suite():
    code, out, _ = _run(["verify-gmt", "--suite", "default"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "graph,n,tau,rho,slack,holds" and len(lines) == 49


def test_thm1_single_input(k2):
    code, out, _ = _run(["thm1", "--input", k2, "--format", "json"])
    assert code == 0 and json.loads(out)["rows"][0]["ratio"] == pytest.approx(4)


def test_construct(tmp_path):
    path = tmp_path / "g3.json"
    assert _run(["construct", "--k", "3", "--out", str(path)])[0] == 0
    data = json.loads(path.read_text())
    assert data["num_vertices"] == 512
    code, _, err = _run(["construct", "--k", "4"])
    assert code == 2 and "KTooLargeForDense" in err


def test_thm2_json_has_big_values():
    code, out, _ = _run(["thm2", "--kmax", "4", "--format", "json"])
    body = json.loads(out)
    assert code == 0 and body["passed"]
    n4 = body["n_k"]["4"]
    assert int(n4["significand"]) * 2 ** n4["exponent"] == 196608


def test_thm2_out_of_range():
    code, _, err = _run(["thm2", "--kmax", "13"])
    assert code == 2 and "KOutOfRange" in err


def test_simulate_reproducible():
    a = _run(["simulate", "--k", "3", "--seed", "3", "--replicas", "5000"])
    b = _run(["simulate", "--k", "3", "--seed", "3", "--replicas", "5000"])
    assert a == b and a[0] == 0
    assert json.loads(a[1])["seed"] == 3


def test_tree_demo_csv():
    code, out, _ = _run(["tree-demo", "--height", "6"])
    assert code == 0 and out.startswith("h,n,tau_root,tau_child")


def test_rough_iso(tmp_path, k2):
    m = tmp_path / "map.json"
    m.write_text("[1, 0]")
    code, out, _ = _run(["rough-iso", "--input", k2, "--input", k2, "--map", str(m), "--K", "1"])
    assert code == 0 and json.loads(out)["holds"] is True
    m.write_text("[1]")
    code, _, err = _run(["rough-iso", "--input", k2, "--map", str(m), "--K", "1"])
    assert code == 2 and "PartialMap" in err


def test_failed_report_exits_one(tmp_path, monkeypatch):
    from specprofile import calibration

    monkeypatch.setattr(calibration, "TREE_GAMMA_EXP", 10.0)
    code, _, _ = _run(["tree-demo", "--height", "6"])
    assert code == 1


def test_output_is_byte_identical(k2, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    _run(["rho", "--input", k2, "--out", str(a)])
    _run(["rho", "--input", k2, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
