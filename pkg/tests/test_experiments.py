import math

import pytest

from specprofile import calibration as cal
from specprofile.errors import KOutOfRange
from specprofile.experiments import (
    complete_graph,
    default_suite,
    random_graph,
    thm1_report,
    thm2_report,
    tree_demo,
    verify_gmt,
)
from specprofile.graph import is_connected


def test_suite_shape(suite):
    names = [s.name for s in suite]
    assert names[:7] == [f"K{n}" for n in range(2, 9)]
    assert sum(n.startswith("R") for n in names) == 20
    assert all(is_connected(s.graph) for s in suite)
    assert all(s.graph.num_vertices <= 12 for s in suite)


def test_random_graphs_deterministic():
    a, b = random_graph(0, 3), random_graph(0, 3)
    assert a.edges() == b.edges()
    assert all(0.5 <= w <= 2 for _, _, w in a.edges())


def test_verify_gmt_examples(suite):
    r = verify_gmt(suite[:2])
    k2, k3 = r.rows
    assert k2["slack"] == pytest.approx(4.0, rel=1e-9)
    assert k3["tau"] == pytest.approx(0.924196, abs=1e-6)
    assert k3["rho"] == pytest.approx(4 / 3 * math.log(6), abs=1e-12)
    assert verify_gmt(suite).passed


def test_thm1(suite):
    r = thm1_report(suite)
    assert r.rows[0]["loglog_guard"] == 1.0
    assert r.rows[0]["ratio"] == pytest.approx(4.0, rel=1e-9)
    assert r.passed
    assert r.aggregate["min_tau_lam_over_k"] > 0
    assert r.to_csv().startswith("graph,n,tau,rho")


def test_thm2_small():
    r = thm2_report(5)
    assert [row["k"] for row in r.rows] == [3, 4, 5]
    assert r.rows[0]["loglog_n"] == pytest.approx(math.log2(9), rel=1e-12)
    assert r.rows[0]["loglog_n"] == pytest.approx(3.17, abs=5e-3)
    assert r.passed


def test_thm2_range():
    with pytest.raises(KOutOfRange):
        thm2_report(13)
    with pytest.raises(KOutOfRange):
        thm2_report(2)


def test_tree_demo_small():
    r = tree_demo(7)
    assert r.passed
    assert all(row["tau_child"] > row["tau_root"] for row in r.rows)


def test_tree_demo_range():
    with pytest.raises(ValueError):
        tree_demo(11)


def test_calibration_snapshot_reproduces():
    out = cal.oracle_run(verbose=False)
    assert out["thm1_max_ratio"] == pytest.approx(cal.ORACLE_SNAPSHOT["thm1_max_ratio"], rel=1e-9)
    for k, vals in cal.ORACLE_SNAPSHOT["thm2"].items():
        assert out["thm2"][k] == pytest.approx(vals, rel=1e-9)
    for h, vals in cal.ORACLE_SNAPSHOT["tree"].items():
        assert out["tree"][h] == pytest.approx(vals, rel=1e-6)


def test_reports_are_reproducible():
    a = verify_gmt(default_suite()[-3:]).to_csv()
    b = verify_gmt(default_suite()[-3:]).to_csv()
    assert a == b
