import math
from itertools import combinations

import numpy as np
import pytest

from specprofile.errors import SingletonGraph, TooLargeForExact
from specprofile.experiments import complete_graph, path_graph
from specprofile.graph import build_graph, measure
from specprofile.profile import rayleigh_sets, rho, spectral_profile, subset_table
from specprofile.spectral import lambda_fk, spectral_gap


def _oracle_profile(g):
    """Brute force over subsets via lambda_fk, independent of the subset-min table."""
    n = g.num_vertices
    vals = []
    for s in range(1, n + 1):
        for a in combinations(range(n), s):
            vals.append((measure(g, a), lambda_fk(g, a).value))
    return vals


def test_profile_k2():
    c = spectral_profile(complete_graph(2))
    assert c.pi_star == 0.5
    assert c(0.5) == pytest.approx(2) and c(1) == pytest.approx(2) and c(7) == pytest.approx(2)


def test_profile_k3():
    c = spectral_profile(complete_graph(3))
    assert np.allclose(c.values, 1.5)


def test_unit_path_profile():
    g = path_graph(3)
    c = spectral_profile(g)
    assert c.pi_star == pytest.approx(0.25)
    # an end vertex: 1 / (pi (1 - pi)) * pi K = 1 / (1 - 1/4)
    assert c(0.25) == pytest.approx(4 / 3)


def test_weighted_path_profile_at_one_sixth():
    g = build_graph(3, [(0, 1, 2.0), (1, 2, 1.0)])
    c = spectral_profile(g)
    assert c.pi_star == pytest.approx(1 / 6)
    assert c(1 / 6) == pytest.approx(lambda_fk(g, [2]).value)
    assert c(1 / 6) == pytest.approx(6 / 5)


@pytest.mark.parametrize("g", [path_graph(3), build_graph(3, [(0, 1, 2.0), (1, 2, 1.0)]), path_graph(5)])
def test_profile_matches_enumeration_oracle(g):
    curve = spectral_profile(g)
    oracle = _oracle_profile(g)
    for r, _ in oracle:
        expected = min(v for m, v in oracle if m <= r * (1 + 1e-12))
        assert curve(r) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_profile_invariants(suite):
    for item in suite:
        c = spectral_profile(item.graph)
        assert np.all(np.diff(c.values) <= 1e-12)
        assert abs(c.values[-1] - spectral_gap(item.graph)) < 1e-5
        assert c.breakpoints[-1] == 1.0


def test_subset_lambda_agrees_with_direct(small_suite):
    for item in small_suite[:10]:
        g = item.graph
        t = subset_table(g)
        for a in combinations(range(g.num_vertices), 2):
            assert t.lam_of(a) == pytest.approx(lambda_fk(g, a).value, rel=1e-9)


def test_too_large():
    with pytest.raises(TooLargeForExact):
        spectral_profile(path_graph(21))


def test_rayleigh_sets_k2_k4():
    rs = rayleigh_sets(complete_graph(2))
    assert rs.ks == [1]
    assert len(rs.sets[0].vertices) == 1 and rs.sets[0].lam == pytest.approx(2)
    rs = rayleigh_sets(complete_graph(4))
    assert rs.ks == [1, 2]
    assert rs.sets[1].vertices == (0,)


def test_rayleigh_invariants(suite):
    for item in suite:
        rs = rayleigh_sets(item.graph)
        lams = [s.lam for s in rs]
        assert all(s.measure <= 2.0 ** -s.k * (1 + 1e-12) for s in rs)
        assert all(b >= a - 1e-9 for a, b in zip(lams, lams[1:]))
        assert max(rs.ks) == math.floor(math.log2(1 / rs.pi_star) + 1e-12)


def test_rho_closed_forms():
    r = rho(complete_graph(2))
    assert r.rho == pytest.approx(math.log(4), abs=1e-12)
    assert r.dyadic_sum == pytest.approx(0.5)
    assert rho(complete_graph(3)).rho == pytest.approx(4 / 3 * math.log(6), abs=1e-12)


@pytest.mark.parametrize("g", [complete_graph(2), complete_graph(3)])
def test_rho_epsilon_shift(g):
    diff = rho(g, 0.25).rho - rho(g, 0.5).rho
    assert diff == pytest.approx(2 / spectral_gap(g) * math.log(2), abs=1e-12)


def test_rho_bands_sum(suite):
    ratios = []
    for item in suite:
        r = rho(item.graph)
        assert abs(sum(b.contribution for b in r.bands) - r.rho) <= 1e-10
        assert all(b.contribution > 0 for b in r.bands)
        ratios.append(r.rho / r.dyadic_sum)
    assert 1 <= min(ratios) and max(ratios) <= 10


def test_rho_singleton():
    with pytest.raises(SingletonGraph):
        rho(build_graph(1, [(0, 0, 1.0)]))


def test_curve_json():
    js = spectral_profile(complete_graph(3)).to_json()
    assert js["curve"][-1]["r_to"] is None
    assert js["pi_star"] == pytest.approx(1 / 3)
