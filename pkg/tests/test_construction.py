import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from specprofile.construction import (
    build_gk_dense,
    ceil_log2,
    class_law,
    construction_deviation,
    construction_sizes,
    edge_weights,
    lumped_chain,
    lumped_heat_kernel,
    one_step_law,
    one_step_vertex_law,
    rho_lower_bound,
    simulate_walk,
    start_classes,
    tau_construction,
    three_coin_probs,
    vertex_weight,
)
from specprofile.errors import BadPieceLabel, KOutOfRange, KTooLargeForDense, KTooSmall
from specprofile.mixing import heat_kernel, tau_inf
from specprofile.spectral import conductance, lambda0


@pytest.fixture(scope="module")
def g3():
    return build_gk_dense(3)


def test_sizes_k3():
    p = construction_sizes(3)
    assert p.pieces == (2, 3)
    assert p.a_size == {2: 16, 3: 1} and p.b_size == {2: 16, 3: 256}
    assert p.n == 512


def test_sizes_k4_and_invariants():
    assert construction_sizes(4).m == 3 and construction_sizes(4).n == 196608
    for k in range(3, 13):
        p = construction_sizes(k)
        assert p.m * p.h_size == p.n
        assert all(p.a_size[l] * p.b_size[l] == p.h_size for l in p.pieces)
        assert p.a_size[k] == 1


def test_ceil_log2():
    assert ceil_log2(3) == 2 and ceil_log2(4) == 2 and ceil_log2(5) == 3 and ceil_log2(16) == 4


def test_k_too_small():
    with pytest.raises(KTooSmall):
        construction_sizes(2)


@pytest.mark.parametrize("k", range(3, 11))
def test_vertex_weight_exact(k):
    for l in construction_sizes(k).pieces:
        assert vertex_weight(k, l) == 2 + Fraction(k, 2**k)


def test_dense_weights(g3):
    assert np.abs(g3.vertex_weights - 2.375).max() <= 1e-12
    w = edge_weights(3, 3)
    assert w["cross"] == Fraction(3, 4096)
    assert w["self"] == 0 + 1 + Fraction(1, 256) + Fraction(3, 4096)
    assert g3.weight_matrix[0, 300] == pytest.approx(3 / 4096, rel=1e-15)


def test_dense_too_large():
    with pytest.raises(KTooLargeForDense):
        build_gk_dense(4)


def test_coin_probs():
    assert three_coin_probs(3, 2)[1] == Fraction(1, 4)
    assert three_coin_probs(3, 3)[2] == 1
    assert three_coin_probs(3, 2)[0] == Fraction(3, 19)
    with pytest.raises(BadPieceLabel):
        three_coin_probs(3, 1)
    with pytest.raises(BadPieceLabel):
        three_coin_probs(5, 6)


def test_one_step_law_k3(g3):
    for l in (2, 3):
        law = one_step_law(3, l)
        assert sum(law.values()) == 1
        v = start_classes(3, l)["C0"][0]
        assert float(law["C0"]) == pytest.approx(g3.kernel[v, v], abs=1e-12)


def test_vertex_law_matches_every_row(g3):
    k = g3.kernel
    err = max(np.abs(one_step_vertex_law(3, u) - k[u]).max() for u in range(g3.num_vertices))
    assert err <= 1e-12


def test_top_piece_stays_after_two_failures():
    p1, p2, p3 = three_coin_probs(5, 5)
    assert p3 == 1
    law = one_step_law(5, 5)
    # staying comes only from the uniform jumps, never from a failed third coin
    p = construction_sizes(5)
    assert law["C0"] == p1 / p.n + (1 - p1) * p2 / p.h_size + (1 - p1) * (1 - p2)


def test_lumped_chain_shapes():
    c = lumped_chain(3, 2)
    assert dict(zip(c.labels, c.sizes)) == {"C0": 1, "C1": 15, "C2": 240, "H3": 256}
    c3 = lumped_chain(3, 3)
    assert "C1" not in c3.labels
    for k in (3, 6, 9):
        for l in construction_sizes(k).pieces:
            c = lumped_chain(k, l)
            assert sum(c.sizes) == construction_sizes(k).n
            assert all(sum(row) == 1 for row in c.matrix)
            assert all(sum(row) == 0 for row in c.generator)


def test_partition_is_lumpable(g3):
    """Every vertex of a class sends the same mass into each class."""
    for l in (2, 3):
        chain = lumped_chain(3, l)
        cls = start_classes(3, l)
        for i, src in enumerate(chain.labels):
            members = cls[src]
            agg = np.stack([g3.kernel[members][:, cls[dst]].sum(axis=1) for dst in chain.labels], axis=1)
            assert np.abs(agg - agg[0]).max() <= 1e-13
            assert np.allclose(agg[0], [float(x) for x in chain.matrix[i]], atol=1e-14)


@pytest.mark.parametrize("l", [2, 3])
@pytest.mark.parametrize("t", [1, 4, 16])
def test_aggregated_heat_kernel(g3, l, t):
    chain = lumped_chain(3, l)
    cls = start_classes(3, l)
    v = cls["C0"][0]
    h = heat_kernel(g3, t)
    dense = np.array([h[v, cls[lab]].sum() for lab in chain.labels])
    lumped = np.array([float(x) for x in lumped_heat_kernel(chain, t)[0, :]])
    with mpmath.workprec(160):
        closed = np.array([float(class_law(3, l, t)[lab]) for lab in chain.labels])
    assert np.all(np.abs(dense - lumped) <= 1e-6 * np.abs(dense))
    assert np.all(np.abs(dense - closed) <= 1e-6 * np.abs(dense))


def test_tau_k3_against_dense(g3):
    dense = tau_inf(g3).tau_inf
    lumped = float(tau_construction(3).tau)
    assert abs(dense - lumped) <= 1e-6 * dense


@pytest.mark.parametrize("k", [3, 4, 5])
def test_closed_form_and_expm_agree(k):
    a = tau_construction(k).tau
    b = tau_construction(k, method="expm").tau
    assert abs(a - b) <= 1e-10 * a


def test_closed_form_deviation_vs_expm_k6():
    # k = 6 needs 2^6 + 160 bits to resolve the singleton class
    k, l = 6, 4
    chain = lumped_chain(k, l)
    n = construction_sizes(k).n
    t = 60
    ht = lumped_heat_kernel(chain, t)
    with mpmath.workprec(2**k + 160):
        via_expm = max(abs(ht[0, j] * n / s - 1) for j, s in enumerate(chain.sizes))
    assert abs(via_expm - construction_deviation(k, t, piece=l)) <= 1e-12 * via_expm


@pytest.mark.parametrize("k", range(4, 9))
def test_uniform_after_long_time(k):
    assert construction_deviation(k, 2 ** (k + 4)) < mpmath.mpf(2) ** -40


def test_uniform_after_long_time_k3_slower():
    # at k = 3 the jump coin has rate 3/19, so e^(-128 * 3/19) ~ 1.7e-9 remains
    dev = construction_deviation(3, 2**7)
    assert float(dev) == pytest.approx(math.exp(-128 * 3 / 19), rel=1e-9)


def test_tau_bounds_and_range():
    for k in range(3, 13):
        assert float(tau_construction(k).tau) <= 2 ** (k + 2)
    with pytest.raises(KOutOfRange):
        tau_construction(17)
    with pytest.raises(KOutOfRange):
        tau_construction(2)
    with pytest.raises(KOutOfRange):
        tau_construction(8, method="expm")


def test_tau_is_a_crossing():
    for k in (3, 7, 12):
        r = tau_construction(k)
        lo, hi = r.bracket
        assert construction_deviation(k, hi) <= 0.5 < construction_deviation(k, lo)


def test_rho_lower_bound_bands():
    for k in range(3, 13):
        rb = rho_lower_bound(k)
        assert rb.value > 0
        assert all(b["contribution"] > 0 for b in rb.bands)
        for b in rb.bands:
            assert float(b["lambda_ub"]) / 2.0 ** (b["l"] - k) <= 2.0


def test_rho_lower_bound_unclamped_bands_match_sum():
    # away from the clamps every band spans 2^(l-1) octaves
    rb = rho_lower_bound(10)
    for b in rb.bands[:-1]:
        expect = 2 * math.log(2) * 2 ** (b["l"] - 1) / float(b["lambda_ub"])
        assert float(b["contribution"]) == pytest.approx(expect, rel=1e-12)


def test_conductance_closed_form_on_dense(g3):
    rb = rho_lower_bound(3)
    for band in rb.bands:
        l = band["l"]
        cls = start_classes(3, l)
        copy = np.concatenate([cls["C0"], cls.get("C1", np.array([], dtype=int))])
        phi = conductance(g3, copy)
        assert phi == pytest.approx(float(band["conductance"]), rel=1e-12)
        assert lambda0(g3, copy) <= phi + 1e-10


def test_ratio_trend():
    ratios = [float(rho_lower_bound(k).value) / float(tau_construction(k).tau) for k in range(3, 13)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_simulation_deterministic():
    a = simulate_walk(3, 2, 16, seed=4, replicas=2000)
    b = simulate_walk(3, 2, 16, seed=4, replicas=2000)
    assert a.to_json() == b.to_json()
    c = simulate_walk(3, 2, 16, seed=5, replicas=2000)
    assert a.survival != c.survival or a.final_classes != c.final_classes


def test_simulation_final_classes_match_exact_law():
    k, l, steps, reps = 4, 2, 6, 60000
    stats = simulate_walk(k, l, steps, seed=9, replicas=reps)
    chain = lumped_chain(k, l)
    m = len(chain.labels)
    row = [Fraction(int(i == 0)) for i in range(m)]
    for _ in range(steps):
        row = [sum(row[i] * chain.matrix[i][j] for i in range(m)) for j in range(m)]
    for lab, p in zip(chain.labels, row):
        p = float(p)
        emp = stats.final_classes[lab] / reps
        assert abs(emp - p) <= 4 * math.sqrt(p * (1 - p) / reps) + 1e-12


def test_simulation_poisson_mode():
    s = simulate_walk(3, 2, seed=1, replicas=40000, time=10.0)
    assert all(s.within(3).values())
    with pytest.raises(ValueError):
        simulate_walk(3, 2, 5, time=1.0)
    with pytest.raises(ValueError):
        simulate_walk(3, 2, 0)


def test_simulation_top_piece():
    s = simulate_walk(3, 3, 16, seed=2, replicas=20000)
    assert s.exact["tau123"] == 0 and s.survival["tau123"] == 0
    assert s.exact["tau123"] <= s.tail_bounds["tau123"] <= 2.0**-16
