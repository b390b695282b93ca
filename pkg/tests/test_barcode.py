import math
import random

import pytest

from persimod.barcode import (Bar, Barcode, Matching, bar_match_cost, beta_k,
                              bottleneck_bruteforce, bottleneck_distance,
                              boundary_depth, ell, infinite_endpoint_spectrum,
                              interval_interleaving_distance, is_delta_matching,
                              matching_lemma, matching_lemma_bruteforce,
                              multiplicity_function, multiplicity_grid_oracle,
                              mu_odd, nu, optimal_matching, persistent_betti,
                              shift_barcode)

INF = math.inf


def random_barcode(rng, max_bars=4, rays=True):
    bars = []
    for _ in range(rng.randint(0, max_bars)):
        birth = round(rng.uniform(0, 3), 3)
        death = INF if (rays and rng.random() < 0.25) else round(rng.uniform(3.001, 6), 3)
        bars.append(Bar(birth, death))
    return Barcode(bars)


def test_bar_validation():
    with pytest.raises(ValueError):
        Bar(2, 1)
    with pytest.raises(ValueError):
        Bar(1, 1)
    assert Bar(-INF, INF).length == INF


def test_bar_match_cost():
    assert bar_match_cost(Bar(1, 2), Bar(1, 2)) == 0
    assert bar_match_cost(Bar(1, 2), Bar(2, 3)) == 1
    assert bar_match_cost(Bar(0.5, INF), Bar(2.0, INF)) == 1.5
    assert bar_match_cost(Bar(1, 2), Bar(1, INF)) == INF
    assert bar_match_cost(Bar(-INF, 0), Bar(-INF, 2)) == 2


def test_is_delta_matching():
    b = Barcode([Bar(0, 1), Bar(0, 4)])
    c = Barcode([Bar(0.5, 4.5)])
    # empty matching works once every long bar is discardable
    assert is_delta_matching(b, c, Matching([]), 2.26)
    assert not is_delta_matching(b, c, Matching([]), 1.0)
    assert is_delta_matching(b, c, Matching([(1, 0)]), 0.5)
    assert not is_delta_matching(b, c, Matching([(0, 0)]), 0.5)
    with pytest.raises(IndexError):
        is_delta_matching(b, c, Matching([(5, 0)]), 1.0)


def test_matching_partial_bijection():
    with pytest.raises(ValueError):
        Matching([(0, 0), (0, 1)])


def test_bottleneck_interval_table():
    assert bottleneck_distance(Barcode([Bar(1, 2)]), Barcode([Bar(1, 3)])) == 1
    assert bottleneck_distance(Barcode([Bar(1, 2)]), Barcode([Bar(2, 3)])) == 0.5
    assert bottleneck_distance(Barcode([Bar(1, 4)]), Barcode([Bar(2, 5)])) == 1
    assert bottleneck_distance(Barcode([]), Barcode([])) == 0


def test_bottleneck_infinite_ray_mismatch():
    assert bottleneck_distance(Barcode([Bar(0, INF)]), Barcode([])) == INF
    assert bottleneck_distance(Barcode([Bar(0, INF)]),
                               Barcode([Bar(0, INF), Bar(1, INF)])) == INF
    assert bottleneck_distance(Barcode([Bar(-INF, 3)]), Barcode([Bar(0, 3)])) == INF


def test_bottleneck_matches_bruteforce():
    rng = random.Random(11)
    for _ in range(120):
        b = random_barcode(rng, max_bars=4)
        c = random_barcode(rng, max_bars=4)
        fast = bottleneck_distance(b, c)
        slow = bottleneck_bruteforce(b, c)
        assert fast == slow or abs(fast - slow) < 1e-12, (b.bars, c.bars)


def test_bottleneck_symmetry_and_triangle():
    rng = random.Random(5)
    for _ in range(60):
        a, b, c = (random_barcode(rng, max_bars=3, rays=False) for _ in range(3))
        dab = bottleneck_distance(a, b)
        assert dab == bottleneck_distance(b, a)
        assert dab <= bottleneck_distance(a, c) + bottleneck_distance(c, b) + 1e-12


def test_bottleneck_nondegeneracy():
    rng = random.Random(6)
    for _ in range(60):
        a = random_barcode(rng)
        b = random_barcode(rng)
        d = bottleneck_distance(a, b)
        if a == b:
            assert d == 0
        elif d == 0:
            assert a == b
    a = Barcode([Bar(0, 1), Bar(0, 1)])
    assert bottleneck_distance(a, a) == 0
    assert bottleneck_distance(a, Barcode([Bar(0, 1)])) > 0


def test_bottleneck_per_degree_pools():
    b = Barcode([Bar(0, 2, 0), Bar(0, 2, 1)])
    c = Barcode([Bar(0, 2, 0), Bar(1, 3, 1)])
    assert bottleneck_distance(b, c) == 1.0
    # untagged pooling can do better by crossing degrees
    assert bottleneck_distance(b.untagged(), c.untagged()) == 1.0
    b2 = Barcode([Bar(0, 2, 0), Bar(5, 7, 1)])
    c2 = Barcode([Bar(5, 7, 0), Bar(0, 2, 1)])
    assert bottleneck_distance(b2.untagged(), c2.untagged()) == 0
    assert bottleneck_distance(b2, c2) > 0


def test_optimal_matching_certifies():
    rng = random.Random(7)
    for _ in range(50):
        b = random_barcode(rng)
        c = random_barcode(rng)
        if bottleneck_distance(b, c) == INF:
            continue
        d, m = optimal_matching(b, c)
        assert is_delta_matching(b, c, m, d)


def test_matching_lemma():
    assert matching_lemma([0], [5]) == 5
    assert matching_lemma([0, 1], [0.5, 3]) == 2
    assert matching_lemma([1, 2, 3], [1, 2, 3]) == 0
    with pytest.raises(ValueError):
        matching_lemma([1], [1, 2])
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 6)
        b = [rng.uniform(-4, 4) for _ in range(n)]
        c = [rng.uniform(-4, 4) for _ in range(n)]
        assert matching_lemma(b, c) == matching_lemma_bruteforce(b, c)


def test_interval_interleaving_distance():
    assert interval_interleaving_distance(Bar(1, 2), Bar(1, 3)) == 1
    assert interval_interleaving_distance(Bar(1, 2), Bar(2, 3)) == 0.5
    assert interval_interleaving_distance(Bar(0, 4), Bar(0, 4)) == 0
    with pytest.raises(ValueError):
        interval_interleaving_distance(Bar(0, INF), Bar(0, 1))


def test_shift_barcode():
    b = Barcode([Bar(0, 1), Bar(2, INF), Bar(-INF, 5)])
    assert shift_barcode(b, 0) == b
    shifted = shift_barcode(b, 2)
    assert shifted == Barcode([Bar(2, 3), Bar(4, INF), Bar(-INF, 7)])


def test_boundary_depth_and_beta_k():
    heart = Barcode([Bar(0, INF, 0), Bar(1, 2, 1), Bar(3, INF, 2)])
    assert boundary_depth(heart) == 1
    assert boundary_depth(Barcode([Bar(0, INF), Bar(1, INF)])) == 0
    b = Barcode([Bar(0, 5), Bar(0, 3), Bar(0, INF)])
    assert beta_k(b, 1) == 5
    assert beta_k(b, 2) == 3
    assert beta_k(b, 3) == 0
    with pytest.raises(ValueError):
        beta_k(b, 0)


def test_ell():
    assert ell(Barcode([Bar(0, INF)]), 0, 1) == 1
    assert ell(Barcode([]), 0, 1) == 0
    assert ell(Barcode([Bar(0, 2), Bar(5, 6)]), 1, 5.5) == 1.5
    with pytest.raises(ValueError):
        ell(Barcode([]), 1, 0)


def test_nu():
    b = Barcode([Bar(0, 1), Bar(0, 1), Bar(0, INF)])
    assert nu(b, 0) == 2
    assert nu(b, 0.999) == 2
    assert nu(b, 1) == 0
    with pytest.raises(ValueError):
        nu(b, -1)


def test_nu_ell_inequality():
    rng = random.Random(9)
    for _ in range(50):
        b = random_barcode(rng, rays=False)
        if not b.finite_bars():
            continue
        lo = min(bar.birth for bar in b.finite_bars())
        hi = max(bar.death for bar in b.finite_bars())
        for c in (0.1, 0.5, 1.0, 2.0):
            assert c * nu(b, c) <= ell(b, lo, hi) + 1e-12


def test_persistent_betti():
    b = Barcode([Bar(0, 3), Bar(1, 2)])
    assert persistent_betti(b, Bar(0, 3)) == 1
    assert persistent_betti(b, Bar(1, 2)) == 2
    assert persistent_betti(b, Bar(4, 5)) == 0
    with pytest.raises(ValueError):
        persistent_betti(b, Bar(0, INF))


def test_infinite_endpoint_spectrum():
    assert infinite_endpoint_spectrum(Barcode([])) == []
    b = Barcode([Bar(0, INF), Bar(0, INF), Bar(3, INF), Bar(1, 2)])
    assert infinite_endpoint_spectrum(b) == [0, 0, 3]


def test_infinite_endpoint_lower_bound():
    rng = random.Random(10)
    for _ in range(40):
        b = random_barcode(rng)
        c = random_barcode(rng)
        sb, sc = infinite_endpoint_spectrum(b), infinite_endpoint_spectrum(c)
        if len(sb) != len(sc):
            continue
        d = bottleneck_distance(b, c)
        assert matching_lemma(sb, sc) <= d + 1e-12


def test_multiplicity_function_values():
    # two bars sharing a birth: the big window caps at its quarter length
    assert multiplicity_function(Barcode([Bar(0, 1), Bar(0, 3)]), 1) == 0.75
    assert multiplicity_function(Barcode([Bar(2, 5)]), 1) == 0.75
    assert multiplicity_function(Barcode([Bar(0, 4), Bar(1.9, 2.1)]), 1) == 0.95
    assert multiplicity_function(Barcode([Bar(0, INF), Bar(1, INF)]), 1) == 0.5
    assert multiplicity_function(Barcode([]), 1) == 0
    assert multiplicity_function(Barcode([Bar(0, 1)]), 2) == 0
    assert multiplicity_function(Barcode([Bar(-INF, INF)]), 1) == INF
    with pytest.raises(ValueError):
        multiplicity_function(Barcode([]), 0)


def test_mu_odd():
    assert mu_odd(Barcode([Bar(0, 1), Bar(0, 1)])) == 0
    assert mu_odd(Barcode([Bar(0, 4)])) == 1.0
    assert mu_odd(Barcode([])) == 0


def test_multiplicity_grid_oracle_agreement():
    rng = random.Random(13)
    for _ in range(25):
        b = random_barcode(rng, max_bars=5, rays=False)
        if not b.bars:
            continue
        span = max(b.finite_endpoints()) - min(b.finite_endpoints())
        for k in (1, 2):
            exact = multiplicity_function(b, k)
            approx = multiplicity_grid_oracle(b, k)
            assert abs(exact - approx) <= 2e-3 * max(span, 1.0)


def test_mu_with_rays_against_oracle():
    rng = random.Random(14)
    for _ in range(15):
        b = random_barcode(rng, max_bars=4, rays=True)
        if not b.finite_endpoints():
            continue
        span = max(b.finite_endpoints()) - min(b.finite_endpoints())
        if span == 0:
            continue
        for k in (1, 2):
            exact = multiplicity_function(b, k)
            approx = multiplicity_grid_oracle(b, k)
            if exact == INF:
                continue
            assert abs(exact - approx) <= 2e-3 * max(span, 1.0), (b.bars, k)


def test_identity_matching_at_zero():
    b = Barcode([Bar(0, 2), Bar(1, INF)])
    ident = Matching([(0, 0), (1, 1)])
    assert is_delta_matching(b, b, ident, 0.0)


def test_persistent_betti_hexagon_window():
    import numpy as np
    from persimod.complexes import (FiniteMetricSpace, regular_polygon_points,
                                    rips_barcode)
    bc = rips_barcode(FiniteMetricSpace.from_points(regular_polygon_points(6, 1.0)), 3)
    deg1 = bc.restrict_degree(1)
    assert persistent_betti(deg1, Bar(1.2, 1.5)) == 1
    assert persistent_betti(bc.restrict_degree(0), Bar(1.2, 1.5)) == 1  # the ray


def test_bottleneck_bruteforce_with_proper_bars():
    rng = random.Random(23)
    for _ in range(60):
        def proper_barcode():
            bars = []
            for _ in range(rng.randint(0, 3)):
                birth = rng.choice([-INF, round(rng.uniform(0, 2), 2)])
                death = rng.choice([INF, round(rng.uniform(2.1, 4), 2)])
                bars.append(Bar(birth, death))
            return Barcode(bars)
        b, c = proper_barcode(), proper_barcode()
        fast = bottleneck_distance(b, c)
        slow = bottleneck_bruteforce(b, c)
        assert fast == slow or abs(fast - slow) < 1e-12, (b.bars, c.bars)


def test_bottleneck_tagged_equals_per_degree_bruteforce():
    rng = random.Random(29)
    for _ in range(40):
        def tagged():
            return Barcode([Bar(round(rng.uniform(0, 2), 2),
                                round(rng.uniform(2.1, 4), 2),
                                rng.choice([0, 1]))
                            for _ in range(rng.randint(1, 3))])
        b, c = tagged(), tagged()
        per_degree = max(
            bottleneck_bruteforce(b.restrict_degree(d), c.restrict_degree(d))
            for d in (0, 1))
        assert bottleneck_distance(b, c) == per_degree


def test_shift_is_close_in_bottleneck():
    rng = random.Random(31)
    for _ in range(30):
        b = random_barcode(rng)
        delta = round(rng.uniform(0, 1), 3)
        assert bottleneck_distance(b, shift_barcode(b, delta)) <= delta + 1e-12
