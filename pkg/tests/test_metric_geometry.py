import itertools
import math
import random

import numpy as np
import pytest

from persimod.barcode import bottleneck_distance
from persimod.complexes import FiniteMetricSpace, rips_barcode
from persimod.metric_geometry import (SizeGuardError, distortion,
                                      gh_bruteforce, gh_equivariant)


def subset_enumeration_gh(x, y):
    """Reference: minimum distortion over all surjective correspondences."""
    n, m = x.n, y.n
    cells = list(itertools.product(range(n), range(m)))
    best = math.inf
    for mask in range(1, 1 << (n * m)):
        pairs = [cells[t] for t in range(n * m) if mask >> t & 1]
        if {i for i, _ in pairs} != set(range(n)) or \
                {j for _, j in pairs} != set(range(m)):
            continue
        worst = 0.0
        for (i, j), (i2, j2) in itertools.combinations_with_replacement(pairs, 2):
            worst = max(worst, abs(x.dist[i, i2] - y.dist[j, j2]))
        best = min(best, worst)
    return best / 2


def test_distortion_examples():
    x = FiniteMetricSpace.from_points([[0, 0], [1, 0], [0, 1]])
    assert distortion([(i, i) for i in range(3)], x, x) == 0
    # graph of an isometry (relabelling) has zero distortion
    y = FiniteMetricSpace.from_points([[1, 0], [0, 1], [0, 0]])
    assert distortion([(0, 2), (1, 0), (2, 1)], x, y) == 0
    with pytest.raises(ValueError):
        distortion([(0, 0)], x, x)


def test_distortion_two_point_spaces():
    x = FiniteMetricSpace(np.array([[0, 2.0], [2.0, 0]]))
    y = FiniteMetricSpace(np.array([[0, 5.0], [5.0, 0]]))
    full = list(itertools.product(range(2), range(2)))
    assert distortion(full, x, y) == 5.0   # collapsed pairs see both gaps
    assert distortion([(0, 0), (1, 1)], x, y) == 3.0


def test_gh_identity_and_examples():
    x = FiniteMetricSpace.from_points([[0, 0], [1, 0], [0, 1]])
    assert gh_bruteforce(x, x) == 0
    one = FiniteMetricSpace(np.zeros((1, 1)))
    two = FiniteMetricSpace(np.array([[0, 3.0], [3.0, 0]]))
    assert gh_bruteforce(one, two) == 1.5
    t1 = FiniteMetricSpace(np.array([[0, 2.0], [2.0, 0]]))
    t2 = FiniteMetricSpace(np.array([[0, 5.0], [5.0, 0]]))
    assert gh_bruteforce(t1, t2) == 1.5


def test_gh_matches_subset_enumeration():
    rng = random.Random(1)
    for _ in range(6):
        a = FiniteMetricSpace.from_points(
            [[rng.uniform(0, 2), rng.uniform(0, 2)] for _ in range(rng.choice([2, 3]))])
        b = FiniteMetricSpace.from_points(
            [[rng.uniform(0, 2), rng.uniform(0, 2)] for _ in range(3)])
        assert abs(gh_bruteforce(a, b) - subset_enumeration_gh(a, b)) < 1e-12


def test_gh_size_guard():
    big = FiniteMetricSpace(np.zeros((6, 6)))
    with pytest.raises(SizeGuardError):
        gh_bruteforce(big, big)
    small = FiniteMetricSpace(np.zeros((3, 3)))
    with pytest.raises(SizeGuardError):
        gh_bruteforce(small, small, size_guard=8)   # configurable downwards
    assert gh_bruteforce(small, small) == 0


def test_gh_pseudometric_on_tiny_spaces():
    rng = random.Random(2)
    spaces = [FiniteMetricSpace.from_points(
        [[rng.uniform(0, 1), rng.uniform(0, 1)] for _ in range(3)])
        for _ in range(5)]
    for a, b in itertools.combinations(spaces, 2):
        assert abs(gh_bruteforce(a, b) - gh_bruteforce(b, a)) < 1e-12
    for a, b, c in itertools.combinations(spaces, 3):
        assert gh_bruteforce(a, c) <= gh_bruteforce(a, b) + gh_bruteforce(b, c) + 1e-12


def test_gh_chain_lower_bound():
    rng = random.Random(3)
    for _ in range(15):
        a = FiniteMetricSpace.from_points(
            [[rng.uniform(0, 2), rng.uniform(0, 2)] for _ in range(4)])
        b = FiniteMetricSpace.from_points(
            [[rng.uniform(0, 2), rng.uniform(0, 2)] for _ in range(4)])
        dgh = gh_bruteforce(a, b)
        dbot = bottleneck_distance(rips_barcode(a, 2), rips_barcode(b, 2))
        assert dgh >= dbot / 2 - 1e-9


def test_gh_equivariant():
    sq = FiniteMetricSpace.from_points([[0, 0], [1, 0], [1, 1], [0, 1]])
    rect = FiniteMetricSpace.from_points([[0, 0], [2, 0], [2, 1], [0, 1]])
    ident = (0, 1, 2, 3)
    swap = (2, 3, 0, 1)   # antipodal involution of the 4-cycle
    plain = gh_bruteforce(sq, rect)
    assert abs(gh_equivariant(sq, ident, rect, ident) - plain) < 1e-12
    assert gh_equivariant(sq, swap, rect, swap) >= plain - 1e-12
    assert gh_equivariant(sq, swap, sq, swap) == 0
    with pytest.raises(ValueError):
        gh_equivariant(sq, (1, 2, 3, 0), rect, ident)  # order 4, not an involution
    stretched = FiniteMetricSpace.from_points([[0, 0], [5, 0], [1, 1], [0, 1]])
    with pytest.raises(ValueError):
        gh_equivariant(stretched, swap, rect, ident)   # not an isometry


def test_equivariant_gh_dominates_representation_bound():
    # rectangle with the diagonal swap vs the unit square whose involution
    # comes from a quarter rotation: the eigenspace obstruction bounds the
    # equivariant distance from below through the interleaving chain
    from persimod.reproduce import rectangle_pmi
    from persimod.representations import z4_obstruction_bound
    a = 3.0
    rect = FiniteMetricSpace.from_points([[0, 0], [a, 0], [a, 1], [0, 1]])
    square = FiniteMetricSpace.from_points([[0, 0], [1, 0], [1, 1], [0, 1]])
    swap = (2, 3, 0, 1)          # exchange across the diagonals
    rot2 = (2, 3, 0, 1)          # square of the quarter rotation (0123)
    d = gh_equivariant(rect, swap, square, rot2)
    bound = z4_obstruction_bound(rectangle_pmi(a)) / 2
    assert d >= bound - 1e-9
