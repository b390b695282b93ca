import itertools
import math

import numpy as np
import pytest

from persimod.barcode import Bar
from persimod.symplectic import (DegeneratePathError, EllipsoidSpec,
                                 cz_rotation_index, ellipsoid_degree0_bar,
                                 ellipsoid_sh_degree, ellipsoid_sh_degree_via_cz,
                                 normalized_index, sbm_lower_bound)

INF = math.inf


def test_cz_rotation_values():
    assert cz_rotation_index(0.5) == 1
    assert cz_rotation_index(1.5) == 3
    assert cz_rotation_index(-0.5) == -1
    assert cz_rotation_index(-1.5) == -3
    assert cz_rotation_index(2.25) == 5
    with pytest.raises(DegeneratePathError):
        cz_rotation_index(2.0)


def test_normalized_index():
    assert normalized_index(1, 1) == 0
    assert normalized_index(3, 2) == -1


def test_normalized_index_equals_morse_index_for_small_quadratics():
    # small diagonal quadratic: each coordinate contributes its rotation
    # index; the normalisation recovers the number of negative squares
    for signs in itertools.product([1, -1], repeat=3):
        alphas = [0.25 * s for s in signs]
        mu = sum(cz_rotation_index(al) for al in alphas)
        morse = 2 * sum(1 for s in signs if s < 0)
        assert normalized_index(mu, 3) == morse


def test_ellipsoid_degree_table():
    assert ellipsoid_sh_degree(0.5, 1, 1) == 0
    assert ellipsoid_sh_degree(1.5, 1, 1) == -2
    assert ellipsoid_sh_degree(2.5, 1, 1) == -4
    assert ellipsoid_sh_degree(0.5, 2, 8) == 0
    assert ellipsoid_sh_degree(1.5, 2, 8) == -2
    assert ellipsoid_sh_degree(2.5, 2, 8) == -4
    assert ellipsoid_sh_degree(8.5, 2, 8) == -2 * 8 - 2 * 1  # second term kicks in


def test_ellipsoid_degree_consistency_with_rotation_indices():
    for n, N in [(1, 1), (2, 8), (3, 4), (2, 2)]:
        for a in np.arange(0.25, 10, 0.4):
            a = float(a)
            if a == int(a) or (a / N) == int(a / N):
                continue
            assert ellipsoid_sh_degree(a, n, N) == ellipsoid_sh_degree_via_cz(a, n, N)


def test_ellipsoid_degree_monotone_in_window():
    for n, N in [(1, 1), (2, 8)]:
        degs = [ellipsoid_sh_degree(float(a), n, N)
                for a in np.arange(0.3, 12, 0.17)]
        assert all(x >= y for x, y in zip(degs, degs[1:]))


def test_ellipsoid_degree_guards():
    with pytest.raises(DegeneratePathError):
        ellipsoid_sh_degree(2.0, 1, 1)
    with pytest.raises(DegeneratePathError):
        ellipsoid_sh_degree(16.0, 2, 8)
    with pytest.raises(ValueError):
        ellipsoid_sh_degree(-1.0, 1, 1)


def test_degree0_bars():
    assert ellipsoid_degree0_bar(EllipsoidSpec(1, 8, 2)) == Bar(-INF, 0.0, 0)
    assert ellipsoid_degree0_bar(EllipsoidSpec(2, 4, 2)).death == pytest.approx(math.log(2))
    assert ellipsoid_degree0_bar(EllipsoidSpec(math.e)).death == pytest.approx(1.0)


def test_sbm_lower_bound_values():
    assert sbm_lower_bound(EllipsoidSpec(1, 8, 2),
                           EllipsoidSpec(2, 4, 2)) == pytest.approx(math.log(2), abs=1e-12)
    e = EllipsoidSpec(3, 2, 2)
    assert sbm_lower_bound(e, e) == 0
    ball = EllipsoidSpec(7.0, 1, 3)
    egg = EllipsoidSpec(2.0, 5, 3)
    assert sbm_lower_bound(egg, ball) == pytest.approx(abs(math.log(2) - math.log(7)))
    with pytest.raises(ValueError):
        sbm_lower_bound(EllipsoidSpec(1, 1, 1), EllipsoidSpec(1, 1, 2))


def test_sbm_pseudometric():
    specs = [EllipsoidSpec(r, 2, 2) for r in (0.5, 1.0, 3.0, 9.0)]
    for a, b in itertools.combinations(specs, 2):
        assert sbm_lower_bound(a, b) == sbm_lower_bound(b, a)
    for a, b, c in itertools.combinations(specs, 3):
        assert sbm_lower_bound(a, c) <= sbm_lower_bound(a, b) + sbm_lower_bound(b, c) + 1e-12


def test_ellipsoid_spec_validation():
    with pytest.raises(ValueError):
        EllipsoidSpec(0.0)
    with pytest.raises(ValueError):
        EllipsoidSpec(1.0, 0.5)
    with pytest.raises(ValueError):
        EllipsoidSpec(1.0, 1.0, 0)
