import math
import random

import numpy as np
import pytest

import persimod.field as ff
import persimod.module_rep as MR
from persimod.barcode import Bar, Barcode, multiplicity_grid_oracle
from persimod.complexes import FiniteMetricSpace, rips_complex
from persimod.filtered_complex import Cell, FilteredComplex
from persimod.module_rep import ModuleRep, barcode, from_barcode
from persimod.representations import (EquivarianceError, ModuleRepWithAction,
                                      action_from_cell_map,
                                      eigenspace_submodule,
                                      even_multiplicity_check,
                                      simplicial_action_map,
                                      verify_representation,
                                      z4_obstruction_bound)
from persimod.reproduce import rectangle_pmi

INF = math.inf


def doubled_module_with_rotation(bars, p=5):
    """Module on two copies of each bar with the order-4 block action."""
    doubled = Barcode(sorted(bars) * 2)
    v = from_barcode(doubled, p)
    order = sorted(doubled.bars)
    _, slots = MR._module_from_bars(order, v.spectrum, p)
    act = [ff.zeros(d, d) for d in v.dims]
    for first in range(0, len(order), 2):
        for i in range(1, len(v.dims) + 1):
            if i in slots[first]:
                a0, a1 = slots[first][i], slots[first + 1][i]
                act[i - 1][a0, a1] = p - 1
                act[i - 1][a1, a0] = 1
    return v, act


def test_rejects_characteristic_two():
    v = from_barcode(Barcode([Bar(0, 1)]), p=2)
    with pytest.raises(ValueError):
        ModuleRepWithAction(v, 2, [ff.eye(d) for d in v.dims])


def test_verify_trivial_and_sign_actions():
    v = from_barcode(Barcode([Bar(0, 1), Bar(0, 3)]), p=5)
    assert verify_representation(ModuleRepWithAction(v, 2, [ff.eye(d) for d in v.dims]))
    neg = [np.mod(4 * ff.eye(d), 5) for d in v.dims]
    assert verify_representation(ModuleRepWithAction(v, 2, neg))


def test_verify_rejects_noncommuting():
    v = from_barcode(Barcode([Bar(0, 2), Bar(1, 2)]), p=5)
    act = [ff.eye(d) for d in v.dims]
    # twist the 2-dimensional slice so the square with the map fails
    two = next(i for i, d in enumerate(v.dims) if d == 2)
    act[two] = ff.asfield([[0, 1], [1, 0]], 5)
    assert not verify_representation(ModuleRepWithAction(v, 2, act))


def test_verify_rejects_wrong_order():
    v = from_barcode(Barcode([Bar(0, 1)]), p=5)
    act = [np.mod(2 * ff.eye(d), 5) for d in v.dims]   # 2 has order 4 in F_5
    assert not verify_representation(ModuleRepWithAction(v, 2, act))
    assert verify_representation(ModuleRepWithAction(v, 4, act))


def test_eigenspace_trivial_action():
    v = from_barcode(Barcode([Bar(0, 1), Bar(0, 3)]), p=5)
    triv = ModuleRepWithAction(v, 2, [ff.eye(d) for d in v.dims])
    assert barcode(eigenspace_submodule(triv, 1)) == Barcode([Bar(0, 1), Bar(0, 3)])
    assert barcode(eigenspace_submodule(triv, 4)) == Barcode([])
    with pytest.raises(ValueError):
        eigenspace_submodule(triv, 2)   # not an order-2 root of unity


def test_eigenspace_dimension_partition():
    rng = random.Random(5)
    for _ in range(20):
        bars = [Bar(round(rng.uniform(0, 2), 2), round(rng.uniform(2.1, 4), 2))
                for _ in range(rng.randint(1, 3))]
        v, act = doubled_module_with_rotation(bars)
        r = ModuleRepWithAction(v, 4, act)
        assert verify_representation(r)
        sq = ModuleRepWithAction(v, 2, [ff.matmul(a, a, 5) for a in act])
        plus = eigenspace_submodule(sq, 1)
        minus = eigenspace_submodule(sq, 4)
        for i, d in enumerate(v.dims):
            assert plus.dims[i] + minus.dims[i] == d


def test_rectangle_pmi_eigenspace():
    r3 = rectangle_pmi(3.0)
    assert verify_representation(r3)
    eig = barcode(eigenspace_submodule(r3, 4))
    assert eig == Barcode([Bar(0, 1), Bar(0, 3)])


def test_rectangle_z4_bound_matches_mu_definition():
    # The multiplicity-function definition values this barcode at 3/4:
    # the window (0,3] keeps single coverage up to the quarter-length
    # cap.  The grid oracle confirms the computed value (see README).
    r3 = rectangle_pmi(3.0)
    bound = z4_obstruction_bound(r3)
    assert bound == 0.75
    eig = barcode(eigenspace_submodule(r3, 4))
    assert abs(multiplicity_grid_oracle(eig, 1) - bound) <= 2e-3 * 3


def test_square_z4_bound_vanishes():
    assert z4_obstruction_bound(rectangle_pmi(1.0)) == 0.0


def test_teeth_sphere():
    teeth = FilteredComplex(
        [Cell("x", 0, 1.0), Cell("y", 0, 1.0), Cell("s", 1, 2.0), Cell("N", 2, 4.0)],
        {"x": {}, "y": {}, "s": {"x": 1, "y": 4}, "N": {}}, p=5)
    cmap = {"x": ("y", 1), "y": ("x", 1), "s": ("s", 4), "N": ("N", 1)}
    r = action_from_cell_map(teeth, cmap, degree=0, order=2)
    assert verify_representation(r)
    eig = barcode(eigenspace_submodule(r, 4))
    assert eig == Barcode([Bar(1, 2)])
    assert z4_obstruction_bound(r) == (2.0 - 1.0) / 4


def test_action_from_cell_map_rejects_non_chain_maps():
    teeth = FilteredComplex(
        [Cell("x", 0, 1.0), Cell("y", 0, 1.0), Cell("s", 1, 2.0)],
        {"x": {}, "y": {}, "s": {"x": 1, "y": 4}}, p=5)
    bad = {"x": ("y", 1), "y": ("x", 1), "s": ("s", 1)}  # missing the sign
    with pytest.raises(EquivarianceError):
        action_from_cell_map(teeth, bad, degree=0, order=2)


def test_simplicial_action_signs():
    pts = [[0.0, 0.0], [3.0, 0.0], [3.0, 1.0], [0.0, 1.0]]
    c = rips_complex(FiniteMetricSpace.from_points(pts), max_dim=1, p=5)
    cmap = simplicial_action_map(c, {0: 2, 2: 0, 1: 3, 3: 1})
    # the long diagonal (0, 2) maps to itself with a flip
    assert cmap[(0, 2)] == ((0, 2), 4)
    assert cmap[(0,)] == ((2,), 1)


def test_even_multiplicity_check():
    assert even_multiplicity_check(Barcode([Bar(0, 1), Bar(0, 1)]))
    assert not even_multiplicity_check(Barcode([Bar(0, 2), Bar(0, 1)]))
    assert even_multiplicity_check(Barcode([]))
    assert even_multiplicity_check(Barcode([Bar(0, INF), Bar(0, INF)]))


def test_z4_square_has_even_eigenspace():
    rng = random.Random(7)
    for _ in range(15):
        bars = [Bar(round(rng.uniform(0, 2), 2), round(rng.uniform(2.1, 4), 2))
                for _ in range(rng.randint(1, 3))]
        v, act = doubled_module_with_rotation(bars)
        sq = ModuleRepWithAction(v, 2, [ff.matmul(a, a, 5) for a in act])
        eig = barcode(eigenspace_submodule(sq, 4))
        assert even_multiplicity_check(eig)
        assert z4_obstruction_bound(sq) == 0.0


def test_z4_bound_conjugation_invariant():
    r3 = rectangle_pmi(3.0)
    base = z4_obstruction_bound(r3)
    rng = random.Random(11)
    for _ in range(5):
        # conjugate by a random module automorphism: diagonal unit scalars
        # plus a legal nilpotent interval morphism added to the identity
        v = r3.rep
        scal = rng.choice([1, 2, 3, 4])
        conj = [np.mod(scal * ff.eye(d), 5) for d in v.dims]
        inv = [np.mod(ff.inv_mod(scal, 5) * ff.eye(d), 5) for d in v.dims]
        action = [ff.matmul(a, ff.matmul(rho, b, 5), 5)
                  for a, rho, b in zip(conj, r3.action, inv)]
        assert z4_obstruction_bound(ModuleRepWithAction(v, 2, action)) == base


def test_z4_bound_requires_involution():
    v = from_barcode(Barcode([Bar(0, 1)]), p=5)
    act = [np.mod(2 * ff.eye(d), 5) for d in v.dims]
    with pytest.raises(ValueError):
        z4_obstruction_bound(ModuleRepWithAction(v, 4, act))


def test_action_spec_parsing():
    from persimod.representations import action_from_spec, parse_action_spec
    teeth = FilteredComplex(
        [Cell("x", 0, 1.0), Cell("y", 0, 1.0), Cell("s", 1, 2.0), Cell("N", 2, 4.0)],
        {"x": {}, "y": {}, "s": {"x": 1, "y": 4}, "N": {}}, p=5)
    spec = {"type": "cell-map", "order": 2,
            "map": {"x": "y", "y": "x", "s": ["s", 4], "N": "N"}}
    r = action_from_spec(spec, c=teeth, degree=0)
    assert verify_representation(r)
    assert z4_obstruction_bound(r) == 0.25
    v = from_barcode(Barcode([Bar(0, 1)]), p=5)
    mats = {"type": "slice-matrices", "order": 2,
            "matrices": [[], [4], []]}
    r2 = action_from_spec(mats, rep=v)
    assert verify_representation(r2)
    with pytest.raises(ValueError):
        parse_action_spec({"type": "cell-map"})
    with pytest.raises(ValueError):
        parse_action_spec({"type": "nope", "order": 2})
