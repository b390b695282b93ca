"""
Cyclic-group actions on persistence modules: eigenspace sub-barcodes,
the complex-structure parity obstruction and the Z4 lower bound.

Eigenspace arguments need -1 != 1 and, for order-4 checks, a square root
of -1, so representations live over an odd characteristic; F_5 works
(2^2 = 4 = -1) and is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import field as ff
from .barcode import Bar, Barcode, mu_odd
from .filtered_complex import FilteredComplex, homology_module
from .module_rep import ModuleRep, barcode

DEFAULT_REP_P = 5


class EquivarianceError(ValueError):
    """Action fails to commute with the transition maps."""


@dataclass
class ModuleRepWithAction:
    """A persistence module with a per-slice action of Z_g."""

    rep: ModuleRep
    order: int
    action: list[np.ndarray]

    def __post_init__(self):
        if self.rep.p == 2:
            raise ValueError("representations need odd characteristic "
                             "(eigenvalue -1 must differ from 1)")
        if self.order < 1:
            raise ValueError("group order must be >= 1")
        if len(self.action) != len(self.rep.dims):
            raise ValueError("need one action matrix per interval")
        for i, rho in enumerate(self.action):
            if rho.shape != (self.rep.dims[i], self.rep.dims[i]):
                raise ValueError(f"action slice {i} has wrong shape")

    @property
    def p(self) -> int:
        return self.rep.p


def verify_representation(r: ModuleRepWithAction) -> bool:
    """rho^order = 1 on every slice and rho commutes with the maps."""
    p = r.p
    for i, rho in enumerate(r.action):
        power = ff.eye(rho.shape[0])
        for _ in range(r.order):
            power = ff.matmul(rho, power, p)
        if not np.array_equal(power, ff.eye(rho.shape[0])):
            return False
    for i in range(len(r.rep.spectrum)):
        left = ff.matmul(r.action[i + 1], r.rep.maps[i], p)
        right = ff.matmul(r.rep.maps[i], r.action[i], p)
        if not np.array_equal(left, right):
            return False
    return True


def eigenspace_submodule(r: ModuleRepWithAction, xi: int) -> ModuleRep:
    """Subrepresentation on ker(rho - xi) slice by slice; well-defined
    because the action commutes with the transition maps."""
    p = r.p
    if pow(int(xi) % p, r.order, p) != 1:
        raise ValueError(f"{xi} is not an order-{r.order} root of unity mod {p}")
    bases = [ff.kernel_basis(np.mod(rho - int(xi) % p * ff.eye(rho.shape[0]), p), p)
             for rho in r.action]
    dims = [b.shape[1] for b in bases]
    maps = []
    for i in range(len(r.rep.spectrum)):
        img = ff.matmul(r.rep.maps[i], bases[i], p)
        if dims[i + 1] == 0:
            if img.any():
                raise EquivarianceError("transition leaves the eigenspace")
            maps.append(ff.zeros(0, dims[i]))
            continue
        try:
            maps.append(ff.coordinates_in_basis(bases[i + 1], img, p))
        except ValueError:
            raise EquivarianceError("transition leaves the eigenspace") from None
    return ModuleRep(list(r.rep.spectrum), dims, maps, p)


def even_multiplicity_check(b: Barcode) -> bool:
    """True iff the number of bars over every window between consecutive
    endpoint values is even (the complex-structure parity condition)."""
    ends = sorted({e for bar in b.bars for e in (bar.birth, bar.death)})
    for i, lo in enumerate(ends):
        for hi in ends[i + 1:]:
            count = sum(1 for bar in b.bars if bar.birth <= lo and hi <= bar.death)
            if count % 2:
                return False
    return True


def z4_obstruction_bound(r: ModuleRepWithAction) -> float:
    """mu_odd of the (-1)-eigenspace barcode: a lower bound for the
    Z2-interleaving distance from r to every Z4-induced involution."""
    if r.order != 2:
        raise ValueError("the obstruction is defined for involutions (order 2)")
    if not verify_representation(r):
        raise EquivarianceError("input is not a persistence representation")
    minus_one = r.p - 1
    return mu_odd(barcode(eigenspace_submodule(r, minus_one)))


# ---------------------------------------------------------------------------
# action specification files


def parse_action_spec(d: dict):
    """Action specification: either a (signed) cell permutation or explicit
    slice matrices.

    {"type": "cell-map", "order": g, "map": {"id": "img" | ["img", coeff]}}
    {"type": "slice-matrices", "order": g, "matrices": [row-major ints, ...]}

    Returns ("cell-map", order, mapping) or ("slice-matrices", order, mats);
    slice matrices are reshaped by the caller against its module dims.
    """
    kind = d.get("type")
    order = d.get("order")
    if not isinstance(order, int) or order < 1:
        raise ValueError("action spec needs a positive integer 'order'")
    if kind == "cell-map":
        mapping = {}
        for k, v in d.get("map", {}).items():
            if isinstance(v, (list, tuple)):
                img, coeff = v
                mapping[k] = (img, int(coeff))
            else:
                mapping[k] = (v, 1)
        return kind, order, mapping
    if kind == "slice-matrices":
        mats = d.get("matrices")
        if not isinstance(mats, list):
            raise ValueError("slice-matrices spec needs a 'matrices' list")
        return kind, order, [list(map(int, m)) for m in mats]
    raise ValueError(f"unknown action spec type {kind!r}")


def action_from_spec(d: dict, c: Optional[FilteredComplex] = None,
                     rep: Optional[ModuleRep] = None,
                     degree: int = 0) -> ModuleRepWithAction:
    """Build a ModuleRepWithAction from a parsed action specification."""
    kind, order, payload = parse_action_spec(d)
    if kind == "cell-map":
        if c is None:
            raise ValueError("cell-map specs need the filtered complex")
        return action_from_cell_map(c, payload, degree, order)
    if rep is None:
        raise ValueError("slice-matrices specs need the module")
    if len(payload) != len(rep.dims):
        raise ValueError("need one matrix per interval")
    mats = [np.array(flat, dtype=np.int64).reshape(dim, dim)
            for flat, dim in zip(payload, rep.dims)]
    return ModuleRepWithAction(rep, order, mats)


# ---------------------------------------------------------------------------
# actions coming from cell symmetries of filtered complexes


def simplicial_action_map(c: FilteredComplex, vertex_map: dict) -> dict:
    """Signed cell map induced by a vertex permutation on a simplicial
    filtered complex (cells are sorted vertex tuples).

    Reordering the image vertices contributes the permutation sign, which
    matters over odd characteristic.
    """
    p = c.p
    out = {}
    for cell in c.cells:
        image = [vertex_map[v] for v in cell.id]
        order = sorted(range(len(image)), key=lambda t: image[t])
        sign = 1
        seen = [False] * len(order)
        for start in range(len(order)):
            if seen[start]:
                continue
            length, t = 0, start
            while not seen[t]:
                seen[t] = True
                t = order[t]
                length += 1
            if length % 2 == 0:
                sign = -sign
        out[cell.id] = (tuple(sorted(image)), sign % p)
    return out


def action_from_cell_map(c: FilteredComplex, cell_map: dict, degree: int,
                         order: int) -> ModuleRepWithAction:
    """Push a (signed) cell permutation through homology.

    cell_map sends a cell id to (image id, coefficient); plain image ids
    mean coefficient 1.  The map must be a filtration-preserving chain
    map; its action on each homology slice is computed in the same bases
    as homology_module, so the result pairs with that module.
    """
    p = c.p
    norm = {}
    for k, v in cell_map.items():
        norm[k] = v if isinstance(v, tuple) else (v, 1)
    by_id = {cell.id: cell for cell in c.cells}
    for cid, (img, coeff) in norm.items():
        if by_id[cid].degree != by_id[img].degree:
            raise ValueError("cell map must preserve degree")
        if by_id[cid].value != by_id[img].value:
            raise ValueError("cell map must preserve the filtration")
    # chain map check: d(T e) = T(d e)
    for cid, (img, coeff) in norm.items():
        lhs: dict = {}
        for f, cf in c.boundary.get(img, {}).items():
            lhs[f] = (lhs.get(f, 0) + coeff * cf) % p
        rhs: dict = {}
        for f, cf in c.boundary.get(cid, {}).items():
            fi, fc = norm[f]
            rhs[fi] = (rhs.get(fi, 0) + cf * fc) % p
        keys = set(lhs) | set(rhs)
        if any((lhs.get(k, 0) - rhs.get(k, 0)) % p for k in keys):
            raise EquivarianceError(f"cell map is not a chain map at {cid}")

    rep = homology_module(c, degree)
    cells_k = c.cells_of_degree(degree)
    idx = {cell.id: i for i, cell in enumerate(cells_k)}
    perm = ff.zeros(len(cells_k), len(cells_k))
    for cell in cells_k:
        img, coeff = norm[cell.id]
        perm[idx[img], idx[cell.id]] = coeff % p

    # express the action in the exact homology bases of homology_module
    from .filtered_complex import homology_slice_bases
    action = [ff.zeros(0, 0)]
    for reps, bnd, sel in homology_slice_bases(c, degree):
        if reps.shape[1] == 0:
            action.append(ff.zeros(0, 0))
            continue
        sub_perm = perm[np.ix_(sel, sel)]
        mapped = ff.matmul(sub_perm, reps, p)
        sol = ff.solve(np.hstack([bnd, reps]), mapped, p)
        action.append(sol[bnd.shape[1]:, :])
    return ModuleRepWithAction(rep, order, action)
