"""
Filtered chain complexes with a preferred basis and their barcodes via
triangular (Barannikov-style) reduction.

Cells are sorted degree-major, then by filtration value, then by id, so
the boundary operator is strictly upper triangular.  The reduction works
degree by degree and produces a graded Jordan pairing: within degree k a
set of paired cells mapping injectively onto degree k-1 cells, the rest
closing cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import field as ff
from .barcode import Bar, Barcode
from .module_rep import ModuleRep

INF = math.inf


class InvalidComplexError(ValueError):
    """Boundary fails to square to zero or raises the filtration."""


@dataclass(frozen=True)
class Cell:
    id: object
    degree: int
    value: float


@dataclass
class FilteredComplex:
    """Graded cells with filtration values and a field-coefficient boundary.

    boundary maps a cell id to {face id: coefficient}; faces must live in
    the degree right below and at a filtration value <= the cell's own.
    """

    cells: list[Cell]
    boundary: dict
    p: int = ff.DEFAULT_P

    def __post_init__(self):
        ff.check_characteristic(self.p)
        by_id = {c.id: c for c in self.cells}
        if len(by_id) != len(self.cells):
            raise InvalidComplexError("duplicate cell ids")
        for c in self.cells:
            for face_id, coeff in self.boundary.get(c.id, {}).items():
                face = by_id.get(face_id)
                if face is None:
                    raise InvalidComplexError(f"boundary of {c.id} hits unknown cell {face_id}")
                if face.degree != c.degree - 1:
                    raise InvalidComplexError(
                        f"boundary of {c.id} (degree {c.degree}) hits degree {face.degree}")
                if face.value > c.value:
                    raise InvalidComplexError(
                        f"filtration increases along boundary of {c.id}")
        self._by_id = by_id
        self._check_dd_zero()

    def _check_dd_zero(self):
        for c in self.cells:
            acc: dict = {}
            for face_id, coeff in self.boundary.get(c.id, {}).items():
                for f2, c2 in self.boundary.get(face_id, {}).items():
                    acc[f2] = (acc.get(f2, 0) + coeff * c2) % self.p
            if any(v % self.p for v in acc.values()):
                raise InvalidComplexError(f"d(d({c.id})) != 0")

    @property
    def max_degree(self) -> int:
        return max((c.degree for c in self.cells), default=-1)

    def n_cells(self) -> int:
        return len(self.cells)

    def filtration_values(self) -> list[float]:
        return sorted({c.value for c in self.cells})

    def cells_of_degree(self, k: int) -> list[Cell]:
        """Cells of degree k in reduction order (value, then id)."""
        return sorted((c for c in self.cells if c.degree == k),
                      key=lambda c: (c.value, _id_key(c.id)))


def _id_key(cell_id):
    return (str(type(cell_id)), repr(cell_id))


@dataclass
class JordanPairing:
    """Output of the triangular reduction.

    order[k] lists the degree-k cell ids in reduction order; pairing[k]
    maps the index of a paired degree-k cell to the index of its partner
    in degree (k-1); unpaired[k] are the cycle-closing indices that are
    not hit from above.  basis[k][j], when tracked, gives the triangular
    change of basis as {index: coeff} over the original degree-k cells.
    """

    order: dict[int, list]
    values: dict[int, list[float]]
    pairing: dict[int, dict[int, int]]
    unpaired: dict[int, list[int]]
    basis: Optional[dict[int, list[dict[int, int]]]] = None


def _reduce_degree_gf2(columns: list[int]) -> tuple[dict[int, int], list[int], list[int]]:
    """Standard low-driven reduction over GF(2) with bitmask columns.

    Returns (pivot row -> column index, reduced columns, ops) where ops
    records (j, i) column additions for basis tracking.
    """
    low_to_col: dict[int, int] = {}
    ops: list[tuple[int, int]] = []
    cols = list(columns)
    for j in range(len(cols)):
        col = cols[j]
        while col:
            low = col.bit_length() - 1
            pivot = low_to_col.get(low)
            if pivot is None:
                low_to_col[low] = j
                break
            col ^= cols[pivot]
            ops.append((j, pivot))
        cols[j] = col
    return low_to_col, cols, ops


def _reduce_degree_modp(columns: list[dict[int, int]], p: int):
    """Same reduction with {row: coeff} columns over F_p."""
    low_to_col: dict[int, int] = {}
    ops: list[tuple[int, int, int]] = []
    cols = [dict(c) for c in columns]
    for j in range(len(cols)):
        col = cols[j]
        while col:
            low = max(col)
            pivot = low_to_col.get(low)
            if pivot is None:
                low_to_col[low] = j
                break
            lam = (col[low] * ff.inv_mod(cols[pivot][low], p)) % p
            for r, v in cols[pivot].items():
                nv = (col.get(r, 0) - lam * v) % p
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
            ops.append((j, pivot, lam))
        cols[j] = col
    return low_to_col, cols, ops


def barannikov_reduce(c: FilteredComplex, want_basis: bool = True) -> JordanPairing:
    """Triangular change of basis bringing the filtered boundary to
    Jordan form, degree by degree.

    The recursion subtracts the already-paired part of each new column
    and pairs what survives with its maximal-index term; that is exactly
    the low-driven column reduction below.
    """
    order: dict[int, list] = {}
    values: dict[int, list[float]] = {}
    index_of: dict[object, int] = {}
    for k in range(c.max_degree + 1):
        cells = c.cells_of_degree(k)
        order[k] = [cell.id for cell in cells]
        values[k] = [cell.value for cell in cells]
        for i, cell in enumerate(cells):
            index_of[cell.id] = i

    pairing: dict[int, dict[int, int]] = {}
    unpaired: dict[int, list[int]] = {}
    basis: Optional[dict[int, list[dict[int, int]]]] = {} if want_basis else None
    if want_basis:
        for k in order:
            basis[k] = [{j: 1} for j in range(len(order[k]))]

    for k in sorted(order):
        if k == 0:
            pairing[0] = {}
            continue
        if c.p == 2:
            masks = []
            for cid in order[k]:
                mask = 0
                for f, coeff in c.boundary.get(cid, {}).items():
                    if coeff % 2:
                        mask |= 1 << index_of[f]
                masks.append(mask)
            low_to_col, reduced, ops = _reduce_degree_gf2(masks)
            ops = [(j, i, 1) for j, i in ops]

            def col_dict(j):
                out, m = {}, reduced[j]
                while m:
                    low_bit = m & -m
                    out[low_bit.bit_length() - 1] = 1
                    m ^= low_bit
                return out
        else:
            cols_dict = []
            for cid in order[k]:
                bd = c.boundary.get(cid, {})
                cols_dict.append({index_of[f]: coeff % c.p
                                  for f, coeff in bd.items() if coeff % c.p})
            low_to_col, reduced_cols, ops = _reduce_degree_modp(cols_dict, c.p)

            def col_dict(j):
                return dict(reduced_cols[j])
        pairing[k] = {j: low for low, j in low_to_col.items()}
        if want_basis:
            for j, i, lam in ops:
                col_j = basis[k][j]
                for r, v in basis[k][i].items():
                    nv = (col_j.get(r, 0) - lam * v) % c.p
                    if nv:
                        col_j[r] = nv
                    else:
                        col_j.pop(r, None)
            # replacement step: the partner's basis vector becomes d(f_j)
            for j, low in pairing[k].items():
                basis[k - 1][low] = col_dict(j)

    for k in sorted(order):
        hit_from_above = set(pairing.get(k + 1, {}).values())
        unpaired[k] = [j for j in range(len(order[k]))
                       if j not in pairing.get(k, {}) and j not in hit_from_above]
    return JordanPairing(order, values, pairing, unpaired, basis)


def barcode_of_complex(c: FilteredComplex, want_pairing: bool = False):
    """Degree-tagged barcode of the homology persistence module.

    Pairs with equal filtration values produce no bar (non-essential);
    cycle classes never hit from above become rays.
    """
    jp = barannikov_reduce(c, want_basis=False)
    bars: list[Bar] = []
    for k in sorted(jp.order):
        for j, low in jp.pairing.get(k, {}).items():
            a = jp.values[k - 1][low]
            b = jp.values[k][j]
            if a < b:
                bars.append(Bar(a, b, degree=k - 1))
        for j in jp.unpaired[k]:
            bars.append(Bar(jp.values[k][j], INF, degree=k))
    bc = Barcode(sorted(bars))
    return (bc, jp) if want_pairing else bc


def boundary_depth_usher(c: FilteredComplex) -> float:
    """Usher's b(C, d): smallest alpha such that boundaries entering at
    level lam are boundaries of chains of level <= lam + alpha, checked
    directly over the finite filtration-value set."""
    p = c.p
    values = c.filtration_values()
    if not values:
        return 0.0
    index_all = {cell.id: i for i, cell in enumerate(c.cells)}
    n = len(c.cells)

    def chain_matrix(ids: Iterable) -> np.ndarray:
        cols = []
        for cid in ids:
            v = np.zeros(n, dtype=np.int64)
            for f, coeff in c.boundary.get(cid, {}).items():
                v[index_all[f]] = coeff % p
            cols.append(v)
        return np.array(cols, dtype=np.int64).T if cols else ff.zeros(n, 0)

    full_image = chain_matrix(cell.id for cell in c.cells)
    cell_level = np.array([cell.value for cell in c.cells])

    def feasible(alpha: float) -> bool:
        for lam in values:
            inside = cell_level <= lam
            # basis of (im d) cap C^lam: solve for image vectors supported in C^lam
            img = full_image
            if img.shape[1] == 0:
                continue
            outside_rows = np.nonzero(~inside)[0]
            ker = ff.kernel_basis(img[outside_rows, :], p) if outside_rows.size \
                else ff.eye(img.shape[1])
            inter = ff.matmul(img, ker, p)  # spans (im d) cap C^lam
            if inter.shape[1] == 0 or not inter.any():
                continue
            # value - lam <= alpha, not value <= lam + alpha: the candidate
            # alphas are exactly these differences, so compare the same way
            allowed = [cell.id for cell in c.cells if cell.value - lam <= alpha]
            target = chain_matrix(allowed)
            for col in range(inter.shape[1]):
                if not ff.in_span(inter[:, col], target, p):
                    return False
        return True

    candidates = sorted({0.0} | {b - a for a in values for b in values if b > a})
    for alpha in candidates:
        if feasible(alpha):
            return alpha
    return candidates[-1]


def homology_slice_bases(c: FilteredComplex, degree: int):
    """Per filtration level: (cycle-representative basis, boundary basis,
    selected degree-k cell indices) of H_degree(C^{<=level}).

    The representatives complete the boundary basis to a basis of the
    cycle space; homology_module and the equivariant machinery both rely
    on this exact basis choice.
    """
    p = c.p
    cells_k = c.cells_of_degree(degree)
    cells_km1 = c.cells_of_degree(degree - 1) if degree > 0 else []
    cells_kp1 = c.cells_of_degree(degree + 1)
    idx_k = {cell.id: i for i, cell in enumerate(cells_k)}
    idx_km1 = {cell.id: i for i, cell in enumerate(cells_km1)}

    def d_matrix(cols_cells, row_index, n_rows) -> np.ndarray:
        m = ff.zeros(n_rows, len(cols_cells))
        for j, cell in enumerate(cols_cells):
            for f, coeff in c.boundary.get(cell.id, {}).items():
                m[row_index[f], j] = coeff % p
        return m

    d_k = d_matrix(cells_k, idx_km1, len(cells_km1))
    d_kp1 = d_matrix(cells_kp1, idx_k, len(cells_k))
    out = []
    for level in c.filtration_values():
        sel_k = [i for i, cell in enumerate(cells_k) if cell.value <= level]
        sel_km1 = [i for i, cell in enumerate(cells_km1) if cell.value <= level]
        sel_kp1 = [j for j, cell in enumerate(cells_kp1) if cell.value <= level]
        if not sel_k:
            out.append((ff.zeros(0, 0), ff.zeros(0, 0), sel_k))
            continue
        dk = d_k[np.ix_(sel_km1, sel_k)] if sel_km1 else ff.zeros(0, len(sel_k))
        cycles = ff.kernel_basis(dk, p)
        bnd = d_kp1[np.ix_(sel_k, sel_kp1)] if sel_kp1 else ff.zeros(len(sel_k), 0)
        bnd = ff.column_space_basis(bnd, p)
        reps = []
        cur, r = bnd, ff.rank(bnd, p)
        for col in range(cycles.shape[1]):
            cand = np.hstack([cur, cycles[:, col:col + 1]])
            rr = ff.rank(cand, p)
            if rr > r:
                reps.append(cycles[:, col])
                cur, r = cand, rr
        reps_m = np.array(reps, dtype=np.int64).T if reps else ff.zeros(len(sel_k), 0)
        out.append((reps_m, bnd, sel_k))
    return out


def homology_module(c: FilteredComplex, degree: int) -> ModuleRep:
    """Persistence module of H_degree over the filtration, with
    inclusion-induced maps; independent of the reduction route."""
    p = c.p
    levels = c.filtration_values()
    reps_by_level = homology_slice_bases(c, degree)
    dims = [0] + [reps.shape[1] for reps, _, _ in reps_by_level]
    maps = [ff.zeros(dims[1], 0)]
    for t in range(len(levels) - 1):
        reps_s, _, sel_s = reps_by_level[t]
        reps_t, bnd_t, sel_t = reps_by_level[t + 1]
        m = ff.zeros(dims[t + 2], dims[t + 1])
        if dims[t + 1] and dims[t + 2]:
            pos = {g: i for i, g in enumerate(sel_t)}
            lift = ff.zeros(len(sel_t), reps_s.shape[1])
            for j in range(reps_s.shape[1]):
                for local_i, g in enumerate(sel_s):
                    lift[pos[g], j] = reps_s[local_i, j]
            sol = ff.solve(np.hstack([bnd_t, reps_t]), lift, p)
            m = sol[bnd_t.shape[1]:, :]
        elif dims[t + 1] and not dims[t + 2]:
            m = ff.zeros(0, dims[t + 1])
        maps.append(m)
    return ModuleRep(list(levels), dims, maps, p)


# ---------------------------------------------------------------------------
# text format: one line per cell `id degree u : id1 id2 ...` (coefficients
# implicit 1 over F_2, `id:coeff` pairs for odd characteristic)


def parse_complex(text: str, p: int = ff.DEFAULT_P) -> FilteredComplex:
    cells: list[Cell] = []
    boundary: dict = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if len(parts) != 3:
            raise ValueError(f"line {ln}: expected `id degree u : faces`")
        cid, deg_s, u_s = parts
        try:
            deg, u = int(deg_s), float(u_s)
        except ValueError as e:
            raise ValueError(f"line {ln}: {e}") from None
        bd = {}
        for tok in tail.split():
            if ":" in tok:
                fid, coeff_s = tok.rsplit(":", 1)
                try:
                    bd[fid] = int(coeff_s) % p
                except ValueError:
                    raise ValueError(f"line {ln}: bad coefficient in {tok!r}") from None
            else:
                bd[tok] = (bd.get(tok, 0) + 1) % p
        cells.append(Cell(cid, deg, u))
        boundary[cid] = bd
    return FilteredComplex(cells, boundary, p)


def format_complex(c: FilteredComplex) -> str:
    lines = []
    for cell in sorted(c.cells, key=lambda x: (x.degree, x.value, _id_key(x.id))):
        bd = c.boundary.get(cell.id, {})
        if c.p == 2:
            faces = " ".join(str(f) for f, coeff in sorted(bd.items(), key=lambda t: str(t[0]))
                             if coeff % 2)
        else:
            faces = " ".join(f"{f}:{coeff % c.p}" for f, coeff in
                             sorted(bd.items(), key=lambda t: str(t[0])) if coeff % c.p)
        lines.append(f"{cell.id} {cell.degree} {cell.value!r} : {faces}".rstrip())
    return "\n".join(lines) + "\n"


def random_filtered_complex(rng, max_cells: int = 30, max_degree: int = 2,
                            p: int = ff.DEFAULT_P) -> FilteredComplex:
    """Random abstract filtered complex with d*d = 0 by construction:
    each new cell's boundary is a random cycle among older cells of the
    degree below, and its value dominates the cycle's support."""
    cells: list[Cell] = []
    boundary: dict = {}
    by_degree: dict[int, list[Cell]] = {k: [] for k in range(max_degree + 1)}
    n = rng.randint(1, max_cells)
    for i in range(n):
        k = rng.randint(0, max_degree)
        if k == 0:
            cell = Cell(f"c{i}", 0, round(rng.uniform(0, 10), 3))
            cells.append(cell)
            by_degree[0].append(cell)
            boundary[cell.id] = {}
            continue
        below = by_degree[k - 1]
        if not below:
            continue
        # boundary = random element of ker(d_{k-1})
        idx = {cell.id: t for t, cell in enumerate(below)}
        rows = {cell.id: t for t, cell in enumerate(by_degree[k - 2])} if k >= 2 else {}
        dmat = ff.zeros(len(rows), len(below))
        for t, cell in enumerate(below):
            for f, coeff in boundary[cell.id].items():
                dmat[rows[f], t] = coeff % p
        ker = ff.kernel_basis(dmat, p) if k >= 2 else ff.eye(len(below))
        if ker.shape[1] == 0:
            continue
        coeffs = np.mod(ker @ np.array([rng.randrange(p) for _ in range(ker.shape[1])]), p)
        support = {below[t].id: int(coeffs[t]) for t in range(len(below)) if coeffs[t]}
        base = max((c2.value for c2 in below if c2.id in support), default=0.0)
        cell = Cell(f"c{i}", k, round(base + rng.uniform(0, 3), 3))
        cells.append(cell)
        by_degree[k].append(cell)
        boundary[cell.id] = support
    return FilteredComplex(cells, boundary, p)
