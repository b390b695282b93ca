"""
Concrete persistence modules over a prime field: finite spectrum,
per-interval dimensions and transition matrices.

A ModuleRep with spectrum a_1 < ... < a_N describes vector spaces over
the intervals Q_1 = (-inf, a_1], ..., Q_i = (a_{i-1}, a_i], ...,
Q_{N+1} = (a_N, +inf) and maps p_i : V^i -> V^{i+1}.  Standard modules
have dims[0] == 0; a positive dims[0] encodes a proper module whose
classes are born at -inf.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import field as ff
from .barcode import Bar, Barcode, Matching, is_delta_matching

INF = math.inf


class InconsistentModuleError(ValueError):
    """Rank data of the input violates the module axioms."""


class InvalidMorphismError(ValueError):
    """Component matrices do not commute with the transition maps."""


class NoInjectionWitnessError(ValueError):
    """Counting inequalities rule out an injection (or surjection)."""


@dataclass
class ModuleRep:
    spectrum: list[float]
    dims: list[int]
    maps: list[np.ndarray]
    p: int = ff.DEFAULT_P

    def __post_init__(self):
        ff.check_characteristic(self.p)
        if any(not (a < b) for a, b in zip(self.spectrum, self.spectrum[1:])):
            raise ValueError("spectrum must be strictly increasing")
        if any(not math.isfinite(a) for a in self.spectrum):
            raise ValueError("spectrum points must be finite")
        if len(self.dims) != len(self.spectrum) + 1:
            raise ValueError("need one dimension per interval (N+1 of them)")
        if len(self.maps) != len(self.spectrum):
            raise ValueError("need one transition map per spectral point")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be >= 0")
        for i, m in enumerate(self.maps):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise ValueError(
                    f"map {i} has shape {m.shape}, expected "
                    f"({self.dims[i + 1]}, {self.dims[i]})")

    @property
    def n_intervals(self) -> int:
        return len(self.dims)

    def interval(self, i: int) -> tuple[float, float]:
        """Endpoints of Q_i for 1-based i."""
        lo = -INF if i == 1 else self.spectrum[i - 2]
        hi = INF if i == len(self.dims) else self.spectrum[i - 1]
        return lo, hi

    def dim_at_infinity(self) -> int:
        return self.dims[-1]

    def composite(self, i: int, j: int) -> np.ndarray:
        """Matrix of p_{i,j} : V^i -> V^j (1-based, i <= j)."""
        if not 1 <= i <= j <= len(self.dims):
            raise IndexError("composite indices out of range")
        m = ff.eye(self.dims[i - 1])
        for k in range(i - 1, j - 1):
            m = ff.matmul(self.maps[k], m, self.p)
        return m


def zero_module(p: int = ff.DEFAULT_P) -> ModuleRep:
    return ModuleRep([], [0], [], p)


def rank_invariant(v: ModuleRep, i: int, j: int) -> int:
    """b_{ij} = rank of p_{i,j}; indices outside 1..N+1 (or j < i) give 0."""
    n1 = len(v.dims)
    if i < 1 or j > n1 or j < i:
        return 0
    return ff.rank(v.composite(i, j), v.p)


def barcode(v: ModuleRep) -> Barcode:
    """Barcode via the rank multiplicity formula.

    m_ij = b_{i+1,j} + b_{i,j+1} - b_{i,j} - b_{i+1,j+1} counts bars
    (a_i, a_j]; i = 0 (a_0 = -inf) collects the proper bars and
    j = N+1 (a_{N+1} = +inf) the rays.  A negative multiplicity means
    the input was not a persistence module.
    """
    n1 = len(v.dims)
    b = {}
    for i in range(1, n1 + 1):
        m = ff.eye(v.dims[i - 1])
        b[(i, i)] = v.dims[i - 1]
        for j in range(i + 1, n1 + 1):
            m = ff.matmul(v.maps[j - 2], m, v.p)
            b[(i, j)] = ff.rank(m, v.p)

    def bval(i: int, j: int) -> int:
        if i < 1 or j > n1 or j < i:
            return 0
        return b[(i, j)]

    endpoints = [-INF] + list(v.spectrum) + [INF]
    bars = []
    for i in range(0, n1):
        for j in range(i + 1, n1 + 1):
            mult = bval(i + 1, j) + bval(i, j + 1) - bval(i, j) - bval(i + 1, j + 1)
            if mult < 0:
                raise InconsistentModuleError(
                    f"negative multiplicity {mult} for interval "
                    f"({endpoints[i]}, {endpoints[j]}]")
            bars.extend([Bar(endpoints[i], endpoints[j])] * mult)
    return Barcode(sorted(bars))


def _canonical_bars(b: Barcode) -> list[Bar]:
    return sorted(b.bars)


def _spectrum_of_barcode(b: Barcode, extra: Sequence[float] = ()) -> list[float]:
    pts = set(b.finite_endpoints()) | set(extra)
    return sorted(pts)


def _slots_for_bars(bars: list[Bar], spectrum: list[float]) -> tuple[list[int], list[dict[int, int]]]:
    """Occupancy of each interval Q_i by each bar.

    Returns (dims, slots) where slots[bar_index] maps 1-based interval
    index to the row taken by that bar in V^i.
    """
    n1 = len(spectrum) + 1
    endpoints = [-INF] + list(spectrum) + [INF]
    dims = [0] * n1
    slots: list[dict[int, int]] = [dict() for _ in bars]
    for bi, bar in enumerate(bars):
        for i in range(1, n1 + 1):
            lo, hi = endpoints[i - 1], endpoints[i]
            if bar.birth <= lo and hi <= bar.death:
                slots[bi][i] = dims[i - 1]
                dims[i - 1] += 1
    return dims, slots


def _module_from_bars(bars: list[Bar], spectrum: list[float], p: int) -> tuple[ModuleRep, list[dict[int, int]]]:
    dims, slots = _slots_for_bars(bars, spectrum)
    maps = [ff.zeros(dims[i + 1], dims[i]) for i in range(len(spectrum))]
    for bi in range(len(bars)):
        for i in range(1, len(dims)):
            if i in slots[bi] and i + 1 in slots[bi]:
                maps[i - 1][slots[bi][i + 1], slots[bi][i]] = 1
    return ModuleRep(list(spectrum), dims, maps, p), slots


def from_barcode(b: Barcode, p: int = ff.DEFAULT_P) -> ModuleRep:
    """Direct sum of interval modules realising the barcode."""
    bars = _canonical_bars(b)
    rep, _ = _module_from_bars(bars, _spectrum_of_barcode(b), p)
    return rep


def refine_spectra(v: ModuleRep, w: ModuleRep) -> tuple[ModuleRep, ModuleRep]:
    """Re-express both modules over the union spectrum."""
    if v.p != w.p:
        raise ValueError("cannot mix field characteristics in one pipeline")
    union = sorted(set(v.spectrum) | set(w.spectrum))
    return refine_to(v, union), refine_to(w, union)


def refine_to(v: ModuleRep, spectrum: Sequence[float]) -> ModuleRep:
    """Re-express v over a finer spectrum (identities at the new points)."""
    new = sorted(set(spectrum) | set(v.spectrum))
    endpoints_old = [-INF] + list(v.spectrum) + [INF]
    # locate each new interval inside the old one containing it
    dims, maps = [], []
    old_of_new = []
    new_endpoints = [-INF] + new + [INF]
    for i in range(1, len(new) + 2):
        hi = new_endpoints[i]
        # interval (new_endpoints[i-1], hi] sits in the old interval whose
        # right endpoint is the smallest old endpoint >= hi
        j = next(k for k in range(1, len(endpoints_old) + 1)
                 if hi <= endpoints_old[k])
        old_of_new.append(j)
        dims.append(v.dims[j - 1])
    for i in range(len(new)):
        a, b = old_of_new[i], old_of_new[i + 1]
        if a == b:
            maps.append(ff.eye(dims[i]))
        else:
            maps.append(v.maps[a - 1].copy())
    return ModuleRep(new, dims, maps, v.p)


def shift(v: ModuleRep, delta: float) -> ModuleRep:
    """delta-shift: (V[delta])_t = V_{t+delta}; spectrum moves by -delta."""
    return ModuleRep([a - delta for a in v.spectrum],
                     list(v.dims), [m.copy() for m in v.maps], v.p)


def direct_sum(v: ModuleRep, w: ModuleRep) -> ModuleRep:
    v2, w2 = refine_spectra(v, w)
    dims = [dv + dw for dv, dw in zip(v2.dims, w2.dims)]
    maps = []
    for i in range(len(v2.spectrum)):
        m = ff.zeros(dims[i + 1], dims[i])
        m[:v2.dims[i + 1], :v2.dims[i]] = v2.maps[i]
        m[v2.dims[i + 1]:, v2.dims[i]:] = w2.maps[i]
        maps.append(m)
    return ModuleRep(v2.spectrum, dims, maps, v.p)


def truncate(v: ModuleRep, window: Bar) -> ModuleRep:
    """Zero the module outside (window.birth, window.death]."""
    cut = [e for e in (window.birth, window.death) if math.isfinite(e)]
    r = refine_to(v, sorted(set(v.spectrum) | set(cut)))
    endpoints = [-INF] + r.spectrum + [INF]
    keep = [window.birth <= endpoints[i - 1] and endpoints[i] <= window.death
            for i in range(1, len(r.dims) + 1)]
    dims = [d if k else 0 for d, k in zip(r.dims, keep)]
    maps = []
    for i in range(len(r.spectrum)):
        if keep[i] and keep[i + 1]:
            maps.append(r.maps[i].copy())
        else:
            maps.append(ff.zeros(dims[i + 1], dims[i]))
    return ModuleRep(r.spectrum, dims, maps, r.p)


@dataclass
class ModuleMorphism:
    source: ModuleRep
    target: ModuleRep
    components: list[np.ndarray]

    def __post_init__(self):
        if self.source.p != self.target.p:
            raise ValueError("cannot mix field characteristics in one pipeline")
        if self.source.spectrum != self.target.spectrum:
            raise ValueError("morphism needs a shared spectrum; refine first")
        if len(self.components) != len(self.source.dims):
            raise ValueError("need one component per interval")
        for i, a in enumerate(self.components):
            if a.shape != (self.target.dims[i], self.source.dims[i]):
                raise ValueError(f"component {i} has wrong shape {a.shape}")
        p = self.source.p
        for i in range(len(self.source.spectrum)):
            left = ff.matmul(self.components[i + 1], self.source.maps[i], p)
            right = ff.matmul(self.target.maps[i], self.components[i], p)
            if not np.array_equal(left, right):
                raise InvalidMorphismError(f"square {i} does not commute")

    @property
    def p(self) -> int:
        return self.source.p


def identity_morphism(v: ModuleRep) -> ModuleMorphism:
    return ModuleMorphism(v, v, [ff.eye(d) for d in v.dims])


def zero_morphism(v: ModuleRep, w: ModuleRep) -> ModuleMorphism:
    v2, w2 = refine_spectra(v, w)
    return ModuleMorphism(v2, w2, [ff.zeros(dw, dv)
                                   for dv, dw in zip(v2.dims, w2.dims)])


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    if f.target.dims != g.source.dims or f.target.spectrum != g.source.spectrum:
        raise ValueError("morphisms are not composable")
    comps = [ff.matmul(gc, fc, f.p) for gc, fc in zip(g.components, f.components)]
    return ModuleMorphism(f.source, g.target, comps)


def kernel(f: ModuleMorphism) -> ModuleRep:
    """Kernel submodule in deterministic reduced bases."""
    p = f.p
    bases = [ff.kernel_basis(a, p) for a in f.components]
    dims = [b.shape[1] for b in bases]
    maps = []
    for i in range(len(f.source.spectrum)):
        img = ff.matmul(f.source.maps[i], bases[i], p)
        maps.append(ff.coordinates_in_basis(bases[i + 1], img, p)
                    if dims[i + 1] else ff.zeros(0, dims[i]))
    return ModuleRep(list(f.source.spectrum), dims, maps, p)


def image(f: ModuleMorphism) -> ModuleRep:
    """Image submodule in deterministic reduced bases."""
    p = f.p
    bases = [ff.column_space_basis(a, p) for a in f.components]
    dims = [b.shape[1] for b in bases]
    maps = []
    for i in range(len(f.source.spectrum)):
        img = ff.matmul(f.target.maps[i], bases[i], p)
        maps.append(ff.coordinates_in_basis(bases[i + 1], img, p)
                    if dims[i + 1] else ff.zeros(0, dims[i]))
    return ModuleRep(list(f.source.spectrum), dims, maps, p)


# ---------------------------------------------------------------------------
# induced matchings


def _check_injection_counts(b: list[Bar], c: list[Bar]) -> None:
    deaths = {bar.death for bar in b} | {bar.death for bar in c}
    for d in deaths:
        bs = sorted(bar.birth for bar in b if bar.death == d)
        cs = sorted(bar.birth for bar in c if bar.death == d)
        if len(bs) > len(cs) or any(bb < cc for bb, cc in zip(bs, cs)):
            raise NoInjectionWitnessError(
                f"no injection can exist: counting fails at death {d}")


def induced_matching_inj(b: Barcode, c: Barcode) -> Matching:
    """Matching induced by any injection: per death value, match bars
    longest-first.  Raises when the counting inequalities fail."""
    _check_injection_counts(b.bars, c.bars)
    pairs = []
    deaths = {bar.death for bar in b.bars}
    for d in deaths:
        bi = sorted((i for i, bar in enumerate(b.bars) if bar.death == d),
                    key=lambda i: (b.bars[i].birth, i))
        ci = sorted((j for j, bar in enumerate(c.bars) if bar.death == d),
                    key=lambda j: (c.bars[j].birth, j))
        pairs.extend(zip(bi, ci))
    return Matching(pairs)


def _check_surjection_counts(b: list[Bar], c: list[Bar]) -> None:
    births = {bar.birth for bar in b} | {bar.birth for bar in c}
    for bb in births:
        bs = sorted((bar.death for bar in b if bar.birth == bb), reverse=True)
        cs = sorted((bar.death for bar in c if bar.birth == bb), reverse=True)
        if len(bs) < len(cs) or any(db < dc for db, dc in zip(bs, cs)):
            raise NoInjectionWitnessError(
                f"no surjection can exist: counting fails at birth {bb}")


def induced_matching_sur(b: Barcode, c: Barcode) -> Matching:
    """Matching induced by any surjection: per birth value, match bars
    longest-first (every bar of c ends up matched)."""
    _check_surjection_counts(b.bars, c.bars)
    pairs = []
    births = {bar.birth for bar in c.bars}
    for bb in births:
        bi = sorted((i for i, bar in enumerate(b.bars) if bar.birth == bb),
                    key=lambda i: (-b.bars[i].death, i))
        ci = sorted((j for j, bar in enumerate(c.bars) if bar.birth == bb),
                    key=lambda j: (-c.bars[j].death, j))
        pairs.extend(zip(bi, ci))
    return Matching(pairs)


def induced_matching(f: ModuleMorphism) -> Matching:
    """mu(f) = mu_inj o mu_sur through the barcode of im f.

    Indices refer to the canonically sorted barcodes of source and
    target (as returned by barcode()).
    """
    im = image(f)
    b_im = barcode(im)
    mu_sur = induced_matching_sur(barcode(f.source), b_im)
    mu_inj = induced_matching_inj(b_im, barcode(f.target))
    return mu_inj.compose(mu_sur)


# ---------------------------------------------------------------------------
# interleavings


def _interval_morphism_entry(src: Bar, dst: Bar, lo: float, hi: float) -> int:
    """1 iff the canonical map F(src) -> F(dst) is the identity on the
    interval (lo, hi] (it is multiplication by 1 on src n dst when
    dst.birth <= src.birth and src.birth < dst.death <= src.death)."""
    if not (dst.birth <= src.birth and src.birth < dst.death <= src.death):
        return 0
    return int(src.birth <= lo and hi <= src.death
               and dst.birth <= lo and hi <= dst.death)


def _matched_pair_matrices(src_bars, src_slots, dst_bars, dst_slots,
                           pairs, spectrum, dims_src, dims_dst):
    endpoints = [-INF] + list(spectrum) + [INF]
    comps = [ff.zeros(dims_dst[i], dims_src[i]) for i in range(len(dims_src))]
    for si, di in pairs:
        for i in range(1, len(dims_src) + 1):
            if i in src_slots[si] and i in dst_slots[di]:
                lo, hi = endpoints[i - 1], endpoints[i]
                comps[i - 1][dst_slots[di][i], src_slots[si][i]] = \
                    _interval_morphism_entry(src_bars[si], dst_bars[di], lo, hi)
    return comps


def _snap_function(values: list[float], tol: float):
    """Merge values closer than tol into cluster representatives.

    Shifting endpoints by delta in floating point misses coincidences the
    real-number construction relies on (c - delta == a up to 1 ulp), which
    would create sliver intervals and break the exact matrix identities.
    """
    reps: list[float] = []
    for v in sorted(values):
        if not reps or v - reps[-1] > tol:
            reps.append(v)

    def snap(v: float) -> float:
        if v == INF or v == -INF:
            return v
        lo, hi = 0, len(reps) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if reps[mid] < v - tol:
                lo = mid + 1
            else:
                hi = mid
        return reps[lo]

    return snap


def interleaving_from_matching(b: Barcode, c: Barcode, m: Matching,
                               delta: float, p: int = ff.DEFAULT_P,
                               snap_tol: float = 1e-9
                               ) -> tuple[ModuleMorphism, ModuleMorphism]:
    """Build delta-interleaving morphisms F : V -> W[delta] and
    G : W -> V[delta] from a delta-matching of the barcodes.

    Matched bars carry the canonical nonzero interval morphisms, unmatched
    (necessarily short) bars map to zero.  Both compositions are verified
    to equal the 2*delta shift morphisms as exact matrix identities.
    Endpoints closer than snap_tol (relative to the endpoint scale) are
    identified so float shifts cannot produce spurious sliver intervals.
    """
    if not is_delta_matching(b, c, m, delta):
        raise ValueError("matching is not a delta-matching at this delta")
    raw = [e for bar in itertools.chain(b.bars, c.bars)
           for e in (bar.birth, bar.death) if math.isfinite(e)]
    scale = max((abs(e) for e in raw), default=1.0) + 2 * abs(delta)
    snap = _snap_function([e + s for e in raw for s in (0.0, -delta, -2 * delta)],
                          snap_tol * max(1.0, scale))

    def snapped(bar: Bar, s: float) -> Bar:
        lo = bar.birth if bar.birth == -INF else snap(bar.birth + s)
        hi = bar.death if bar.death == INF else snap(bar.death + s)
        if not lo < hi:
            raise ValueError("bar shorter than the snap tolerance; "
                             "pass snap_tol=0 for exactly-representable input")
        return Bar(lo, hi)

    bars_b = [snapped(bar, 0.0) for bar in b.bars]
    bars_c = [snapped(bar, 0.0) for bar in c.bars]
    bars_c_d = [snapped(bar, -delta) for bar in c.bars]     # bars of W[delta]
    bars_b_d = [snapped(bar, -delta) for bar in b.bars]     # bars of V[delta]
    bars_b_2d = [snapped(bar, -2 * delta) for bar in b.bars]
    bars_c_2d = [snapped(bar, -2 * delta) for bar in c.bars]

    spectrum = sorted({e for bars in (bars_b, bars_c, bars_b_d, bars_c_d,
                                      bars_b_2d, bars_c_2d)
                       for bar in bars
                       for e in (bar.birth, bar.death) if math.isfinite(e)})
    vmod, vslots = _module_from_bars(bars_b, spectrum, p)
    wdel, wdslots = _module_from_bars(bars_c_d, spectrum, p)
    wmod, wslots = _module_from_bars(bars_c, spectrum, p)
    vdel, vdslots = _module_from_bars(bars_b_d, spectrum, p)
    v2d, v2dslots = _module_from_bars(bars_b_2d, spectrum, p)
    w2d, w2dslots = _module_from_bars(bars_c_2d, spectrum, p)

    pairs = m.pairs
    f = ModuleMorphism(vmod, wdel, _matched_pair_matrices(
        bars_b, vslots, bars_c_d, wdslots, pairs, spectrum, vmod.dims, wdel.dims))
    g = ModuleMorphism(wmod, vdel, _matched_pair_matrices(
        bars_c, wslots, bars_b_d, vdslots, [(j, i) for i, j in pairs],
        spectrum, wmod.dims, vdel.dims))
    # shifted copies of f and g over the same spectrum
    g_shift = _matched_pair_matrices(bars_c_d, wdslots, bars_b_2d, v2dslots,
                                     [(j, i) for i, j in pairs], spectrum,
                                     wdel.dims, v2d.dims)
    f_shift = _matched_pair_matrices(bars_b_d, vdslots, bars_c_2d, w2dslots,
                                     pairs, spectrum, vdel.dims, w2d.dims)
    phi_v = _matched_pair_matrices(bars_b, vslots, bars_b_2d, v2dslots,
                                   [(i, i) for i in range(len(bars_b))],
                                   spectrum, vmod.dims, v2d.dims)
    phi_w = _matched_pair_matrices(bars_c, wslots, bars_c_2d, w2dslots,
                                   [(j, j) for j in range(len(bars_c))],
                                   spectrum, wmod.dims, w2d.dims)
    for i in range(len(vmod.dims)):
        lhs = ff.matmul(g_shift[i], f.components[i], p)
        if not np.array_equal(lhs, phi_v[i]):
            raise AssertionError("G[delta] o F != 2*delta shift morphism")
        lhs = ff.matmul(f_shift[i], g.components[i], p)
        if not np.array_equal(lhs, phi_w[i]):
            raise AssertionError("F[delta] o G != 2*delta shift morphism")
    return f, g


def interleaving_distance(v: ModuleRep, w: ModuleRep) -> float:
    """Computed through the barcode (isometry theorem route)."""
    from .barcode import bottleneck_distance
    return bottleneck_distance(barcode(v), barcode(w))


# ---------------------------------------------------------------------------
# characteristic exponents


def characteristic_exponent(v: ModuleRep, vector: np.ndarray) -> float:
    """c(vec) = inf of parameters s with vec in the image of p_{s,inf};
    -inf for the zero vector (and anything alive since -inf)."""
    vec = np.mod(np.asarray(vector, dtype=np.int64).reshape(-1), v.p)
    n1 = len(v.dims)
    if vec.shape[0] != v.dims[-1]:
        raise ValueError("vector must live in the terminal space V_inf")
    endpoints = [-INF] + list(v.spectrum)
    for i in range(1, n1 + 1):
        if ff.in_span(vec, v.composite(i, n1), v.p):
            return endpoints[i - 1]
    raise AssertionError("unreachable: v is always in the image of identity")


def characteristic_exponent_spectrum(v: ModuleRep) -> list[float]:
    """Multiset of exponents over a basis adapted to the image flag;
    equals the sorted births of the infinite bars."""
    n1 = len(v.dims)
    endpoints = [-INF] + list(v.spectrum)
    # rank of p_{i,inf} counts classes alive from Q_i on; differences give
    # the number of infinite bars born exactly at a_{i-1}
    ranks = [ff.rank(v.composite(i, n1), v.p) for i in range(1, n1 + 1)]
    values: list[float] = []
    for i in range(n1):
        values.extend([endpoints[i]] * (ranks[i] - (ranks[i - 1] if i else 0)))
    return sorted(values)


# ---------------------------------------------------------------------------
# constructive normal form (cross-check oracle, small instances only)


def normal_form_constructive(v: ModuleRep) -> Barcode:
    """Barcode via the semi-surjective submodule recursion.

    Grows a submodule one interval summand at a time; exponential-ish
    bookkeeping, intended as an independent oracle for small spectra.
    """
    p = v.p
    n1 = len(v.dims)
    endpoints = [-INF] + list(v.spectrum) + [INF]
    bases = [ff.zeros(d, 0) for d in v.dims]
    bars: list[Bar] = []
    for _ in range(sum(v.dims) + 1):
        i0 = next((i for i in range(n1)
                   if bases[i].shape[1] < v.dims[i]), None)
        if i0 is None:
            break
        # first standard basis vector outside the current span
        z = None
        for col in range(v.dims[i0]):
            cand = ff.zeros(v.dims[i0], 1)
            cand[col, 0] = 1
            if not ff.in_span(cand[:, 0], bases[i0], p):
                z = cand
                break
        zs = {i0: z}
        cur = z
        j0 = None
        for j in range(i0 + 1, n1):
            cur = ff.matmul(v.maps[j - 1], cur, p)
            zs[j] = cur
            if ff.in_span(cur[:, 0], bases[j], p):
                j0 = j
                break
        if j0 is None:
            bars.append(Bar(endpoints[i0], INF))
            for j in range(i0, n1):
                bases[j] = np.hstack([bases[j], zs[j]])
        else:
            # pull z^{j0} back through the (surjective on W) composite
            comp = v.composite(i0 + 1, j0 + 1)
            restricted = ff.matmul(comp, bases[i0], p)
            alpha = ff.solve(restricted, zs[j0][:, 0], p) \
                if bases[i0].shape[1] else ff.zeros(0, 1)[:, 0]
            x = ff.matmul(bases[i0], alpha.reshape(-1, 1), p)
            y = np.mod(zs[i0] - x, p)
            bars.append(Bar(endpoints[i0], endpoints[j0]))
            cur = y
            for j in range(i0, j0):
                bases[j] = np.hstack([bases[j], cur])
                cur = ff.matmul(v.maps[j], cur, p)
    return Barcode(sorted(bars))
