"""
Barcodes, delta-matchings, bottleneck distance and scalar barcode
invariants.

A bar is the half-open interval (birth, death]; births of -inf and
deaths of +inf are allowed (proper barcodes).  Multiplicity is by
repetition in the bar list.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

INF = math.inf


@dataclass(frozen=True)
class Bar:
    """Half-open interval (birth, death] with an optional degree tag."""

    birth: float
    death: float
    degree: Optional[int] = None

    def __post_init__(self):
        if not self.birth < self.death:
            raise ValueError(f"bar needs birth < death, got ({self.birth}, {self.death}]")
        if self.birth == INF or self.death == -INF:
            raise ValueError("bar endpoints out of range")

    def _key(self):
        return (self.birth, self.death, self.degree is not None, self.degree or 0)

    def __lt__(self, other: "Bar"):
        return self._key() < other._key()

    @property
    def length(self) -> float:
        return self.death - self.birth

    @property
    def finite(self) -> bool:
        return self.birth > -INF and self.death < INF

    def contains(self, other: "Bar") -> bool:
        """True iff the interval *other* is a subset of this one."""
        return self.birth <= other.birth and other.death <= self.death

    def shifted(self, delta: float) -> "Bar":
        b = self.birth if self.birth == -INF else self.birth + delta
        d = self.death if self.death == INF else self.death + delta
        return Bar(b, d, self.degree)


@dataclass
class Barcode:
    """Finite multiset of bars, stored as a list."""

    bars: list[Bar] = field(default_factory=list)

    def __iter__(self):
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    def __eq__(self, other):
        if not isinstance(other, Barcode):
            return NotImplemented
        return sorted(self.bars) == sorted(other.bars)

    def finite_bars(self) -> list[Bar]:
        return [b for b in self.bars if b.finite]

    def degrees(self) -> list[Optional[int]]:
        return sorted({b.degree for b in self.bars}, key=lambda d: (d is None, d))

    def fully_tagged(self) -> bool:
        return all(b.degree is not None for b in self.bars)

    def restrict_degree(self, degree: Optional[int]) -> "Barcode":
        return Barcode([b for b in self.bars if b.degree == degree])

    def untagged(self) -> "Barcode":
        return Barcode([Bar(b.birth, b.death) for b in self.bars])

    def finite_endpoints(self) -> list[float]:
        out = []
        for b in self.bars:
            if b.birth > -INF:
                out.append(b.birth)
            if b.death < INF:
                out.append(b.death)
        return sorted(set(out))


@dataclass
class Matching:
    """Partial bijection between two barcodes, as index pairs."""

    pairs: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("matching reuses an index; must be a partial bijection")

    def __len__(self):
        return len(self.pairs)

    def left_indices(self) -> set[int]:
        return {i for i, _ in self.pairs}

    def right_indices(self) -> set[int]:
        return {j for _, j in self.pairs}

    def compose(self, other: "Matching") -> "Matching":
        """self after other: pairs (i, k) with other i->j and self j->k."""
        follow = dict(self.pairs)
        return Matching([(i, follow[j]) for i, j in other.pairs if j in follow])


def _endpoint_diff(a: float, b: float) -> float:
    if a == b:
        return 0.0  # covers +inf/+inf and -inf/-inf
    if math.isinf(a) or math.isinf(b):
        return INF
    return abs(a - b)


def bar_match_cost(i: Bar, j: Bar) -> float:
    """Smallest delta for which the pair (i, j) is delta-matched.

    Equals max(|birth diff|, |death diff|) with infinite-vs-infinite
    differences counting 0 and mixed finite/infinite counting +inf.
    """
    return max(_endpoint_diff(i.birth, j.birth), _endpoint_diff(i.death, j.death))


def is_delta_matching(b: Barcode, c: Barcode, m: Matching, delta: float) -> bool:
    """Check the three delta-matching conditions.

    (i) every bar of *b* longer than 2*delta is matched, (ii) same for
    *c*, (iii) every matched pair has cost <= delta.
    """
    if delta < 0:
        raise ValueError("delta must be >= 0")
    for i, j in m.pairs:
        if not (0 <= i < len(b.bars) and 0 <= j < len(c.bars)):
            raise IndexError("matching refers to a bar index out of range")
    matched_left = m.left_indices()
    matched_right = m.right_indices()
    for idx, bar in enumerate(b.bars):
        if bar.length > 2 * delta and idx not in matched_left:
            return False
    for idx, bar in enumerate(c.bars):
        if bar.length > 2 * delta and idx not in matched_right:
            return False
    return all(bar_match_cost(b.bars[i], c.bars[j]) <= delta for i, j in m.pairs)


def _one_sided_cover(mandatory: list[int], adj: list[list[int]],
                     n_other: int) -> Optional[list[int]]:
    """Kuhn matching covering every mandatory vertex, or None.

    Returns other-side partner array (partner[j] = mandatory-side vertex).
    """
    partner = [-1] * n_other

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if partner[v] == -1 or augment(partner[v], seen):
                partner[v] = u
                return True
        return False

    for u in mandatory:
        if not augment(u, [False] * n_other):
            return None
    return partner


def _feasible_matching_at(b: list[Bar], c: list[Bar], delta: float) -> Optional[list[tuple[int, int]]]:
    """A delta-matching between bar lists, or None if none exists.

    Every bar of length > 2*delta on either side must be matched, at cost
    <= delta.  A matching covering both mandatory sets exists iff each
    side can be covered on its own (Mendelsohn-Dulmage); the two one-sided
    matchings are then merged by flipping alternating paths, which only
    ever drops short bars.
    """
    n_b, n_c = len(b), len(c)
    adj = [[j for j in range(n_c) if bar_match_cost(b[i], c[j]) <= delta]
           for i in range(n_b)]
    long_b = [i for i in range(n_b) if b[i].length > 2 * delta]
    long_c = [j for j in range(n_c) if c[j].length > 2 * delta]
    m1_partner = _one_sided_cover(long_b, adj, n_c)          # c index -> b index
    if m1_partner is None:
        return None
    radj = [[] for _ in range(n_c)]
    for u in range(n_b):
        for v in adj[u]:
            radj[v].append(u)
    m2_partner = _one_sided_cover(long_c, radj, n_b)         # b index -> c index
    if m2_partner is None:
        return None

    # merge: start from M1; steal each uncovered mandatory c bar's M2
    # partner, re-seating displaced c bars along their own M2 edges until
    # one without an M2 edge (necessarily short) drops out
    match_b = [-1] * n_b                                      # b index -> c index
    match_c = [-1] * n_c
    for v, u in enumerate(m1_partner):
        if u != -1:
            match_b[u], match_c[v] = v, u
    m2_of_c = [-1] * n_c
    for u, v in enumerate(m2_partner):
        if v != -1:
            m2_of_c[v] = u
    for v0 in long_c:
        if match_c[v0] != -1:
            continue
        v = v0
        while v != -1:
            u = m2_of_c[v]
            displaced = match_b[u]
            match_b[u], match_c[v] = v, u
            if displaced != -1:
                match_c[displaced] = -1
                if m2_of_c[displaced] == -1:
                    break              # short bar by construction; drop it
            v = displaced
    return [(u, v) for u, v in enumerate(match_b) if v != -1]


def bottleneck_candidates(b: Barcode, c: Barcode) -> list[float]:
    deltas = {0.0}
    for bar_i in b.bars:
        for bar_j in c.bars:
            cost = bar_match_cost(bar_i, bar_j)
            if cost < INF:
                deltas.add(cost)
    for bar in itertools.chain(b.bars, c.bars):
        if bar.finite:
            deltas.add(bar.length / 2)
    return sorted(deltas)


def _ray_signature(bars: Iterable[Bar]) -> tuple[int, int, int]:
    birth_inf = sum(1 for b in bars if b.birth == -INF and b.death < INF)
    death_inf = sum(1 for b in bars if b.death == INF and b.birth > -INF)
    both = sum(1 for b in bars if b.birth == -INF and b.death == INF)
    return birth_inf, death_inf, both


def _bottleneck_single_pool(b: Barcode, c: Barcode) -> float:
    if _ray_signature(b.bars) != _ray_signature(c.bars):
        return INF
    candidates = bottleneck_candidates(b, c)
    lo, hi = 0, len(candidates) - 1
    # Largest candidate is always feasible once ray counts agree.
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible_matching_at(b.bars, c.bars, candidates[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def bottleneck_distance(b: Barcode, c: Barcode) -> float:
    """Exact bottleneck distance.

    The infimum is attained on the finite candidate set of pair costs and
    half-lengths; feasibility at a candidate is a bipartite matching
    problem.  Returns +inf when infinite-ray counts differ.  If both
    barcodes are fully degree-tagged the distance is computed per degree
    and combined by maximum, otherwise as a single pool.
    """
    if len(b.bars) == 0 and len(c.bars) == 0:
        return 0.0
    if b.fully_tagged() and c.fully_tagged():
        degrees = {bar.degree for bar in b.bars} | {bar.degree for bar in c.bars}
        return max(_bottleneck_single_pool(b.restrict_degree(d), c.restrict_degree(d))
                   for d in degrees)
    return _bottleneck_single_pool(b.untagged(), c.untagged())


def optimal_matching(b: Barcode, c: Barcode) -> tuple[float, Matching]:
    """Bottleneck distance together with a certifying matching."""
    delta = bottleneck_distance(b, c)
    if delta == INF:
        raise ValueError("no finite-cost matching: infinite-ray counts differ")
    if b.fully_tagged() and c.fully_tagged():
        pairs = []
        degrees = {bar.degree for bar in b.bars} | {bar.degree for bar in c.bars}
        for d in degrees:
            bi = [i for i, bar in enumerate(b.bars) if bar.degree == d]
            ci = [j for j, bar in enumerate(c.bars) if bar.degree == d]
            sub = _feasible_matching_at([b.bars[i] for i in bi],
                                        [c.bars[j] for j in ci], delta)
            pairs.extend((bi[u], ci[v]) for u, v in sub)
        return delta, Matching(pairs)
    pairs = _feasible_matching_at(b.bars, c.bars, delta)
    return delta, Matching(pairs)


def bottleneck_bruteforce(b: Barcode, c: Barcode) -> float:
    """Minimise max(pair costs, unmatched half-lengths) over all partial
    bijections.  Exponential; oracle for small inputs."""
    nb, nc = len(b.bars), len(c.bars)
    best = INF

    def unmatched_penalty(bars, used):
        pen = 0.0
        for idx, bar in enumerate(bars):
            if idx not in used:
                pen = max(pen, bar.length / 2)
        return pen

    right = list(range(nc))
    for k in range(0, min(nb, nc) + 1):
        for left in itertools.combinations(range(nb), k):
            for perm in itertools.permutations(right, k):
                cost = 0.0
                for i, j in zip(left, perm):
                    cost = max(cost, bar_match_cost(b.bars[i], c.bars[j]))
                cost = max(cost,
                           unmatched_penalty(b.bars, set(left)),
                           unmatched_penalty(c.bars, set(perm)))
                best = min(best, cost)
    return best


def matching_lemma(b: Sequence[float], c: Sequence[float]) -> float:
    """max_i |b_i - c_i| over the sorted lists; the monotone pairing is
    optimal among all permutations (asserted against the brute-force
    minimum while that is affordable)."""
    if len(b) != len(c):
        raise ValueError("matching_lemma needs equally long lists")
    bs, cs = sorted(b), sorted(c)
    value = max((abs(x - y) for x, y in zip(bs, cs)), default=0.0)
    if len(b) <= 6:
        assert value == matching_lemma_bruteforce(bs, cs)
    return value


def matching_lemma_bruteforce(b: Sequence[float], c: Sequence[float]) -> float:
    if len(b) != len(c):
        raise ValueError("matching_lemma needs equally long lists")
    best = INF
    for perm in itertools.permutations(c):
        best = min(best, max((abs(x - y) for x, y in zip(b, perm)), default=0.0))
    return best if best < INF else 0.0


def interval_interleaving_distance(i: Bar, j: Bar) -> float:
    """Closed-form interleaving distance between two finite interval
    modules: min(max of half-lengths, max of endpoint differences)."""
    if not (i.finite and j.finite):
        raise ValueError("closed form needs finite bars; use bar_match_cost")
    return min(max(i.length / 2, j.length / 2),
               max(abs(i.birth - j.birth), abs(i.death - j.death)))


def shift_barcode(b: Barcode, delta: float) -> Barcode:
    """Translate every endpoint by delta; infinite endpoints stay put."""
    return Barcode([bar.shifted(delta) for bar in b.bars])


def boundary_depth(b: Barcode) -> float:
    """Length of the longest finite bar (0 if there is none)."""
    return beta_k(b, 1)


def beta_k(b: Barcode, k: int) -> float:
    """k-th longest finite-bar length; 0 when fewer than k finite bars."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lengths = sorted((bar.length for bar in b.finite_bars()), reverse=True)
    return lengths[k - 1] if k <= len(lengths) else 0.0


def ell(b: Barcode, lo: float, hi: float) -> float:
    """Total length of the barcode clipped to [lo, hi]."""
    if lo > hi:
        raise ValueError("need lo <= hi")
    total = 0.0
    for bar in b.bars:
        left = max(bar.birth, lo)
        right = min(bar.death, hi)
        if right > left:
            total += right - left
    return total


def nu(b: Barcode, c: float) -> int:
    """Number of finite bars of length > c."""
    if c < 0:
        raise ValueError("threshold must be >= 0")
    return sum(1 for bar in b.finite_bars() if bar.length > c)


def persistent_betti(b: Barcode, window: Bar) -> int:
    """Number of bars containing the window (birth <= w.birth, death >= w.death)."""
    if not window.finite:
        raise ValueError("window must be finite")
    return _window_count(b, window.birth, window.death)


def _window_count(b: Barcode, x: float, y: float) -> int:
    return sum(1 for bar in b.bars if bar.birth <= x and y <= bar.death)


def infinite_endpoint_spectrum(b: Barcode) -> list[float]:
    """Sorted multiset of births of the death-infinite bars."""
    return sorted(bar.birth for bar in b.bars if bar.death == INF)


def _mu_candidate_cs(b: Barcode) -> list[float]:
    ends = b.finite_endpoints()
    cands = {0.0}
    for e1 in ends:
        for e2 in ends:
            d = e1 - e2
            if d > 0:
                cands.add(d / 2)
                cands.add(d / 4)
    return sorted(cands)


def _mu_feasible(b: Barcode, k: int, c: float) -> bool:
    """Is there a window I, len > 4c, with exactly k bars over I and over
    the 2c-shrink of I?

    The admissible (x, y) region is a union of half-open boxes whose
    closed corners have x in {births} u {births - 2c} and y in
    {deaths} u {deaths + 2c}; sentinels far below/above all finite
    endpoints stand in for the unbounded window regimes that appear once
    the barcode has rays or bars born at -inf.
    """
    import numpy as np

    ends = b.finite_endpoints()
    lo = (min(ends) if ends else 0.0) - 4 * c - 1.0
    hi = (max(ends) if ends else 0.0) + 4 * c + 1.0
    births = {bar.birth for bar in b.bars if bar.birth > -INF}
    deaths = {bar.death for bar in b.bars if bar.death < INF}
    xs = np.array(sorted({lo} | births | {v - 2 * c for v in births}))
    ys = np.array(sorted({hi} | deaths | {v + 2 * c for v in deaths}))
    all_b = np.array([bar.birth for bar in b.bars])
    all_d = np.array([bar.death for bar in b.bars])
    cov_x = all_b[:, None] <= xs[None, :]            # (bars, xs)
    cov_y = all_d[:, None] >= ys[None, :]            # (bars, ys)
    m_outer = np.einsum("bx,by->xy", cov_x.astype(np.int32), cov_y.astype(np.int32))
    cov_x2 = all_b[:, None] <= (xs + 2 * c)[None, :]
    cov_y2 = all_d[:, None] >= (ys - 2 * c)[None, :]
    m_inner = np.einsum("bx,by->xy", cov_x2.astype(np.int32), cov_y2.astype(np.int32))
    long_enough = ys[None, :] - xs[:, None] > 4 * c
    return bool(np.any((m_outer == k) & (m_inner == k) & long_enough))


def multiplicity_function(b: Barcode, k: int) -> float:
    """mu_k: supremum of c admitting a window of length > 4c with exactly
    k bars over it and over its 2c-shrink; 0 when no window exists.

    Feasibility is downward closed in c and every binding cap is a half
    or quarter difference of finite endpoints, so the sup is found
    exactly by testing midpoints between consecutive candidates.  The
    sup is +inf exactly when feasibility survives past every cap (all
    caps exhausted, e.g. a barcode of k full lines).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(b.bars) < k:
        return 0.0
    if not _mu_feasible(b, k, 0.0):
        return 0.0
    cands = _mu_candidate_cs(b)
    if _mu_feasible(b, k, cands[-1] + 1.0):
        return INF
    sup = 0.0
    for prev, cur in zip(cands, cands[1:]):
        if _mu_feasible(b, k, (prev + cur) / 2):
            sup = cur
    if _mu_feasible(b, k, cands[-1]):
        sup = cands[-1]
    return sup


def mu_odd(b: Barcode) -> float:
    """max over odd k of mu_k."""
    best = 0.0
    for k in range(1, len(b.bars) + 1, 2):
        best = max(best, multiplicity_function(b, k))
    return best


def multiplicity_grid_oracle(b: Barcode, k: int, resolution: float = 1e-3) -> float:
    """Dense-grid estimate of mu_k, independent of the candidate search.

    Scans windows (x, y] with both ends on a grid of the given resolution
    (scaled by the endpoint span).  For each window covered by exactly k
    bars the supremal admissible c is min(len/4, smallest shrink at which
    an extra bar covers the window); the oracle reports the max over
    windows.  The grid is padded by 2.5 spans so unbounded-window regimes
    next to rays are seen.
    """
    import numpy as np

    ends = b.finite_endpoints()
    if not ends:
        return 0.0
    span = max(ends) - min(ends)
    if span == 0:
        return 0.0
    step = resolution * span
    # Windows reach past the finite endpoints only where an infinite
    # endpoint keeps coverage alive out there.
    pad_lo = 2.5 * span if any(bar.birth == -INF for bar in b.bars) else step
    pad_hi = 2.5 * span if any(bar.death == INF for bar in b.bars) else step
    grid = np.arange(min(ends) - pad_lo, max(ends) + pad_hi + step, step)
    births = np.array([bar.birth for bar in b.bars])
    deaths = np.array([bar.death for bar in b.bars])
    n = grid.size
    best = 0.0
    chunk = max(1, int(2e6 // max(1, len(b.bars) * n)))
    for start in range(0, n, chunk):
        xs = grid[start:start + chunk]                     # (cx,)
        covers_x = births[:, None, None] <= xs[None, :, None]   # (bars, cx, 1)
        covers_y = deaths[:, None, None] >= grid[None, None, :]  # (bars, 1, n)
        inside = covers_x & covers_y                        # (bars, cx, n)
        counts = inside.sum(axis=0)
        length_ok = grid[None, :] > xs[:, None]
        window_ok = (counts == k) & length_ok
        if not window_ok.any():
            continue
        cap = (grid[None, :] - xs[:, None]) / 4.0
        thr_b = (births[:, None, None] - xs[None, :, None]) / 2.0
        thr_d = (grid[None, None, :] - deaths[:, None, None]) / 2.0
        thr = np.maximum(thr_b, thr_d)
        thr = np.where(inside, np.inf, thr)
        cap = np.minimum(cap, thr.min(axis=0))
        cap = np.where(window_ok, cap, -np.inf)
        best = max(best, float(cap.max()))
    return max(best, 0.0)
