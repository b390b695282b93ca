"""
Builders turning geometric or function data into filtered complexes:
Vietoris-Rips and Cech filtrations, sublevel filtrations of
triangulations, cyclic sample complexes and periodic torus grids.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import field as ff
from .barcode import Bar, Barcode
from .filtered_complex import Cell, FilteredComplex

INF = math.inf


@dataclass
class FiniteMetricSpace:
    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.allclose(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix needs a zero diagonal")
        if np.any(d < 0):
            raise ValueError("distances must be nonnegative")
        self.dist = d

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def check_triangle_inequality(self, tol: float = 1e-9) -> bool:
        d = self.dist
        for i in range(self.n):
            for j in range(self.n):
                if np.any(d[i, j] > d[i, :] + d[:, j] + tol):
                    return False
        return True

    @classmethod
    def from_points(cls, points) -> "FiniteMetricSpace":
        pts = np.asarray(points, dtype=float)
        diff = pts[:, None, :] - pts[None, :, :]
        return cls(np.sqrt((diff ** 2).sum(axis=2)))


@dataclass
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValueError("points must be an (n, d) array with d >= 1")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass
class GridFunction:
    """Samples of a function on a regular grid; values[i, j] is the value
    at (i * period / nx, j * period / ny).  periodic means torus."""

    values: np.ndarray
    periodic: bool = True
    period: float = 2 * math.pi

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("grid values must be 2-dimensional")
        self.values = v

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def ny(self) -> int:
        return self.values.shape[1]


@dataclass
class Triangulation:
    """Abstract simplicial complex with a geometric-realization tag."""

    simplices: list[tuple]
    realization: str = "abstract"

    def __post_init__(self):
        have = {tuple(sorted(s)) for s in self.simplices}
        closed = set(have)
        for s in have:
            for r in range(1, len(s)):
                closed.update(itertools.combinations(s, r))
        self.simplices = sorted(closed, key=lambda s: (len(s), s))

    def vertices(self) -> list:
        return sorted({v for s in self.simplices for v in s})

    def maximal_simplices(self) -> list[tuple]:
        have = set(self.simplices)
        out = []
        for s in self.simplices:
            if not any(set(s) < set(t) for t in have if len(t) == len(s) + 1):
                out.append(s)
        return out

    def n_simplices(self) -> int:
        return len(self.simplices)


def _simplex_boundary(simplex: tuple, p: int) -> dict:
    """Oriented boundary of a vertex-sorted simplex over F_p."""
    if len(simplex) == 1:
        return {}
    out = {}
    for j in range(len(simplex)):
        face = simplex[:j] + simplex[j + 1:]
        out[face] = (1 if j % 2 == 0 else p - 1)
    return out


def _complex_from_filtered_simplices(simplices: dict, p: int) -> FilteredComplex:
    cells = [Cell(s, len(s) - 1, u) for s, u in simplices.items()]
    boundary = {s: _simplex_boundary(s, p) for s in simplices}
    return FilteredComplex(cells, boundary, p)


def rips_complex(x: FiniteMetricSpace, max_dim: int,
                 p: int = ff.DEFAULT_P) -> FilteredComplex:
    """Flag complex with entry value the simplex diameter (vertices at 0);
    a simplex is present at parameter t exactly when t exceeds its value."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    d = x.dist
    simplices: dict[tuple, float] = {(i,): 0.0 for i in range(x.n)}
    prev: list[tuple] = [(i,) for i in range(x.n)]
    for k in range(1, max_dim + 1):
        cur = []
        for s in prev:
            for v in range(s[-1] + 1, x.n):
                if k >= 2 and not all(s[:i] + s[i + 1:] + (v,) in simplices
                                      for i in range(len(s))):
                    continue
                diam = max(simplices[s], float(d[list(s), v].max()))
                t = s + (v,)
                simplices[t] = diam
                cur.append(t)
        prev = cur
    return _complex_from_filtered_simplices(simplices, p)


def drop_top_degree(b: Barcode, max_dim: int) -> Barcode:
    """Remove bars of degree >= max_dim.

    Homology in the truncation dimension of a dimension-capped complex is
    an artifact of the missing higher cells, so pipelines report only the
    degrees below it.
    """
    return Barcode([bar for bar in b.bars
                    if bar.degree is None or bar.degree < max_dim])


def rips_barcode(x: FiniteMetricSpace, max_dim: int,
                 p: int = ff.DEFAULT_P) -> Barcode:
    """Degree-tagged Rips barcode in degrees 0 .. max_dim-1."""
    from .filtered_complex import barcode_of_complex
    return drop_top_degree(barcode_of_complex(rips_complex(x, max_dim, p)), max_dim)


def cech_barcode(cloud: PointCloud, max_dim: int,
                 p: int = ff.DEFAULT_P) -> Barcode:
    """Degree-tagged Cech barcode in degrees 0 .. max_dim-1."""
    from .filtered_complex import barcode_of_complex
    return drop_top_degree(barcode_of_complex(cech_complex(cloud, max_dim, p)), max_dim)


def meb_radius(points, tol: float = 1e-12) -> float:
    """Exact minimal enclosing ball radius of up to dim+1 points in R^d,
    d <= 4, by exhausting boundary-support subsets."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    n, dim = pts.shape
    if dim > 4:
        raise ValueError("minimal enclosing ball supported up to dimension 4")
    best = INF
    for r in range(1, min(n, dim + 1) + 1):
        for support in itertools.combinations(range(n), r):
            center = _circumcenter(pts[list(support)])
            if center is None:
                continue
            radius = float(np.linalg.norm(pts[list(support)[0]] - center))
            if np.all(np.linalg.norm(pts - center, axis=1) <= radius + tol):
                best = min(best, radius)
    return best


def _circumcenter(pts: np.ndarray) -> Optional[np.ndarray]:
    """Center equidistant from all pts, inside their affine hull."""
    p0 = pts[0]
    if len(pts) == 1:
        return p0
    a = pts[1:] - p0
    g = 2.0 * (a @ a.T)
    b = (a * a).sum(axis=1)
    try:
        t = np.linalg.solve(g, b)
    except np.linalg.LinAlgError:
        return None
    return p0 + t @ a


def cech_complex(cloud: PointCloud, max_dim: int,
                 p: int = ff.DEFAULT_P) -> FilteredComplex:
    """Nerve of balls of radius t/2: entry value of a simplex is twice the
    minimal enclosing ball radius of its vertices."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    pts = cloud.points
    simplices: dict[tuple, float] = {(i,): 0.0 for i in range(cloud.n)}
    for k in range(1, max_dim + 1):
        for s in itertools.combinations(range(cloud.n), k + 1):
            value = 2.0 * meb_radius(pts[list(s)])
            face_cap = max(simplices[s[:i] + s[i + 1:]] for i in range(len(s)))
            simplices[s] = max(value, face_cap)
    return _complex_from_filtered_simplices(simplices, p)


def log2_rescale(b: Barcode) -> Barcode:
    """log2 of every endpoint; births at 0 become -inf (proper bars)."""
    out = []
    for bar in b.bars:
        if bar.birth < 0 and bar.birth != -INF:
            raise ValueError("log rescale needs nonnegative births")
        if bar.death <= 0:
            raise ValueError("log rescale needs positive deaths")
        birth = -INF if bar.birth in (0.0, -INF) else math.log2(bar.birth)
        death = INF if bar.death == INF else math.log2(bar.death)
        out.append(Bar(birth, death, bar.degree))
    return Barcode(out)


def sublevel_filtration(t: Triangulation, vertex_values: dict,
                        p: int = ff.DEFAULT_P) -> FilteredComplex:
    """Lower-star extension u(sigma) = max of the vertex values."""
    missing = [v for v in t.vertices() if v not in vertex_values]
    if missing:
        raise ValueError(f"missing values for vertices {missing}")
    simplices = {tuple(s): max(vertex_values[v] for v in s) for s in t.simplices}
    return _complex_from_filtered_simplices(simplices, p)


def circle_complex(samples: Sequence[float], p: int = ff.DEFAULT_P) -> FilteredComplex:
    """Cyclic graph on the samples: vertex values as given, each edge at
    the max of its endpoints."""
    n = len(samples)
    if n < 3:
        raise ValueError("need at least 3 cyclic samples")
    simplices = {(i,): float(samples[i]) for i in range(n)}
    for i in range(n):
        j = (i + 1) % n
        simplices[tuple(sorted((i, j)))] = max(float(samples[i]), float(samples[j]))
    return _complex_from_filtered_simplices(simplices, p)


def torus_grid_complex(g: GridFunction, p: int = ff.DEFAULT_P) -> FilteredComplex:
    """Periodic grid triangulated with the fixed lower-left-to-upper-right
    diagonal; lower-star values."""
    if not g.periodic:
        raise ValueError("torus grid must be periodic")
    nx, ny = g.nx, g.ny
    if nx < 4 or ny < 4:
        raise ValueError("grid too small; need at least 4x4")
    vals = g.values

    def vid(i: int, j: int) -> tuple:
        return (i % nx, j % ny)

    simplices: dict[tuple, float] = {}
    for i in range(nx):
        for j in range(ny):
            simplices[(vid(i, j),)] = float(vals[i % nx, j % ny])
    for i in range(nx):
        for j in range(ny):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            for edge in ((a, b), (a, c), (a, d)):
                key = tuple(sorted(edge))
                simplices[key] = max(simplices[(edge[0],)], simplices[(edge[1],)])
            for tri in ((a, b, d), (a, c, d)):
                key = tuple(sorted(tri))
                simplices[key] = max(simplices[(v,)] for v in tri)
    return _complex_from_filtered_simplices(simplices, p)


def oscillation(t: Triangulation, vertex_values: dict) -> float:
    """Largest spread of the values over a (maximal) simplex."""
    spread = 0.0
    for s in t.simplices:
        vals = [vertex_values[v] for v in s]
        spread = max(spread, max(vals) - min(vals))
    return spread


def grid_triangulation(g: GridFunction) -> tuple[Triangulation, dict]:
    """The torus grid as a Triangulation plus its vertex values."""
    nx, ny = g.nx, g.ny
    tris = []
    for i in range(nx):
        for j in range(ny):
            a = (i % nx, j % ny)
            b = ((i + 1) % nx, j % ny)
            c = (i % nx, (j + 1) % ny)
            d = ((i + 1) % nx, (j + 1) % ny)
            tris.append((a, b, d))
            tris.append((a, c, d))
    values = {(i, j): float(g.values[i, j]) for i in range(nx) for j in range(ny)}
    return Triangulation(tris, realization="torus-grid"), values


# ---------------------------------------------------------------------------
# small geometric constructions used across tests and the CLI


def regular_polygon_points(n: int, side: float = 1.0) -> np.ndarray:
    """Vertices of a regular n-gon with the given side length."""
    radius = side / (2 * math.sin(math.pi / n))
    ang = 2 * math.pi * np.arange(n) / n
    return np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)


def tree_metric_net(rng, n_edges: int = 6, max_len: float = 2.0,
                    spacing: float = 0.35) -> tuple[FiniteMetricSpace, float]:
    """A finite net on a random metric tree.

    Edges of random length are attached to random existing nodes and
    subdivided at most `spacing` apart, so the returned point set is
    spacing/2-dense in the tree.  Returns the net and its density radius.
    """
    # nodes: positions on the tree encoded by (parent, offset along edge)
    dist = np.zeros((1, 1))
    points_per_edge: list[list[int]] = []
    for _ in range(n_edges):
        attach = rng.randrange(dist.shape[0])
        length = rng.uniform(0.5, max_len)
        n_sub = max(1, int(math.ceil(length / spacing)))
        step = length / n_sub
        base = dist.shape[0]
        m = dist.shape[0] + n_sub
        new = np.zeros((m, m))
        new[:base, :base] = dist
        for t in range(1, n_sub + 1):
            idx = base + t - 1
            off = t * step
            for other in range(base):
                new[idx, other] = new[other, idx] = dist[attach, other] + off
            for t2 in range(1, t):
                idx2 = base + t2 - 1
                new[idx, idx2] = new[idx2, idx] = (t - t2) * step
        dist = new
    return FiniteMetricSpace(dist), spacing / 2


# ---------------------------------------------------------------------------
# CSV ingestion


def parse_point_cloud(text: str) -> PointCloud:
    rows = []
    width = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in line.replace(",", " ").split()]
        except ValueError:
            raise ValueError(f"line {ln}: not a number row: {raw!r}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(f"line {ln}: expected {width} coordinates, got {len(row)}")
        rows.append(row)
    if not rows:
        raise ValueError("empty point-cloud file")
    return PointCloud(np.array(rows))


def parse_distance_matrix(text: str) -> FiniteMetricSpace:
    cloud = parse_point_cloud(text)
    m = cloud.points
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"distance matrix must be square, got {m.shape}")
    return FiniteMetricSpace(m)


def parse_grid(text: str, periodic: bool = True,
               period: float = 2 * math.pi) -> GridFunction:
    cloud = parse_point_cloud(text)
    # rows of the file run along y; transpose so values[i, j] = f(x_i, y_j)
    return GridFunction(cloud.points.T.copy(), periodic=periodic, period=period)
