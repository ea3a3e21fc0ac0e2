"""Zero-velocity curves by marching squares.

The curve 2*U1(x, y) = C bounds the region a particle with Jacobi value C
can reach. Cells of the sampling grid are classified by corner signs of
f = 2*U1 - C, crossings are located on cell edges, and ambiguous saddle
cells are split by the sign of f at the cell centre. Grid cells that
contain a primary, or touch one within the collision guard, are masked.

Each crossing is polished along its grid edge with a bracketed scalar
root solve, so emitted vertices satisfy f = 0 to near machine precision
rather than to the linear-interpolation error of the raw grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .model import COLLISION_GUARD, SystemParams

Window = tuple[float, float, float, float]

#: Minimum number of grid nodes per axis.
MIN_RESOLUTION = 16

# per-cell segments by corner-sign case; corners c0..c3 run counter-
# clockwise from the lower left, edges 0..3 are bottom,right,top,left
_SEGMENTS = {
    1: ((3, 0),), 2: ((0, 1),), 3: ((3, 1),), 4: ((1, 2),),
    6: ((0, 2),), 7: ((3, 2),), 8: ((2, 3),), 9: ((0, 2),),
    11: ((1, 2),), 12: ((3, 1),), 13: ((0, 1),), 14: ((3, 0),),
}


@dataclass(frozen=True)
class ZeroVelocityCurve:
    """Polyline decomposition of one zero-velocity level set.

    ``segments`` is a tuple of polylines, each a tuple of (x, y)
    vertices; closed loops repeat their first vertex at the end.
    """

    level_c: float
    segments: tuple[tuple[tuple[float, float], ...], ...]


def _level_function(p: SystemParams, level_c: float, guard: float):
    n2 = p.n * p.n
    q1f = (1.0 - p.mu) * p.q1

    def f(x: float, y: float) -> float:
        xm = x + p.mu
        r1 = math.hypot(xm, y)
        r2 = math.hypot(xm - 1.0, y)
        if r1 < guard or r2 < guard:
            return math.nan
        return (n2 * (x * x + y * y) + 2.0 * q1f / r1 + 2.0 * p.mu / r2
                + p.mu * p.a2 / r2**3 - level_c)

    return f


def _edge_vertex(f, pa, pb, fa, fb) -> tuple[float, float]:
    # crossing on the edge pa-pb: polish the linear-interpolation root
    # with a bracketed solve so the vertex sits on the level set
    if fa == 0.0:
        return pa
    if fb == 0.0:
        return pb

    def g(s: float) -> float:
        return f(pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1]))

    try:
        s = brentq(g, 0.0, 1.0, xtol=1e-13)
    except ValueError:
        # fall back to plain linear interpolation if the scalar solve
        # cannot bracket (sign noise at the last bit)
        s = fa / (fa - fb)
    return (pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1]))


def zero_velocity_curve(p: SystemParams, level_c: float, window: Window,
                        resolution: int,
                        guard: float = COLLISION_GUARD) -> ZeroVelocityCurve:
    """Extract the zero-velocity curve 2*U1 = level_c inside a window.

    Parameters
    ----------
    p : SystemParams
        System parameters.
    level_c : float
        Jacobi level of the curve.
    window : tuple
        (xmin, xmax, ymin, ymax) extent of the sampling grid.
    resolution : int
        Number of grid nodes per axis, at least 16.

    Returns
    -------
    ZeroVelocityCurve
        Stitched polylines; empty when the level set misses the window.
    """
    xmin, xmax, ymin, ymax = window
    if not (xmin < xmax and ymin < ymax):
        raise ValueError(f"window must satisfy xmin < xmax and ymin < ymax, "
                         f"got {window}")
    if resolution < MIN_RESOLUTION:
        raise ValueError(
            f"resolution must be >= {MIN_RESOLUTION}, got {resolution}")

    f = _level_function(p, level_c, guard)
    nx = ny = int(resolution)
    xs = [xmin + (xmax - xmin) * i / (nx - 1) for i in range(nx)]
    ys = [ymin + (ymax - ymin) * j / (ny - 1) for j in range(ny)]
    vals = [[f(x, y) for x in xs] for y in ys]

    primaries = ((-p.mu, 0.0), (1.0 - p.mu, 0.0))
    vertex_cache: dict = {}
    raw_segments: list[tuple] = []

    def vertex(edge_key):
        v = vertex_cache.get(edge_key)
        if v is None:
            kind, i, j = edge_key
            if kind == "h":
                pa, pb = (xs[i], ys[j]), (xs[i + 1], ys[j])
                fa, fb = vals[j][i], vals[j][i + 1]
            else:
                pa, pb = (xs[i], ys[j]), (xs[i], ys[j + 1])
                fa, fb = vals[j][i], vals[j + 1][i]
            v = _edge_vertex(f, pa, pb, fa, fb)
            vertex_cache[edge_key] = v
        return v

    for j in range(ny - 1):
        for i in range(nx - 1):
            corners = (vals[j][i], vals[j][i + 1],
                       vals[j + 1][i + 1], vals[j + 1][i])
            if any(math.isnan(c) for c in corners):
                continue
            if any(xs[i] <= px <= xs[i + 1] and ys[j] <= py <= ys[j + 1]
                   for px, py in primaries):
                continue
            case = sum(1 << k for k, c in enumerate(corners) if c < 0.0)
            if case in (0, 15):
                continue
            edge_keys = (("h", i, j), ("v", i + 1, j),
                         ("h", i, j + 1), ("v", i, j))
            if case in (5, 10):
                centre = f(0.5 * (xs[i] + xs[i + 1]),
                           0.5 * (ys[j] + ys[j + 1]))
                inside = centre < 0.0
                if case == 5:
                    pairs = ((0, 1), (2, 3)) if inside else ((3, 0), (1, 2))
                else:
                    pairs = ((3, 0), (1, 2)) if inside else ((0, 1), (2, 3))
            else:
                pairs = _SEGMENTS[case]
            for a, b in pairs:
                raw_segments.append((edge_keys[a], edge_keys[b]))

    return ZeroVelocityCurve(
        level_c=level_c,
        segments=_stitch(raw_segments, vertex))


def _stitch(raw_segments, vertex) -> tuple:
    """Chain per-cell segments that share edge crossings into polylines."""
    adjacency: dict = {}
    for a, b in raw_segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    visited = set()
    polylines = []

    def walk(start):
        chain = [start]
        visited.add(start)
        current = start
        while True:
            nxt = None
            for nb in adjacency[current]:
                if nb not in visited:
                    nxt = nb
                    break
            if nxt is None:
                break
            chain.append(nxt)
            visited.add(nxt)
            current = nxt
        return chain

    endpoints = [k for k, nbs in adjacency.items() if len(nbs) == 1]
    for key in endpoints:
        if key in visited:
            continue
        chain = walk(key)
        polylines.append(tuple(vertex(k) for k in chain))
    for key in adjacency:
        if key in visited:
            continue
        chain = walk(key)
        if len(chain) > 1:
            # closed loop: repeat the first vertex to close the polyline
            polylines.append(tuple(vertex(k) for k in chain)
                             + (vertex(chain[0]),))
    return tuple(polylines)
