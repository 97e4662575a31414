"""Independent reference computations used to derive expected test values.

Nothing here shares code with the package beyond the input types.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np
from scipy.spatial import ConvexHull


# -- special functions ---------------------------------------------------

def lobachevsky_quad(alpha: float) -> float:
    """``-int_0^alpha log|2 sin t| dt`` by tanh-sinh quadrature.

    The range is split at the logarithmic singularities ``k pi``, which
    the quadrature handles at interval ends.
    """
    if alpha == 0:
        return 0.0
    lo, hi = sorted((0.0, float(alpha)))
    cuts = [k * mpmath.pi for k in range(math.ceil(lo / math.pi), math.floor(hi / math.pi) + 1)
            if lo < k * math.pi < hi]
    with mpmath.workdps(30):
        val = mpmath.quad(lambda t: -mpmath.log(abs(2 * mpmath.sin(t))), [lo, *cuts, hi])
    return float(val) if alpha > 0 else -float(val)


def bloch_wigner_mp(z: complex) -> float:
    z = mpmath.mpc(z)
    return float(mpmath.im(mpmath.polylog(2, z)) + mpmath.log(abs(z)) * mpmath.arg(1 - z))


# -- geometry --------------------------------------------------------------

def sphere_delaunay_faces(points, infinity=None) -> set[frozenset]:
    """Delaunay faces on the sphere as the convex hull of the lifted points.

    Inverse stereographic projection sends circles to plane sections, so
    the hull facets are exactly the Delaunay faces (the vertex at infinity
    goes to the north pole).
    """
    xyz = []
    for i, z in enumerate(points):
        if i == infinity:
            xyz.append((0.0, 0.0, 1.0))
            continue
        r2 = abs(z) ** 2
        xyz.append((2 * z.real / (r2 + 1), 2 * z.imag / (r2 + 1), (r2 - 1) / (r2 + 1)))
    hull = ConvexHull(np.array(xyz))
    return {frozenset(int(v) for v in s) for s in hull.simplices}


def inscribed_angle(c: complex, a: complex, b: complex) -> float:
    """Unsigned angle at ``c`` subtending ``ab`` (law of cosines)."""
    la, lb, lc = abs(b - c), abs(a - c), abs(a - b)
    return math.acos(max(-1.0, min(1.0, (la * la + lb * lb - lc * lc) / (2 * la * lb))))


def theta_interior(a: complex, b: complex, c: complex, d: complex) -> float:
    """``pi`` minus the two angles subtending ``ab`` from ``c`` and ``d``."""
    return math.pi - inscribed_angle(c, a, b) - inscribed_angle(d, a, b)


def dtheta_dz(a, b, c, d, which: int, h: float = 1e-6) -> complex:
    """``d theta / dz`` of one of the four points by central differences."""
    pts = [complex(a), complex(b), complex(c), complex(d)]

    def th(delta):
        q = list(pts)
        q[which] += delta
        return theta_interior(*q)

    dx = (th(h) - th(-h)) / (2 * h)
    dy = (th(1j * h) - th(-1j * h)) / (2 * h)
    return 0.5 * complex(dx, -dy)


# -- combinatorics ---------------------------------------------------------

def _connected(n: int, pairs) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    comps = n
    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


def brute_force_3trees(edges, n_vertices: int, triangle) -> list[tuple[frozenset, frozenset]]:
    """All ordered pairs (I, I') of a triangle-rooted spanning 3-tree.

    Tries every pair of disjoint ``N``-subsets of the non-triangle edges and
    keeps those for which each of ``I``, ``I'`` and the rest, together with
    the triangle, is connected and spanning (hence unicyclic with the
    triangle as its cycle).
    """
    tri = set(triangle)
    n = n_vertices - 3
    tri_e = [i for i, (a, b) in enumerate(edges) if a in tri and b in tri]
    rest = [i for i in range(len(edges)) if i not in tri_e]
    tri_pairs = [edges[i] for i in tri_e]

    def ok(sub) -> bool:
        return _connected(n_vertices, tri_pairs + [edges[i] for i in sub])

    good = [frozenset(s) for s in combinations(rest, n) if ok(s)]
    goodset = set(good)
    out = []
    for i in good:
        for j in good:
            if i & j:
                continue
            if frozenset(rest) - i - j in goodset:
                out.append((i, j))
    return out


def pfaffian_expand(m) -> Fraction:
    """Pfaffian by expansion along the first row (exponential, small sizes only)."""
    m = [[Fraction(x) for x in row] for row in m]
    idx = list(range(len(m)))

    def pf(ix):
        if not ix:
            return Fraction(1)
        i = ix[0]
        total = Fraction(0)
        for k in range(1, len(ix)):
            j = ix[k]
            if m[i][j] == 0:
                continue
            sub = ix[1:k] + ix[k + 1:]
            total += (-1) ** (k - 1) * m[i][j] * pf(sub)
        return total

    return pf(idx)


def rational_det(m) -> Fraction:
    """Determinant by Fraction Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


# -- statistics --------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def cell_integral(density, x0, x1, y0, y1, singular=(), depth: int = 0,
                  max_depth: int = 6) -> float:
    """Tensor Gauss–Legendre over a rectangle, bisecting cells that hold a singular point."""
    if depth < max_depth and any(x0 <= p.real <= x1 and y0 <= p.imag <= y1 for p in singular):
        xm, ym = (x0 + x1) / 2, (y0 + y1) / 2
        return sum(cell_integral(density, a, b, c, d, singular, depth + 1, max_depth)
                   for a, b in ((x0, xm), (xm, x1)) for c, d in ((y0, ym), (ym, y1)))
    xs = (x1 - x0) / 2 * _GL_X + (x1 + x0) / 2
    ys = (y1 - y0) / 2 * _GL_X + (y1 + y0) / 2
    s = 0.0
    for xi, wi in zip(xs, _GL_W):
        for yj, wj in zip(ys, _GL_W):
            s += wi * wj * density(complex(xi, yj))
    return s * (x1 - x0) * (y1 - y0) / 4


def grid_quadrature(density, edges, singular=()) -> np.ndarray:
    """Integral of ``density`` over each cell of the ``edges x edges`` grid."""
    k = len(edges) - 1
    return np.array([[cell_integral(density, edges[i], edges[i + 1], edges[j], edges[j + 1],
                                    singular) for j in range(k)] for i in range(k)])


def chi2_merged(observed, expected, min_expected: float = 5.0) -> tuple[float, int]:
    """Pearson statistic after pooling cells in ascending expected order.

    Cells are accumulated until each pool expects at least
    ``min_expected`` counts; returns ``(chi2, degrees of freedom)``.
    """
    o = np.asarray(observed, dtype=float).ravel()
    e = np.asarray(expected, dtype=float).ravel()
    oo, ee = [], []
    ao = ae = 0.0
    for k in np.argsort(e):
        ao += o[k]
        ae += e[k]
        if ae >= min_expected:
            oo.append(ao)
            ee.append(ae)
            ao = ae = 0.0
    if ae > 0:
        oo[-1] += ao
        ee[-1] += ae
    oo, ee = np.array(oo), np.array(ee)
    return float(((oo - ee) ** 2 / ee).sum()), len(ee) - 1
