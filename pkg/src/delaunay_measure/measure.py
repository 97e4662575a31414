"""The measure density by the Jacobian, Kähler and 3-tree routes.

All three routes give the density of the angle measure with respect to
``prod_v d^2 z_v`` over the free vertices, with the three fixed vertices
removed. Determinants are carried as ``(log |value|, phase)`` pairs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import (EdgeBasis, SpanningThreeTree, _triangle_vertices,
                            enumerate_3tree_arrays, find_edge_basis, tree_signs)
from .errors import CoincidingPoints, CombinatoricsChanged, SingularMatrix
from .mesh import PointConfig, Triangulation, delaunay_build
from .operators import OperatorSet, inverse_difference

COINCIDENCE_TOL = 1e-9


@dataclass(frozen=True)
class MeasureValue:
    """A (possibly huge or tiny) number stored as log-magnitude and unit phase."""

    log_magnitude: float
    phase: complex
    route: str

    @property
    def magnitude(self) -> float:
        return math.exp(self.log_magnitude)

    @property
    def value(self) -> complex:
        return self.phase * math.exp(self.log_magnitude)

    def rel_diff(self, other: "MeasureValue") -> float:
        """Relative difference of magnitudes."""
        return abs(math.expm1(self.log_magnitude - other.log_magnitude))

    def to_dict(self) -> dict:
        return {"route": self.route, "log_magnitude": self.log_magnitude,
                "phase": [self.phase.real, self.phase.imag],
                "value": self.magnitude * (1 if self.phase.real >= 0 else -1)}


def _check_coincidence(config: PointConfig, tol: float = COINCIDENCE_TOL):
    if config.n_points > 1 and config.min_distance() < tol * config.scale:
        raise CoincidingPoints("two points closer than the coincidence tolerance")


def _from_slogdet(sign: complex, logabs: float, prefactor: complex, route: str) -> MeasureValue:
    if sign == 0 or not math.isfinite(logabs):
        raise SingularMatrix(f"{route} determinant vanishes")
    lp = math.log(abs(prefactor))
    ph = complex(sign) * prefactor / abs(prefactor)
    return MeasureValue(logabs + lp, ph, route)


def jacobian_block(ops: OperatorSet, basis: EdgeBasis | None = None) -> np.ndarray:
    """The ``2N x 2N`` block of ``(J, J̄)`` on free vertices and basis edges.

    Rows are interleaved as ``z_1, z̄_1, z_2, z̄_2, ...`` over free vertices
    in ascending order.
    """
    basis = basis if basis is not None else ops.basis
    t = ops.triangulation
    free = list(t.config.free)
    cols = list(basis.edges)
    n = len(free)
    blk = np.empty((2 * n, 2 * n), dtype=complex)
    blk[0::2] = ops.J[np.ix_(free, cols)]
    blk[1::2] = ops.Jbar[np.ix_(free, cols)]
    return blk


def measure_jacobian(ops: OperatorSet, basis: EdgeBasis | None = None) -> MeasureValue:
    """``(2/i)^N det`` of the angle Jacobian restricted to free vertices × basis.

    The value equals the real ``(x, y)`` Jacobian determinant, so its phase
    is ``±1``; the measure density is its absolute value.

    Raises
    ------
    CoincidingPoints
        If two points nearly coincide.
    """
    t = ops.triangulation
    _check_coincidence(t.config)
    basis = basis if basis is not None else ops.basis
    if basis is None:
        raise ValueError("an edge basis is required")
    n = t.n_free
    if n == 0:
        return MeasureValue(0.0, 1 + 0j, "jacobian")
    sign, logabs = np.linalg.slogdet(jacobian_block(ops, basis))
    return _from_slogdet(sign, float(logabs), (-2j) ** n, "jacobian")


def measure_kahler(D: np.ndarray, fixed: Sequence[int]) -> MeasureValue:
    """``2^N det`` of the Kähler matrix with the fixed rows and columns removed."""
    fixed = set(int(i) for i in fixed)
    if len(fixed) != 3:
        raise ValueError("three distinct fixed vertices are required")
    keep = [i for i in range(D.shape[0]) if i not in fixed]
    n = len(keep)
    if n == 0:
        return MeasureValue(0.0, 1 + 0j, "kahler")
    sub = D[np.ix_(keep, keep)]
    sign, logabs = np.linalg.slogdet(sub)
    return _from_slogdet(sign, float(logabs), 2.0 ** n, "kahler")


def tree_terms(t: Triangulation, sigma: np.ndarray, sigmabar: np.ndarray,
               eps: np.ndarray) -> np.ndarray:
    """Signed products ``eps * prod A[v, sigma(v)] * prod conj(A[v, sigmabar(v)])``."""
    a = inverse_difference(t)
    free = np.asarray(t.config.free)
    if free.size == 0:
        return eps.astype(complex)
    pa = a[free[None, :], sigma].prod(axis=1)
    pb = np.conj(a[free[None, :], sigmabar]).prod(axis=1)
    return eps * pa * pb


def measure_trees(t: Triangulation, triangle=None,
                  trees: Sequence[SpanningThreeTree] | None = None,
                  basis: EdgeBasis | None = None) -> MeasureValue:
    """Sum over triangle-rooted spanning 3-trees.

    ``(1/2i)^N sum_F eps(F) prod_I 1/(z_v - z_v') prod_I' 1/(z̄_v - z̄_v')``.
    By default the sum runs over the complete family of
    :func:`~.combinatorics.enumerate_3trees` with ``odd_cycles=True``:
    proper 3-trees alone miss the terms whose third set closes on an extra
    odd cycle of free vertices. With the sign convention of
    :func:`~.combinatorics.tree_signs` the result is exactly the
    Jacobian-route value, sign included.
    """
    _check_coincidence(t.config)
    if triangle is None:
        triangle = t.config.fixed
    tri = _triangle_vertices(t, triangle)
    n = t.n_free
    if n == 0:
        return MeasureValue(0.0, 1 + 0j, "trees")
    if trees is None:
        if basis is None:
            basis = find_edge_basis(t, t.find_face(tri))
        sig, sigb, _, _ = enumerate_3tree_arrays(t, tri, odd_cycles=True)
        eps = tree_signs(t, basis, sig, sigb)
    else:
        sig = np.array([f.sigma for f in trees], dtype=np.int64).reshape(len(trees), n)
        sigb = np.array([f.sigmabar for f in trees], dtype=np.int64).reshape(len(trees), n)
        eps = np.array([f.epsilon for f in trees], dtype=np.int64)
    total = complex(tree_terms(t, sig, sigb, eps).sum()) * (1 / 2j) ** n
    if total == 0:
        raise SingularMatrix("3-tree sum vanishes")
    return MeasureValue(math.log(abs(total)), total / abs(total), "trees")


def vandermonde3(za: complex, zb: complex, zc: complex) -> complex:
    return (za - zb) * (za - zc) * (zb - zc)


def density_H(D: np.ndarray, config: PointConfig, a: int, b: int, c: int) -> float:
    """Conformal density ``det(D without a, b, c) / |Vandermonde(z_a, z_b, z_c)|^2``."""
    if len({a, b, c}) != 3:
        raise ValueError("a, b, c must be distinct")
    z = config.points
    if not all(np.isfinite(z[i]) for i in (a, b, c)):
        raise ValueError("the three removed vertices must be finite")
    keep = [i for i in range(D.shape[0]) if i not in (a, b, c)]
    det = np.linalg.det(D[np.ix_(keep, keep)]) if keep else 1.0
    return float(det.real) / abs(vandermonde3(z[a], z[b], z[c])) ** 2


# ---------------------------------------------------------------------------
# collapse scaling

@dataclass(frozen=True)
class ScalingResult:
    """Combinatorial and fitted collapse exponents of one 3-tree term."""

    n: int
    slope: float
    saturated: bool
    inner_I: int
    inner_Ip: int


def tree_term_log(t: Triangulation, sigma: Sequence[int], sigmabar: Sequence[int]) -> float:
    """``log |prod_I 1/(z_v - z_v') prod_I' 1/(z̄_v - z̄_v')|``."""
    a = inverse_difference(t)
    free = list(t.config.free)
    total = 0.0
    for v, e in zip(free, sigma):
        total += math.log(abs(a[v, e]))
    for v, e in zip(free, sigmabar):
        total += math.log(abs(a[v, e]))
    return total


def collapse(config: PointConfig, cluster: Sequence[int], x: float,
             center: complex | None = None) -> PointConfig:
    """Scale the cluster by ``x`` towards ``center`` (default: its centroid)."""
    pts = np.array(config.points)
    idx = list(cluster)
    z0 = pts[idx].mean() if center is None else center
    pts[idx] = z0 + x * (pts[idx] - z0)
    return config.with_points(pts)


def _inner_links(t: Triangulation, edges: Sequence[int], cl: set) -> int:
    return sum(int(t.edges[e, 0]) in cl and int(t.edges[e, 1]) in cl for e in edges)


def scaling_exponents(config: PointConfig, cluster: Sequence[int],
                      trees: Sequence[SpanningThreeTree],
                      xs: Sequence[float] | None = None) -> list[ScalingResult]:
    """Collapse exponents of many 3-tree terms for one cluster.

    The combinatorial exponent of a term is ``n = 2 P - (#I + #I')``,
    counting edges with both ends in the ``P``-vertex cluster; the fitted
    value is the log-log slope of ``x^(2P) |term(x)|`` as the cluster is
    scaled by ``x`` towards its centroid (default scan ``1 .. 1e-2``,
    relative to ``config``). A term is *saturated* when ``n = 3``.

    Raises
    ------
    CombinatoricsChanged
        If the Delaunay triangulation differs between scan points.
    """
    cl = set(int(v) for v in cluster)
    if cl & set(config.fixed):
        raise ValueError("cluster must not contain fixed vertices")
    if len(cl) < 2:
        raise ValueError("cluster needs at least two vertices")
    if xs is None:
        xs = np.logspace(0, -2, 5)
    t0 = delaunay_build(config)
    key = t0.face_key()
    p = len(cl)
    free = np.asarray(config.free)
    sig = np.array([f.sigma for f in trees], dtype=np.int64).reshape(len(trees), free.size)
    sigb = np.array([f.sigmabar for f in trees], dtype=np.int64).reshape(len(trees), free.size)
    z0 = config.points[sorted(cl)].mean()
    logx, vals = [], []
    for x in xs:
        t = delaunay_build(collapse(config, sorted(cl), float(x), z0))
        if t.face_key() != key:
            raise CombinatoricsChanged(f"triangulation changes at x = {x:g}")
        la = np.log(np.abs(inverse_difference(t)[free[None, :], np.concatenate([sig, sigb], 0)]))
        k = len(trees)
        vals.append(2 * p * math.log(x) + la[:k].sum(axis=1) + la[k:].sum(axis=1))
        logx.append(math.log(x))
    slopes = np.polyfit(logx, np.array(vals), 1)[0] if trees else np.zeros(0)
    out = []
    for f, s in zip(trees, np.atleast_1d(slopes)):
        a, b = _inner_links(t0, f.sigma, cl), _inner_links(t0, f.sigmabar, cl)
        n = 2 * p - a - b
        out.append(ScalingResult(n, float(s), n == 3, a, b))
    return out


def scaling_exponent(config: PointConfig, cluster: Sequence[int], f3: SpanningThreeTree,
                     xs: Sequence[float] | None = None) -> ScalingResult:
    """Collapse exponent of the term of ``f3``; see :func:`scaling_exponents`."""
    return scaling_exponents(config, cluster, [f3], xs)[0]


def log_measure_kahler(config: PointConfig) -> float:
    """Log of the Kähler-route density for a configuration (convenience).

    Raises
    ------
    CoincidingPoints
        If two points are closer than the coincidence tolerance.
    """
    from .operators import kahler_assemble
    _check_coincidence(config)
    t = delaunay_build(config)
    return measure_kahler(kahler_assemble(t), config.fixed).log_magnitude
