"""Configurations shared by the test modules."""

from __future__ import annotations

import cmath
import math

import numpy as np

from delaunay_measure.mesh import PointConfig, delaunay_build

TRIANGLE = np.array([0, 1, 1j])


def tetrahedron() -> PointConfig:
    """Fixed triangle (0, 1, i) with one free point inside."""
    return PointConfig([0, 1, 1j, (1 + 1j) / 4], (0, 1, 2))


def tetrahedron_infinity() -> PointConfig:
    """Vertex 0 at infinity, fixed (inf, 0, 1), one free point above the real axis."""
    return PointConfig([math.nan, 0, 1, 0.3 + 0.4j], (0, 1, 2), infinity=0)


def octahedron(r: float = 0.3) -> PointConfig:
    """Two nested triangles, the inner one rotated by pi/3 (fixed-face)."""
    outer = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    inner = [r * cmath.exp(2j * math.pi * (k + 0.5) / 3) for k in range(3)]
    return PointConfig(outer + inner, (0, 1, 2))


def octahedron_infinity() -> PointConfig:
    """{inf, 0, 1, i, -1, -i}: a square around 0 with the vertex at infinity.

    Fixed vertices (inf, 1, i) span a ghost face.
    """
    return PointConfig([math.nan, 1, 1j, 0, -1, -1j], (0, 1, 2), infinity=0)


def hexagon() -> PointConfig:
    """Regular hexagon of six equilateral triangles around 0, vertex 0 at infinity.

    Fixed vertices (inf, 1, e^{i pi/3}) span a ghost face; the centre is vertex 3.
    """
    ring = [cmath.exp(1j * math.pi * k / 3) for k in range(6)]
    return PointConfig([math.nan, ring[0], ring[1], 0j] + ring[2:], (0, 1, 2), infinity=0)


def random_inside(rng: np.random.Generator, n: int, tri=TRIANGLE) -> PointConfig:
    """Fixed triangle plus ``n`` free points inside it (the triangle is a face)."""
    w = rng.dirichlet([1.0, 1.0, 1.0], size=n)
    return PointConfig(np.concatenate([tri, w @ tri]), (0, 1, 2))


def random_plane(rng: np.random.Generator, n: int) -> PointConfig:
    """``n + 3`` Gaussian points, the first three fixed (not necessarily a face)."""
    z = rng.normal(size=n + 3) + 1j * rng.normal(size=n + 3)
    return PointConfig(z, (0, 1, 2))


def relabel_to_ghost(finite) -> PointConfig:
    """Vertex 0 at infinity plus ``finite``, relabelled so that (0, 1, 2) is a face.

    Vertices 1 and 2 become the ends of a convex hull edge.
    """
    pts = np.concatenate([[complex(math.nan, math.nan)], np.asarray(finite, dtype=complex)])
    t = delaunay_build(PointConfig(pts, (0, 1, 2), infinity=0))
    ghost = next(f for f in range(t.n_faces) if t.is_ghost(f))
    a, b = (int(v) for v in t.faces[ghost] if v != 0)
    order = [0, a, b] + [v for v in range(1, pts.size) if v not in (a, b)]
    return PointConfig(pts[order], (0, 1, 2), infinity=0)


def random_infinity(rng: np.random.Generator, n: int) -> PointConfig:
    """``n + 2`` random points of the unit disk plus the vertex at infinity."""
    r = np.sqrt(rng.uniform(size=n + 2))
    return relabel_to_ghost(r * np.exp(2j * math.pi * rng.uniform(size=n + 2)))


def lattice_patch(radius: float = 4.0, seed: int = 0) -> tuple[PointConfig, float]:
    """Unit-spacing triangular lattice in a disk, with the vertex at infinity.

    Points within one unit of the rim are jittered so that the rim is in
    general position; the interior keeps its equilateral faces of
    circumradius ``1/sqrt(3)``, which is returned with the configuration.
    """
    rng = np.random.default_rng(seed)
    w = cmath.exp(1j * math.pi / 3)
    k = int(radius) + 2
    pts = [a + b * w for a in range(-k, k + 1) for b in range(-k, k + 1)
           if abs(a + b * w) <= radius + 1e-9]
    pts = np.array(sorted(pts, key=abs))
    rim = np.abs(pts) > radius - 1
    pts[rim] *= 1 + 0.05 * rng.uniform(size=rim.sum())
    pts[rim] *= np.exp(0.05j * rng.uniform(-1, 1, size=rim.sum()))
    return relabel_to_ghost(pts), 1 / math.sqrt(3)


def random_config(rng: np.random.Generator, n: int, convention: str = "fixed-face"):
    if convention == "infinity":
        return random_infinity(rng, n)
    return random_inside(rng, n)


def random_sl2(rng: np.random.Generator) -> tuple[complex, complex, complex, complex]:
    """Random ``(a, b, c, d)`` with ``ad - bc = 1``."""
    a, b, c = rng.normal(size=3) + 1j * rng.normal(size=3)
    d = (1 + b * c) / a
    return complex(a), complex(b), complex(c), complex(d)


def build(cfg: PointConfig):
    return delaunay_build(cfg)
