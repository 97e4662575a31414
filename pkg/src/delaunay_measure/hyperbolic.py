"""Hyperbolic volumes of ideal tetrahedra and the Kähler prepotential.

Each Delaunay face with circumcircle, lifted to the upper half-space, spans
an ideal tetrahedron whose volume depends only on the face angles. The
prepotential is minus the signed sum of these volumes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli

from .errors import FlipInsideStencil, SingularArgument
from .mesh import (FaceGeom, PointConfig, Triangulation, delaunay_build,
                   face_geometry)

_NTERMS = 30
_B = bernoulli(2 * _NTERMS + 2)
# Clausen series coefficients |B_2k| / (2k (2k+1)!)
_CL2 = np.array([abs(_B[2 * k]) / (2 * k * math.factorial(2 * k + 1))
                 for k in range(1, _NTERMS + 1)])
# dilogarithm series coefficients B_n / (n+1)! in u = -log(1 - z)
_LI2 = np.array([_B[n] / math.factorial(n + 1) for n in range(2 * _NTERMS + 2)])



def _clausen_reduced(theta: float) -> float:
    """Cl2(theta) for theta in [0, pi]."""
    if theta == 0.0:
        return 0.0
    t2 = theta * theta
    s = 0.0
    p = theta * t2
    for c in _CL2:
        term = c * p
        s += term
        if term < 1e-18 * abs(s) + 1e-300:
            break
        p *= t2
    return theta - theta * math.log(theta) + s


def lobachevsky(alpha: float) -> float:
    """Lobachevsky function ``-int_0^alpha log|2 sin t| dt``.

    Odd and ``pi``-periodic; evaluated as half the Clausen function at
    ``2 alpha`` from its Bernoulli-number series, after reducing to
    ``|alpha| <= pi/4`` with ``Л(x + pi/2) = Л(2x)/2 - Л(x)``.
    """
    a = math.fmod(alpha, math.pi)
    if a > math.pi / 2:
        a -= math.pi
    elif a < -math.pi / 2:
        a += math.pi
    if a > math.pi / 4:
        x = a - math.pi / 2
        return 0.5 * _lob_small(2.0 * x) - _lob_small(x)
    if a < -math.pi / 4:
        x = a + math.pi / 2
        return 0.5 * _lob_small(2.0 * x) - _lob_small(x)
    return _lob_small(a)


def _lob_small(a: float) -> float:
    """Л on ``[-pi/2, pi/2]`` straight from the series."""
    if a < 0:
        return -0.5 * _clausen_reduced(-2.0 * a)
    return 0.5 * _clausen_reduced(2.0 * a)


def lobachevsky_prime(alpha: float) -> float:
    """Derivative ``-log|2 sin alpha|``."""
    return -math.log(abs(2.0 * math.sin(alpha)))


MAX_VOLUME = 3.0 * lobachevsky(math.pi / 3)


def _li2_series(z: complex) -> complex:
    u = -cmath.log(1.0 - z)
    u2 = u * u
    s = _LI2[0] * u + _LI2[1] * u2
    p = u * u2
    for n in range(2, _LI2.size, 2):
        term = _LI2[n] * p
        s += term
        if abs(term) < 1e-18 * abs(s):
            break
        p *= u2
    return s


def dilog(z: complex) -> complex:
    """Principal branch of ``Li2(z)``.

    The argument is moved into ``|z| <= 1, Re z <= 1/2`` by the inversion
    and reflection formulas, where a Bernoulli series in ``-log(1 - z)``
    converges quickly.
    """
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(math.pi ** 2 / 6)
    if abs(z) > 1.0:
        lg = cmath.log(-z)
        return -dilog(1.0 / z) - math.pi ** 2 / 6 - 0.5 * lg * lg
    if z.real > 0.5:
        return (-_li2_series(1.0 - z) + math.pi ** 2 / 6
                - cmath.log(z) * cmath.log(1.0 - z))
    return _li2_series(z)


def bloch_wigner(z: complex) -> float:
    """Bloch–Wigner function ``Im Li2(z) + log|z| arg(1 - z)``.

    Evaluated through the three-angle identity, i.e. as the volume of the
    ideal tetrahedron with shape ``z``.

    Raises
    ------
    SingularArgument
        For ``z`` equal to 0 or 1.
    """
    z = complex(z)
    if z == 0 or z == 1:
        raise SingularArgument("Bloch-Wigner function is singular at 0 and 1")
    return (lobachevsky(cmath.phase(z))
            + lobachevsky(cmath.phase(1.0 / (1.0 - z)))
            + lobachevsky(cmath.phase(1.0 - 1.0 / z)))


def bloch_wigner_dilog(z: complex) -> float:
    """Bloch–Wigner function from the dilogarithm (cross-check path)."""
    z = complex(z)
    if z == 0 or z == 1:
        raise SingularArgument("Bloch-Wigner function is singular at 0 and 1")
    return dilog(z).imag + math.log(abs(z)) * cmath.phase(1.0 - z)


def face_volume(g: FaceGeom) -> float:
    """Signed volume ``sum Л(alpha_i)`` of the ideal tetrahedron over a face.

    Faces through infinity have volume zero; clockwise faces have negative
    volume.
    """
    if g.infinite:
        return 0.0
    return sum(lobachevsky(a) for a in g.angles)


def face_volume_points(z1: complex, z2: complex, z3: complex) -> float:
    """Face volume from the cross-ratio shape ``(z3 - z1) / (z2 - z1)``."""
    return bloch_wigner((z3 - z1) / (z2 - z1))


@dataclass(frozen=True)
class Prepotential:
    """Value of the prepotential with its per-face volume table."""

    value: float
    convention: str
    volumes: np.ndarray


def face_volumes(t: Triangulation) -> np.ndarray:
    """Signed volumes of all faces (zero for faces through infinity)."""
    ang = t.face_angles
    out = np.zeros(t.n_faces)
    for f in range(t.n_faces):
        if not t.is_ghost(f):
            out[f] = sum(lobachevsky(a) for a in ang[f])
    return out


def prepotential(t: Triangulation) -> Prepotential:
    """Minus the signed sum of face volumes.

    In the fixed-face convention the clockwise outer face enters with the
    opposite sign, so its (positive) volume is added.
    """
    for f in range(t.n_faces):
        if not t.is_ghost(f):
            face_geometry(t, f)
    vols = face_volumes(t)
    return Prepotential(float(-vols.sum()), t.config.convention, vols)


# ---------------------------------------------------------------------------
# finite-difference Hessian

def _local_prepotential(pts: np.ndarray, faces: np.ndarray) -> float:
    tri = pts[faces]
    total = 0.0
    for z1, z2, z3 in tri:
        for a, b, c in ((z1, z2, z3), (z2, z3, z1), (z3, z1, z2)):
            total += lobachevsky(cmath.phase((c - a) / (b - a)))
    return -total


def _check_stencil(config: PointConfig, t: Triangulation, vertices, step: float):
    key = t.face_key()
    for v in vertices:
        for d in (step, -step, 1j * step, -1j * step):
            pts = np.array(config.points)
            pts[v] += d
            try:
                s = delaunay_build(config.with_points(pts))
            except Exception as exc:
                raise FlipInsideStencil(f"stencil around vertex {v} is degenerate") from exc
            if s.face_key() != key:
                raise FlipInsideStencil(f"triangulation changes when moving vertex {v}")


def _local_faces(t: Triangulation, u: int, v: int) -> np.ndarray:
    fs = [f for f in range(t.n_faces)
          if not t.is_ghost(f) and (u in t.faces[f] or v in t.faces[f])]
    return t.faces[fs]


def _mixed(fun, u: int, v: int, h: float) -> complex:
    """``d^2 / dz_u dz̄_v`` of ``fun`` by central differences with step ``h``."""
    if u == v:
        f0 = fun({})
        lap = (fun({u: h}) + fun({u: -h}) + fun({u: 1j * h}) + fun({u: -1j * h})
               - 4.0 * f0) / (h * h)
        return complex(lap / 4.0)

    def d2(p, q):
        return (fun({u: p, v: q}) - fun({u: p, v: -q})
                - fun({u: -p, v: q}) + fun({u: -p, v: -q})) / (4.0 * h * h)

    xx = d2(h, h)
    yy = d2(1j * h, 1j * h)
    xy = d2(h, 1j * h)
    yx = d2(1j * h, h)
    return 0.25 * complex(xx + yy, xy - yx)


def hessian_fd(config: PointConfig, u: int, v: int, h: float | None = None, *,
               triangulation: Triangulation | None = None,
               check: bool = True) -> complex:
    """Finite-difference estimate of ``d^2 A / dz_u dz̄_v``.

    The combinatorics is frozen at that of ``config`` and only faces that
    contain ``u`` or ``v`` are evaluated. Two step sizes are combined by
    Richardson extrapolation.

    Parameters
    ----------
    h : float, optional
        Base step; default ``1e-3`` times the shortest edge at ``u`` or ``v``.
    check : bool
        Rebuild the triangulation at the largest stencil displacements and
        raise :class:`FlipInsideStencil` if it changes.
    """
    t = triangulation if triangulation is not None else delaunay_build(config)
    inf = config.infinity
    if u == inf or v == inf:
        raise ValueError("vertices must be finite")
    if h is None:
        lens = []
        for w in {u, v}:
            for x in t.neighbors(w):
                if x != inf:
                    lens.append(abs(config.points[x] - config.points[w]))
        h = 1e-3 * min(lens)
    faces = _local_faces(t, u, v)
    if faces.size == 0:
        return 0j
    if check:
        _check_stencil(config, t, {u, v}, 2.0 * h)
    base = np.array(config.points)

    def fun(disp):
        pts = base.copy()
        for w, d in disp.items():
            pts[w] += d
        return _local_prepotential(pts, faces)

    coarse = _mixed(fun, u, v, 2.0 * h)
    fine = _mixed(fun, u, v, h)
    return (4.0 * fine - coarse) / 3.0


def hessian_fd_matrix(config: PointConfig, vertices=None, h: float | None = None,
                      check: bool = True) -> np.ndarray:
    """Matrix of :func:`hessian_fd` over ``vertices`` (default: free ones)."""
    t = delaunay_build(config)
    if vertices is None:
        vertices = config.free
    n = len(vertices)
    out = np.zeros((n, n), dtype=complex)
    if check:
        lens = [abs(config.points[a] - config.points[b]) for a, b in t.edges
                if config.infinity not in (a, b)]
        step = 2e-3 * min(lens) if h is None else 2.0 * h
        _check_stencil(config, t, vertices, step)
    for i, a in enumerate(vertices):
        for j, b in enumerate(vertices):
            out[i, j] = hessian_fd(config, a, b, h, triangulation=t, check=False)
    return out


__all__ = [
    "lobachevsky", "lobachevsky_prime", "dilog", "bloch_wigner",
    "bloch_wigner_dilog", "face_volume", "face_volume_points", "face_volumes",
    "Prepotential", "prepotential", "hessian_fd", "hessian_fd_matrix",
    "MAX_VOLUME",
]
