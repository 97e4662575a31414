"""Delaunay triangulations of point configurations on the Riemann sphere.

A configuration has ``M = N + 3`` vertices, three of which are fixed. In
the *fixed-face* convention every vertex is a finite point of the plane and
the triangulation is the Delaunay triangulation of the sphere obtained by
adding the outer face(s), which appear clockwise in the plane. In the
*infinity* convention one of the fixed vertices is the point at infinity;
its faces are the "ghost" faces attached to the convex hull edges.

Faces are stored as vertex triples positively oriented on the sphere.
Half-edge ``h = 3 f + k`` runs from ``faces[f, k]`` to ``faces[f, k + 1]``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (CollinearFace, DegenerateInput, DuplicatePoint,
                     PoleHit)
from .predicates import cap_margin, in_cap, orient

TOL_GEOM = 1e-12
FLIP_BOUNDARY = 1e-9


@dataclass(frozen=True, eq=False)
class PointConfig:
    """Ordered planar points with three fixed vertices.

    Parameters
    ----------
    points : sequence of complex
        Plane positions. The entry at ``infinity`` (if any) is ignored.
    fixed : tuple of int
        The three fixed vertex indices.
    infinity : int, optional
        Index of the vertex placed at infinity; must be one of ``fixed``.
    """

    points: np.ndarray
    fixed: tuple[int, int, int]
    infinity: int | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex).reshape(-1)
        fixed = tuple(int(i) for i in self.fixed)
        m = pts.size
        if m < 3:
            raise ValueError("a configuration needs at least three points")
        if len(fixed) != 3 or len(set(fixed)) != 3:
            raise ValueError("exactly three distinct fixed vertices are required")
        if any(i < 0 or i >= m for i in fixed):
            raise ValueError("fixed index out of range")
        inf = self.infinity
        if inf is not None:
            inf = int(inf)
            if inf not in fixed:
                raise ValueError("the vertex at infinity must be a fixed vertex")
            pts[inf] = complex(math.nan, math.nan)
        finite = np.delete(pts, inf) if inf is not None else pts
        if not np.all(np.isfinite(finite)):
            raise ValueError("finite points must have finite coordinates")
        # exact duplicates are a contract violation, not a tolerance issue
        if len(set(finite.tolist())) != finite.size:
            raise DuplicatePoint("configuration contains repeated points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(self, "infinity", inf)

    @property
    def n_points(self) -> int:
        return self.points.size

    @property
    def n_free(self) -> int:
        return self.points.size - 3

    @property
    def free(self) -> tuple[int, ...]:
        """Free vertex indices in ascending order."""
        fx = set(self.fixed)
        return tuple(i for i in range(self.points.size) if i not in fx)

    @property
    def convention(self) -> str:
        return "fixed-face" if self.infinity is None else "infinity"

    def sphere_points(self) -> list:
        """Points as Python complex numbers, with ``None`` at infinity."""
        out = [complex(p) for p in self.points]
        if self.infinity is not None:
            out[self.infinity] = None
        return out

    def finite_points(self) -> np.ndarray:
        if self.infinity is None:
            return self.points
        return np.delete(self.points, self.infinity)

    @cached_property
    def scale(self) -> float:
        """Bounding-box scale of the finite points (at least 1e-300)."""
        p = self.finite_points()
        span = max(np.ptp(p.real), np.ptp(p.imag))
        return max(float(span), 1e-300)

    def min_distance(self) -> float:
        p = self.finite_points()
        d = np.abs(p[:, None] - p[None, :])
        d[np.diag_indices_from(d)] = np.inf
        return float(d.min())

    def with_points(self, points) -> "PointConfig":
        return PointConfig(points, self.fixed, self.infinity)

    # -- JSON ---------------------------------------------------------------
    def to_dict(self) -> dict:
        pts = []
        for i, p in enumerate(self.points):
            pts.append(None if i == self.infinity else [p.real, p.imag])
        out = {"points": pts, "fixed": list(self.fixed)}
        if self.infinity is not None:
            out["infinity"] = self.infinity
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PointConfig":
        inf = data.get("infinity")
        pts = []
        for i, p in enumerate(data["points"]):
            if i == inf or p is None:
                pts.append(complex(math.nan, math.nan))
            else:
                pts.append(complex(float(p[0]), float(p[1])))
        fixed = data.get("fixed")
        if fixed is None:
            raise ValueError("missing 'fixed' entry")
        return cls(np.array(pts), tuple(fixed), inf)

    @classmethod
    def from_json(cls, text: str) -> "PointConfig":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class FaceGeom:
    """Circumcircle, signed area and oriented corner angles of one face.

    Faces through infinity have ``infinite=True``, ``radius=inf`` and
    ``area=0``; only the corner at infinity has a defined angle (zero).
    ``points`` holds the three corner positions (``nan`` at infinity).
    """

    circumcenter: complex
    radius: float
    area: float
    angles: tuple[float, float, float]
    infinite: bool = False
    points: tuple[complex, complex, complex] | None = None


@dataclass
class DelaunayReport:
    """Result of :func:`validate_delaunay`.

    ``violations`` lists ``(edge, margin)`` pairs with margin below
    ``-tol``; ``flip_boundary`` lists edges whose margin magnitude is
    below the flip-boundary threshold.
    """

    violations: list = field(default_factory=list)
    flip_boundary: list = field(default_factory=list)
    min_margin: float = math.inf
    margins: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


class Triangulation:
    """Immutable triangulated sphere over a :class:`PointConfig`.

    Parameters
    ----------
    config : PointConfig
    faces : array_like of shape (F, 3)
        Vertex triples, positively oriented on the sphere.
    """

    def __init__(self, config: PointConfig, faces):
        faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
        self.config = config
        self.faces = faces
        self.faces.setflags(write=False)
        nf = faces.shape[0]
        origin = faces.reshape(-1)
        dest = faces[:, [1, 2, 0]].reshape(-1)
        lookup = {(int(a), int(b)): h for h, (a, b) in enumerate(zip(origin, dest))}
        if len(lookup) != 3 * nf:
            raise ValueError("repeated directed edge: not an oriented surface")
        twin = np.empty(3 * nf, dtype=np.int64)
        for (a, b), h in lookup.items():
            try:
                twin[h] = lookup[(b, a)]
            except KeyError:
                raise ValueError("open boundary: not a closed surface") from None
        pairs = sorted({(min(a, b), max(a, b)) for (a, b) in lookup})
        self.edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
        self.edge_index = {p: i for i, p in enumerate(pairs)}
        he_edge = np.array([self.edge_index[(min(a, b), max(a, b))]
                            for a, b in zip(origin.tolist(), dest.tolist())],
                           dtype=np.int64)
        self.twin = twin
        self.he_origin = origin
        self.he_dest = dest
        self.he_edge = he_edge
        # half-edge of each edge running from the smaller to the larger index
        self.edge_he = np.empty(len(pairs), dtype=np.int64)
        for h in range(3 * nf):
            if origin[h] < dest[h]:
                self.edge_he[he_edge[h]] = h
        self._out_he = {}
        for h in range(3 * nf):
            self._out_he.setdefault(int(origin[h]), h)
        self._lookup = lookup

    # -- sizes -----------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return self.config.n_points

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_faces(self) -> int:
        return self.faces.shape[0]

    @property
    def n_free(self) -> int:
        return self.config.n_free

    @property
    def infinity(self) -> int | None:
        return self.config.infinity

    @cached_property
    def sphere_points(self) -> list:
        return self.config.sphere_points()

    @cached_property
    def z(self) -> np.ndarray:
        """Vertex coordinates; ``nan`` at the vertex at infinity."""
        return self.config.points

    # -- half-edge navigation -------------------------------------------
    @staticmethod
    def next(h: int) -> int:
        return h - h % 3 + (h + 1) % 3

    @staticmethod
    def prev(h: int) -> int:
        return h - h % 3 + (h + 2) % 3

    @staticmethod
    def face_of(h: int) -> int:
        return h // 3

    def half_edge(self, a: int, b: int) -> int:
        """Half-edge from ``a`` to ``b``."""
        return self._lookup[(a, b)]

    def apex(self, h: int) -> int:
        """Vertex opposite half-edge ``h`` in its face."""
        return int(self.he_origin[self.prev(h)])

    def vertex_star(self, v: int) -> list[int]:
        """Outgoing half-edges of ``v`` in counterclockwise (sphere) order."""
        h0 = self._out_he[v]
        out = [h0]
        h = int(self.twin[self.prev(h0)])
        while h != h0:
            out.append(h)
            h = int(self.twin[self.prev(h)])
        return out

    def neighbors(self, v: int) -> list[int]:
        return [int(self.he_dest[h]) for h in self.vertex_star(v)]

    def incident_faces(self, v: int) -> list[int]:
        return [h // 3 for h in self.vertex_star(v)]

    def edge_faces(self, e: int) -> tuple[int, int]:
        """Faces left of the (min, max) and (max, min) directions of ``e``."""
        h = int(self.edge_he[e])
        return h // 3, int(self.twin[h]) // 3

    def face_edges(self, f: int) -> tuple[int, int, int]:
        """Edges of face ``f`` in counterclockwise order, starting at ``faces[f,0]``."""
        return tuple(int(e) for e in self.he_edge[3 * f:3 * f + 3])

    def is_ghost(self, f: int) -> bool:
        inf = self.config.infinity
        return inf is not None and inf in self.faces[f]

    def find_face(self, triple: Iterable[int]) -> int | None:
        """Index of the face with vertex set ``triple`` (any orientation)."""
        s = set(int(i) for i in triple)
        for f, tri in enumerate(self.faces.tolist()):
            if set(tri) == s:
                return f
        return None

    def face_key(self) -> frozenset:
        """Orientation-aware combinatorial fingerprint of the face set."""
        out = set()
        for a, b, c in self.faces.tolist():
            k = min((a, b, c), (b, c, a), (c, a, b))
            out.add(k)
        return frozenset(out)

    # -- geometry ---------------------------------------------------------
    @cached_property
    def face_angles(self) -> np.ndarray:
        """Oriented corner angles, shape (F, 3).

        The angle at corner ``k`` is ``Arg((z[k+2] - z[k]) / (z[k+1] - z[k]))``,
        which lies in ``(0, pi)`` for counterclockwise faces and in
        ``(-pi, 0)`` for clockwise ones. In a face through infinity the corner
        at infinity has angle 0 and the finite corners are ``nan``.
        """
        z = self.z
        tri = z[self.faces]
        out = np.empty(tri.shape)
        for k in range(3):
            num = tri[:, (k + 2) % 3] - tri[:, k]
            den = tri[:, (k + 1) % 3] - tri[:, k]
            with np.errstate(invalid="ignore"):
                out[:, k] = np.angle(num / den)
        inf = self.config.infinity
        if inf is not None:
            ghost = np.nonzero((self.faces == inf).any(axis=1))[0]
            for f in ghost:
                # the corner at infinity subtends the hull edge under angle 0;
                # the finite corners of a ghost face carry no angle
                k = int(np.nonzero(self.faces[f] == inf)[0][0])
                out[f, :] = math.nan
                out[f, k] = 0.0
        return out

    @cached_property
    def _circ(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        z = self.z
        tri = z[self.faces]
        z1, z2, z3 = tri[:, 0], tri[:, 1], tri[:, 2]
        u = z2 - z1
        v = z3 - z1
        area = (np.conj(u) * v).imag / 2.0
        with np.errstate(invalid="ignore", divide="ignore"):
            w = z1 + (np.abs(u) ** 2 * v - np.abs(v) ** 2 * u) / (4j * area)
            r = np.abs(z1 - w)
        inf = self.config.infinity
        if inf is not None:
            ghost = (self.faces == inf).any(axis=1)
            w[ghost] = complex(math.nan, math.nan)
            r[ghost] = math.inf
            area[ghost] = 0.0
        return w, r, area

    @property
    def circumcenters(self) -> np.ndarray:
        return self._circ[0]

    @property
    def circumradii(self) -> np.ndarray:
        return self._circ[1]

    @property
    def areas(self) -> np.ndarray:
        """Signed areas; negative for faces clockwise in the plane."""
        return self._circ[2]

    @cached_property
    def theta(self) -> np.ndarray:
        """Edge angles ``theta(e)`` in global edge order."""
        return np.array([_theta_from_cross(self, e) for e in range(self.n_edges)])

    @cached_property
    def theta_star(self) -> np.ndarray:
        return math.pi - self.theta

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "vertices": list(range(self.n_vertices)),
            "edges": self.edges.tolist(),
            "faces": self.faces.tolist(),
            "theta": self.theta.tolist(),
        }


# ---------------------------------------------------------------------------
# construction

def _initial_triple(pts: list) -> tuple[int, int, int]:
    finite = [i for i, p in enumerate(pts) if p is not None]
    inf = [i for i, p in enumerate(pts) if p is None]
    a, b = finite[0], finite[1]
    for c in finite[2:]:
        if orient(pts[a], pts[b], pts[c]) != 0.0:
            return a, b, c
    if inf:
        return a, b, inf[0]
    raise DegenerateInput("all points are collinear")


def _bowyer_watson(pts: list) -> list[tuple[int, int, int]]:
    """Delaunay triangulation of the sphere by cavity re-triangulation."""
    a, b, c = _initial_triple(pts)
    faces: dict[int, tuple[int, int, int]] = {0: (a, b, c), 1: (a, c, b)}
    he: dict[tuple[int, int], int] = {}
    for fid, (x, y, w) in faces.items():
        he[(x, y)] = he[(y, w)] = he[(w, x)] = fid
    next_id = 2
    done = {a, b, c}
    order = [i for i, p in enumerate(pts) if p is not None and i not in done]
    order += [i for i, p in enumerate(pts) if p is None and i not in done]
    for p in order:
        zp = pts[p]
        conflict = {fid for fid, (x, y, w) in faces.items()
                    if in_cap(pts[x], pts[y], pts[w], zp) > 0}
        if not conflict:
            raise DegenerateInput(f"point {p} lies on every nearby circumcircle")
        boundary = []
        for fid in conflict:
            x, y, w = faces[fid]
            for s, t in ((x, y), (y, w), (w, x)):
                if he[(t, s)] not in conflict:
                    boundary.append((s, t))
        starts = {s for s, _ in boundary}
        if len(boundary) != len(conflict) + 2 or len(starts) != len(boundary):
            raise DegenerateInput("insertion cavity is not a disk")
        for fid in conflict:
            x, y, w = faces.pop(fid)
            for s, t in ((x, y), (y, w), (w, x)):
                del he[(s, t)]
        for s, t in boundary:
            faces[next_id] = (s, t, p)
            he[(s, t)] = he[(t, p)] = he[(p, s)] = next_id
            next_id += 1
    out = []
    for x, y, w in faces.values():
        out.append(min((x, y, w), (y, w, x), (w, x, y)))
    out.sort()
    return out


def edge_margins(t: Triangulation) -> np.ndarray:
    """Signed local Delaunay margin (a length) of every edge."""
    pts = t.sphere_points
    out = np.empty(t.n_edges)
    for e in range(t.n_edges):
        h = int(t.edge_he[e])
        a, b = int(t.he_origin[h]), int(t.he_dest[h])
        c = t.apex(h)
        d = t.apex(int(t.twin[h]))
        if c == d:
            # two faces glued along all three edges (no free vertex)
            out[e] = math.inf
            continue
        out[e] = cap_margin(pts[a], pts[b], pts[c], pts[d])
    return out


def delaunay_build(config: PointConfig, tol_geom: float = TOL_GEOM) -> Triangulation:
    """Build the Delaunay triangulation of ``config`` on the sphere.

    Parameters
    ----------
    config : PointConfig
    tol_geom : float
        Relative geometric tolerance; multiplied by the bounding-box scale.

    Raises
    ------
    DuplicatePoint
        Two points closer than the tolerance.
    DegenerateInput
        Four cocircular points (or three collinear points on a face) within
        the tolerance, where the triangulation is not unique.
    """
    tol = tol_geom * config.scale
    if config.min_distance() <= tol:
        raise DuplicatePoint("two points coincide within the geometric tolerance")
    pts = config.sphere_points()
    t = Triangulation(config, _bowyer_watson(pts))
    # flat faces first: their circumcircle is a line and edge margins are meaningless
    for f, (a, b, c) in enumerate(t.faces.tolist()):
        if t.is_ghost(f):
            continue
        za, zb, zc = pts[a], pts[b], pts[c]
        longest = max(abs(zb - za), abs(zc - zb), abs(za - zc))
        if abs(orient(za, zb, zc)) / longest < tol:
            raise DegenerateInput(f"face {(a, b, c)} is collinear within tolerance")
    margins = edge_margins(t)
    bad = np.nonzero(np.abs(margins) < tol)[0]
    if bad.size:
        e = int(bad[0])
        raise DegenerateInput(
            f"edge {tuple(t.edges[e])} is at a flip boundary (margin {margins[e]:.3e})")
    if margins.min() < 0:
        raise RuntimeError("construction produced a non-Delaunay edge")
    if config.infinity is not None:
        for f in range(t.n_faces):
            if not t.is_ghost(f) and t.areas[f] <= 0:
                raise RuntimeError("finite face with non-positive orientation")
    return t


def flip_edge(t: Triangulation, e: int) -> Triangulation:
    """Return the triangulation with edge ``e`` replaced by the other diagonal."""
    h = int(t.edge_he[e])
    g = int(t.twin[h])
    a, b = int(t.he_origin[h]), int(t.he_dest[h])
    c, d = t.apex(h), t.apex(g)
    if c == d or (min(c, d), max(c, d)) in t.edge_index:
        raise ValueError("edge cannot be flipped")
    faces = [tuple(f) for i, f in enumerate(t.faces.tolist()) if i not in (h // 3, g // 3)]
    faces += [(c, a, d), (d, b, c)]
    return Triangulation(t.config, faces)


# ---------------------------------------------------------------------------
# per-face and per-edge quantities

def face_geometry(t: Triangulation, f: int, tol_geom: float = TOL_GEOM) -> FaceGeom:
    """Circumcircle, signed area and oriented angles of face ``f``.

    Raises
    ------
    CollinearFace
        If the signed area is below ``tol_geom * scale**2`` in magnitude.
    """
    angles = tuple(float(x) for x in t.face_angles[f])
    pts = tuple(complex(x) for x in t.z[t.faces[f]])
    if t.is_ghost(f):
        return FaceGeom(complex(math.nan, math.nan), math.inf, 0.0, angles, True, pts)
    area = float(t.areas[f])
    if abs(area) < tol_geom * t.config.scale ** 2:
        raise CollinearFace(f"face {f} is degenerate (area {area:.3e})")
    return FaceGeom(complex(t.circumcenters[f]), float(t.circumradii[f]), area, angles,
                    False, pts)


def triangle_geometry(z1: complex, z2: complex, z3: complex,
                      tol_geom: float = TOL_GEOM) -> FaceGeom:
    """:class:`FaceGeom` of a free-standing triangle ``(z1, z2, z3)``.

    Raises
    ------
    CollinearFace
        If the triangle is flat relative to its size.
    """
    z = [complex(z1), complex(z2), complex(z3)]
    u, v = z[1] - z[0], z[2] - z[0]
    area = (u.conjugate() * v).imag / 2.0
    size = max(abs(u), abs(v), abs(z[2] - z[1]))
    if size == 0 or abs(area) < tol_geom * size ** 2:
        raise CollinearFace(f"triangle is degenerate (area {area:.3e})")
    w = z[0] + (abs(u) ** 2 * v - abs(v) ** 2 * u) / (4j * area)
    angles = tuple(cmath.phase((z[(k + 2) % 3] - z[k]) / (z[(k + 1) % 3] - z[k]))
                   for k in range(3))
    return FaceGeom(w, abs(z[0] - w), area, angles, False, tuple(z))


def _theta_from_cross(t: Triangulation, e: int) -> float:
    pts = t.sphere_points
    h = int(t.edge_he[e])
    a, b = pts[int(t.he_origin[h])], pts[int(t.he_dest[h])]
    c = pts[t.apex(h)]
    d = pts[t.apex(int(t.twin[h]))]
    num = 1.0 + 0j
    den = 1.0 + 0j
    # cross ratio (b-c)(a-d) / ((a-c)(b-d)); factors containing infinity cancel
    if b is not None and c is not None:
        num *= b - c
    if a is not None and d is not None:
        num *= a - d
    if a is not None and c is not None:
        den *= a - c
    if b is not None and d is not None:
        den *= b - d
    ts = cmath.phase(num / den)
    if ts < 0.0:
        ts += 2.0 * math.pi
    th = math.pi - ts
    if -1e-12 < th < 0.0:
        th = 0.0
    return th


def edge_theta(t: Triangulation, e: int) -> float:
    """Intersection angle ``theta(e) = pi - theta*(e)`` of the two face circles."""
    return float(t.theta[e])


def vertex_angle_sum(t: Triangulation, v: int) -> float:
    """Sum of ``theta`` over the edges incident to ``v``."""
    return float(sum(t.theta[t.he_edge[h]] for h in t.vertex_star(v)))


def defect_angle(t: Triangulation, f: int, *, via: str = "theta") -> float:
    """Defect ``Theta_f`` of face ``f``.

    ``via="theta"`` sums the three neighbouring edge angles minus ``pi``;
    ``via="angles"`` uses ``pi`` minus the three angles subtended across
    the edges in the neighbouring faces. The two agree for counterclockwise
    faces; for the clockwise outer faces of the fixed-face convention they
    agree modulo ``2 pi``.
    """
    if via == "theta":
        return float(sum(t.theta[e] for e in t.face_edges(f)) - math.pi)
    if via != "angles":
        raise ValueError("via must be 'theta' or 'angles'")
    total = 0.0
    for k in range(3):
        g = int(t.twin[3 * f + k])
        gf, gk = g // 3, g % 3
        total += t.face_angles[gf, (gk + 2) % 3]
    return float(math.pi - total)


# ---------------------------------------------------------------------------
# transformations and validation

def mobius_apply(config: PointConfig, a: complex, b: complex, c: complex, d: complex,
                 *, send_to_infinity: bool = False) -> PointConfig:
    """Image of ``config`` under ``z -> (a z + b) / (c z + d)``.

    Parameters
    ----------
    send_to_infinity : bool
        Allow one finite point to map to infinity; it becomes the vertex at
        infinity of the result (which must have none already).

    Raises
    ------
    PoleHit
        If a point maps to infinity and this is not allowed.
    """
    if a * d - b * c == 0:
        raise ValueError("singular Moebius map")
    pts = np.array(config.points, dtype=complex)
    inf = config.infinity
    scale = config.scale
    new_inf = None
    out = np.empty_like(pts)
    for i, z in enumerate(pts):
        if i == inf:
            if c == 0:
                new_inf = i
                out[i] = complex(math.nan, math.nan)
            else:
                out[i] = a / c
            continue
        den = c * z + d
        if abs(den) <= 1e-14 * max(abs(c) * scale, abs(d), 1.0):
            if not send_to_infinity or new_inf is not None:
                raise PoleHit(f"point {i} is sent to infinity")
            new_inf = i
            out[i] = complex(math.nan, math.nan)
        else:
            out[i] = (a * z + b) / den
    if new_inf is not None and new_inf not in config.fixed:
        raise PoleHit("only a fixed vertex may be sent to infinity")
    return PointConfig(out, config.fixed, new_inf)


def validate_delaunay(t: Triangulation, tol: float | None = None,
                      flip_tol: float = FLIP_BOUNDARY) -> DelaunayReport:
    """Check the empty-circle property of every edge.

    Parameters
    ----------
    tol : float, optional
        Absolute tolerance for a violation, default ``1e-12 * scale``.
    flip_tol : float
        Relative threshold below which an edge is reported as lying on a
        flip boundary.
    """
    scale = t.config.scale
    if tol is None:
        tol = TOL_GEOM * scale
    margins = edge_margins(t)
    rep = DelaunayReport(margins=margins)
    rep.min_margin = float(margins.min()) if margins.size else math.inf
    for e, m in enumerate(margins.tolist()):
        if m < -tol:
            rep.violations.append((e, m))
        if abs(m) < flip_tol * scale:
            rep.flip_boundary.append((e, m))
    return rep


def triangulations_equal(s: Triangulation, t: Triangulation) -> bool:
    return s.face_key() == t.face_key()


def config_from_points(points: Sequence[complex], fixed=(0, 1, 2),
                       infinity: int | None = None) -> PointConfig:
    """Convenience constructor accepting any sequence of complex numbers."""
    return PointConfig(np.asarray(points, dtype=complex), tuple(fixed), infinity)
