"""Incidence operators, the angle Jacobian and the Kähler matrix.

Matrix rows are vertices and columns are edges in the global edge order
of the triangulation. ``A[v, e] = 1 / (z_v - z_w)`` for ``e = (v, w)``
(zero when ``e`` touches the vertex at infinity) and ``E[e, e'] = +1``
when ``e'`` follows ``e`` clockwise inside a common face.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .combinatorics import EdgeBasis, incidence_matrix
from .errors import CollinearFace
from .exact import bareiss_det
from .mesh import FaceGeom, Triangulation


def edge_form(t: Triangulation) -> np.ndarray:
    """Antisymmetric integer edge succession matrix ``E``.

    ``E[e, e'] = +1`` when ``e'`` follows ``e`` clockwise inside a common
    face and ``-1`` when it follows counterclockwise (summed over faces).
    """
    n = t.n_edges
    out = np.zeros((n, n), dtype=np.int64)
    fe = t.he_edge.reshape(-1, 3)
    for a, b, c in fe.tolist():
        for x, y in ((a, b), (b, c), (c, a)):
            out[x, y] -= 1
            out[y, x] += 1
    return out


def inverse_difference(t: Triangulation) -> np.ndarray:
    """Matrix ``A`` with ``A[v, e] = 1 / (z_v - z_w)`` for ``e = (v, w)``."""
    z = t.z
    a = np.zeros((t.n_vertices, t.n_edges), dtype=complex)
    u, w = t.edges[:, 0], t.edges[:, 1]
    inf = t.config.infinity
    ok = np.ones(t.n_edges, dtype=bool) if inf is None else (u != inf) & (w != inf)
    idx = np.nonzero(ok)[0]
    d = z[u[idx]] - z[w[idx]]
    a[u[idx], idx] = 1.0 / d
    a[w[idx], idx] = -1.0 / d
    return a


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """All incidence and derived operators of one triangulation and basis.

    Attributes
    ----------
    R, E : ndarray of int64
        Vertex-edge incidence and edge succession form.
    A, Abar : ndarray of complex
        Inverse differences and their conjugates.
    J, Jbar : ndarray of complex
        ``(i/2) A E`` and ``(-i/2) Ā E``, so that
        ``dtheta = J^T dz + Jbar^T dz̄``.
    D : ndarray of complex
        Kähler matrix ``(1/4i) A E A^†``.
    """

    triangulation: Triangulation
    basis: EdgeBasis | None
    R: np.ndarray
    E: np.ndarray
    A: np.ndarray

    @property
    def Abar(self) -> np.ndarray:
        return np.conj(self.A)

    @cached_property
    def J(self) -> np.ndarray:
        return 0.5j * self.A @ self.E

    @cached_property
    def Jbar(self) -> np.ndarray:
        return -0.5j * self.Abar @ self.E

    @cached_property
    def D(self) -> np.ndarray:
        return (self.A @ self.E @ self.A.conj().T) / 4j

    @property
    def M0(self) -> np.ndarray:
        return self.basis.M0

    @property
    def P0(self) -> np.ndarray:
        return self.basis.P0

    @cached_property
    def E0(self) -> np.ndarray:
        idx = list(self.basis.edges)
        return self.E[np.ix_(idx, idx)]

    # -- exact identities ------------------------------------------------
    def re_residual(self) -> int:
        """Largest entry of ``R E`` (exactly zero)."""
        return int(np.abs(self.R @ self.E).max())

    def det_E0(self) -> int:
        return bareiss_det(self.E0)

    def factorization_residual(self) -> int:
        """Number of entries where ``E != M0 E0 M0^T`` in rational arithmetic."""
        m = self.M0
        prod = m.dot(self.E0.astype(object)).dot(m.T)
        return int(np.count_nonzero(prod != self.E.astype(object)))

    def complement_det(self) -> int:
        return self.basis.complement_det()

    def aea_residual(self) -> float:
        """``max |A E A^T|`` (vanishes identically)."""
        return float(np.abs(self.A @ self.E @ self.A.T).max())


def assemble_operators(t: Triangulation, basis: EdgeBasis | None = None) -> OperatorSet:
    """Build ``R, E, A`` for ``t``; derived operators are computed lazily."""
    return OperatorSet(t, basis, incidence_matrix(t), edge_form(t), inverse_difference(t))


def jacobian(ops: OperatorSet) -> tuple[np.ndarray, np.ndarray]:
    """The pair ``(J, J̄)``; entry ``J[v, e] = d theta_e / d z_v``."""
    return ops.J, ops.Jbar


def kahler_face(g: FaceGeom) -> np.ndarray:
    """Contribution ``D(f)`` of one face, from its oriented angles and radius.

    Raises
    ------
    CollinearFace
        If the face is flat.
    """
    if g.infinite:
        return np.zeros((3, 3), dtype=complex)
    if not np.isfinite(g.radius) or g.area == 0:
        raise CollinearFace("flat face has no Kähler contribution")
    c1, c2, c3 = (1.0 / np.tan(a) for a in g.angles)
    m = np.array([
        [c2 + c3, -c3 - 1j, -c2 + 1j],
        [-c3 + 1j, c3 + c1, -c1 - 1j],
        [-c2 - 1j, -c1 + 1j, c1 + c2],
    ])
    return m / (8.0 * g.radius ** 2)


def kahler_face_arrays(t: Triangulation) -> np.ndarray:
    """``D(f)`` for all faces at once, shape (F, 3, 3); zero for ghost faces."""
    ang = t.face_angles
    r2 = t.circumradii ** 2
    out = np.zeros((t.n_faces, 3, 3), dtype=complex)
    live = np.isfinite(r2)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot = 1.0 / np.tan(ang[live])
    c1, c2, c3 = cot[:, 0], cot[:, 1], cot[:, 2]
    s = 1.0 / (8.0 * r2[live])
    blk = np.empty((c1.size, 3, 3), dtype=complex)
    blk[:, 0, 0] = c2 + c3
    blk[:, 1, 1] = c3 + c1
    blk[:, 2, 2] = c1 + c2
    blk[:, 0, 1] = -c3 - 1j
    blk[:, 1, 0] = -c3 + 1j
    blk[:, 1, 2] = -c1 - 1j
    blk[:, 2, 1] = -c1 + 1j
    blk[:, 2, 0] = -c2 - 1j
    blk[:, 0, 2] = -c2 + 1j
    out[live] = blk * s[:, None, None]
    return out


def kahler_assemble(t: Triangulation, route: str = "faces") -> np.ndarray:
    """Kähler matrix over all vertices.

    Parameters
    ----------
    route : {"faces", "aea"}
        Sum of face contributions, or ``(1/4i) A E A^†``.
    """
    if route == "aea":
        a = inverse_difference(t)
        return (a @ edge_form(t) @ a.conj().T) / 4j
    if route != "faces":
        raise ValueError("route must be 'faces' or 'aea'")
    blocks = kahler_face_arrays(t)
    d = np.zeros((t.n_vertices, t.n_vertices), dtype=complex)
    f = t.faces
    for i in range(3):
        for j in range(3):
            np.add.at(d, (f[:, i], f[:, j]), blocks[:, i, j])
    return d


def is_psd(d: np.ndarray, tol: float = 1e-10) -> bool:
    """Hermitian with eigenvalues above ``-tol * trace``."""
    if not np.allclose(d, d.conj().T, atol=1e-12 * max(1.0, np.abs(d).max())):
        return False
    w = np.linalg.eigvalsh(d)
    return bool(w.min() > -tol * abs(np.trace(d).real))


def null_dimension(d: np.ndarray, rel: float = 1e-9) -> int:
    w = np.linalg.eigvalsh(d)
    return int(np.sum(np.abs(w) <= rel * np.abs(w).max()))


def cotangent_laplacian(t: Triangulation) -> np.ndarray:
    """Cotangent Laplacian ``L[u, v] = (cot a + cot a') / 2``, rows summing to zero.

    Cotangents come from edge lengths (law of cosines), independently of
    the angle machinery; faces through infinity are skipped.
    """
    z = t.z
    n = t.n_vertices
    lap = np.zeros((n, n))
    for f, tri in enumerate(t.faces.tolist()):
        if t.is_ghost(f):
            continue
        for k in range(3):
            a, b, c = tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]
            # angle at c, opposite edge (a, b)
            la2 = abs(z[b] - z[c]) ** 2
            lb2 = abs(z[a] - z[c]) ** 2
            lc2 = abs(z[a] - z[b]) ** 2
            area = abs(((z[b] - z[a]).conjugate() * (z[c] - z[a])).imag) / 2.0
            cot = (la2 + lb2 - lc2) / (4.0 * area)
            lap[a, b] += cot / 2.0
            lap[b, a] += cot / 2.0
            lap[a, a] -= cot / 2.0
            lap[b, b] -= cot / 2.0
    return lap


def zero_mode_residuals(t: Triangulation, d: np.ndarray | None = None) -> np.ndarray:
    """``max |psi_a D|`` for the rows ``psi_a = z**(a-1)``, ``a = 1, 2, 3``.

    Only finite vertices enter; in the infinity convention the row and
    column of the vertex at infinity are dropped. Relative to ``max |D|``.
    """
    d = kahler_assemble(t) if d is None else d
    keep = np.array([v for v in range(t.n_vertices) if v != t.config.infinity])
    sub = d[np.ix_(keep, keep)]
    z = t.z[keep]
    scale = np.abs(sub).max()
    return np.array([np.abs((z ** a) @ sub).max() / scale for a in range(3)])


def face_quadratic(g: FaceGeom) -> complex:
    """``sum_ij z_i² D_ij̄(f) conj(z_j)²``; equals the signed area of the face."""
    z = np.asarray(g.points, dtype=complex)
    return complex((z ** 2) @ kahler_face(g) @ np.conj(z) ** 2)
