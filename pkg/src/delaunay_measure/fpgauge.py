"""Discrete complex derivatives and the gradient form of the Kähler matrix.

For a function on the vertices, interpolated linearly inside each face,
``∇`` and ``∇̄`` are its (constant) ``∂_z`` and ``∂_z̄`` derivatives on that
face. The face contribution to the Kähler form factors through them as
``Φ · D(f) · Ψ̄ = (Area / R²) ∇̄Φ ∇Ψ̄``, so ``D = ∇̄ᵀ (Area / R²) ∇``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollinearFace
from .mesh import FaceGeom, Triangulation
from .operators import kahler_face


def _corners(g: FaceGeom) -> np.ndarray:
    if g.infinite or g.points is None:
        raise CollinearFace("derivatives need a finite face with known corners")
    if g.area == 0 or not np.isfinite(g.radius):
        raise CollinearFace("flat face has no derivative")
    return np.asarray(g.points, dtype=complex)


def _stencils(z: np.ndarray, area) -> tuple[np.ndarray, np.ndarray]:
    """Weights of ``∇`` and ``∇̄`` on the corners; ``z`` has shape (..., 3)."""
    cyc = np.roll(z, -1, axis=-1) - np.roll(z, 1, axis=-1)  # z[k+1] - z[k-1]
    a = np.asarray(area)[..., None]
    nab = -np.conj(cyc) / (4j * a)
    nabb = cyc / (4j * a)
    return nab, nabb


def gradient_ops(g: FaceGeom, phi) -> tuple[complex, complex]:
    """``(∇Φ(f), ∇̄Φ(f))`` from the values of ``Φ`` at the three corners.

    Exact for affine ``Φ = a + b z + c z̄``, which gives ``(b, c)``.

    Raises
    ------
    CollinearFace
        For a flat face or a face through infinity.
    """
    z = _corners(g)
    nab, nabb = _stencils(z, g.area)
    phi = np.asarray(phi, dtype=complex)
    return complex(nab @ phi), complex(nabb @ phi)


def face_contraction(g: FaceGeom, phi, psi) -> complex:
    """``sum_ij Φ_i D_ij̄(f) conj(Ψ_j)`` with the angle form of ``D(f)``."""
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    return complex(phi @ kahler_face(g) @ np.conj(psi))


def fp_pairing(g: FaceGeom, phi, psi) -> complex:
    """``(Area / R²) ∇̄Φ ∇Ψ̄`` on one face.

    Equal to :func:`face_contraction` for every pair of vertex functions.
    """
    _, nabb_phi = gradient_ops(g, phi)
    nab_psibar, _ = gradient_ops(g, np.conj(np.asarray(psi, dtype=complex)))
    return g.area / g.radius ** 2 * nabb_phi * nab_psibar


def gradient_matrices(t: Triangulation) -> tuple[np.ndarray, np.ndarray]:
    """Face × vertex matrices of ``∇`` and ``∇̄``; rows of ghost faces are zero."""
    live = np.array([not t.is_ghost(f) for f in range(t.n_faces)], dtype=bool)
    g = np.zeros((t.n_faces, t.n_vertices), dtype=complex)
    gb = np.zeros_like(g)
    faces = t.faces[live]
    nab, nabb = _stencils(t.z[faces], t.areas[live])
    rows = np.nonzero(live)[0]
    for k in range(3):
        np.add.at(g, (rows, faces[:, k]), nab[:, k])
        np.add.at(gb, (rows, faces[:, k]), nabb[:, k])
    return g, gb


def fp_operator(t: Triangulation) -> np.ndarray:
    """``∇̄ᵀ diag(Area / R²) ∇`` over all vertices.

    Entry ``[u, v]`` pairs ``Φ = δ_u`` with ``Ψ = δ_v``; the result coincides
    with the Kähler matrix assembled from faces.
    """
    g, gb = gradient_matrices(t)
    w = np.zeros(t.n_faces)
    live = np.isfinite(t.circumradii)
    w[live] = t.areas[live] / t.circumradii[live] ** 2
    return gb.T @ (w[:, None] * g)


@dataclass(frozen=True)
class LiouvilleField:
    """Per-face field ``φ = -2 log R`` at the circumcenters ``w_f``.

    ``area`` is the signed face area, used as the volume element at ``w_f``.
    Faces through infinity carry ``nan``.
    """

    phi: np.ndarray
    centers: np.ndarray
    area: np.ndarray

    @property
    def weight(self) -> np.ndarray:
        """``exp(φ) = 1 / R²``."""
        return np.exp(self.phi)


def liouville_field(t: Triangulation) -> LiouvilleField:
    r = t.circumradii
    phi = np.full(t.n_faces, np.nan)
    live = np.isfinite(r)
    phi[live] = -2.0 * np.log(r[live])
    return LiouvilleField(phi, t.circumcenters.copy(), t.areas.copy())
