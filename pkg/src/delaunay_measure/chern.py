"""Per-vertex Chern 2-forms in angle coordinates and their top power.

The unit-circle bundle at a vertex ``v`` has curvature
``psi_v = -(1/4pi²) sum_{j<k} dtheta_{e_k} ∧ dtheta_{e_j}`` where
``e_1, ..., e_n`` are the edges at ``v`` in counterclockwise order starting
from some origin. The ``N``-th power of ``sum_v 4pi² psi_v``, restricted to
the angle constraints, is ``±N! 2^{2N}`` times the volume form of the basis
angles; its Pfaffian is computed exactly.

A 2-form ``ω`` is stored as an antisymmetric matrix ``W`` with
``ω = (1/2) sum_ij W_ij dx_i ∧ dx_j``, so that ``ω^N / N! = Pf(W) dx_1 ∧ ...``.
All coefficients are integers or rationals; the overall ``4pi²`` is
factored out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .combinatorics import EdgeBasis
from .errors import OddDimension
from .exact import fraction_matrix, pfaffian
from .mesh import Triangulation

FOUR_PI2 = 4.0 * math.pi ** 2


@dataclass(frozen=True, eq=False)
class TwoForm:
    """Antisymmetric coefficient matrix of ``4pi²`` times a 2-form.

    Attributes
    ----------
    matrix : ndarray of object (int or Fraction)
        Exactly antisymmetric.
    basis : str
        ``"edges"`` for all edge angles, ``"basis"`` for the basis angles.
    """

    matrix: np.ndarray
    basis: str

    def __post_init__(self):
        m = self.matrix
        if m.shape[0] != m.shape[1] or np.any(m != -m.T):
            raise ValueError("a 2-form matrix must be square and antisymmetric")

    def __add__(self, other: "TwoForm") -> "TwoForm":
        if other.basis != self.basis:
            raise ValueError("cannot add forms in different coordinates")
        return TwoForm(self.matrix + other.matrix, self.basis)

    def restrict(self, basis: EdgeBasis) -> "TwoForm":
        """Pull back along the basis parametrisation ``M0ᵀ W M0``."""
        if self.basis != "edges":
            raise ValueError("only full edge-angle forms can be restricted")
        m0 = basis.M0
        return TwoForm(m0.T.dot(self.matrix).dot(m0), "basis")

    def as_float(self) -> np.ndarray:
        """Coefficients of the form itself, i.e. the matrix divided by ``4pi²``."""
        return self.matrix.astype(float) / FOUR_PI2


def _ordered_edges(t: Triangulation, v: int, origin: int = 0) -> list[int]:
    star = [int(t.he_edge[h]) for h in t.vertex_star(v)]
    k = origin % len(star)
    return star[k:] + star[:k]


def psi_vertex(t: Triangulation, v: int, origin: int = 0,
               drop_last: bool = False) -> TwoForm:
    """``4pi² psi_v`` in full edge-angle coordinates.

    Parameters
    ----------
    origin : int
        Which incident edge is labelled first (position in the ccw star).
    drop_last : bool
        Omit the last edge; the two variants agree on the constraint
        surface because the angles at ``v`` sum to a constant.
    """
    edges = _ordered_edges(t, v, origin)
    if drop_last:
        edges = edges[:-1]
    w = np.zeros((t.n_edges, t.n_edges), dtype=object)
    w[:] = 0
    for k in range(1, len(edges)):
        for j in range(k):
            # -dtheta_{e_k} ∧ dtheta_{e_j}
            a, b = edges[k], edges[j]
            w[a, b] -= 1
            w[b, a] += 1
    return TwoForm(w, "edges")


def chern_sum(t: Triangulation, vertices=None) -> TwoForm:
    """``4pi² sum_v psi_v`` over ``vertices`` (default: all vertices).

    The form is purely combinatorial, so the vertex at infinity takes part
    like any other.
    """
    if vertices is None:
        vertices = range(t.n_vertices)
    total = TwoForm(np.zeros((t.n_edges, t.n_edges), dtype=object) * 0, "edges")
    for v in vertices:
        total = total + psi_vertex(t, v)
    return total


def top_form_coefficient(t: Triangulation, basis: EdgeBasis, vertices=None) -> Fraction:
    """Exact ``Pf(4pi² B0)`` with ``B0`` the restricted sum of Chern forms.

    The top power ``(sum_v 4pi² psi_v)^N`` equals ``N! Pf(4pi² B0)`` times the
    product of the basis angle differentials; the expected magnitude is
    ``2^{2N}``.

    Raises
    ------
    OddDimension
        If the restricted form lives on an odd number of coordinates.
    """
    b0 = chern_sum(t, vertices).restrict(basis).matrix
    if b0.shape[0] % 2:
        raise OddDimension("Pfaffian of an odd-dimensional form")
    return pfaffian(b0)


def wedge_top_coefficient(w) -> Fraction:
    """Coefficient of ``dx_1 ∧ ... ∧ dx_2n`` in ``ω^n / n!`` by direct expansion.

    Independent of the Pfaffian: the form is expanded as a sum of
    elementary wedges, multiplied out ``n`` times with explicit
    reordering signs.
    """
    w = fraction_matrix(w)
    dim = w.shape[0]
    if dim % 2:
        raise OddDimension("top power of a 2-form needs even dimension")
    n = dim // 2
    terms = {(i, j): w[i, j] for i, j in combinations(range(dim), 2) if w[i, j] != 0}
    power = {(): Fraction(1)}
    for _ in range(n):
        nxt = {}
        for idx, c in power.items():
            used = set(idx)
            for (i, j), d in terms.items():
                if i in used or j in used:
                    continue
                seq = idx + (i, j)
                key = tuple(sorted(seq))
                # sign of the permutation sorting seq
                inv = sum(1 for a, b in combinations(seq, 2) if a > b)
                sgn = -1 if inv % 2 else 1
                nxt[key] = nxt.get(key, Fraction(0)) + sgn * c * d
        power = {k: v for k, v in nxt.items() if v != 0}
    return power.get(tuple(range(dim)), Fraction(0)) / math.factorial(n)


@dataclass(frozen=True)
class ChernCheck:
    n_free: int
    pfaffian: Fraction
    wedge: Fraction | None
    expected: int

    @property
    def ok(self) -> bool:
        return abs(self.pfaffian) == self.expected and (
            self.wedge is None or self.wedge == self.pfaffian)

    def to_dict(self) -> dict:
        return {"N": self.n_free, "pfaffian": str(self.pfaffian),
                "wedge": None if self.wedge is None else str(self.wedge),
                "expected_abs": self.expected, "ok": self.ok}


def chern_check(t: Triangulation, basis: EdgeBasis, wedge_max_n: int = 3) -> ChernCheck:
    """Pfaffian normalisation check, with the wedge oracle for small ``N``."""
    b0 = chern_sum(t).restrict(basis).matrix
    pf = pfaffian(b0) if b0.shape[0] else Fraction(1)
    wedge = wedge_top_coefficient(b0) if 0 < t.n_free <= wedge_max_n else None
    return ChernCheck(t.n_free, pf, wedge, 2 ** (2 * t.n_free))
