from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from delaunay_measure.exact import (bareiss_det, fraction_inverse, matmul, pfaffian,
                                    permutation_parity)
from delaunay_measure.export import SCHEMA, to_svg, triangulation_json
from delaunay_measure.mesh import delaunay_build
from delaunay_measure.verify import run_checks

import helpers
import oracles

small_ints = st.integers(-5, 5)


@settings(max_examples=100)
@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_bareiss_matches_rational_elimination(m):
    assert bareiss_det(m) == oracles.rational_det(m)


def test_empty_determinant():
    assert bareiss_det(np.zeros((0, 0), dtype=int)) == 1


def test_fraction_inverse():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = fraction_inverse(m)
    prod = matmul(np.array(m, dtype=object), inv)
    assert all(prod[i, j] == int(i == j) for i in range(3) for j in range(3))
    assert inv[0, 0] == Fraction(11, 18)


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(
    lambda k: st.lists(small_ints, min_size=k * (2 * k - 1), max_size=k * (2 * k - 1))))
def test_pfaffian_matches_expansion(vals):
    n = int(round((1 + (1 + 8 * len(vals)) ** 0.5) / 2))
    m = [[0] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = next(it)
            m[j][i] = -m[i][j]
    pf = pfaffian(np.array(m, dtype=object))
    assert pf == oracles.pfaffian_expand(m)
    assert pf * pf == oracles.rational_det(m)


def test_pfaffian_odd_is_zero():
    assert pfaffian(np.zeros((3, 3), dtype=object)) == 0


@pytest.mark.parametrize("seq,sign", [([0, 1, 2], 1), ([1, 0, 2], -1), ([2, 0, 1], 1),
                                      ([3, 1, 2, 0], -1)])
def test_permutation_parity(seq, sign):
    assert permutation_parity(seq) == sign


# -- export and verification suite ----------------------------------------------

def test_triangulation_json_schema():
    t = delaunay_build(helpers.octahedron_infinity())
    d = triangulation_json(t)
    assert d["schema"] == SCHEMA
    assert len(d["circumradii"]) == t.n_faces
    ghosts = [f for f in range(t.n_faces) if t.is_ghost(f)]
    assert all(d["circumradii"][f] is None for f in ghosts)


def test_svg_structure():
    t = delaunay_build(helpers.tetrahedron())
    svg = to_svg(t)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'viewBox="0 0 1000 1000"' in svg
    assert svg.count("<circle ") == 4 and svg.count("<line ") == 6


@pytest.mark.parametrize("make", [helpers.tetrahedron, helpers.octahedron,
                                  helpers.octahedron_infinity, helpers.hexagon])
def test_run_checks_fixtures(make):
    checks = run_checks(make())
    names = {c.name for c in checks}
    assert {"euler_counts", "delaunay", "jacobian_vs_kahler", "chern_pfaffian"} <= names
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]
