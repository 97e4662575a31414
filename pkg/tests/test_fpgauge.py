import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from delaunay_measure.errors import CollinearFace
from delaunay_measure.fpgauge import (face_contraction, fp_operator, fp_pairing, gradient_ops,
                                      liouville_field)
from delaunay_measure.mesh import PointConfig, delaunay_build, face_geometry, triangle_geometry
from delaunay_measure.operators import cotangent_laplacian, kahler_assemble, kahler_face

import helpers

UNIT = triangle_geometry(0, 1, 1j)
Z = np.array([0, 1, 1j])


def _random_face(rng):
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    if ((z[1] - z[0]).conjugate() * (z[2] - z[0])).imag < 0:
        z = z[::-1]
    return z, triangle_geometry(*z)


# -- gradients ---------------------------------------------------------------

def test_gradient_of_z():
    nab, nabb = gradient_ops(UNIT, Z)
    assert abs(nab - 1) < 1e-15 and abs(nabb) < 1e-15


def test_gradient_of_zbar():
    nab, nabb = gradient_ops(UNIT, np.conj(Z))
    assert abs(nab) < 1e-15 and abs(nabb - 1) < 1e-15


def test_gradient_of_constant():
    assert gradient_ops(UNIT, [2.5 - 1j] * 3) == (0, 0)


@settings(max_examples=200)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.integers(0, 2 ** 32 - 1))
def test_affine_reproduction(a, b, c, seed):
    z, g = _random_face(np.random.default_rng(seed))
    nab, nabb = gradient_ops(g, a + b * z + c * np.conj(z))
    scale = 1 + abs(a) + abs(b) + abs(c)
    cond = max(abs(z[i] - z[j]) for i in range(3) for j in range(3)) ** 2 / abs(g.area)
    assert abs(nab - b) < 1e-13 * scale * cond
    assert abs(nabb - c) < 1e-13 * scale * cond


def test_collinear_face_raises():
    with pytest.raises(CollinearFace):
        triangle_geometry(0, 1, 2)


# -- pairing identity -------------------------------------------------------------

def test_pairing_random_faces():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        _, g = _random_face(rng)
        phi = rng.normal(size=3) + 1j * rng.normal(size=3)
        psi = rng.normal(size=3) + 1j * rng.normal(size=3)
        lhs = face_contraction(g, phi, psi)
        rhs = fp_pairing(g, phi, psi)
        scale = np.abs(kahler_face(g)).max() * np.abs(phi).max() * np.abs(psi).max()
        assert abs(lhs - rhs) < 1e-12 * scale


def test_pairing_holomorphic_vanishes():
    rng = np.random.default_rng(1)
    z, g = _random_face(rng)
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    phi = 0.3 - 2j + (1.5 + 0.2j) * z
    assert abs(fp_pairing(g, phi, psi)) < 1e-14
    assert abs(face_contraction(g, phi, psi)) < 1e-13


def test_pairing_equilateral_zbar():
    z = np.array([cmath.exp(2j * math.pi * k / 3) for k in range(3)])
    g = triangle_geometry(*z)
    expected = g.area / g.radius ** 2
    assert expected == pytest.approx(3 * math.sqrt(3) / 4, rel=1e-14)
    assert fp_pairing(g, np.conj(z), np.conj(z)) == pytest.approx(expected, abs=1e-14)
    assert face_contraction(g, np.conj(z), np.conj(z)) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("convention", ["fixed-face", "infinity"])
def test_summed_pairing(convention):
    rng = np.random.default_rng(3)
    t = delaunay_build(helpers.random_config(rng, 6, convention))
    d = kahler_assemble(t)
    f = fp_operator(t)
    assert np.abs(f - d).max() < 1e-11 * np.abs(d).max()
    phi = rng.normal(size=t.n_vertices) + 1j * rng.normal(size=t.n_vertices)
    psi = rng.normal(size=t.n_vertices) + 1j * rng.normal(size=t.n_vertices)
    total = sum(fp_pairing(face_geometry(t, k), phi[t.faces[k]], psi[t.faces[k]])
                for k in range(t.n_faces) if not t.is_ghost(k))
    ref = phi @ d @ np.conj(psi)
    assert abs(total - ref) < 1e-11 * abs(ref)


def test_isoradial_pairing():
    cfg, ell = helpers.lattice_patch()
    t = delaunay_build(cfg)
    f = fp_operator(t)
    lap = cotangent_laplacian(t)
    rows = [v for v in range(1, t.n_vertices)
            if all(abs(t.circumradii[k] - ell) < 1e-12 for k in t.incident_faces(v))]
    assert np.abs(f[rows] + lap[rows] / (4 * ell ** 2)).max() < 1e-12


# -- Liouville field ------------------------------------------------------------

def test_liouville_isoradial():
    cfg, ell = helpers.lattice_patch()
    t = delaunay_build(cfg)
    lf = liouville_field(t)
    inner = [k for k in range(t.n_faces) if abs(t.circumradii[k] - ell) < 1e-12]
    assert len(inner) >= 6
    assert np.allclose(lf.phi[inner], -2 * math.log(ell), atol=1e-12)


def test_liouville_scaling():
    cfg = helpers.random_inside(np.random.default_rng(4), 5)
    lam = 3.7
    a = liouville_field(delaunay_build(cfg))
    b = liouville_field(delaunay_build(PointConfig(cfg.points * lam, cfg.fixed)))
    assert np.allclose(b.phi - a.phi, -2 * math.log(lam), atol=1e-12)


def test_liouville_weight_and_area():
    t = delaunay_build(helpers.random_infinity(np.random.default_rng(5), 5))
    lf = liouville_field(t)
    for k in range(t.n_faces):
        if t.is_ghost(k):
            assert math.isnan(lf.phi[k])
            continue
        g = face_geometry(t, k)
        assert abs(lf.weight[k] - 1 / g.radius ** 2) < 1e-14 / g.radius ** 2
        assert lf.area[k] == pytest.approx(g.area, rel=1e-14)
        assert lf.centers[k] == pytest.approx(g.circumcenter, abs=1e-12)
