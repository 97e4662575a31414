"""Orientation and incircle predicates on the Riemann sphere.

Points are Python complex numbers, with ``None`` standing for the point at
infinity. Signs are exact: a floating-point evaluation is accepted when it
clears a forward error bound, otherwise the determinant is recomputed in
rational arithmetic from the (exactly representable) float inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction

_EPS = 2.0**-53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _orient_exact(a: complex, b: complex, c: complex) -> float:
    ax, ay = Fraction(a.real), Fraction(a.imag)
    bx, by = Fraction(b.real), Fraction(b.imag)
    cx, cy = Fraction(c.real), Fraction(c.imag)
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return float(det) if det == 0 or float(det) != 0.0 else math.copysign(5e-324, det)


def orient(a: complex, b: complex, c: complex) -> float:
    """Twice the signed area of ``(a, b, c)``; positive when counterclockwise."""
    detleft = (a.real - c.real) * (b.imag - c.imag)
    detright = (a.imag - c.imag) * (b.real - c.real)
    det = detleft - detright
    bound = _CCW_BOUND * (abs(detleft) + abs(detright))
    if det > bound or -det > bound:
        return det
    return _orient_exact(a, b, c)


def _incircle_exact(a: complex, b: complex, c: complex, d: complex) -> float:
    dx, dy = Fraction(d.real), Fraction(d.imag)
    rows = []
    for p in (a, b, c):
        px = Fraction(p.real) - dx
        py = Fraction(p.imag) - dy
        rows.append((px, py, px * px + py * py))
    (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
    det = (al * (bx * cy - cx * by)
           + bl * (cx * ay - ax * cy)
           + cl * (ax * by - bx * ay))
    return float(det) if det == 0 or float(det) != 0.0 else math.copysign(5e-324, det)


def incircle(a: complex, b: complex, c: complex, d: complex) -> float:
    """Positive when ``d`` lies inside the circle through counterclockwise ``a, b, c``."""
    adx, ady = a.real - d.real, a.imag - d.imag
    bdx, bdy = b.real - d.real, b.imag - d.imag
    cdx, cdy = c.real - d.real, c.imag - d.imag
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    bound = _ICC_BOUND * permanent
    if det > bound or -det > bound:
        return det
    return _incircle_exact(a, b, c, d)


def in_cap(a, b, c, d) -> float:
    """Sign test for ``d`` against the open cap of the sphere face ``(a, b, c)``.

    The face is positively oriented on the sphere. For a counterclockwise
    planar face the cap is the circumdisk, for a clockwise one it is the
    exterior of the circumcircle, and a face through infinity has the left
    half-plane of its finite edge as cap. Positive means strictly inside.
    """
    if d is None:
        return -orient(a, b, c)
    if a is None:
        a, b, c = b, c, a
    elif b is None:
        a, b, c = c, a, b
    if c is None:
        return orient(a, b, d)
    return incircle(a, b, c, d)


def circumcircle(a: complex, b: complex, c: complex) -> tuple[complex, float]:
    """Center and radius of the circle through three finite points."""
    u = b - a
    v = c - a
    den = (u.conjugate() * v - u * v.conjugate())
    if den == 0:
        return complex(math.nan, math.nan), math.inf
    w = a + (abs(u) ** 2 * v - abs(v) ** 2 * u) / den
    return w, abs(a - w)


def cap_margin(a, b, c, d) -> float:
    """Signed distance of ``d`` outside the cap of face ``(a, b, c)``.

    Positive values mean ``d`` is outside (locally Delaunay); the magnitude
    is a length, so it can be compared against an absolute tolerance.
    """
    if d is None:
        pts = (a, b, c)
        longest = max(abs(pts[i] - pts[i - 1]) for i in range(3))
        return orient(a, b, c) / longest
    if a is None:
        a, b, c = b, c, a
    elif b is None:
        a, b, c = c, a, b
    if c is None:
        return -orient(a, b, d) / abs(b - a)
    w, r = circumcircle(a, b, c)
    if not math.isfinite(r):
        return -orient(a, b, d) / abs(b - a)
    s = 1.0 if orient(a, b, c) > 0 else -1.0
    return s * (abs(d - w) - r)
