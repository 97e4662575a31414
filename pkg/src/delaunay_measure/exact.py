"""Exact integer and rational linear algebra on small dense matrices."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np


def bareiss_det(m) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in np.asarray(m, dtype=object)]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def fraction_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(x)
    return out


def fraction_inverse(m) -> np.ndarray:
    """Inverse of a square rational matrix by Gauss–Jordan elimination."""
    a = [list(row) for row in fraction_matrix(m)]
    n = len(a)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[p] = a[p], a[k]
        inv[k], inv[p] = inv[p], inv[k]
        piv = a[k][k]
        a[k] = [x / piv for x in a[k]]
        inv[k] = [x / piv for x in inv[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[k])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = inv[i][j]
    return out


def matmul(a, b) -> np.ndarray:
    """Exact product of object (Fraction/int) matrices."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.dot(b)


def pfaffian(m) -> Fraction:
    """Pfaffian of an antisymmetric rational matrix (exact).

    Uses skew-symmetric Gaussian elimination with pivoting.
    """
    a = [list(row) for row in fraction_matrix(m)]
    n = len(a)
    if n % 2:
        return Fraction(0)
    result = Fraction(1)
    for k in range(0, n - 1, 2):
        p = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k + 1:
            # swap rows/columns k+1 and p
            a[k + 1], a[p] = a[p], a[k + 1]
            for row in a:
                row[k + 1], row[p] = row[p], row[k + 1]
            result = -result
        piv = a[k][k + 1]
        result *= piv
        for i in range(k + 2, n):
            if a[k][i] != 0:
                f = a[k][i] / piv
                # R_i -= f R_{k+1}, C_i -= f C_{k+1}
                a[i] = [x - f * y for x, y in zip(a[i], a[k + 1])]
                for row in a:
                    row[i] -= f * row[k + 1]
        for i in range(k + 2, n):
            if a[k + 1][i] != 0:
                f = a[k + 1][i] / (-piv)
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                for row in a:
                    row[i] -= f * row[k]
    return result


def permutation_parity(seq: Sequence[int]) -> int:
    """Sign (+1 or -1) of the permutation sorting ``seq`` (distinct keys)."""
    seq = list(seq)
    order = sorted(range(len(seq)), key=seq.__getitem__)
    seen = [False] * len(seq)
    sign = 1
    for i in range(len(seq)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
