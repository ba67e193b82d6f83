"""Integral LLL reduction (exact integer arithmetic, delta = 3/4).

Follows the all-integer variant: the Gram-Schmidt data is kept as the
subdeterminants d_i and the integers lambda_ij = d_j mu_ij, so no rational
or floating arithmetic is involved and the result is deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]]) -> list[list[int]]:
    """LLL-reduce linearly independent integer row vectors."""
    return lll_reduce_with_norms(basis)[0]


def lll_reduce_with_norms(basis: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[Fraction]]:
    """Reduced basis together with the exact squared Gram-Schmidt norms |b*_i|^2."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        return b, []
    if n == 1:
        return b, [Fraction(_dot(b[0], b[0]))]
    d = [1] * (n + 1)  # d[0] = 1, d[i+1] = prod of |b*_j|^2 for j <= i
    lam = [[0] * n for _ in range(n)]

    # incremental Gram-Schmidt
    for i in range(n):
        for j in range(i + 1):
            u = _dot(b[i], b[j])
            for t in range(j):
                u = (d[t + 1] * u - lam[i][t] * lam[j][t]) // d[t]
            if j < i:
                lam[i][j] = u
            else:
                if u == 0:
                    raise ValueError("basis vectors are linearly dependent")
                d[i + 1] = u

    def reduce(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            r = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - r * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= r * d[l + 1]
            for i in range(l):
                lam[k][i] -= r * lam[l][i]

    def swap(k: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lmb = lam[k][k - 1]
        new_d = (d[k - 1] * d[k + 1] + lmb * lmb) // d[k]
        for i in range(k + 1, n):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lmb * t) // d[k]
            lam[i][k - 1] = (new_d * t + lmb * lam[i][k]) // d[k + 1]
        d[k] = new_d

    k = 1
    while k < n:
        reduce(k, k - 1)
        # Lovasz condition 4 d_{k+1} d_{k-1} >= 3 d_k^2 - 4 lambda^2
        if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                reduce(k, l)
            k += 1
    return b, [Fraction(d[i + 1], d[i]) for i in range(n)]


def gram_schmidt_norms2(basis: Sequence[Sequence[int]]) -> list[Fraction]:
    """|b*_i|^2 for each row, exactly."""
    out: list[Fraction] = []
    ortho: list[list[Fraction]] = []
    for row in basis:
        v = [Fraction(x) for x in row]
        for w, nw in zip(ortho, out):
            mu = sum(a * c for a, c in zip(v, w)) / nw  # uses the current v, modified GS
            v = [a - mu * c for a, c in zip(v, w)]
        nv = sum(a * a for a in v)
        ortho.append(v)
        out.append(nv)
    return out
