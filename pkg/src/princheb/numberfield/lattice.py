"""Exact lattice utilities: Gram-based LLL reduction, Fincke-Pohst style
short-vector enumeration, and binary quadratic form reduction.

Everything runs on exact rationals (or integers); enumeration output is
sorted by (value, coordinates) so callers see a deterministic order.
"""

import math
from fractions import Fraction
from typing import Iterable, Optional

from ..abelian import IntMatrix
from ..errors import InputError, InternalCheckError


def reduce_binary_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Gauss-reduce a positive definite integer form (a, b, c).

    Reduced means |b| <= a <= c, with b >= 0 if |b| = a or a = c.
    """
    if a <= 0 or 4 * a * c - b * b <= 0:
        raise InputError("form is not positive definite")
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # shift b into (-a, a]
            k = (a - b) // (2 * a)
            b2 = b + 2 * a * k
            c2 = c + k * (b + a * k)
            b, c = b2, c2
            continue
        break
    if (a == c and b < 0) or b == -a:
        b = -b
    if not (-a < b <= a <= c):
        raise InternalCheckError("binary form reduction left an unreduced form")
    return a, b, c


def _gso(gram):
    """Gram-Schmidt data (mu, B) from a Gram matrix of Fractions."""
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        B[i] = Fraction(gram[i][i])
        for j in range(i):
            s = Fraction(gram[i][j])
            for k in range(j):
                s -= mu[i][k] * mu[j][k] * B[k]
            if B[j] == 0:
                raise InputError("Gram matrix is singular")
            mu[i][j] = s / B[j]
            B[i] -= mu[i][j] ** 2 * B[j]
        if B[i] <= 0:
            raise InputError("Gram matrix is not positive definite")
    return mu, B


def lll_transform(gram, delta: Fraction = Fraction(3, 4)) -> IntMatrix:
    """Unimodular U with U * gram * U^T LLL-reduced; gram is square,
    symmetric, positive definite, entries integer or Fraction."""
    n = len(gram)
    g = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(dst, src, q):
        # basis_dst += q * basis_src; update gram congruently
        for j in range(n):
            u[dst][j] += q * u[src][j]
        for j in range(n):
            g[dst][j] += q * g[src][j]
        for i in range(n):
            g[i][dst] += q * g[i][src]

    def swap(i, j):
        u[i], u[j] = u[j], u[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 100000:
            raise InternalCheckError("LLL failed to terminate")
        mu, B = _gso(g)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                row_op(k, j, -q)
                mu, B = _gso(g)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            k = max(k - 1, 1)
    return IntMatrix(u, cols=n)


def short_vectors(gram, bound, limit: Optional[int] = None) -> list[tuple]:
    """All x != 0 with x gram x^T <= bound, one per +-pair (first nonzero
    coordinate positive), sorted by (value, coordinates).

    Runs LLL first, enumerates in the reduced basis, and maps back, so the
    input Gram may be badly skewed.  `limit` truncates the sorted list.
    """
    n = len(gram)
    if n == 0:
        return []
    bound = Fraction(bound)
    if bound <= 0:
        return []
    U = lll_transform(gram)
    # reduced gram R = U G U^T
    G = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    R = [
        [
            sum(U.entries[a][i] * G[i][j] * U.entries[b][j] for i in range(n) for j in range(n))
            for b in range(n)
        ]
        for a in range(n)
    ]
    mu, B = _gso(R)

    found = []

    def rec(i, coords, partial):
        # partial = value contributed by coordinates > i
        if i < 0:
            if any(coords):
                found.append((tuple(coords), partial))
            return
        # center of the allowed interval for x_i
        c = -sum(mu[j][i] * coords[j] for j in range(i + 1, n))
        radius2 = (bound - partial) / B[i]
        # integer x_i with (x_i - c)^2 <= radius2
        candidates = []
        t = math.ceil(c)
        while (t - c) ** 2 <= radius2:
            candidates.append(t)
            t += 1
        t = math.ceil(c) - 1
        while (t - c) ** 2 <= radius2:
            candidates.append(t)
            t -= 1
        for xi in candidates:
            coords[i] = xi
            rec(i - 1, coords, partial + B[i] * (xi - c) ** 2)
        coords[i] = 0

    rec(n - 1, [0] * n, Fraction(0))

    out = []
    seen = set()
    for coords, val in found:
        # map back to original coordinates: x_orig = coords @ U
        orig = tuple(
            sum(coords[a] * U.entries[a][j] for a in range(n)) for j in range(n)
        )
        for v in orig:
            if v > 0:
                break
            if v < 0:
                orig = tuple(-w for w in orig)
                break
        if orig in seen:
            continue
        seen.add(orig)
        out.append((val, orig))
    out.sort(key=lambda t: (t[0], t[1]))
    if limit is not None:
        out = out[:limit]
    return [(coords, val) for val, coords in out]


def gram_of_rows(rows: Iterable[Iterable[int]], pairing) -> list[list]:
    """Gram matrix of basis rows under a bilinear `pairing(u, v)`."""
    rows = [list(r) for r in rows]
    return [[pairing(u, v) for v in rows] for u in rows]
