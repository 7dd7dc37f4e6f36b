"""Prime splitting and ideal lattices over a field description.

Ideals are full-rank Z-lattices inside the maximal order, held as Hermite
bases in integral-basis coordinates.  Splitting uses Dedekind's criterion
away from the index; at primes dividing the index, multiquadratic fields
get a complete quotient-algebra decomposition while generic fields raise
ExcludedPrime so callers can record the gap.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from sympy import Poly, Symbol

from ..abelian import IntMatrix, hnf_columns, lattice_contains
from ..errors import (
    DataError,
    ExcludedPrime,
    InputError,
    InternalCheckError,
    PreconditionError,
)
from .fields import FieldDescription, _charpoly
from .ntheory import isprime, kronecker

_X = Symbol("x")


# ---------------------------------------------------------------------------
# lattice plumbing


def _unit(n: int, j: int) -> tuple[int, ...]:
    return tuple(1 if t == j else 0 for t in range(n))


def ideal_norm(basis: Sequence[Sequence[int]]) -> int:
    return abs(IntMatrix([list(r) for r in basis], cols=len(basis[0])).det())


def lattice_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return [list(r) for r in a] == [list(r) for r in b]


def principal_ideal_basis(K: FieldDescription, x: Sequence[int]) -> list[list[int]]:
    """Hermite basis of the ideal generated by a single order element."""
    n = K.degree
    vecs = [list(K.mult(x, _unit(n, j))) for j in range(n)]
    basis = hnf_columns(vecs, n)
    if len(basis) != n:
        raise InputError("zero element does not generate a full ideal")
    return basis


def ideal_product(
    K: FieldDescription, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]
) -> list[list[int]]:
    n = K.degree
    vecs = [list(K.mult(u, v)) for u in a for v in b]
    basis = hnf_columns(vecs, n)
    if len(basis) != n:
        raise InternalCheckError("ideal product degenerated")
    return basis


def ideal_power(
    K: FieldDescription, a: Sequence[Sequence[int]], k: int
) -> list[list[int]]:
    if k < 0:
        raise InputError("nonnegative powers only")
    n = K.degree
    result = [list(_unit(n, j)) for j in range(n)]
    base = [list(r) for r in a]
    while k:
        if k & 1:
            result = ideal_product(K, result, base)
        k >>= 1
        if k:
            base = ideal_product(K, base, base)
    return result


def whole_ring_basis(K: FieldDescription) -> list[list[int]]:
    n = K.degree
    return [list(_unit(n, j)) for j in range(n)]


class PrimeIdeal:
    """Prime above p with residue degree f and ramification index e."""

    __slots__ = ("p", "e", "f", "basis", "_powers")

    def __init__(self, p: int, e: int, f: int, basis: Sequence[Sequence[int]]):
        self.p = p
        self.e = e
        self.f = f
        self.basis = tuple(tuple(int(c) for c in row) for row in basis)
        self._powers: dict[int, list[list[int]]] = {}

    @property
    def norm(self) -> int:
        return self.p**self.f

    def contains(self, vec: Sequence[int]) -> bool:
        return lattice_contains(self.basis, vec)

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f})"


def prime_power_basis(K: FieldDescription, P: PrimeIdeal, k: int) -> list[list[int]]:
    """P^k with a per-ideal cache; k grows by small steps in practice."""
    if k == 0:
        return whole_ring_basis(K)
    if k == 1:
        return [list(r) for r in P.basis]
    cached = P._powers.get(k)
    if cached is None:
        cached = ideal_product(K, prime_power_basis(K, P, k - 1), P.basis)
        P._powers[k] = cached
    return [list(r) for r in cached]


# ---------------------------------------------------------------------------
# mod-p linear algebra


def _rref_mod(vectors: Sequence[Sequence[int]], p: int):
    """Row echelon basis mod p; returns (basis, pivot_columns)."""
    rows = [[c % p for c in v] for v in vectors]
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in rows:
        for b, col in zip(basis, pivots):
            if row[col]:
                f = row[col] * pow(b[col], -1, p) % p
                row = [(x - f * y) % p for x, y in zip(row, b)]
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is None:
            continue
        inv = pow(row[lead], -1, p)
        row = [x * inv % p for x in row]
        basis.append(row)
        pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    basis = [basis[i] for i in order]
    pivots = [pivots[i] for i in order]
    for i in range(len(basis)):
        for j in range(i):
            if basis[j][pivots[i]]:
                f = basis[j][pivots[i]]
                basis[j] = [
                    (x - f * y) % p for x, y in zip(basis[j], basis[i])
                ]
    return basis, pivots


def _coords_in_span(basis, pivots, vec, p) -> list[int]:
    """Coordinates of vec over an rref basis; closure violation is fatal."""
    w = [c % p for c in vec]
    out = []
    for b, col in zip(basis, pivots):
        c = w[col]
        out.append(c)
        if c:
            w = [(x - c * y) % p for x, y in zip(w, b)]
    if any(w):
        raise InternalCheckError("vector escapes a multiplicatively closed span")
    return out


def _nullspace_mod(mat: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of a square matrix mod p."""
    n = len(mat)
    rows, pivots = _rref_mod(mat, p)
    free = [j for j in range(n) if j not in pivots]
    out = []
    for j in free:
        v = [0] * n
        v[j] = 1
        for b, col in zip(rows, pivots):
            v[col] = (-b[j]) % p
        out.append(v)
    return out


def _mult_mod(K: FieldDescription, x, y, p: int) -> tuple[int, ...]:
    return tuple(c % p for c in K.mult(x, y))


def _pow_mod(K: FieldDescription, x, k: int, p: int) -> tuple[int, ...]:
    result = tuple(c % p for c in K.one())
    base = tuple(c % p for c in x)
    while k:
        if k & 1:
            result = _mult_mod(K, result, base, p)
        k >>= 1
        if k:
            base = _mult_mod(K, base, base, p)
    return result


# ---------------------------------------------------------------------------
# splitting


def split_prime(K: FieldDescription, p: int) -> list[PrimeIdeal]:
    """Primes above p with multiplicities, verified to factor pO."""
    if not isprime(p):
        raise InputError(f"{p} is not prime")
    if K.index % p != 0:
        primes = _dedekind_split(K, p, K._theta, K.min_poly)
    elif K.kind == "multiquadratic":
        primes = _quotient_algebra_split(K, p)
    else:
        raise ExcludedPrime(p, f"{p} divides the index of a generic field")
    _verify_factorization(K, p, primes)
    if K.kind == "multiquadratic":
        _check_splitting_characters(K, p, primes)
    primes.sort(key=lambda P: (P.f, P.e, P.basis))
    return primes


def _verify_factorization(K: FieldDescription, p: int, primes: list[PrimeIdeal]):
    n = K.degree
    if sum(P.e * P.f for P in primes) != n:
        raise InternalCheckError(f"splitting of {p} does not sum to the degree")
    prod = whole_ring_basis(K)
    for P in primes:
        prod = ideal_product(K, prod, prime_power_basis(K, P, P.e))
    target = [[p if i == j else 0 for j in range(n)] for i in range(n)]
    if not lattice_equal(prod, target):
        raise InternalCheckError(f"product of primes above {p} is not pO")


def _dedekind_split(
    K: FieldDescription, p: int, gen: Sequence[int], minpoly: Sequence[int]
) -> list[PrimeIdeal]:
    n = K.degree
    poly = Poly(list(reversed(minpoly)), _X, modulus=p)
    _, factors = poly.factor_list()
    out = []
    for gpoly, mult in factors:
        coeffs = list(reversed([int(c) for c in gpoly.all_coeffs()]))
        gval = _eval_poly(K, coeffs, gen)
        vecs = [[p * c for c in _unit(n, j)] for j in range(n)]
        vecs += [list(K.mult(gval, _unit(n, j))) for j in range(n)]
        basis = hnf_columns(vecs, n)
        f = gpoly.degree()
        if len(basis) != n or ideal_norm(basis) != p**f:
            raise InternalCheckError(
                f"Dedekind basis for {p} has the wrong covolume"
            )
        out.append(PrimeIdeal(p, mult, f, basis))
    return out


def _eval_poly(
    K: FieldDescription, coeffs_low_first: Sequence[int], elem: Sequence[int]
) -> tuple[int, ...]:
    n = K.degree
    one = K.one()
    acc = tuple(0 for _ in range(n))
    for c in reversed(coeffs_low_first):
        acc = K.mult(acc, elem)
        if c:
            acc = tuple(a + c * o for a, o in zip(acc, one))
    return acc


def _quotient_algebra_split(K: FieldDescription, p: int) -> list[PrimeIdeal]:
    """Primes above p as maximal ideals of O/pO; valid for any p since the
    order is maximal, used where no generator passes Dedekind."""
    n = K.degree
    basis_units = [_unit(n, j) for j in range(n)]

    # Frobenius x -> x^p is linear mod p; columns are powers of basis vectors
    frob_cols = [_pow_mod(K, b, p, p) for b in basis_units]
    frob = [[frob_cols[j][i] % p for j in range(n)] for i in range(n)]

    # fixed ring V = ker(F - 1): one F_p per prime above p
    fmi = [[(frob[i][j] - (1 if i == j else 0)) % p for j in range(n)] for i in range(n)]
    vbasis = _nullspace_mod(fmi, p)
    g = len(vbasis)
    if g == 0:
        raise InternalCheckError("fixed ring of Frobenius is trivial")

    idems = _primitive_idempotents(K, vbasis, p)
    if len(idems) != g:
        raise InternalCheckError("idempotent count disagrees with the fixed ring")

    # nilradical = ker(F^k) once p^k >= n
    k = 1
    while p**k < n:
        k += 1
    fk = frob
    for _ in range(k - 1):
        fk = [
            [sum(fk[i][t] * frob[t][j] for t in range(n)) % p for j in range(n)]
            for i in range(n)
        ]
    rad = _nullspace_mod(fk, p)

    one = tuple(c % p for c in K.one())
    out = []
    for e_idem in idems:
        comp = [(o - ei) % p for o, ei in zip(one, e_idem)]
        span = [list(v) for v in rad]
        span += [list(_mult_mod(K, comp, b, p)) for b in basis_units]
        mbasis, _ = _rref_mod(span, p)
        f = n - len(mbasis)
        if f <= 0:
            raise InternalCheckError("maximal ideal candidate has full rank")
        vecs = [[p * c for c in u] for u in basis_units]
        vecs += [[int(c) for c in row] for row in mbasis]
        zbasis = hnf_columns(vecs, n)
        if len(zbasis) != n or ideal_norm(zbasis) != p**f:
            raise InternalCheckError(
                f"maximal ideal above {p} has the wrong covolume"
            )
        P = PrimeIdeal(p, 1, f, zbasis)
        P.e = _ramification_index(K, P)
        out.append(P)

    return out


def _primitive_idempotents(K: FieldDescription, vbasis, p: int):
    """Split the etale fixed ring into one-dimensional components by
    eigenspaces of multiplication operators, then normalize idempotents."""
    comps = [_rref_mod(vbasis, p)]
    for w in vbasis:
        w = tuple(w)
        nxt = []
        for cb, cp in comps:
            if len(cb) == 1:
                nxt.append((cb, cp))
                continue
            m = len(cb)
            cols = [
                _coords_in_span(cb, cp, _mult_mod(K, w, tuple(v), p), p)
                for v in cb
            ]
            mat = [[cols[j][i] for j in range(m)] for i in range(m)]
            charpoly = [int(c) for c in _charpoly(mat)]
            fpoly = Poly(list(reversed(charpoly)), _X, modulus=p)
            for fac, _ in fpoly.factor_list()[1]:
                if fac.degree() != 1:
                    raise InternalCheckError("fixed ring is not split over F_p")
                cs = [int(c) for c in fac.all_coeffs()]
                a = (-cs[-1] * pow(cs[0], -1, p)) % p
                shifted = [
                    [(mat[i][j] - (a if i == j else 0)) % p for j in range(m)]
                    for i in range(m)
                ]
                sub = []
                for coeffs in _nullspace_mod(shifted, p):
                    v = [0] * K.degree
                    for c, bv in zip(coeffs, cb):
                        for t in range(K.degree):
                            v[t] = (v[t] + c * bv[t]) % p
                    sub.append(v)
                if sub:
                    nxt.append(_rref_mod(sub, p))
        comps = nxt
        if all(len(cb) == 1 for cb, _ in comps):
            break
    idems = []
    for cb, _ in comps:
        if len(cb) != 1:
            raise InternalCheckError("etale splitting did not reach dimension one")
        v = tuple(cb[0])
        vv = _mult_mod(K, v, v, p)
        lead = next(i for i, c in enumerate(v) if c)
        scale = vv[lead] * pow(v[lead], -1, p) % p
        if scale == 0:
            raise InternalCheckError("nilpotent found in the fixed ring")
        inv = pow(scale, -1, p)
        e_idem = tuple(c * inv % p for c in v)
        if _mult_mod(K, e_idem, e_idem, p) != e_idem:
            raise InternalCheckError("idempotent normalization failed")
        idems.append(e_idem)
    return idems


def _ramification_index(K: FieldDescription, P: PrimeIdeal) -> int:
    n = K.degree
    punits = [[P.p * c for c in _unit(n, j)] for j in range(n)]
    e = 1
    while e < n + 1:
        nxt = prime_power_basis(K, P, e + 1)
        if all(lattice_contains(nxt, v) for v in punits):
            e += 1
        else:
            break
    return e


def _check_splitting_characters(K: FieldDescription, p: int, primes):
    """Independent (e, f, g) prediction from the quadratic characters of
    the subfields; disagreement is an internal error."""
    discs = K._extras.get("subset_discs")
    if not discs:
        return
    unram = [mask for mask, dd in discs.items() if dd % p != 0]
    e = K.degree // (len(unram) + 1)
    f = 1
    for mask in unram:
        if kronecker(discs[mask], p) != 1:
            f = 2
            break
    g = K.degree // (e * f)
    got = sorted((P.e, P.f) for P in primes)
    want = sorted((e, f) for _ in range(g))
    if len(primes) != g or got != want:
        raise InternalCheckError(
            f"splitting of {p} disagrees with the character prediction "
            f"(got {got}, want {want})"
        )


# ---------------------------------------------------------------------------
# Frobenius


def frobenius(
    K: FieldDescription, p: int, splitting: Optional[list[PrimeIdeal]] = None
) -> int:
    """Index of the Frobenius element at an unramified prime, cross-checked
    against the residue degree of the actual splitting."""
    if not isprime(p):
        raise InputError(f"{p} is not prime")
    if K.discriminant % p == 0:
        raise PreconditionError(f"{p} ramifies; no Frobenius class")
    m = K.frobenius_conductor
    if math.gcd(p, m) != 1:
        raise DataError(
            f"resolver conductor {m} excludes the unramified prime {p}"
        )
    elt = K.frobenius_map[p % m]
    if splitting is None:
        splitting = split_prime(K, p)
    fs = {P.f for P in splitting}
    if len(fs) != 1:
        raise InternalCheckError(f"unequal residue degrees above unramified {p}")
    if K.galois_group.order_of(elt) != fs.pop():
        raise InternalCheckError(
            f"Frobenius order at {p} disagrees with the residue degree"
        )
    return elt
