"""Class group computation from factor-base relations.

The factor base holds every prime of norm below the Minkowski bound.
Relations come from rational primes factoring entirely over the base and
from smooth elements found in growing coefficient boxes; every accepted
row is a verified principal factorization.  Smith reduction presents the
quotient, and the certification field states how much the caller may
trust it: "certified-by-known-h", "certified-by-bound", or "tentative".
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from ..abelian import (
    AbelianElement,
    AbelianGroup,
    IntMatrix,
    lattice_contains,
    smith_normal_form,
)
from ..errors import (
    DataError,
    ExcludedPrime,
    InputError,
    InternalCheckError,
    PreconditionError,
    Undecided,
)
from .fields import FieldDescription, lenstra_class_bound, minkowski_bound
from .ideals import (
    PrimeIdeal,
    ideal_norm,
    lattice_equal,
    prime_power_basis,
    principal_ideal_basis,
    split_prime,
)
from .lattice import short_vectors
from .ntheory import pell_fundamental_unit, primes_upto, squarefree_part

_BOX_START = 10
_BOX_DOUBLINGS = 4
_BOX_VOLUME_CAP = 3 * 10**6
_MAX_ROWS = 400
_SHELL_DOUBLINGS = 4
_VECTOR_CAP = 6000


@dataclass
class ClassGroupData:
    field: FieldDescription
    factor_base: tuple[PrimeIdeal, ...]
    relation_matrix: IntMatrix
    structure: AbelianGroup
    class_map: tuple[AbelianElement, ...]
    certification: str
    excluded_primes: tuple[int, ...]
    witnesses: tuple[tuple, ...]

    @property
    def order(self) -> int:
        return self.structure.order


# ---------------------------------------------------------------------------
# norm forms and coefficient boxes


def _norm_form(K: FieldDescription) -> dict[tuple[int, ...], int]:
    """Norm of sum a_i b_i as a degree-n form, {exponent tuple: coefficient}."""
    # cached on the instance; a module-level table keyed by id() would go
    # stale when ids get recycled across many short-lived fields
    cached = getattr(K, "_norm_form_cache", None)
    if cached is not None:
        return cached
    n = K.degree

    def pmul(u: dict, v: dict) -> dict:
        out: dict = {}
        for eu, cu in u.items():
            for ev, cv in v.items():
                key = tuple(a + b for a, b in zip(eu, ev))
                out[key] = out.get(key, 0) + cu * cv
        return {k: c for k, c in out.items() if c}

    # entry (i, j) of the multiplication matrix is a linear form in the a_k
    ent = [
        [
            {
                tuple(1 if t == k else 0 for t in range(n)): K._mult[k][j][i]
                for k in range(n)
                if K._mult[k][j][i]
            }
            for j in range(n)
        ]
        for i in range(n)
    ]

    memo: dict[tuple[int, int], dict] = {}

    def minor(rows_mask: int, col: int) -> dict:
        if col == n:
            return {tuple([0] * n): 1}
        key = (rows_mask, col)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        sign = 1
        for i in range(n):
            if not rows_mask >> i & 1:
                continue
            cell = ent[i][col]
            if cell:
                sub = minor(rows_mask & ~(1 << i), col + 1)
                term = pmul(cell, sub)
                for k, c in term.items():
                    out[k] = out.get(k, 0) + sign * c
            sign = -sign
        out = {k: c for k, c in out.items() if c}
        memo[key] = out
        return out

    form = minor((1 << n) - 1, 0)
    K._norm_form_cache = form
    return form


def _box_elements(K: FieldDescription, box: int):
    """Yield (coords, norm) over the half box: first nonzero coordinate
    positive, gcd of coordinates 1, zero skipped."""
    n = K.degree
    if (2 * box + 1) ** n > _BOX_VOLUME_CAP:
        raise Undecided(
            f"coefficient box {box} has more than {_BOX_VOLUME_CAP} points "
            f"at degree {n}"
        )
    form = _norm_form(K)
    # split each monomial into prefix part and last-variable exponent
    split = [
        (exps[:-1], exps[-1], coef) for exps, coef in form.items()
    ]
    rng = range(-box, box + 1)
    for prefix in itertools.product(rng, repeat=n - 1):
        lead = next((a for a in prefix if a), 0)
        if lead < 0:
            continue
        pg = 0
        for a in prefix:
            pg = math.gcd(pg, a)
        pows = [[1] * (n + 1) for _ in range(n - 1)]
        for i, a in enumerate(prefix):
            for e in range(1, n + 1):
                pows[i][e] = pows[i][e - 1] * a
        coeffs = [0] * (n + 1)
        for pexps, elast, coef in split:
            c = coef
            for i, e in enumerate(pexps):
                if e:
                    c *= pows[i][e]
                    if not c:
                        break
            if c:
                coeffs[elast] += c
        last_range = range(1, box + 1) if lead == 0 else rng
        for last in last_range:
            if math.gcd(pg, last) != 1:
                continue
            acc = 0
            for e in range(n, -1, -1):
                acc = acc * last + coeffs[e]
            if acc:
                yield prefix + (last,), acc


# ---------------------------------------------------------------------------
# valuations


def _valuation(K: FieldDescription, P: PrimeIdeal, vec, cap: int = 64) -> int:
    v = 0
    while v < cap:
        basis = prime_power_basis(K, P, v + 1)
        if lattice_contains(basis, list(vec)):
            v += 1
        else:
            break
    return v


def _lattice_valuation(
    K: FieldDescription, P: PrimeIdeal, basis, cap: int = 64
) -> int:
    """Largest k with the whole lattice inside P^k."""
    v = 0
    while v < cap:
        pw = prime_power_basis(K, P, v + 1)
        if all(lattice_contains(pw, list(row)) for row in basis):
            v += 1
        else:
            break
    return v


def _smooth_valuations(
    K: FieldDescription,
    fb: Sequence[PrimeIdeal],
    fb_rational: Sequence[int],
    coords,
    nrm: int,
) -> Optional[list[int]]:
    """Valuation vector of (coords) over the base, or None if not smooth.

    Smoothness is decided by trial division over the base's rational
    primes; the norm identity |N| = prod N(Q)^v then rules out hidden
    primes above the same rationals.
    """
    rest = abs(nrm)
    for p in fb_rational:
        while rest % p == 0:
            rest //= p
    if rest != 1:
        return None
    vals = [_valuation(K, Q, coords) for Q in fb]
    check = 1
    for Q, v in zip(fb, vals):
        check *= Q.norm**v
    if check != abs(nrm):
        return None
    return vals


# ---------------------------------------------------------------------------
# relation reduction


def _reduce_relations(rows: list[list[int]], n: int):
    """Quotient Z^n by the row span: (structure, class_map) or None when
    the span has deficient rank."""
    if n == 0:
        return AbelianGroup(()), []
    if not rows:
        return None
    R = IntMatrix(rows, cols=n)
    U, S, V = smith_normal_form(R)
    diag = [
        S.entries[j][j] if j < min(R.rows, n) else 0 for j in range(n)
    ]
    if any(d == 0 for d in diag):
        return None
    kept = [j for j, d in enumerate(diag) if d >= 2]
    structure = AbelianGroup(tuple(diag[j] for j in kept))
    class_map = [
        structure.element([V.entries[i][j] for j in kept]) for i in range(n)
    ]
    for row in rows:
        acc = structure.identity()
        for c, el in zip(row, class_map):
            if c:
                acc = acc + c * el
        if not acc.is_identity():
            raise InternalCheckError("relation row maps to a nonzero class")
    return structure, class_map


# ---------------------------------------------------------------------------
# the main computation


def class_group(K: FieldDescription, *, box: Optional[int] = None) -> ClassGroupData:
    mb = minkowski_bound(K)
    mbf = mb.numerator // mb.denominator
    fb: list[PrimeIdeal] = []
    excluded: list[int] = []
    rows: list[list[int]] = []
    witnesses: list[tuple] = []
    pending_p_rows: list[tuple[int, list[PrimeIdeal]]] = []

    for p in primes_upto(mbf):
        try:
            primes_p = split_prime(K, p)
        except ExcludedPrime:
            excluded.append(p)
            continue
        in_base = [P for P in primes_p if P.norm <= mbf]
        fb.extend(in_base)
        if len(in_base) == len(primes_p):
            pending_p_rows.append((p, primes_p))

    n = len(fb)
    if n == 0:
        structure = AbelianGroup(())
        # excluded primes can hide generators, so an empty usable factor
        # base only proves h = 1 when nothing below the bound was skipped
        if K.known_class_number is not None and K.known_class_number != 1:
            if not excluded:
                raise DataError(
                    f"empty factor base forces h = 1, config claims "
                    f"{K.known_class_number}"
                )
            cert = "tentative"
        elif K.known_class_number is not None:
            cert = "certified-by-known-h"
        elif excluded:
            cert = "tentative"
        else:
            cert = "certified-by-bound"
        return ClassGroupData(
            field=K,
            factor_base=(),
            relation_matrix=IntMatrix([], cols=0),
            structure=structure,
            class_map=(),
            certification=cert,
            excluded_primes=tuple(excluded),
            witnesses=(),
        )

    def fb_index(P: PrimeIdeal) -> int:
        for i, Q in enumerate(fb):
            if Q.p == P.p and lattice_equal(Q.basis, P.basis):
                return i
        raise InternalCheckError("prime missing from its own factor base")

    seen: set[tuple[int, ...]] = set()

    def push(row: list[int], witness: tuple):
        key = tuple(row)
        if key in seen or not any(row):
            return
        seen.add(key)
        rows.append(row)
        witnesses.append(witness)

    for p, primes_p in pending_p_rows:
        row = [0] * n
        for P in primes_p:
            row[fb_index(P)] += P.e
        push(row, ("prime", p))

    fb_rational = sorted({P.p for P in fb})

    def harvest(box: int):
        for coords, nrm in _box_elements(K, box):
            if len(rows) >= _MAX_ROWS:
                return
            vals = _smooth_valuations(K, fb, fb_rational, coords, nrm)
            if vals is not None and any(vals):
                push(list(vals), ("element", coords))

    if box is not None and box < 1:
        raise InputError(f"box must be >= 1, got {box}")
    box = _BOX_START if box is None else box
    doublings = 0
    harvest(box)
    reduced = _reduce_relations(rows, n)
    while reduced is None and doublings < _BOX_DOUBLINGS:
        box *= 2
        doublings += 1
        harvest(box)
        reduced = _reduce_relations(rows, n)
    if reduced is None:
        raise Undecided(
            f"relation lattice rank deficient with {len(rows)} rows over "
            f"{n} primes at box {box}"
        )
    # grow the box until the structure stops changing; relations only ever
    # shrink the group, so agreement across a doubling is the stability test
    stable = False
    while doublings < _BOX_DOUBLINGS:
        before = reduced[0]
        box *= 2
        doublings += 1
        harvest(box)
        reduced = _reduce_relations(rows, n)
        if reduced is None:
            raise Undecided("box growth broke the relation lattice rank")
        if reduced[0] == before:
            stable = True
            break
    structure, class_map = reduced

    if K.known_class_number is not None:
        if structure.order == K.known_class_number:
            cert = "certified-by-known-h"
        elif excluded and K.known_class_number % structure.order == 0:
            # the usable factor base generates only a subgroup when primes
            # were excluded; a proper divisor of the declared h is not a
            # contradiction, just not a certificate
            cert = "tentative"
        else:
            raise DataError(
                f"computed h = {structure.order} contradicts the configured "
                f"class number {K.known_class_number}"
            )
    elif (
        stable
        and not excluded
        and K.degree >= 2
        and structure.order <= lenstra_class_bound(K)
    ):
        cert = "certified-by-bound"
    else:
        cert = "tentative"

    return ClassGroupData(
        field=K,
        factor_base=tuple(fb),
        relation_matrix=IntMatrix(rows, cols=n),
        structure=structure,
        class_map=tuple(class_map),
        certification=cert,
        excluded_primes=tuple(excluded),
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# classes of arbitrary primes


def _t2_shell_base(K: FieldDescription, norm: int) -> int:
    n = K.degree
    root = int(round(norm ** (2.0 / n)))
    return 2 * n * max(root, 1) + n


def _lattice_class(
    K: FieldDescription,
    CG: ClassGroupData,
    basis: list[list[int]],
    norm: int,
    label: str,
) -> AbelianElement:
    """Class of an integral ideal given by its basis and norm, via a
    factor-base-smooth element found by short-vector enumeration under T2.

    The lattice may itself sit inside factor-base primes (form ideals do);
    its own valuations are divided out of every element found in it.
    """
    if ideal_norm(basis) != norm:
        raise InternalCheckError(f"{label} has norm {ideal_norm(basis)}, not {norm}")
    if not K.has_exact_t2:
        raise Undecided(
            f"no exact T2 form on this field, cannot enumerate {label}"
        )
    gram = [
        [K.t2_pair(basis[i], basis[j]) for j in range(K.degree)]
        for i in range(K.degree)
    ]
    fb_rational = sorted({Q.p for Q in CG.factor_base})
    own = [_lattice_valuation(K, Q, basis) for Q in CG.factor_base]
    scale = 1
    for Q, v in zip(CG.factor_base, own):
        scale *= Q.norm**v
    shell = _t2_shell_base(K, norm)
    for _ in range(_SHELL_DOUBLINGS + 1):
        for coeffs, _val in short_vectors(gram, shell, limit=_VECTOR_CAP):
            coords = [
                sum(c * basis[k][t] for k, c in enumerate(coeffs))
                for t in range(K.degree)
            ]
            nrm = K.norm(coords)
            cof, rem = divmod(abs(nrm), norm)
            if rem:
                raise InternalCheckError("ideal element with norm not divisible")
            vals = _smooth_valuations(
                K, CG.factor_base, fb_rational, coords, cof * scale
            )
            if vals is None:
                continue
            cls = CG.structure.identity()
            for v, o, el in zip(vals, own, CG.class_map):
                if v != o:
                    cls = cls + (v - o) * el
            return -cls
        shell *= 2
    raise Undecided(
        f"no factor-base-smooth element of {label} within the enumeration budget"
    )


def ideal_class(
    K: FieldDescription, CG: ClassGroupData, P: PrimeIdeal
) -> AbelianElement:
    """Class of P in the computed group, via a factor-base-smooth element
    of P found by short-vector enumeration under the T2 form."""
    for i, Q in enumerate(CG.factor_base):
        if Q.p == P.p and lattice_equal(Q.basis, P.basis):
            return CG.class_map[i]
    basis = [list(r) for r in P.basis]
    return _lattice_class(K, CG, basis, P.norm, f"the prime above {P.p}")


def is_principal(K: FieldDescription, CG: ClassGroupData, P: PrimeIdeal) -> bool:
    cls = ideal_class(K, CG, P)
    if not cls.is_identity():
        return False
    principal_certificate(K, CG, P)
    return True


def principality_bound(K: FieldDescription, norm: int) -> Optional[int]:
    """T2 value below which a generator of any principal ideal of this
    norm must appear, after balancing by the fundamental unit; None when
    the unit rank is too large for the balancing argument."""
    if K.degree == 2:
        if K.signature == (0, 1):
            return 2 * norm
        eps = pell_fundamental_unit(K.kind_data[0])
        return int(norm * (eps + 1 / eps) * 1.001) + 2
    if K.kind == "multiquadratic" and K.signature == (0, 2):
        ds = K.kind_data
        real_m = None
        for mask in range(1, 4):
            prod = math.prod(ds[i] for i in range(2) if mask >> i & 1)
            if prod > 0:
                real_m = squarefree_part(prod)
        if real_m is None:
            return None
        eps = pell_fundamental_unit(real_m)
        return int(2 * math.sqrt(norm) * (eps + 1 / eps) * 1.001) + 2
    return None


def principal_certificate(
    K: FieldDescription, CG: ClassGroupData, P: PrimeIdeal
) -> dict:
    """Explicit witness that P is principal: a verified generator when the
    unit-balancing bound applies, otherwise a verified factor-base word."""
    cls = ideal_class(K, CG, P)
    if not cls.is_identity():
        raise PreconditionError("certificate requested for a nonprincipal ideal")
    bound = principality_bound(K, P.norm)
    if bound is not None:
        basis = [list(r) for r in P.basis]
        gram = [
            [K.t2_pair(basis[i], basis[j]) for j in range(K.degree)]
            for i in range(K.degree)
        ]
        for coeffs, _val in short_vectors(gram, bound, limit=_VECTOR_CAP):
            coords = [
                sum(c * basis[k][t] for k, c in enumerate(coeffs))
                for t in range(K.degree)
            ]
            nrm = K.norm(coords)
            if abs(nrm) == P.norm:
                if not lattice_equal(principal_ideal_basis(K, coords), P.basis):
                    raise InternalCheckError("norm-matched element fails to generate")
                return {"kind": "generator", "element": tuple(coords), "norm": nrm}
        raise InternalCheckError(
            "principal class but no generator under the unit-balancing bound"
        )
    # factor-base word: P appears in the base, and its unit vector lies in
    # the relation lattice exactly when its computed class is zero
    idx = None
    for i, Q in enumerate(CG.factor_base):
        if Q.p == P.p and lattice_equal(Q.basis, P.basis):
            idx = i
            break
    if idx is None:
        raise Undecided("word certificates only cover factor-base primes")
    target = [1 if i == idx else 0 for i in range(len(CG.factor_base))]
    combo = _solve_row_combination(CG.relation_matrix, target)
    if combo is None:
        raise InternalCheckError("zero class but no lattice combination")
    word = [
        (c, CG.witnesses[k]) for k, c in enumerate(combo) if c
    ]
    re_sum = [0] * len(target)
    for k, c in enumerate(combo):
        if c:
            for t in range(len(target)):
                re_sum[t] += c * CG.relation_matrix.entries[k][t]
    if re_sum != target:
        raise InternalCheckError("word certificate does not recombine")
    return {"kind": "word", "combination": word}


def _solve_row_combination(R: IntMatrix, target: Sequence[int]):
    """Integer y with y R = target, or None."""
    U, S, V = smith_normal_form(R)
    tv = [
        sum(target[i] * V.entries[i][j] for i in range(R.cols))
        for j in range(R.cols)
    ]
    r = min(R.rows, R.cols)
    z = [0] * R.rows
    for j in range(R.cols):
        d = S.entries[j][j] if j < r else 0
        if d == 0:
            if tv[j] != 0:
                return None
        else:
            q, rem = divmod(tv[j], d)
            if rem:
                return None
            z[j] = q
    return [
        sum(z[k] * U.entries[k][i] for k in range(R.rows))
        for i in range(R.rows)
    ]


def principal_order(
    K: FieldDescription,
    CG: ClassGroupData,
    p: int,
    splitting: Optional[list[PrimeIdeal]] = None,
) -> int:
    """Least k with the k-th power of a prime above p principal, as the
    order of its class; checked to be independent of the chosen prime."""
    if K.discriminant % p == 0:
        raise PreconditionError(f"{p} ramifies; principal order undefined")
    primes_p = splitting if splitting is not None else split_prime(K, p)
    orders = {ideal_class(K, CG, P).order for P in primes_p[:2]}
    if len(orders) != 1:
        raise InternalCheckError(
            f"principal order above {p} depends on the chosen prime"
        )
    return orders.pop()
