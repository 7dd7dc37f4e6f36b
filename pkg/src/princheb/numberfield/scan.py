"""Per-prime scans and truncated principal densities.

A scan walks every rational prime up to a limit and records, for each,
its status (ramified, excluded, or scanned), the Frobenius class, the
residue degree, and the principal order n_p, the least k with the k-th
power of a prime above p principal.  Densities divide matching scanned
primes by all primes up to the limit.

Imaginary quadratic fields get a fast path through binary quadratic
forms: each split prime reduces to a form whose ideal class is looked up
in a table built once per class group.  Everything else goes through the
generic splitting and short-vector machinery, which is exact but slower.

Scans partition the prime range into contiguous chunks, one per worker;
records only depend on their own prime, so output is identical for every
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import ExcludedPrime, InputError, InternalCheckError, Undecided
from .classgroup import (
    ClassGroupData,
    _lattice_class,
    class_group,
    principal_order,
)
from .fields import FieldDescription
from .ideals import frobenius, split_prime
from .lattice import reduce_binary_form
from .ntheory import kronecker, primes_upto, sqrt_mod_prime


@dataclass(frozen=True)
class ScanRecord:
    p: int
    status: str
    frobenius_class: Optional[int]
    residue_degree: Optional[int]
    principal_order: Optional[int]
    is_principal_split: Optional[bool]


@dataclass
class DensityReport:
    class_representative: int
    m: int
    limit: int
    numerator: int
    denominator: int
    value: Fraction
    ramified: tuple[int, ...]
    excluded: tuple[int, ...]
    certification: str


# ---------------------------------------------------------------------------
# the imaginary quadratic fast path


def _reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    """All reduced positive definite forms of the given discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InputError(f"{disc} is not a negative quadratic discriminant")
    out = []
    for a in range(1, math.isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            t = b * b - disc
            if t % (4 * a):
                continue
            c = t // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            out.append((a, b, c))
    return sorted(out)


def _form_ideal_basis(K: FieldDescription, a: int, b: int) -> list[list[int]]:
    # the module [a, (-b + sqrt disc)/2] in integral-basis coordinates
    if K.discriminant % 4 == 0:
        return [[a, 0], [-b // 2, 1]]
    return [[a, 0], [-(b + 1) // 2, 1]]


def _form_class_table(K: FieldDescription, CG: ClassGroupData) -> dict:
    """Reduced form -> class element, built once and cached on the group."""
    table = getattr(CG, "_form_table", None)
    if table is not None:
        return table
    table = {}
    for a, b, c in _reduced_forms(K.discriminant):
        basis = _form_ideal_basis(K, a, b)
        table[(a, b, c)] = _lattice_class(
            K, CG, basis, a, f"the form ideal ({a}, {b}, {c})"
        )
    if len(table) != CG.structure.order:
        raise InternalCheckError(
            f"{len(table)} reduced forms against class number "
            f"{CG.structure.order}"
        )
    CG._form_table = table
    return table


def _scan_quadratic_imaginary(
    K: FieldDescription, CG: ClassGroupData, ps: list[int]
) -> list[ScanRecord]:
    disc = K.discriminant
    group = K.galois_group
    cond = K.frobenius_conductor
    table = _form_class_table(K, CG)
    out = []
    for p in ps:
        if disc % p == 0:
            out.append(ScanRecord(p, "ramified", None, None, None, None))
            continue
        chi = kronecker(disc, p)
        frob = K.frobenius_map[p % cond]
        if group.order_of(frob) != (1 if chi == 1 else 2):
            raise InternalCheckError(
                f"Frobenius order at {p} disagrees with the Kronecker symbol"
            )
        if chi == -1:
            # inert: p itself generates the unique prime above it
            out.append(ScanRecord(p, "scanned", frob, 2, 1, True))
            continue
        if p == 2:
            b = 1
        else:
            r = sqrt_mod_prime(disc, p)
            b = r if r % 2 == disc % 2 else p - r
        form = reduce_binary_form(p, b, (b * b - disc) // (4 * p))
        cls = table.get(form)
        if cls is None:
            raise InternalCheckError(f"prime {p} reduced to an unknown form")
        order = cls.order
        out.append(ScanRecord(p, "scanned", frob, 1, order, order == 1))
    return out


# ---------------------------------------------------------------------------
# the generic path


def _scan_generic(
    K: FieldDescription, CG: ClassGroupData, ps: list[int]
) -> list[ScanRecord]:
    out = []
    for p in ps:
        if K.discriminant % p == 0:
            out.append(ScanRecord(p, "ramified", None, None, None, None))
            continue
        try:
            splitting = split_prime(K, p)
        except ExcludedPrime:
            out.append(ScanRecord(p, "excluded", None, None, None, None))
            continue
        frob = frobenius(K, p, splitting)
        f = splitting[0].f
        try:
            if f == K.degree:
                order = 1
            else:
                order = principal_order(K, CG, p, splitting=splitting)
        except Undecided as u:
            raise Undecided(f"scan aborted at p = {p}: {u}") from u
        out.append(ScanRecord(p, "scanned", frob, f, order, order == 1))
    return out


# ---------------------------------------------------------------------------
# drivers


def scan_primes(
    K: FieldDescription,
    limit: int,
    *,
    class_data: Optional[ClassGroupData] = None,
    threads: int = 1,
) -> tuple[ScanRecord, ...]:
    """Records for every prime up to the limit, in increasing order."""
    if limit < 2:
        raise InputError("scan limit must be at least 2")
    if threads < 1:
        raise InputError("thread count must be positive")
    CG = class_data if class_data is not None else class_group(K)
    worker = (
        _scan_quadratic_imaginary
        if K.kind == "quadratic" and K.discriminant < 0
        else _scan_generic
    )
    ps = primes_upto(limit)
    if threads == 1 or len(ps) < 2 * threads:
        records = worker(K, CG, ps)
    else:
        # fixed contiguous partition; chunk results concatenate in order,
        # so the output never depends on the worker count
        cuts = [i * len(ps) // threads for i in range(threads + 1)]
        chunks = [ps[cuts[i] : cuts[i + 1]] for i in range(threads)]
        if worker is _scan_quadratic_imaginary:
            _form_class_table(K, CG)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ch: worker(K, CG, ch), chunks))
        records = [r for part in parts for r in part]
    h = CG.structure.order
    for r in records:
        if r.principal_order is not None and h % r.principal_order:
            raise InternalCheckError(
                f"principal order {r.principal_order} at {r.p} does not "
                f"divide the class number {h}"
            )
    return tuple(records)


def empirical_density(
    K: FieldDescription,
    C: int,
    m: int,
    limit: int,
    *,
    class_data: Optional[ClassGroupData] = None,
    threads: int = 1,
) -> DensityReport:
    """Truncated density of primes with Frobenius class C whose principal
    order divides m, over all primes up to the limit."""
    if m < 1:
        raise InputError("the order divisor m must be positive")
    if not 0 <= C < K.galois_group.order:
        raise InputError(f"no group element with index {C}")
    CG = class_data if class_data is not None else class_group(K)
    records = scan_primes(K, limit, class_data=CG, threads=threads)
    numerator = 0
    ramified = []
    excluded = []
    for r in records:
        if r.status == "ramified":
            ramified.append(r.p)
        elif r.status == "excluded":
            excluded.append(r.p)
        elif r.frobenius_class == C and m % r.principal_order == 0:
            numerator += 1
    denominator = len(records)
    return DensityReport(
        class_representative=C,
        m=m,
        limit=limit,
        numerator=numerator,
        denominator=denominator,
        value=Fraction(numerator, denominator),
        ramified=tuple(ramified),
        excluded=tuple(excluded),
        certification=CG.certification,
    )
