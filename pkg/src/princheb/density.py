"""Exact splitting densities for group extensions.

For an extension  1 -> A -> E -> G -> 1  and a conjugacy class C of G with
common element order d, the order-m density of C is

    mu^m(C) = |{sigma in E : pi(sigma) in C, sigma^(d m) = id}| / |E|,

an exact rational computed by finite counting.  The module also provides
the structural identities satisfied by these numbers: the norm-map kernel
description, Tate H^1 for cyclic subgroups, the genus degree, the
positivity criterion through quotient extensions, closed-form evaluations,
and recovery of the kernel's invariant factors from a density table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from sympy import factorint, mobius

from .abelian import (
    AbelianGroup,
    IntMatrix,
    Subgroup,
    exact_order_subgroup,
    hnf_columns,
    solve_congruences,
)
from .errors import (
    DataError,
    FormulaInapplicable,
    InputError,
    InternalCheckError,
)
from .extension import (
    ConjugacyClass,
    ExtElement,
    Extension,
    GAction,
    TwoCocycle,
    _is_automorphism,
    abelian_table_group,
    automorphism_matrices,
    conjugacy_classes,
    maximal_cyclic_subgroups,
    symmetric_group,
)


@dataclass(frozen=True)
class DensitySpec:
    extension: Extension
    class_: ConjugacyClass
    m: int

    def __post_init__(self):
        _check_class(self.extension, self.class_)
        if self.m < 1:
            raise InputError("m must be >= 1")


@dataclass(frozen=True)
class DensityValue:
    value: Fraction
    witness_set_size: int

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise InputError("density outside [0, 1]")


def _check_class(ext: Extension, cls: ConjugacyClass):
    G = ext.group
    rep = cls.representative
    if not 0 <= rep < G.order:
        raise InputError("class representative outside the group")
    orbit = set()
    for t in range(G.order):
        orbit.add(G.table[G.table[t][rep]][G.inv(t)])
    if tuple(sorted(orbit)) != cls.members:
        raise InputError("not a conjugacy class of the extension's quotient")
    if cls.common_order != G.order_of(rep):
        raise InputError("class common_order is wrong")


def principal_density(ext: Extension, cls: ConjugacyClass, m: int) -> DensityValue:
    """mu^m(C) by literal iteration over the fiber above C."""
    _check_class(ext, cls)
    if m < 1:
        raise InputError("m must be >= 1")
    d = cls.common_order
    dm = d * m
    ident = ext.identity()
    count = 0
    for g in cls.members:
        for sigma in ext.fiber(g):
            if ext.power(sigma, dm) == ident:
                count += 1
    value = Fraction(count, ext.order)
    if value > Fraction(len(cls.members), ext.group.order):
        raise InternalCheckError("density exceeds the Chebotarev mass of C")
    return DensityValue(value, count)


def exact_order_density(ext: Extension, cls: ConjugacyClass, n: int) -> Fraction:
    """theta^n(C): density of sigma over C with order exactly d_G(C) * n.

    Computed by direct order counting and cross-checked against the
    Moebius inversion of mu over the divisors of n; a disagreement is an
    internal error, never silently resolved.
    """
    _check_class(ext, cls)
    if n < 1:
        raise InputError("n must be >= 1")
    d = cls.common_order
    target = d * n
    count = 0
    for g in cls.members:
        for sigma in ext.fiber(g):
            if ext.element_order(sigma) == target:
                count += 1
    direct = Fraction(count, ext.order)

    inverted = Fraction(0)
    for k in _divisors(n):
        inverted += int(mobius(n // k)) * principal_density(ext, cls, k).value
    if inverted != direct:
        raise InternalCheckError(
            f"order counting gives {direct} but Moebius inversion gives "
            f"{inverted} at n={n}"
        )
    return direct


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorint(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


# ---------------------------------------------------------------------------
# the norm map


def norm_map_kernel(ext: Extension, sigma: ExtElement, m: int) -> Subgroup:
    """Kernel data of N_{sigma,m}: x -> (x sigma)^(d m), d = ord(pi(sigma)).

    The witness set W = {x in A : (x sigma)^(d m) = id} is the solution set
    of the linear system L x = -t with L = sum of the powers of the action
    of pi(sigma) and t the kernel part of sigma^(d m).  Three cases:

    - W empty: returns the trivial subgroup (no witness above sigma's fiber).
    - 0 in W (sigma itself lands in C_m): W is the kernel of L, a genuine
      subgroup, returned directly.
    - W a coset missing 0: returns the translation subgroup ker L, which
      has the same size as W.
    """
    if m < 1:
        raise InputError("m must be >= 1")
    A = ext.kernel
    coords, g = sigma
    if not (isinstance(g, int) and 0 <= g < ext.group.order):
        raise InputError("group component out of range")
    a = A.element(coords)
    sigma = (a.coords, g)
    r = A.rank
    d = ext.group.order_of(g)
    dm = d * m
    fac = A.invariant_factors

    # L = sum_{i<dm} M_{g^i} = m * (sum over the d distinct powers)
    total = [[0] * r for _ in range(r)]
    p = 0
    for _ in range(d):
        mat = ext.action.matrices[p].entries
        for i in range(r):
            for j in range(r):
                total[i][j] += mat[i][j]
        p = ext.group.table[p][g]
    rows = [[m * x for x in row] for row in total]

    t = ext.power(sigma, dm)[0]
    rhs = [-x for x in t]
    sol = solve_congruences(rows, rhs, list(fac), r, want_kernel=True)
    if sol is None:
        sub = Subgroup(A, ())
        expected = 0
    else:
        _, kbasis = sol
        sub = Subgroup(A, [A.element(b) for b in kbasis])
        expected = sub.order

    if A.order <= 1024:
        ws = 0
        ident = ext.identity()
        zero_in_w = all(c == 0 for c in t)
        for x in A.elements():
            if ext.power(ext.multiply(ext.embed(x), sigma), dm) == ident:
                ws += 1
                if zero_in_w and not sub.contains(x):
                    raise InternalCheckError("witness outside the claimed kernel")
        if ws != expected:
            raise InternalCheckError(
                f"witness set has {ws} elements, kernel subgroup {expected}"
            )
    return sub


def _endomorphism_kernel_size(mat_rows: Sequence[Sequence[int]], A: AbelianGroup) -> int:
    """|ker(phi)| for the endomorphism of A given by an integer matrix."""
    r = A.rank
    if r == 0:
        return 1
    vecs = [[mat_rows[j][i] for j in range(r)] for i in range(r)]
    vecs += [
        [A.invariant_factors[j] if j == i else 0 for j in range(r)]
        for i in range(r)
    ]
    basis = hnf_columns(vecs, r)
    det = 1
    for b in basis:
        piv = next(i for i in range(r) if b[i] != 0)
        det *= b[piv]
    # |im phi| = |A| / det(HNF), so |ker phi| = det(HNF)
    return det


def tate_h1(g_order: int, A: AbelianGroup, action_of_g: IntMatrix) -> int:
    """|H^1(<g>, A)| = |ker(Norm)| / |im(action - 1)| for a cyclic group of
    order g_order acting through the given automorphism."""
    if g_order < 1:
        raise InputError("group order must be >= 1")
    r = A.rank
    if action_of_g.rows != r or action_of_g.cols != r:
        raise InputError("action matrix does not match the group rank")
    if not _is_automorphism(action_of_g, A.invariant_factors):
        raise InputError("matrix does not define an automorphism")
    # order must divide g_order
    acc = IntMatrix.identity(r)
    for _ in range(g_order):
        acc = acc @ action_of_g
    for j, dflt in enumerate(A.invariant_factors):
        for i in range(r):
            if (acc.entries[j][i] - (1 if i == j else 0)) % dflt != 0:
                raise InputError(
                    f"automorphism order does not divide {g_order}"
                )

    norm = [[0] * r for _ in range(r)]
    acc = IntMatrix.identity(r)
    for _ in range(g_order):
        for i in range(r):
            for j in range(r):
                norm[i][j] += acc.entries[i][j]
        acc = acc @ action_of_g
    delta = [
        [action_of_g.entries[i][j] - (1 if i == j else 0) for j in range(r)]
        for i in range(r)
    ]
    ker_n = _endomorphism_kernel_size(norm, A)
    ker_d = _endomorphism_kernel_size(delta, A)
    im_d = A.order // ker_d
    h1, rem = divmod(ker_n, im_d)
    if rem:
        raise InternalCheckError(
            "im(action - 1) does not sit inside ker(Norm)"
        )
    return h1


def genus_degree(ext: Extension, g: int) -> int:
    """[K_F : K] analogue: |E_g| / (|[E_g, E_g]| * d) for the subextension
    over <g>.  The commutator subgroup lies in the kernel; it is spanned by
    the images of (1 - g^j) together with the cocycle asymmetries."""
    G = ext.group
    A = ext.kernel
    if not 0 <= g < G.order:
        raise InputError("element outside the group")
    d = G.order_of(g)
    powers = [0]
    x = 0
    for _ in range(d - 1):
        x = G.table[x][g]
        powers.append(x)
    r = A.rank
    gens = []
    for p in powers:
        mat = ext.action.matrices[p]
        for i in range(r):
            col = [
                (1 if i == j else 0) - mat.entries[j][i] for j in range(r)
            ]
            gens.append(A.element(col))
    for pi, pj in itertools.combinations(powers, 2):
        c1 = ext.cocycle.values[pi][pj]
        c2 = ext.cocycle.values[pj][pi]
        gens.append(c1 - c2)
    comm = Subgroup(A, gens)
    if A.order % comm.order != 0:
        raise InternalCheckError("commutator subgroup order does not divide |A|")
    return A.order // comm.order


# ---------------------------------------------------------------------------
# positivity


@dataclass(frozen=True)
class PositivityCertificate:
    divisor: int
    g: int
    section: tuple  # section of the split quotient extension


def positivity(
    ext: Extension, cls: ConjugacyClass, m: int
) -> tuple[bool, Optional[PositivityCertificate]]:
    """Whether mu^m(C) > 0, by the quotient-splitting criterion.

    True iff some divisor i of m admits the subgroup generated by elements
    of order exactly i (it exists iff i divides the exponent) such that the
    quotient of the subextension over some g in C by that subgroup splits.
    The search order (divisors ascending, then class members ascending) is
    fixed, so the certificate is deterministic.
    """
    _check_class(ext, cls)
    if m < 1:
        raise InputError("m must be >= 1")
    A = ext.kernel
    subexts = {}
    for i in _divisors(m):
        S = exact_order_subgroup(A, i)
        if S is None:
            continue
        for g in cls.members:
            if g not in subexts:
                subexts[g] = ext.subextension(g)[0]
            quo = subexts[g].quotient_extension(S)
            res = quo.is_split()
            if res.split:
                return True, PositivityCertificate(i, g, res.section)
    return False, None


# ---------------------------------------------------------------------------
# closed forms


def closed_form_density_base(ext: Extension, cls: ConjugacyClass) -> Fraction:
    """mu^1(C) in closed form: (|C|/|G|) * |H^1(<g>, A)| / genus_degree.

    Requires mu^1(C) > 0; raises FormulaInapplicable naming the failed
    hypothesis otherwise.
    """
    pos, cert = positivity(ext, cls, 1)
    if not pos:
        raise FormulaInapplicable(
            "mu^1(C) = 0: no subextension over C splits, the closed form "
            "assumes a lift of order d_G(C) exists"
        )
    g = cert.g
    d = ext.group.order_of(g)
    h1 = tate_h1(d, ext.kernel, ext.action.matrices[g])
    gd = genus_degree(ext, g)
    val = (
        Fraction(len(cls.members), ext.group.order)
        * Fraction(h1, gd)
    )
    return val


def _minimal_order_d_lift(ext: Extension, cls: ConjugacyClass) -> Optional[ExtElement]:
    """The least element of C_1 (order-d lifts over C) in the fixed ordering."""
    d = cls.common_order
    ident = ext.identity()
    for g in sorted(cls.members):
        for sigma in ext.fiber(g):
            if ext.power(sigma, d) == ident:
                return sigma
    return None


def closed_form_density(ext: Extension, cls: ConjugacyClass, m: int) -> Fraction:
    """mu^m(C) in closed form: mu^1(C) * |(A / ker N_{sigma,1})[m]|, with
    sigma the minimal order-d lift over C."""
    if m < 1:
        raise InputError("m must be >= 1")
    base = closed_form_density_base(ext, cls)  # raises when mu^1 = 0
    sigma = _minimal_order_d_lift(ext, cls)
    if sigma is None:
        raise InternalCheckError("positivity held but no order-d lift found")
    ker = norm_map_kernel(ext, sigma, 1)
    quo = ker.quotient_group
    return base * quo.torsion_size(m)


# ---------------------------------------------------------------------------
# class-group recovery from a density table


def class_group_from_densities(table: Mapping[int, object]) -> AbelianGroup:
    """Invariant factors of the kernel from densities of the identity class.

    `table` maps m to mu^m({id}) (DensityValue or plain rational).  Needs
    the m = 1 entry, an entry at some multiple of the exponent (m = |A|
    always works) so the order is visible, and prime-power entries p^r up
    to the p-part of the order.  Ratios mu^m/mu^1 recover |A[m]|.
    """
    def as_fraction(v) -> Fraction:
        v = getattr(v, "value", v)
        return Fraction(v)

    if 1 not in table:
        raise DataError("density table needs the m = 1 entry")
    mu1 = as_fraction(table[1])
    if mu1 <= 0:
        raise DataError("mu^1({id}) must be positive")

    sizes: dict[int, int] = {}
    for m, v in table.items():
        if m < 1:
            raise DataError(f"bad table key {m}")
        ratio = as_fraction(v) / mu1
        if ratio.denominator != 1 or ratio <= 0:
            raise DataError(
                f"mu^{m}/mu^1 = {ratio} is not a positive integer"
            )
        sizes[m] = int(ratio)

    for m1, s1 in sizes.items():
        for m2, s2 in sizes.items():
            if m2 % m1 == 0 and s1 > s2:
                raise DataError(
                    f"torsion sizes not monotone: |A[{m1}]| = {s1} > "
                    f"|A[{m2}]| = {s2}"
                )

    order = max(sizes.values())
    if order == 1:
        return AbelianGroup(())

    jumps: dict[int, list[int]] = {}
    for p, vp in sorted(factorint(order).items()):
        target = p**vp
        chain = []
        prev = 1
        r = 1
        while prev < target:
            key = p**r
            if key not in sizes:
                raise DataError(
                    f"density table is missing m = {key} needed to resolve "
                    f"the {p}-part"
                )
            cur = sizes[key]
            step, rem = divmod(cur, prev)
            k = 0
            while p**k < step:
                k += 1
            if rem or p**k != step:
                raise DataError(
                    f"|A[{key}]| / |A[{p ** (r - 1)}]| = {cur}/{prev} is not "
                    f"a power of {p}"
                )
            if k == 0:
                raise DataError(
                    f"order has {p}-part {target} but the {p}-torsion "
                    f"stops growing at m = {key}"
                )
            if chain and k > chain[-1]:
                raise DataError(
                    f"{p}-rank jumps increase at r = {r}; table inconsistent"
                )
            chain.append(k)
            prev = cur
            r += 1
        jumps[p] = chain

    n_factors = max(chain[0] for chain in jumps.values())
    exps = {p: [0] * n_factors for p in jumps}
    for p, chain in jumps.items():
        for r, cnt in enumerate(chain, start=1):
            for i in range(cnt):
                slot = n_factors - 1 - i
                exps[p][slot] = max(exps[p][slot], r)
    factors = []
    for i in range(n_factors):
        f = 1
        for p in jumps:
            f *= p ** exps[p][i]
        factors.append(f)
    factors = tuple(f for f in factors if f > 1)
    if math.prod(factors) != order:
        raise DataError(
            f"reconstructed factors {factors} have order "
            f"{math.prod(factors)}, table says {order}"
        )
    return AbelianGroup(factors)


def density_table_for_recovery(ext: Extension) -> dict[int, DensityValue]:
    """The table class_group_from_densities expects, generated exactly:
    m = 1, every prime power up to the p-parts of |A|, and m = |A|."""
    id_class = ConjugacyClass((0,), 0, 1)
    keys = {1, ext.kernel.order if ext.kernel.order >= 1 else 1}
    for p, vp in factorint(ext.kernel.order).items():
        for r in range(1, vp + 1):
            keys.add(p**r)
    return {m: principal_density(ext, id_class, m) for m in sorted(keys)}


# ---------------------------------------------------------------------------
# search for nonsplit extensions with all classes positive


def _enumerate_cocycles(
    action: GAction,
    limit: Optional[int] = None,
    raw_limit: Optional[int] = None,
):
    """All normalized 2-cocycles for the action, by exhausting tables and
    filtering with the cocycle identity.  Only viable for tiny |G| and |A|;
    `limit` caps valid cocycles yielded, `raw_limit` caps tables tried."""
    G = action.group
    A = action.kernel
    n = G.order
    slots = [(g, h) for g in range(1, n) for h in range(1, n)]
    elems = [el.coords for el in A.elements()]
    zero = (0,) * A.rank
    count = 0
    tried = 0
    for combo in itertools.product(elems, repeat=len(slots)):
        tried += 1
        if raw_limit is not None and tried > raw_limit:
            return
        table = [[zero] * n for _ in range(n)]
        for (g, h), v in zip(slots, combo):
            table[g][h] = v
        try:
            yield TwoCocycle(action, table, validate=True)
        except InputError:
            continue
        count += 1
        if limit is not None and count >= limit:
            return


def find_nonsplit_with_positive_classes(
    max_kernel: int, max_quotient: int, budget: int
) -> list[Extension]:
    """Search for extensions that do not split although every conjugacy
    class has mu^1 > 0 (equivalently, every subextension over a maximal
    cyclic subgroup splits).  Returns any found; the empty list is a
    legitimate outcome.  Cyclic quotients are skipped: there a split
    maximal-cyclic subextension is the whole extension.
    """
    quotients = []
    for orders in [(2, 2), (2, 4), (2, 2, 2), (3, 3)]:
        n = math.prod(orders)
        if n <= max_quotient:
            quotients.append(abelian_table_group(orders))
    if max_quotient >= 6:
        quotients.append(symmetric_group(3))
    kernels = []
    for fac in [(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 4), (3, 3)]:
        A = AbelianGroup(fac)
        if A.order <= max_kernel:
            kernels.append(A)

    found = []
    examined = 0
    for G in quotients:
        gens = G.minimal_generators()
        classes = conjugacy_classes(G)
        max_cyc = maximal_cyclic_subgroups(G)
        for A in kernels:
            # actions through assignments of automorphisms to generators
            auts = automorphism_matrices(A)
            actions = []
            for mats in itertools.product(auts, repeat=len(gens)):
                try:
                    actions.append(
                        GAction.from_generator_matrices(
                            G, A, gens, list(mats), validate=True
                        )
                    )
                except InputError:
                    continue
                if len(actions) >= 12:
                    break
            for action in actions:
                space = A.order ** ((G.order - 1) ** 2)
                if space <= budget:
                    limit, raw = None, None
                else:
                    limit, raw = budget, 64 * budget
                for coc in _enumerate_cocycles(action, limit=limit, raw_limit=raw):
                    examined += 1
                    if examined > budget:
                        return found
                    E = Extension(A, G, action, coc, validate=False)
                    if E.is_split().split:
                        continue
                    ok = True
                    for sub in max_cyc:
                        se, _ = E.subextension(sub.generator)
                        if not se.is_split().split:
                            ok = False
                            break
                    if not ok:
                        continue
                    # re-verify through the positivity criterion proper
                    if all(positivity(E, c, 1)[0] for c in classes):
                        found.append(E)
    return found
