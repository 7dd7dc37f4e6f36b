"""Group extensions of a finite group by a finite abelian kernel.

An extension  1 -> A -> E -> G -> 1  with abelian A is realized on pairs
(a, g) with the familiar twisted multiplication

    (a, g) * (b, h) = (a + g.b + c(g, h), gh)

where g.b is a fixed action of G on A by automorphisms and c is a normalized
2-cocycle.  Every extension with abelian kernel arises this way from a choice
of set-theoretic transversal, so pairs + action + cocycle are the input data
throughout; nothing here assumes the extension splits.

Finite groups are index tables: elements are 0..n-1 with 0 the identity.
They can be ingested as full multiplication tables or generated from
permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .abelian import (
    AbelianElement,
    AbelianGroup,
    IntMatrix,
    Subgroup,
    hnf_columns,
    solve_congruences,
)
from .errors import InputError, InternalCheckError, PreconditionError

# ---------------------------------------------------------------------------
# finite groups as multiplication tables


class FiniteGroup:
    """Finite group on indices 0..order-1 with 0 = identity."""

    __slots__ = ("order", "table", "_inv", "_orders")

    def __init__(self, table: Sequence[Sequence[int]], validate: bool = True):
        tab = tuple(tuple(int(x) for x in row) for row in table)
        n = len(tab)
        self.order = n
        self.table = tab
        if validate:
            self._validate()
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if tab[i][j] == 0:
                    inv[i] = j
                    break
            if inv[i] is None:
                raise InputError(f"element {i} has no inverse")
        self._inv = tuple(inv)
        orders = []
        for i in range(n):
            k, x = 1, i
            while x != 0:
                x = tab[x][i]
                k += 1
            orders.append(k)
        self._orders = tuple(orders)

    def _validate(self):
        n = self.order
        tab = self.table
        if n == 0:
            raise InputError("empty group")
        for row in tab:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise InputError("multiplication table is not closed")
        for i in range(n):
            if tab[0][i] != i or tab[i][0] != i:
                raise InputError("index 0 is not a two-sided identity")
        for i in range(n):
            ti = tab[i]
            for j in range(n):
                tij = ti[j]
                tj = tab[j]
                for k in range(n):
                    if tab[tij][k] != ti[tj[k]]:
                        raise InputError(
                            f"associativity fails at ({i},{j},{k})"
                        )

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]]) -> tuple[
        "FiniteGroup", list[tuple[int, ...]]
    ]:
        """Group generated by permutations (tuples on 0..m-1).

        Returns the group and the element list (permutations, index order:
        identity first, then BFS over right-multiplication by generators).
        """
        if not perms:
            raise InputError("no generators")
        m = len(perms[0])
        gens = []
        for p in perms:
            t = tuple(int(x) for x in p)
            if sorted(t) != list(range(m)):
                raise InputError(f"not a permutation of 0..{m - 1}: {p}")
            gens.append(t)
        ident = tuple(range(m))
        elements = [ident]
        index = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    prod = tuple(e[g[i]] for i in range(m))  # e after g
                    if prod not in index:
                        index[prod] = len(elements)
                        elements.append(prod)
                        nxt.append(prod)
            frontier = nxt
        n = len(elements)
        tab = [[0] * n for _ in range(n)]
        for i, p in enumerate(elements):
            for j, q in enumerate(elements):
                prod = tuple(p[q[k]] for k in range(m))
                tab[i][j] = index[prod]
        return cls(tab, validate=False), elements

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def order_of(self, i: int) -> int:
        return self._orders[i]

    def power(self, i: int, k: int) -> int:
        k %= self._orders[i]
        out = 0
        for _ in range(k):
            out = self.table[out][i]
        return out

    @property
    def exponent(self) -> int:
        out = 1
        for o in self._orders:
            out = _lcm(out, o)
        return out

    def is_cyclic(self) -> bool:
        return any(o == self.order for o in self._orders)

    def is_abelian(self) -> bool:
        t = self.table
        n = self.order
        return all(t[i][j] == t[j][i] for i in range(n) for j in range(i))

    def minimal_generators(self) -> list[int]:
        """Greedy small generating set: repeatedly adjoin the least element
        outside the subgroup generated so far."""
        gens: list[int] = []
        closed = {0}
        while len(closed) < self.order:
            g = next(i for i in range(self.order) if i not in closed)
            gens.append(g)
            closed = self.subgroup_closure(gens)
        return gens

    def subgroup_closure(self, gens: Sequence[int]) -> set[int]:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def _lcm(a, b):
    import math

    return math.lcm(a, b)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError("cyclic group order must be >= 1")
    return FiniteGroup(
        [[(i + j) % n for j in range(n)] for i in range(n)], validate=False
    )


def abelian_table_group(orders: Sequence[int]) -> FiniteGroup:
    """Direct product of cyclic groups as a table group (mixed-radix index)."""
    orders = [int(x) for x in orders]
    if not orders:
        return cyclic_group(1)
    coords = list(itertools.product(*(range(d) for d in orders)))
    index = {c: i for i, c in enumerate(coords)}
    n = len(coords)
    tab = [[0] * n for _ in range(n)]
    for i, a in enumerate(coords):
        for j, b in enumerate(coords):
            tab[i][j] = index[tuple((x + y) % d for x, y, d in zip(a, b, orders))]
    return FiniteGroup(tab, validate=False)


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: rotations r^i and reflections r^i s."""
    if n < 1:
        raise InputError("need n >= 1")
    # element (i, j) = r^i s^j, index j*n + i
    def idx(i, j):
        return j * n + i

    tab = [[0] * (2 * n) for _ in range(2 * n)]
    for i1 in range(n):
        for j1 in range(2):
            for i2 in range(n):
                for j2 in range(2):
                    i = (i1 + (i2 if j1 == 0 else -i2)) % n
                    j = (j1 + j2) % 2
                    tab[idx(i1, j1)][idx(i2, j2)] = idx(i, j)
    return FiniteGroup(tab, validate=False)


def quaternion_group() -> FiniteGroup:
    """Q8 presented as x^4 = 1, y^2 = x^2, y x y^-1 = x^-1."""
    def idx(a, b):
        return a * 2 + b

    tab = [[0] * 8 for _ in range(8)]
    for a1 in range(4):
        for b1 in range(2):
            for a2 in range(4):
                for b2 in range(2):
                    a = (a1 + (a2 if b1 == 0 else -a2) + (2 if b1 and b2 else 0)) % 4
                    b = (b1 + b2) % 2
                    tab[idx(a1, b1)][idx(a2, b2)] = idx(a, b)
    return FiniteGroup(tab, validate=False)


def symmetric_group(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError("need n >= 1")
    if n == 1:
        return cyclic_group(1)
    swap = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    grp, _ = FiniteGroup.from_permutations([swap, cycle])
    return grp


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    n1, n2 = g1.order, g2.order
    tab = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for a1 in range(n1):
        for a2 in range(n2):
            i = a1 * n2 + a2
            for b1 in range(n1):
                for b2 in range(n2):
                    j = b1 * n2 + b2
                    tab[i][j] = g1.table[a1][b1] * n2 + g2.table[a2][b2]
    return FiniteGroup(tab, validate=False)


@dataclass(frozen=True)
class ConjugacyClass:
    members: tuple[int, ...]
    representative: int
    common_order: int

    @property
    def size(self) -> int:
        return len(self.members)


def conjugacy_classes(G: FiniteGroup) -> list[ConjugacyClass]:
    """Conjugacy classes, sorted by minimal member; representative = minimum."""
    n = G.order
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        orbit = set()
        for t in range(n):
            orbit.add(G.table[G.table[t][i]][G.inv(t)])
        members = tuple(sorted(orbit))
        for m in members:
            seen[m] = True
        orders = {G.order_of(m) for m in members}
        if len(orders) != 1:
            raise InternalCheckError("conjugates with different orders")
        out.append(ConjugacyClass(members, members[0], orders.pop()))
    out.sort(key=lambda c: c.representative)
    return out


@dataclass(frozen=True)
class CyclicSubgroup:
    generator: int
    members: tuple[int, ...]


def maximal_cyclic_subgroups(G: FiniteGroup) -> list[CyclicSubgroup]:
    """Cyclic subgroups not properly contained in a larger cyclic subgroup."""
    subs = {}
    for g in range(G.order):
        members = []
        x = 0
        while True:
            members.append(x)
            x = G.table[x][g]
            if x == 0:
                break
        key = frozenset(members)
        if key not in subs or g < subs[key]:
            subs[key] = g
    keys = list(subs)
    maximal = []
    for k in keys:
        if not any(k < other for other in keys):
            maximal.append(CyclicSubgroup(subs[k], tuple(sorted(k))))
    maximal.sort(key=lambda s: (len(s.members), s.generator))
    # sanity: every element lies in some maximal cyclic subgroup
    covered = set()
    for s in maximal:
        covered.update(s.members)
    if covered != set(range(G.order)):
        raise InternalCheckError("maximal cyclic subgroups do not cover G")
    return maximal


# ---------------------------------------------------------------------------
# actions and cocycles


def _mats_equal_mod(m1: IntMatrix, m2: IntMatrix, factors: Sequence[int]) -> bool:
    """Whether two integer matrices induce the same endomorphism of A."""
    for j, d in enumerate(factors):
        r1, r2 = m1.entries[j], m2.entries[j]
        for x, y in zip(r1, r2):
            if (x - y) % d != 0:
                return False
    return True


def _is_automorphism(m: IntMatrix, factors: Sequence[int]) -> bool:
    r = len(factors)
    # well-defined: column i scaled by d_i must land in the relation lattice
    for i in range(r):
        for j in range(r):
            if (factors[i] * m.entries[j][i]) % factors[j] != 0:
                return False
    # surjective (hence bijective): columns + relation lattice fill Z^r
    vecs = [[m.entries[j][i] for j in range(r)] for i in range(r)]
    vecs += [[factors[j] if j == i else 0 for j in range(r)] for i in range(r)]
    basis = hnf_columns(vecs, r)
    det = 1
    for b in basis:
        p = next(i for i in range(r) if b[i] != 0)
        det *= b[p]
    return abs(det) == 1


class GAction:
    """Action of a table group G on an abelian kernel by integer matrices."""

    def __init__(
        self,
        group: FiniteGroup,
        kernel: AbelianGroup,
        matrices: Sequence[IntMatrix],
        validate: bool = True,
    ):
        if len(matrices) != group.order:
            raise InputError("need one matrix per group element")
        self.group = group
        self.kernel = kernel
        r = kernel.rank
        mats = []
        for m in matrices:
            if m.rows != r or m.cols != r:
                raise InputError(f"action matrix is not {r}x{r}")
            mats.append(
                IntMatrix(
                    [
                        [m.entries[j][i] % kernel.invariant_factors[j] for i in range(r)]
                        for j in range(r)
                    ],
                    cols=r,
                )
            )
        self.matrices = tuple(mats)
        if validate:
            self._validate()

    def _validate(self):
        fac = self.kernel.invariant_factors
        r = self.kernel.rank
        eye = IntMatrix.identity(r)
        if not _mats_equal_mod(self.matrices[0], eye, fac):
            raise InputError("action of the identity is not the identity map")
        for i, m in enumerate(self.matrices):
            if not _is_automorphism(m, fac):
                raise InputError(f"matrix for element {i} is not an automorphism")
        n = self.group.order
        for i in range(n):
            for j in range(n):
                prod = self.matrices[i] @ self.matrices[j]
                if not _mats_equal_mod(
                    prod, self.matrices[self.group.table[i][j]], fac
                ):
                    raise InputError(
                        f"action is not a homomorphism at pair ({i},{j})"
                    )

    @classmethod
    def trivial(cls, group: FiniteGroup, kernel: AbelianGroup) -> "GAction":
        eye = IntMatrix.identity(kernel.rank)
        return cls(group, kernel, [eye] * group.order, validate=False)

    @classmethod
    def from_generator_matrices(
        cls,
        group: FiniteGroup,
        kernel: AbelianGroup,
        generators: Sequence[int],
        matrices: Sequence[IntMatrix],
        validate: bool = True,
    ) -> "GAction":
        """Extend matrices given on a generating set to all of G by words."""
        if len(generators) != len(matrices):
            raise InputError("generator/matrix count mismatch")
        n = group.order
        r = kernel.rank
        mats: list[Optional[IntMatrix]] = [None] * n
        mats[0] = IntMatrix.identity(r)
        frontier = [0]
        gen_pairs = list(zip(generators, matrices))
        while frontier:
            nxt = []
            for x in frontier:
                for g, mg in gen_pairs:
                    y = group.table[x][g]
                    if mats[y] is None:
                        mats[y] = mats[x] @ mg
                        nxt.append(y)
            frontier = nxt
        if any(m is None for m in mats):
            raise InputError("given elements do not generate the group")
        return cls(group, kernel, mats, validate=validate)

    def apply(self, g: int, el: AbelianElement) -> AbelianElement:
        return self.kernel.element(self.matrices[g].matvec(el.coords))

    def matrix(self, g: int) -> IntMatrix:
        return self.matrices[g]


class TwoCocycle:
    """Normalized 2-cocycle c: G x G -> A for a given action."""

    def __init__(
        self,
        action: GAction,
        table: Sequence[Sequence[Sequence[int]]],
        validate: bool = True,
    ):
        G = action.group
        A = action.kernel
        n = G.order
        if len(table) != n or any(len(row) != n for row in table):
            raise InputError("cocycle table must be |G| x |G|")
        vals = tuple(
            tuple(A.element(coords) for coords in row) for row in table
        )
        self.action = action
        self.group = G
        self.kernel = A
        self.values = vals
        if validate:
            self._validate()

    @classmethod
    def zero(cls, action: GAction) -> "TwoCocycle":
        n = action.group.order
        z = [0] * action.kernel.rank
        return cls(action, [[z] * n for _ in range(n)], validate=False)

    def _validate(self):
        n = self.group.order
        ident = self.kernel.identity()
        for g in range(n):
            if self.values[0][g] != ident or self.values[g][0] != ident:
                raise InputError("cocycle is not normalized")
        tab = self.group.table
        act = self.action
        vals = self.values
        for g in range(1, n):
            for h in range(1, n):
                gh = tab[g][h]
                for k in range(1, n):
                    lhs = act.apply(g, vals[h][k]) - vals[gh][k]
                    rhs = vals[g][h] - vals[g][tab[h][k]]
                    if lhs != rhs:
                        raise InputError(
                            f"cocycle identity fails at ({g},{h},{k})"
                        )

    def value(self, g: int, h: int) -> AbelianElement:
        return self.values[g][h]


def coboundary(action: GAction, cochain: Sequence[AbelianElement]) -> TwoCocycle:
    """The 2-coboundary of a 1-cochain f with f(id) = 0:
    (df)(g, h) = g.f(h) - f(gh) + f(g)."""
    G = action.group
    A = action.kernel
    n = G.order
    f = list(cochain)
    if len(f) != n:
        raise InputError("need one cochain value per group element")
    if f[0] != A.identity():
        raise InputError("cochain must vanish at the identity")
    table = []
    for g in range(n):
        row = []
        for h in range(n):
            val = action.apply(g, f[h]) - f[G.table[g][h]] + f[g]
            row.append(val.coords)
        table.append(row)
    return TwoCocycle(action, table, validate=False)


# ---------------------------------------------------------------------------
# the extension itself


ExtElement = tuple[tuple[int, ...], int]  # (kernel coordinates, group index)


@dataclass(frozen=True)
class SplitResult:
    split: bool
    section: Optional[tuple[ExtElement, ...]]  # indexed by group element


class Extension:
    """Realized extension of `group` by abelian `kernel` with given action
    and 2-cocycle.  Elements are pairs (coords, g)."""

    def __init__(
        self,
        kernel: AbelianGroup,
        group: FiniteGroup,
        action: GAction,
        cocycle: TwoCocycle,
        validate: bool = True,
    ):
        if action.group != group or action.kernel != kernel:
            raise InputError("action does not match kernel/group")
        if cocycle.action is not action and (
            cocycle.group != group or cocycle.kernel != kernel
        ):
            raise InputError("cocycle does not match kernel/group")
        self.kernel = kernel
        self.group = group
        self.action = action
        self.cocycle = cocycle
        if validate:
            action._validate()
            cocycle._validate()
        self.order = kernel.order * group.order
        self._c = tuple(
            tuple(v.coords for v in row) for row in cocycle.values
        )
        self._mats = action.matrices
        self._fac = kernel.invariant_factors

    # -- basic arithmetic ---------------------------------------------------

    def identity(self) -> ExtElement:
        return ((0,) * self.kernel.rank, 0)

    def multiply(self, x: ExtElement, y: ExtElement) -> ExtElement:
        (a, g), (b, h) = x, y
        mv = self._mats[g].matvec(b)
        cz = self._c[g][h]
        coords = tuple(
            (ai + mi + ci) % d for ai, mi, ci, d in zip(a, mv, cz, self._fac)
        )
        return (coords, self.group.table[g][h])

    def inverse(self, x: ExtElement) -> ExtElement:
        a, g = x
        gi = self.group.inv(g)
        # (a,g)(b,gi) = id forces b = -gi.(a + c(g, gi))
        cz = self._c[g][gi]
        tmp = tuple((ai + ci) for ai, ci in zip(a, cz))
        mv = self._mats[gi].matvec(tmp)
        coords = tuple((-m) % d for m, d in zip(mv, self._fac))
        return (coords, gi)

    def power(self, x: ExtElement, k: int) -> ExtElement:
        if k < 0:
            return self.power(self.inverse(x), -k)
        out = self.identity()
        base = x
        while k:
            if k & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            k >>= 1
        return out

    def element_order(self, x: ExtElement) -> int:
        d = self.group.order_of(x[1])
        y = self.power(x, d)  # lands in the kernel
        return d * self.kernel.element(y[0]).order

    def kernel_part_order(self, x: ExtElement) -> int:
        """ord(x) / ord(pi(x)): the order of x^d in the kernel."""
        d = self.group.order_of(x[1])
        y = self.power(x, d)
        return self.kernel.element(y[0]).order

    def project(self, x: ExtElement) -> int:
        return x[1]

    def embed(self, a: AbelianElement) -> ExtElement:
        if a.group != self.kernel:
            raise InputError("element of a different kernel")
        return (a.coords, 0)

    def elements(self):
        for g in range(self.group.order):
            for coords in itertools.product(
                *(range(d) for d in self._fac)
            ):
                yield (coords, g)

    def element_index(self, x: ExtElement) -> int:
        """Canonical total order: group index first, then kernel rank."""
        a, g = x
        idx = 0
        for c, d in zip(a, self._fac):
            idx = idx * d + c
        return g * self.kernel.order + idx

    def fiber(self, g: int):
        for coords in itertools.product(*(range(d) for d in self._fac)):
            yield (coords, g)

    def conjugate(self, t: ExtElement, x: ExtElement) -> ExtElement:
        return self.multiply(self.multiply(t, x), self.inverse(t))

    # -- derived extensions -------------------------------------------------

    def subextension(self, g: int) -> tuple["Extension", list[int]]:
        """Pullback of E over the cyclic subgroup <g> <= G.

        Returns the new extension (over a cyclic table group of order
        ord(g)) and the list of original G-indices of the powers of g.
        """
        d = self.group.order_of(g)
        powers = [0]
        x = 0
        for _ in range(d - 1):
            x = self.group.table[x][g]
            powers.append(x)
        cyc = cyclic_group(d)
        mats = [self._mats[p] for p in powers]
        act = GAction(cyc, self.kernel, mats, validate=False)
        coc_table = [
            [self._c[powers[i]][powers[j]] for j in range(d)] for i in range(d)
        ]
        coc = TwoCocycle(act, coc_table, validate=False)
        return Extension(self.kernel, cyc, act, coc, validate=False), powers

    def quotient_extension(self, sub: Subgroup) -> "Extension":
        """Quotient of E by a G-stable subgroup S of the kernel."""
        if sub.ambient != self.kernel:
            raise InputError("subgroup of a different kernel")
        gens = sub.structure_generators()
        for g in range(self.group.order):
            for s in gens:
                if not sub.contains(self.action.apply(g, s)):
                    raise PreconditionError(
                        f"subgroup is not G-stable: element {g} moves "
                        f"{s.coords} outside"
                    )
        Q = sub.quotient_group
        rq = Q.rank
        # induced matrices: columns = project(g . lift(e_j))
        lifts = [
            sub.lift(Q.element([1 if i == j else 0 for i in range(rq)]))
            for j in range(rq)
        ]
        mats = []
        for g in range(self.group.order):
            cols = [sub.project(self.action.apply(g, l)).coords for l in lifts]
            mats.append(
                IntMatrix(
                    [[cols[j][i] for j in range(rq)] for i in range(rq)],
                    cols=rq,
                )
            )
        act = GAction(self.group, Q, mats, validate=False)
        n = self.group.order
        coc_table = [
            [
                sub.project(self.kernel.element(self._c[g][h])).coords
                for h in range(n)
            ]
            for g in range(n)
        ]
        coc = TwoCocycle(act, coc_table, validate=False)
        return Extension(Q, self.group, act, coc, validate=False)

    # -- splitting ----------------------------------------------------------

    def is_split(self) -> SplitResult:
        """Decide splitting by solving the coboundary congruence system.

        A section s(g) = (-f(g), g) exists iff the inhomogeneous system
        c(g, h) = g.f(h) - f(gh) + f(g) has a 1-cochain solution f; the
        system (restricted to generator pairs, which suffices) is solved
        over Z via Smith normal form.  Any returned section is re-verified
        to be a homomorphism on every pair.
        """
        n = self.group.order
        r = self.kernel.rank
        if r == 0 or self.kernel.order == 1:
            section = tuple(((0,) * r, g) for g in range(n))
            return SplitResult(True, section)

        if self.group.is_cyclic():
            res = self._split_cyclic()
        else:
            res = self._split_general()
        if res.split:
            self._verify_section(res.section)
        return res

    def _split_cyclic(self) -> SplitResult:
        n_ord = self.group.order
        gamma = next(
            g for g in range(n_ord) if self.group.order_of(g) == n_ord
        )
        r = self.kernel.rank
        fac = self._fac
        # (x, gamma)^n = (N x + t, id) with N = sum of gamma^i acting,
        # t = sum_{i=1}^{n-1} c(gamma^i, gamma); splitting needs N x = -t
        acc = IntMatrix.identity(r)
        total = [[0] * r for _ in range(r)]
        for _ in range(n_ord):
            for a in range(r):
                for b in range(r):
                    total[a][b] += acc.entries[a][b]
            acc = acc @ self._mats[gamma]
        t_vec = [0] * r
        p = gamma
        for _ in range(1, n_ord):
            cz = self._c[p][gamma]
            for a in range(r):
                t_vec[a] += cz[a]
            p = self.group.table[p][gamma]
        rows = [list(row) for row in total]
        rhs = [-t for t in t_vec]
        sol = solve_congruences(rows, rhs, list(fac), r)
        if sol is None:
            return SplitResult(False, None)
        x = self.kernel.element(sol)
        sigma = (x.coords, gamma)
        section: list[Optional[ExtElement]] = [None] * n_ord
        cur = self.identity()
        idx = 0
        for _ in range(n_ord):
            section[idx] = cur
            cur = self.multiply(cur, sigma)
            idx = self.group.table[idx][gamma]
        return SplitResult(True, tuple(section))

    def _split_general(self) -> SplitResult:
        G = self.group
        n = G.order
        r = self.kernel.rank
        fac = self._fac
        gens = G.minimal_generators()
        # unknowns: f(g) for g != id, coordinates flattened
        slot = {g: (g - 1) * r for g in range(1, n)}
        n_unk = (n - 1) * r
        rows, rhs, moduli = [], [], []
        for a in gens:
            Ma = self._mats[a]
            for h in range(1, n):
                ah = G.table[a][h]
                for j in range(r):
                    row = [0] * n_unk
                    for t in range(r):
                        row[slot[h] + t] += Ma.entries[j][t]
                    if ah != 0:
                        row[slot[ah] + j] -= 1
                    row[slot[a] + j] += 1
                    rows.append(row)
                    rhs.append(self._c[a][h][j])
                    moduli.append(fac[j])
        sol = solve_congruences(rows, rhs, moduli, n_unk)
        if sol is None:
            return SplitResult(False, None)
        section: list[ExtElement] = [self.identity()] * n
        for g in range(1, n):
            coords = tuple(
                (-sol[slot[g] + j]) % fac[j] for j in range(r)
            )
            section[g] = (coords, g)
        return SplitResult(True, tuple(section))

    def _verify_section(self, section: Sequence[ExtElement]):
        G = self.group
        for g in range(G.order):
            if section[g][1] != g:
                raise InternalCheckError("section does not lift the identity map")
            for h in range(G.order):
                if self.multiply(section[g], section[h]) != section[G.table[g][h]]:
                    raise InternalCheckError(
                        f"claimed section is not a homomorphism at ({g},{h})"
                    )

    # -- realization --------------------------------------------------------

    def realize(self) -> tuple[FiniteGroup, list[ExtElement]]:
        """Full multiplication table of E; element i is elements[i]."""
        elems = sorted(self.elements(), key=self.element_index)
        index = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        tab = [[0] * n for _ in range(n)]
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                tab[i][j] = index[self.multiply(x, y)]
        return FiniteGroup(tab, validate=False), elems

    def __repr__(self):
        return (
            f"Extension(kernel={list(self.kernel.invariant_factors)}, "
            f"|G|={self.group.order}, |E|={self.order})"
        )


# ---------------------------------------------------------------------------
# building an Extension from a concrete group with chosen normal subgroup


def _abelian_invariants_of_subset(
    G: FiniteGroup, elems: Sequence[int]
) -> tuple[tuple[int, ...], dict[int, tuple[int, ...]]]:
    """Invariant factors of an abelian subgroup given by its element list,
    plus a coordinate chart element -> coords."""
    import math

    elems = sorted(elems)
    order = len(elems)
    if order == 1:
        return (), {elems[0]: ()}
    # torsion counts pin the invariant factors
    exp = 1
    for e in elems:
        exp = math.lcm(exp, G.order_of(e))
    sizes = {}
    for m in range(1, exp + 1):
        if exp % m == 0:
            sizes[m] = sum(1 for e in elems if _divides_order(G, e, m))
    factors = _factors_from_torsion_sizes(sizes, order, exp)
    # find generators realizing the decomposition (small groups: search)
    gens = _find_abelian_basis(G, elems, factors)
    chart = {}
    ranges = [range(f) for f in factors]
    for coef in itertools.product(*ranges):
        x = 0
        for c, g in zip(coef, gens):
            for _ in range(c):
                x = G.table[x][g]
        if x in chart:
            raise InternalCheckError("abelian chart collision")
        chart[x] = tuple(coef)
    if set(chart) != set(elems):
        raise InternalCheckError("abelian chart does not cover the subgroup")
    return factors, chart


def _divides_order(G: FiniteGroup, e: int, m: int) -> bool:
    return G.power(e, m) == 0


def _factors_from_torsion_sizes(sizes, order, exp) -> tuple[int, ...]:
    """Invariant factors of an abelian group from |A[m]| for m | exp."""
    import math

    from sympy import factorint

    primes = sorted(factorint(order))
    per_prime: dict[int, list[int]] = {}
    for p in primes:
        counts = []
        r = 1
        prev = 1
        while exp % p**r == 0:
            cur = sizes[p**r]
            ratio = cur // prev
            k = 0
            while p**k < ratio:
                k += 1
            counts.append(k)
            prev = cur
            r += 1
        per_prime[p] = counts  # counts[r-1] = #factors with p-exponent >= r
    n_factors = max(c[0] for c in per_prime.values() if c) if per_prime else 0
    exps = {p: [0] * n_factors for p in primes}
    for p in primes:
        for r, cnt in enumerate(per_prime[p], start=1):
            for i in range(cnt):
                # align largest with largest: last `cnt` slots get exponent >= r
                exps[p][n_factors - 1 - i] = max(exps[p][n_factors - 1 - i], r)
    factors = []
    for i in range(n_factors):
        f = 1
        for p in primes:
            f *= p ** exps[p][i]
        factors.append(f)
    factors = [f for f in factors if f > 1]
    if math.prod(factors) != order:
        raise InternalCheckError("torsion reconstruction lost the order")
    return tuple(factors)


def _find_abelian_basis(G: FiniteGroup, elems, factors) -> list[int]:
    """Generators (g_1..g_k) with ord(g_i) = factors[i] and independent spans."""
    by_order: dict[int, list[int]] = {}
    for e in elems:
        by_order.setdefault(G.order_of(e), []).append(e)

    k = len(factors)
    total = 1
    for f in factors:
        total *= f

    def extend(chosen, span):
        i = len(chosen)
        if i == k:
            return list(chosen) if len(span) == total else None
        for cand in by_order.get(factors[i], ()):
            add = []
            x = cand
            while x != 0:
                add.append(x)
                x = G.table[x][cand]
            grown = set()
            for s in span:
                grown.add(s)
                for a in add:
                    grown.add(G.table[s][a])
            expected = len(span) * factors[i]
            if len(grown) != expected:
                continue
            res = extend(chosen + [cand], grown)
            if res is not None:
                return res
        return None

    res = extend([], {0})
    if res is None:
        raise InternalCheckError("no abelian basis found for subgroup")
    return res


def extension_from_group(
    E: FiniteGroup, kernel_elems: Sequence[int]
) -> tuple[Extension, list[ExtElement]]:
    """Present a concrete group E as an extension with abelian normal
    subgroup given by `kernel_elems`.

    Returns (extension, realization) where realization[i] is the pair
    corresponding to the concrete element i.  The transversal is the
    minimal-index coset representative, so the cocycle is normalized.
    """
    kset = set(kernel_elems)
    if 0 not in kset:
        raise InputError("kernel must contain the identity")
    for a in kset:
        if E.inv(a) not in kset:
            raise InputError("kernel not closed under inverse")
        for b in kset:
            if E.table[a][b] not in kset:
                raise InputError("kernel is not a subgroup")
            if E.table[a][b] != E.table[b][a]:
                raise InputError("kernel is not abelian")
    for t in range(E.order):
        ti = E.inv(t)
        for a in kset:
            if E.table[E.table[t][a]][ti] not in kset:
                raise InputError("kernel is not normal")

    factors, chart = _abelian_invariants_of_subset(E, sorted(kset))
    A = AbelianGroup(factors)

    # cosets, representative = minimal element; identity coset first
    seen = {}
    reps = []
    for x in range(E.order):
        cos = frozenset(E.table[a][x] for a in kset)
        if cos not in seen:
            seen[cos] = len(reps)
            reps.append(min(cos))
    # reindex so representative list is sorted by representative, id first
    reps.sort()
    if reps[0] != 0:
        raise InternalCheckError("identity coset lost")
    coset_of = {}
    for gi, rep in enumerate(reps):
        for a in kset:
            coset_of[E.table[a][rep]] = gi
    n = len(reps)
    qtab = [[coset_of[E.table[reps[i]][reps[j]]] for j in range(n)] for i in range(n)]
    G = FiniteGroup(qtab, validate=False)

    r = len(factors)
    inv_chart = {}
    for e, coords in chart.items():
        inv_chart[coords] = e

    def act_elem(t: int, a: int) -> int:
        return E.table[E.table[t][a]][E.inv(t)]

    gens = []
    for j in range(r):
        coords = tuple(1 if i == j else 0 for i in range(r))
        gens.append(inv_chart[coords])
    mats = []
    for gi in range(n):
        cols = [chart[act_elem(reps[gi], g)] for g in gens]
        mats.append(
            IntMatrix([[cols[j][i] for j in range(r)] for i in range(r)], cols=r)
        )
    act = GAction(G, A, mats, validate=False)

    coc_table = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = E.table[reps[i]][reps[j]]
            rep_ij = reps[qtab[i][j]]
            a = E.table[prod][E.inv(rep_ij)]
            if a not in kset:
                raise InternalCheckError("factor set escaped the kernel")
            row.append(chart[a])
        coc_table.append(row)
    coc = TwoCocycle(act, coc_table, validate=False)
    ext = Extension(A, G, act, coc, validate=False)

    realization = [None] * E.order
    for x in range(E.order):
        gi = coset_of[x]
        a = E.table[x][E.inv(reps[gi])]
        realization[x] = (chart[a], gi)
    return ext, realization


# ---------------------------------------------------------------------------
# endomorphism / automorphism enumeration (small kernels)


def endomorphism_matrices(A: AbelianGroup):
    """All distinct endomorphism matrices of A in reduced form."""
    fac = A.invariant_factors
    r = A.rank
    if r == 0:
        yield IntMatrix([], cols=0)
        return
    import math

    choices = []
    for j in range(r):
        for i in range(r):
            step = fac[j] // math.gcd(fac[j], fac[i])
            choices.append(range(0, fac[j], step))
    for flat in itertools.product(*choices):
        entries = [
            [flat[j * r + i] for i in range(r)] for j in range(r)
        ]
        yield IntMatrix(entries, cols=r)


def automorphism_matrices(A: AbelianGroup) -> list[IntMatrix]:
    fac = A.invariant_factors
    return [m for m in endomorphism_matrices(A) if _is_automorphism(m, fac)]
