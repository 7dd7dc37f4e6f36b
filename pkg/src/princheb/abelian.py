"""Finitely generated finite abelian groups in invariant-factor coordinates.

A group A = Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r (all d_i >= 2) is
stored as the tuple of invariant factors.  Elements are coordinate vectors
reduced mod the factors.  Subgroups are handled through integer lattices:
a subgroup S <= A generated by vectors g_1..g_k corresponds to the lattice
L_S = span_Z(g_i) + diag(d) Z^r, and all structural questions (order,
invariant factors of S, the quotient A/S with its projection) reduce to
Hermite and Smith normal form computations on small integer matrices.

Everything here is exact integer arithmetic; no floats anywhere.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError, InternalCheckError


# ---------------------------------------------------------------------------
# integer matrices


class IntMatrix:
    """Immutable integer matrix; just enough surface for normal-form work."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[int]], cols: Optional[int] = None):
        ent = tuple(tuple(int(x) for x in row) for row in entries)
        self.rows = len(ent)
        if ent:
            self.cols = len(ent[0])
            if any(len(r) != self.cols for r in ent):
                raise InputError("ragged matrix")
        else:
            self.cols = 0 if cols is None else int(cols)
        self.entries = ent

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls([[0] * c for _ in range(r)], cols=c)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]!r})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InputError("shape mismatch in matrix product")
        ob = other.entries
        out = []
        for row in self.entries:
            out.append(
                [
                    sum(row[k] * ob[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
            )
        return IntMatrix(out, cols=other.cols)

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise InputError("shape mismatch in matvec")
        return tuple(sum(row[k] * v[k] for k in range(self.cols)) for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        """Exact determinant (Bareiss); square matrices only."""
        if self.rows != self.cols:
            raise InputError("det of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
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
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _add_row(a, u, dst, src, q):
    # row_dst += q * row_src
    ad, asrc = a[dst], a[src]
    for k in range(len(ad)):
        ad[k] += q * asrc[k]
    ud, usrc = u[dst], u[src]
    for k in range(len(ud)):
        ud[k] += q * usrc[k]


def _add_col(a, v, dst, src, q):
    for row in a:
        row[dst] += q * row[src]
    for row in v:
        row[dst] += q * row[src]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U m V = S, U and V unimodular, S diagonal with
    nonnegative entries satisfying S[0,0] | S[1,1] | ...

    Smallest-absolute-entry pivoting; total on every shape including empty.
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    t = 0
    while t < min(r, c):
        # locate the smallest nonzero entry of the trailing submatrix
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            bi, bj = best
            if bi != t:
                _swap_rows(a, u, t, bi)
            if bj != t:
                _swap_cols(a, v, t, bj)
            dirty = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    _add_row(a, u, i, t, -(a[i][t] // a[t][t]))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    _add_col(a, v, j, t, -(a[t][j] // a[t][t]))
                    if a[t][j] != 0:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, r):
                    for j in range(t, c):
                        x = a[i][j]
                        if x != 0 and (
                            best is None or abs(x) < abs(a[best[0]][best[1]])
                        ):
                            best = (i, j)
                continue
            # row t / col t clear; force pivot to divide the rest
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(a, u, t, offender, 1)
            best = (t, t)
        if a[t][t] < 0:
            for k in range(c):
                a[t][k] = -a[t][k]
            for k in range(r):
                u[t][k] = -u[t][k]
        t += 1

    U = IntMatrix(u, cols=r)
    S = IntMatrix(a, cols=c)
    V = IntMatrix(v, cols=c)
    return U, S, V


def hnf_columns(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Column-style Hermite basis of the lattice spanned by `vectors` in Z^dim.

    Returns a list of basis vectors in echelon order: pivot rows strictly
    increase, pivots positive, entries left of a pivot reduced into [0, pivot).
    """
    cols = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []  # echelon, one per pivot row
    pivot_rows: list[int] = []

    for vec in cols:
        w = list(vec)
        while True:
            # reduce against existing pivots
            lead = None
            for i in range(dim):
                if w[i] != 0:
                    lead = i
                    break
            if lead is None:
                break
            if lead in pivot_rows:
                k = pivot_rows.index(lead)
                b = basis[k]
                g = math.gcd(b[lead], w[lead])
                if w[lead] % b[lead] == 0:
                    q = w[lead] // b[lead]
                    for i in range(dim):
                        w[i] -= q * b[i]
                    continue
                # extended gcd combine: replace basis vector with gcd column
                x0, y0 = _bezout(b[lead], w[lead])
                newb = [x0 * b[i] + y0 * w[i] for i in range(dim)]
                qb = b[lead] // g
                qw = w[lead] // g
                neww = [qb * w[i] - qw * b[i] for i in range(dim)]
                basis[k] = newb
                w = neww
                continue
            # new pivot row
            ins = 0
            while ins < len(pivot_rows) and pivot_rows[ins] < lead:
                ins += 1
            pivot_rows.insert(ins, lead)
            basis.insert(ins, w)
            break

    # normalize: positive pivots, earlier vectors reduced at later pivot rows
    for k, p in enumerate(pivot_rows):
        if basis[k][p] < 0:
            basis[k] = [-x for x in basis[k]]
    for k in range(len(basis)):
        p = pivot_rows[k]
        for j in range(k):
            q = basis[j][p] // basis[k][p]
            if q:
                basis[j] = [basis[j][i] - q * basis[k][i] for i in range(dim)]
    return basis


def _bezout(a: int, b: int) -> tuple[int, int]:
    g, x, y = _xgcd(a, b)
    return x, y


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lattice_coefficients(
    basis: Sequence[Sequence[int]], vec: Sequence[int]
) -> Optional[list[int]]:
    """Coefficients of vec in an hnf_columns basis, or None if not in the lattice."""
    dim = len(vec)
    w = list(vec)
    coeffs = [0] * len(basis)
    for k, b in enumerate(basis):
        p = None
        for i in range(dim):
            if b[i] != 0:
                p = i
                break
        if p is None:  # pragma: no cover - basis vectors are nonzero
            continue
        # rows above p must already be cleared for membership
        if w[p] % b[p] != 0:
            return None
        q = w[p] // b[p]
        coeffs[k] = q
        if q:
            for i in range(dim):
                w[i] -= q * b[i]
    if any(w):
        return None
    return coeffs


def lattice_contains(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    return lattice_coefficients(basis, vec) is not None


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = m.rows
    if n != m.cols:
        raise InputError("inverse of non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise InputError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = [[a[i][n + j] for j in range(n)] for i in range(n)]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise InputError("matrix is not unimodular")
    return IntMatrix([[int(x) for x in row] for row in out], cols=n)


def solve_congruences(
    rows: Sequence[Sequence[int]],
    rhs: Sequence[int],
    moduli: Sequence[int],
    n_unknowns: int,
    want_kernel: bool = False,
):
    """Solve the system  sum_j rows[i][j] x_j = rhs[i]  (mod moduli[i])  over Z.

    A modulus of 0 means an exact integer equation.  Returns None when
    unsolvable, otherwise a particular solution tuple; with want_kernel=True
    returns (particular, kernel_basis) where kernel_basis generates the
    lattice of homogeneous solutions (hnf_columns form in Z^n_unknowns).
    """
    work_rows: list[list[int]] = []
    work_rhs: list[int] = []
    work_mod: list[int] = []
    for row, b, md in zip(rows, rhs, moduli):
        if md == 1:
            continue  # trivially satisfiable
        if md:
            row = [x % md for x in row]
            b = b % md
        if not any(row):
            if (b % md if md else b) != 0:
                return None
            continue
        work_rows.append(list(row))
        work_rhs.append(b)
        work_mod.append(md)

    m = len(work_rows)
    slack_idx = [i for i in range(m) if work_mod[i]]
    n_total = n_unknowns + len(slack_idx)
    if m == 0:
        part = tuple([0] * n_unknowns)
        if want_kernel:
            eye = [[int(i == j) for i in range(n_unknowns)] for j in range(n_unknowns)]
            return part, eye
        return part

    mat = []
    for i in range(m):
        row = work_rows[i] + [0] * len(slack_idx)
        mat.append(row)
    for k, i in enumerate(slack_idx):
        mat[i][n_unknowns + k] = work_mod[i]

    U, S, V = smith_normal_form(IntMatrix(mat, cols=n_total))
    c = U.matvec(work_rhs)
    diag = S.diagonal()
    y = [0] * n_total
    rank = 0
    for k in range(min(m, n_total)):
        if diag[k] == 0:
            break
        if c[k] % diag[k] != 0:
            return None
        y[k] = c[k] // diag[k]
        rank = k + 1
    for k in range(rank, m):
        if c[k] != 0:
            return None
    full = V.matvec(y)
    part = tuple(full[:n_unknowns])
    if not want_kernel:
        return part
    kernel_cols = []
    for k in range(rank, n_total):
        col = [V.entries[i][k] for i in range(n_total)]
        kernel_cols.append(col[:n_unknowns])
    basis = hnf_columns(kernel_cols, n_unknowns)
    return part, basis


# ---------------------------------------------------------------------------
# abelian groups


def invariant_factors_from_cyclic(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of  Z/orders[0] x Z/orders[1] x ...  (any cyclic orders)."""
    orders = [int(x) for x in orders]
    if any(x < 1 for x in orders):
        raise InputError("cyclic orders must be >= 1")
    orders = [x for x in orders if x > 1]
    if not orders:
        return ()
    n = len(orders)
    diag = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    _, S, _ = smith_normal_form(IntMatrix(diag, cols=n))
    return tuple(x for x in S.diagonal() if x > 1)


@dataclass(frozen=True)
class AbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        fac = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fac)
        for d in fac:
            if d < 2:
                raise InputError(f"invariant factor {d} < 2")
        for a, b in zip(fac, fac[1:]):
            if b % a != 0:
                raise InputError(f"invariant factors {fac} violate divisibility")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "AbelianGroup":
        return cls(invariant_factors_from_cyclic(orders))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def identity(self) -> "AbelianElement":
        return AbelianElement(self, (0,) * self.rank)

    def element(self, coords: Sequence[int]) -> "AbelianElement":
        """Build an element, reducing coordinates into range."""
        if len(coords) != self.rank:
            raise InputError(
                f"coordinate vector of length {len(coords)} for rank {self.rank}"
            )
        red = tuple(
            int(c) % d for c, d in zip(coords, self.invariant_factors)
        )
        return AbelianElement(self, red)

    def elements(self) -> Iterator["AbelianElement"]:
        for coords in itertools.product(
            *(range(d) for d in self.invariant_factors)
        ):
            yield AbelianElement(self, coords)

    def element_rank(self, el: "AbelianElement") -> int:
        """Mixed-radix rank; fixes the canonical element ordering."""
        idx = 0
        for c, d in zip(el.coords, self.invariant_factors):
            idx = idx * d + c
        return idx

    def torsion_size(self, m: int) -> int:
        """|A[m]| = prod gcd(d_i, m)."""
        if m < 1:
            raise InputError("torsion exponent must be >= 1")
        return math.prod(math.gcd(d, m) for d in self.invariant_factors)


@dataclass(frozen=True)
class AbelianElement:
    group: AbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.group.rank:
            raise InputError("coordinate length does not match group rank")
        for c, d in zip(coords, self.group.invariant_factors):
            if not 0 <= c < d:
                raise InputError(f"coordinate {c} not reduced mod {d}")

    def __add__(self, other: "AbelianElement") -> "AbelianElement":
        if self.group != other.group:
            raise InputError("elements of different groups")
        return self.group.element(
            [a + b for a, b in zip(self.coords, other.coords)]
        )

    def __neg__(self) -> "AbelianElement":
        return self.group.element([-a for a in self.coords])

    def __sub__(self, other: "AbelianElement") -> "AbelianElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "AbelianElement":
        return self.group.element([k * a for a in self.coords])

    def is_identity(self) -> bool:
        return not any(self.coords)

    @property
    def order(self) -> int:
        out = 1
        for c, d in zip(self.coords, self.group.invariant_factors):
            out = math.lcm(out, d // math.gcd(d, c))
        return out


class Subgroup:
    """Subgroup of an AbelianGroup, backed by its coordinate lattice.

    Carries the invariant-factor presentation of the subgroup itself
    (`structure`) and enough data to decide membership and to build the
    quotient group with projection and lift maps.
    """

    def __init__(self, ambient: AbelianGroup, generators: Sequence[AbelianElement]):
        for g in generators:
            if g.group != ambient:
                raise InputError("generator does not live in the ambient group")
        self.ambient = ambient
        self.generators = tuple(generators)
        r = ambient.rank
        d = ambient.invariant_factors
        vectors = [list(g.coords) for g in generators]
        vectors += [[d[i] if j == i else 0 for j in range(r)] for i in range(r)]
        self._basis = hnf_columns(vectors, r)  # full rank r (contains diag(d))
        if len(self._basis) != r:
            raise InternalCheckError("subgroup lattice lost full rank")

        # structure: Z^r / C Z^r with C = basis^{-1} diag(d)
        cmat_cols = []
        for i in range(r):
            target = [d[i] if j == i else 0 for j in range(r)]
            coeffs = lattice_coefficients(self._basis, target)
            if coeffs is None:
                raise InternalCheckError("diag(d) escaped the subgroup lattice")
            cmat_cols.append(coeffs)
        C = IntMatrix(
            [[cmat_cols[j][i] for j in range(r)] for i in range(r)], cols=r
        )
        Uc, Sc, _ = smith_normal_form(C)
        sdiag = Sc.diagonal()
        if any(x == 0 for x in sdiag):
            raise InternalCheckError("subgroup relation matrix not full rank")
        self.structure = AbelianGroup(tuple(x for x in sdiag if x > 1))
        self.order = math.prod(sdiag) if r else 1
        self._struct_diag = sdiag
        self._Uc_inv = unimodular_inverse(Uc) if r else IntMatrix([], cols=0)

        # quotient: Z^r / L_S via SNF of the basis matrix
        B = IntMatrix(
            [[self._basis[j][i] for j in range(r)] for i in range(r)], cols=r
        )
        Uq, Sq, _ = smith_normal_form(B)
        qdiag = Sq.diagonal()
        self._Uq = Uq
        self._q_diag = qdiag
        self._q_keep = [i for i, x in enumerate(qdiag) if x > 1]
        self.quotient_group = AbelianGroup(tuple(qdiag[i] for i in self._q_keep))
        self._Uq_inv = unimodular_inverse(Uq) if r else IntMatrix([], cols=0)

        if self.order * self.quotient_group.order != ambient.order:
            raise InternalCheckError("subgroup * quotient order mismatch")

    def __repr__(self):
        return (
            f"Subgroup(order={self.order}, structure="
            f"{list(self.structure.invariant_factors)}, "
            f"ambient={list(self.ambient.invariant_factors)})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and self._basis == other._basis
        )

    def __hash__(self):
        return hash((self.ambient, tuple(tuple(b) for b in self._basis)))

    def contains(self, el: AbelianElement) -> bool:
        if el.group != self.ambient:
            raise InputError("element of a different group")
        return lattice_contains(self._basis, el.coords)

    def structure_generators(self) -> list[AbelianElement]:
        """Ambient elements generating the subgroup, one per structure factor."""
        r = self.ambient.rank
        out = []
        for k, s in enumerate(self._struct_diag):
            if s <= 1:
                continue
            t = tuple(self._Uc_inv.entries[i][k] for i in range(r))
            vec = [
                sum(self._basis[j][i] * t[j] for j in range(r)) for i in range(r)
            ]
            out.append(self.ambient.element(vec))
        return out

    def elements(self) -> Iterator[AbelianElement]:
        gens = self.structure_generators()
        facs = self.structure.invariant_factors
        for coef in itertools.product(*(range(f) for f in facs)):
            acc = self.ambient.identity()
            for c, g in zip(coef, gens):
                acc = acc + c * g
            yield acc

    def project(self, el: AbelianElement) -> AbelianElement:
        if el.group != self.ambient:
            raise InputError("element of a different group")
        full = self._Uq.matvec(el.coords)
        return self.quotient_group.element([full[i] for i in self._q_keep])

    def lift(self, q_el: AbelianElement) -> AbelianElement:
        """Some preimage in the ambient group of a quotient element."""
        if q_el.group != self.quotient_group:
            raise InputError("element of a different quotient")
        r = self.ambient.rank
        full = [0] * r
        for c, i in zip(q_el.coords, self._q_keep):
            full[i] = c
        vec = self._Uq_inv.matvec(full)
        return self.ambient.element(vec)


def subgroup_from_generators(
    A: AbelianGroup, gens: Sequence[AbelianElement]
) -> Subgroup:
    return Subgroup(A, gens)


def torsion_subgroup(A: AbelianGroup, m: int) -> Subgroup:
    """A[m] = {x : m x = 0}, generated by (d_i/gcd(d_i, m)) e_i."""
    if m < 1:
        raise InputError("torsion exponent must be >= 1")
    gens = []
    for i, d in enumerate(A.invariant_factors):
        step = d // math.gcd(d, m)
        gens.append(A.element([step if j == i else 0 for j in range(A.rank)]))
    sub = Subgroup(A, gens)
    if sub.order != A.torsion_size(m):
        raise InternalCheckError("torsion subgroup size mismatch")
    return sub


_EXACT_ORDER_CAP = 2 * 10**5


@lru_cache(maxsize=None)
def exact_order_subgroup(A: AbelianGroup, n: int) -> Optional[Subgroup]:
    """Subgroup generated by all elements of order exactly n.

    Returns None when no element of order n exists (n does not divide the
    exponent).  n = 1 gives the trivial subgroup.  Literal enumeration,
    guarded by a size cap.
    """
    if n < 1:
        raise InputError("order must be >= 1")
    if n == 1:
        return Subgroup(A, ())
    if A.exponent % n != 0:
        return None
    if A.order > _EXACT_ORDER_CAP:
        raise InputError(
            f"group of order {A.order} too large for exact-order enumeration"
        )
    gens = [x for x in A.elements() if x.order == n]
    return Subgroup(A, gens)
