"""Field descriptions over Q with exact maximal-order arithmetic.

A FieldDescription fixes a primitive element theta, a Z-basis of the
maximal order expressed in powers of theta, integer structure constants
for multiplication in that basis, the Galois group with element labels,
and a Frobenius resolver (conductor plus residue map).  Quadratic and
multiquadratic fields are built from scratch; generic fields come from a
validated config.  All arithmetic is exact; floats appear only inside the
guarded ceiling/floor evaluation of the prime bounds.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from sympy import Poly, Symbol

from ..abelian import IntMatrix, hnf_columns, lattice_contains
from ..errors import InputError, InternalCheckError
from ..extension import FiniteGroup, abelian_table_group
from .ntheory import factorint, is_squarefree, kronecker, squarefree_part

_X = Symbol("x")


# ---------------------------------------------------------------------------
# small exact linear algebra over Q


def _rational_inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InputError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _det_fractions(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return det


def _charpoly(mat: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial coefficients [c0, ..., c_{n-1}, 1] by the
    Faddeev-LeVerrier recursion, exact over Q."""
    n = len(mat)
    if n == 0:
        return [Fraction(1)]
    M = [[Fraction(x) for x in row] for row in mat]
    Mk = [row[:] for row in M]
    cs = [Fraction(1)]
    c = -sum(Mk[i][i] for i in range(n))
    cs.append(c)
    for k in range(2, n + 1):
        for i in range(n):
            Mk[i][i] += c
        nxt = [
            [sum(M[i][t] * Mk[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        Mk = nxt
        c = -sum(Mk[i][i] for i in range(n)) / k
        cs.append(c)
    return list(reversed(cs))


# ---------------------------------------------------------------------------
# formal arithmetic with the symbols sqrt(d_i)


class _SymbolAlgebra:
    """Q-algebra with basis s_S = prod_{i in S} sqrt(d_i) over subsets S,
    indexed by bitmask; s_i^2 = d_i."""

    def __init__(self, ds: Sequence[int]):
        self.ds = tuple(ds)
        self.t = len(ds)
        self.n = 1 << self.t

    def unit(self, mask: int) -> tuple:
        return tuple(Fraction(1 if S == mask else 0) for S in range(self.n))

    def mul(self, u, v):
        out = [Fraction(0)] * self.n
        for S, a in enumerate(u):
            if not a:
                continue
            for T, b in enumerate(v):
                if not b:
                    continue
                coef = a * b
                inter = S & T
                i = 0
                while inter:
                    if inter & 1:
                        coef *= self.ds[i]
                    inter >>= 1
                    i += 1
                out[S ^ T] += coef
        return tuple(out)

    def add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def scale(self, c, u):
        return tuple(Fraction(c) * a for a in u)

    def trace(self, u) -> Fraction:
        return self.n * u[0]

    def apply_signs(self, pattern: Sequence[int], u):
        """Galois action for a sign pattern (+-1 per generator)."""
        out = []
        for S, a in enumerate(u):
            s = 1
            for i in range(self.t):
                if S >> i & 1:
                    s *= pattern[i]
            out.append(a * s)
        return tuple(out)

    def mult_matrix(self, u) -> list[list[Fraction]]:
        cols = [self.mul(u, self.unit(j)) for j in range(self.n)]
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def min_poly_of(self, u, patterns) -> list[Fraction]:
        """prod over sign patterns of (x - sigma(u)); coefficients must be
        rational (mask-0 only)."""
        poly = [self.unit(0)]  # coefficients in the algebra, low degree first
        for pat in patterns:
            root = self.apply_signs(pat, u)
            # multiply poly by (x - root)
            nxt = [self.scale(-1, self.mul(root, poly[0]))]
            for k in range(1, len(poly)):
                nxt.append(
                    self.add(poly[k - 1], self.scale(-1, self.mul(root, poly[k])))
                )
            nxt.append(poly[-1])
            poly = nxt
        out = []
        for coef in poly:
            if any(coef[S] != 0 for S in range(1, self.n)):
                raise InternalCheckError("conjugate product left symbol residue")
            out.append(coef[0])
        return out


# ---------------------------------------------------------------------------
# the description object


class FieldDescription:
    """Immutable-by-convention bundle of field data; see module docstring.

    Elements of the maximal order are integer coordinate tuples over
    `integral_basis`; `mult`, `norm`, `trace`, `conj` work on those.
    """

    def __init__(
        self,
        *,
        degree: int,
        min_poly: Sequence[int],
        integral_basis: Sequence[Sequence[Fraction]],
        discriminant: int,
        signature: tuple[int, int],
        index: int,
        galois_group: FiniteGroup,
        element_labels: Sequence[str],
        frobenius_conductor: int,
        frobenius_map: dict,
        known_class_number: Optional[int],
        kind: str,
        kind_data: tuple,
        mult_table: Sequence,
        theta_coords: Sequence[int],
        conj_cols: Optional[Sequence[Sequence[int]]],
        basis_labels: Sequence[str],
        extras: Optional[dict] = None,
    ):
        self.degree = degree
        self.min_poly = tuple(int(c) for c in min_poly)
        self.integral_basis = tuple(
            tuple(Fraction(c) for c in row) for row in integral_basis
        )
        self.discriminant = int(discriminant)
        self.signature = (int(signature[0]), int(signature[1]))
        self.index = int(index)
        self.galois_group = galois_group
        self.element_labels = tuple(element_labels)
        self.frobenius_conductor = int(frobenius_conductor)
        self.frobenius_map = dict(frobenius_map)
        self.known_class_number = known_class_number
        self.kind = kind
        self.kind_data = tuple(kind_data)
        self._mult = tuple(
            tuple(tuple(int(c) for c in vec) for vec in row) for row in mult_table
        )
        self._theta = tuple(int(c) for c in theta_coords)
        self._conj_cols = (
            tuple(tuple(int(c) for c in col) for col in conj_cols)
            if conj_cols is not None
            else None
        )
        self.basis_labels = tuple(basis_labels)
        self._extras = extras or {}
        self._theta_pows: list = []
        self._one: Optional[tuple] = None
        self._t2_gram: Optional[tuple] = None
        self._tr_basis = tuple(
            sum(self._mult[i][j][j] for j in range(degree)) for i in range(degree)
        )
        self._validate()

    # -- arithmetic on integer coordinates over the integral basis

    def mult(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        n = self.degree
        out = [0] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self._mult[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                vec = row[j]
                for k in range(n):
                    out[k] += c * vec[k]
        return tuple(out)

    def mult_matrix(self, x: Sequence[int]) -> IntMatrix:
        n = self.degree
        cols = [self.mult(x, tuple(1 if t == j else 0 for t in range(n)))
                for j in range(n)]
        return IntMatrix([[cols[j][i] for j in range(n)] for i in range(n)], cols=n)

    def norm(self, x: Sequence[int]) -> int:
        return self.mult_matrix(x).det()

    def trace(self, x: Sequence[int]) -> int:
        return sum(xi * t for xi, t in zip(x, self._tr_basis))

    def conj(self, x: Sequence[int]) -> tuple[int, ...]:
        if self._conj_cols is None:
            raise InputError("no exact conjugation operator for this field")
        n = self.degree
        out = [0] * n
        for j, xj in enumerate(x):
            if xj:
                col = self._conj_cols[j]
                for k in range(n):
                    out[k] += xj * col[k]
        return tuple(out)

    @property
    def has_exact_t2(self) -> bool:
        return self._conj_cols is not None

    def t2_gram(self) -> tuple:
        """Gram matrix Tr(b_i conj(b_j)) of the T2 form on the order."""
        if self._t2_gram is None:
            if self._conj_cols is None:
                raise InputError("no exact T2 form for this field")
            n = self.degree
            basis = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
            conjb = [self.conj(b) for b in basis]
            self._t2_gram = tuple(
                tuple(self.trace(self.mult(basis[i], conjb[j])) for j in range(n))
                for i in range(n)
            )
        return self._t2_gram

    def t2_pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        g = self.t2_gram()
        return sum(
            x[i] * g[i][j] * y[j]
            for i in range(self.degree)
            for j in range(self.degree)
        )

    def one(self) -> tuple[int, ...]:
        return self._one

    def theta_power(self, k: int) -> tuple[int, ...]:
        while len(self._theta_pows) <= k:
            if not self._theta_pows:
                self._theta_pows.append(self._one)
            else:
                self._theta_pows.append(
                    self.mult(self._theta_pows[-1], self._theta)
                )
        return self._theta_pows[k]

    def poly_at_theta(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """Integer coordinates of sum coeffs[k] * theta^k."""
        n = self.degree
        out = [0] * n
        for k, c in enumerate(coeffs):
            if c:
                pw = self.theta_power(k)
                for t in range(n):
                    out[t] += c * pw[t]
        return tuple(out)

    def format_element(self, x: Sequence[int]) -> str:
        """Readable form of an order element in the field's natural symbols."""
        if self.kind in ("quadratic", "multiquadratic") and "to_symbols" in self._extras:
            to_sym = self._extras["to_symbols"]
            labels = self._extras["symbol_labels"]
            vec = [Fraction(0)] * len(labels)
            for i, xi in enumerate(x):
                if xi:
                    for k, v in enumerate(to_sym[i]):
                        vec[k] += xi * v
            terms = []
            for k, v in enumerate(vec):
                if v == 0:
                    continue
                lab = labels[k]
                if lab == "1":
                    terms.append(str(v))
                elif v == 1:
                    terms.append(lab)
                elif v == -1:
                    terms.append(f"-{lab}")
                else:
                    terms.append(f"{v}*{lab}")
            return " + ".join(terms).replace("+ -", "- ") if terms else "0"
        terms = []
        for k, c in enumerate(x):
            if c:
                base = self.basis_labels[k]
                terms.append(str(c) if base == "1" else f"{c}*{base}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def is_ramified(self, p: int) -> bool:
        return self.discriminant % p == 0

    def __repr__(self):
        return (
            f"FieldDescription(kind={self.kind!r}, degree={self.degree}, "
            f"disc={self.discriminant})"
        )

    # -- construction-time validation

    def _validate(self):
        n = self.degree
        if len(self.min_poly) != n + 1 or self.min_poly[-1] != 1:
            raise InputError("minimal polynomial must be monic of the degree")
        poly = Poly(list(reversed(self.min_poly)), _X)
        _, factors = poly.factor_list()
        if len(factors) != 1 or factors[0][1] != 1 or factors[0][0].degree() != n:
            raise InputError("minimal polynomial is reducible")
        disc_poly = int(poly.discriminant())
        if disc_poly != self.index**2 * self.discriminant:
            raise InputError(
                f"disc(min_poly) = {disc_poly} is not index^2 * discriminant "
                f"= {self.index ** 2 * self.discriminant}"
            )
        r1 = poly.count_roots()
        if (r1, (n - r1) // 2) != self.signature:
            raise InputError(
                f"signature {self.signature} contradicts {r1} real roots"
            )
        if self.signature[0] + 2 * self.signature[1] != n:
            raise InputError("signature does not sum to the degree")

        if self.galois_group.order != n:
            raise InputError("Galois group order must equal the degree")
        if len(self.element_labels) != n:
            raise InputError("need one label per Galois element")

        m = self.frobenius_conductor
        for u in range(1, m + 1):
            if math.gcd(u, m) == 1:
                if (u % m) not in self.frobenius_map:
                    raise InputError(f"resolver undefined at residue {u}")
                if not 0 <= self.frobenius_map[u % m] < n:
                    raise InputError("resolver image outside the group")
        if self.frobenius_map.get(1 % m, None) != 0:
            raise InputError("resolver must send 1 to the identity")
        units = [u for u in range(1, m + 1) if math.gcd(u, m) == 1]
        pairs = (
            itertools.product(units, units)
            if len(units) <= 60
            else zip(units, itertools.islice(itertools.cycle(units[1:]), len(units)))
        )
        tab = self.galois_group.table
        for u, v in pairs:
            lhs = self.frobenius_map[(u * v) % m]
            rhs = tab[self.frobenius_map[u]][self.frobenius_map[v]]
            if lhs != rhs:
                raise InputError("resolver is not multiplicative")

        # locate 1 in the order; integer coordinates required
        pw_rows = [self.integral_basis[i] for i in range(n)]
        inv = _rational_inverse([list(r) for r in pw_rows])
        one_coords = [inv[0][i] for i in range(n)]
        # 1 = (1, 0, ..., 0) in the power basis; coords = e_0 . B^{-1}
        one = []
        for c in one_coords:
            if c.denominator != 1:
                raise InputError("1 is not an integer combination of the basis")
            one.append(int(c))
        self._one = tuple(one)
        check = self.mult(self._one, self._theta)
        if check != self._theta:
            raise InternalCheckError("multiplicative identity is broken")

        # trace-form Gram over the integral basis must have det = discriminant
        basis = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
        gram = [
            [self.trace(self.mult(basis[i], basis[j])) for j in range(n)]
            for i in range(n)
        ]
        if IntMatrix(gram, cols=n).det() != self.discriminant:
            raise InternalCheckError("trace form determinant is not the discriminant")
        if self._conj_cols is not None:
            t2det = IntMatrix([list(r) for r in self.t2_gram()], cols=n).det()
            if t2det != abs(self.discriminant):
                raise InternalCheckError("T2 Gram determinant mismatch")


# ---------------------------------------------------------------------------
# quadratic fields


def build_quadratic(d: int) -> FieldDescription:
    """Q(sqrt(d)) for squarefree d (not 0 or 1)."""
    if not isinstance(d, int) or d in (0, 1) or not is_squarefree(d):
        raise InputError("need a squarefree integer other than 0 and 1")
    if d % 4 == 1:
        # theta = (1 + sqrt(d))/2
        min_poly = ((1 - d) // 4, -1, 1)
        disc = d
        omega_sq = ((d - 1) // 4, 1)  # omega^2 = (d-1)/4 + omega
        conj_cols = [(1, 0), (1, -1)]  # conj(omega) = 1 - omega
        basis_labels = ("1", f"(1+sqrt({d}))/2")
        symbol_rows = [
            (Fraction(1), Fraction(0)),
            (Fraction(1, 2), Fraction(1, 2)),
        ]
    else:
        min_poly = (-d, 0, 1)
        disc = 4 * d
        omega_sq = (d, 0)
        conj_cols = [(1, 0), (0, -1)]
        basis_labels = ("1", f"sqrt({d})")
        symbol_rows = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    if d > 0:
        conj_cols = [(1, 0), (0, 1)]
    mult_table = (
        (((1, 0), (0, 1))),
        (((0, 1), tuple(omega_sq))),
    )
    m = abs(disc)
    fmap = {}
    for u in range(1, m + 1):
        if math.gcd(u, m) == 1:
            fmap[u % m] = 0 if kronecker(disc, u) == 1 else 1
    return FieldDescription(
        degree=2,
        min_poly=min_poly,
        integral_basis=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
        discriminant=disc,
        signature=(2, 0) if d > 0 else (0, 1),
        index=1,
        galois_group=abelian_table_group((2,)),
        element_labels=("(+)", "(-)"),
        frobenius_conductor=m,
        frobenius_map=fmap,
        known_class_number=None,
        kind="quadratic",
        kind_data=(d,),
        mult_table=mult_table,
        theta_coords=(0, 1),
        conj_cols=conj_cols,
        basis_labels=basis_labels,
        extras={
            "to_symbols": symbol_rows,
            "symbol_labels": ("1", f"sqrt({d})"),
            "generator_discs": (disc,),
        },
    )


# ---------------------------------------------------------------------------
# multiquadratic fields


def _quad_disc(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def build_multiquadratic(ds: Sequence[int]) -> FieldDescription:
    """Q(sqrt(d_1), ..., sqrt(d_t)) for 1 <= t <= 3 independent squarefree d_i."""
    ds = tuple(int(d) for d in ds)
    if not 1 <= len(ds) <= 3:
        raise InputError("between 1 and 3 generators supported")
    for d in ds:
        if d in (0, 1) or not is_squarefree(d):
            raise InputError(f"{d} is not a valid squarefree generator")
    t = len(ds)
    for mask in range(1, 1 << t):
        prod = math.prod(ds[i] for i in range(t) if mask >> i & 1)
        if squarefree_part(prod) == 1 and mask.bit_count() >= 2:
            raise InputError("generators are multiplicatively dependent")
    if t == 1:
        return build_quadratic(ds[0])

    alg = _SymbolAlgebra(ds)
    n = alg.n
    G = abelian_table_group((2,) * t)
    coords_list = list(itertools.product(range(2), repeat=t))
    sign_patterns = [tuple(1 - 2 * c for c in coords) for coords in coords_list]
    element_labels = tuple(
        "(" + ",".join("+" if s == 1 else "-" for s in pat) + ")"
        for pat in sign_patterns
    )

    theta_sym = tuple(
        Fraction(1) if S in {1 << i for i in range(t)} else Fraction(0)
        for S in range(n)
    )
    fr = alg.min_poly_of(theta_sym, sign_patterns)
    min_poly = []
    for c in fr:
        if c.denominator != 1:
            raise InternalCheckError("primitive element has nonintegral minpoly")
        min_poly.append(int(c))

    # target discriminant by the quadratic-subfield product formula
    subset_discs = {}
    target = 1
    for mask in range(1, n):
        prod = math.prod(ds[i] for i in range(t) if mask >> i & 1)
        dd = _quad_disc(squarefree_part(prod))
        subset_discs[mask] = dd
        target *= dd

    # starting order: products of the quadratic subfield generators
    gens = []
    for i, d in enumerate(ds):
        if d % 4 == 1:
            w = tuple(
                Fraction(1, 2) if S in (0, 1 << i) else Fraction(0)
                for S in range(n)
            )
        else:
            w = alg.unit(1 << i)
        gens.append(w)
    rows = []
    for mask in range(n):
        v = alg.unit(0)
        for i in range(t):
            if mask >> i & 1:
                v = alg.mul(v, gens[i])
        rows.append(v)

    rows = _saturate(alg, rows, target)

    # express data over the saturated basis
    binv = _rational_inverse([list(r) for r in rows])

    def to_basis(vec) -> list[Fraction]:
        return [
            sum(vec[k] * binv[k][i] for k in range(n)) for i in range(n)
        ]

    def to_basis_int(vec, what: str) -> tuple[int, ...]:
        out = []
        for c in to_basis(vec):
            if c.denominator != 1:
                raise InternalCheckError(f"{what} escapes the integral basis")
            out.append(int(c))
        return tuple(out)

    theta_coords = to_basis_int(theta_sym, "theta")
    mult_table = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = alg.mul(rows[i], rows[j])
            row.append(to_basis_int(prod, "a basis product"))
        mult_table.append(tuple(row))

    conj_pattern = tuple(-1 if d < 0 else 1 for d in ds)
    conj_cols = [
        to_basis_int(alg.apply_signs(conj_pattern, rows[j]), "conjugation")
        for j in range(n)
    ]

    # integral basis in powers of theta
    theta_pows_sym = [alg.unit(0)]
    for _ in range(n - 1):
        theta_pows_sym.append(alg.mul(theta_pows_sym[-1], theta_sym))
    tinv = _rational_inverse([list(v) for v in theta_pows_sym])
    integral_basis = [
        tuple(
            sum(rows[i][k] * tinv[k][j] for k in range(n)) for j in range(n)
        )
        for i in range(n)
    ]

    disc_f = int(Poly(list(reversed(min_poly)), _X).discriminant())
    ratio, rem = divmod(disc_f, target)
    index = math.isqrt(abs(ratio))
    if rem or index * index != ratio:
        raise InternalCheckError("index^2 relation fails for the minimal polynomial")

    gen_discs = tuple(_quad_disc(d) for d in ds)
    m = math.lcm(*(abs(dd) for dd in gen_discs))
    fmap = {}
    coord_index = {c: i for i, c in enumerate(coords_list)}
    for u in range(1, m + 1):
        if math.gcd(u, m) == 1:
            bits = tuple(
                0 if kronecker(gen_discs[i], u) == 1 else 1 for i in range(t)
            )
            fmap[u % m] = coord_index[bits]

    signature = (n, 0) if all(d > 0 for d in ds) else (0, n // 2)
    symbol_labels = tuple(
        "1" if mask == 0 else "sqrt(%d)" % math.prod(
            ds[i] for i in range(t) if mask >> i & 1
        )
        for mask in range(n)
    )
    return FieldDescription(
        degree=n,
        min_poly=min_poly,
        integral_basis=integral_basis,
        discriminant=target,
        signature=signature,
        index=index,
        galois_group=G,
        element_labels=element_labels,
        frobenius_conductor=m,
        frobenius_map=fmap,
        known_class_number=None,
        kind="multiquadratic",
        kind_data=ds,
        mult_table=mult_table,
        theta_coords=theta_coords,
        conj_cols=conj_cols,
        basis_labels=tuple(f"b{i}" for i in range(n)),
        extras={
            "symbol_algebra": alg,
            "basis_symbol_rows": tuple(rows),
            "to_symbols": tuple(rows),
            "symbol_labels": symbol_labels,
            "symbol_to_basis": tuple(tuple(r) for r in binv),
            "subset_discs": subset_discs,
            "generator_discs": gen_discs,
            "sign_patterns": tuple(sign_patterns),
        },
    )


def _saturate(alg: _SymbolAlgebra, rows, target_disc: int):
    """Grow the order spanned by `rows` until its discriminant equals the
    target.  Each step adjoins x = (1/p) sum c_i b_i for a prime p dividing
    the index and coefficients c_i in [0, p); x is accepted only when its
    characteristic polynomial is integral."""
    n = alg.n
    while True:
        gram = []
        for i in range(n):
            grow = []
            for j in range(n):
                v = alg.trace(alg.mul(rows[i], rows[j]))
                if v.denominator != 1:
                    raise InternalCheckError("order has nonintegral trace pairing")
                grow.append(int(v))
            gram.append(grow)
        disc = IntMatrix(gram, cols=n).det()
        if disc == target_disc:
            return rows
        q, rem = divmod(disc, target_disc)
        root = math.isqrt(abs(q))
        if rem or root * root != q or root < 2:
            raise InternalCheckError(
                f"discriminant {disc} does not exceed the target {target_disc} "
                "by a square factor"
            )
        p = min(factorint(root))
        enlarged = False
        for combo in itertools.product(range(p), repeat=n):
            if not any(combo):
                continue
            # dual-lattice precheck: Tr(x * row_j) must be integral
            if any(
                sum(combo[i] * gram[i][j] for i in range(n)) % p != 0
                for j in range(n)
            ):
                continue
            cand = [Fraction(0)] * n
            for i in range(n):
                if combo[i]:
                    for k in range(n):
                        cand[k] += Fraction(combo[i], p) * rows[i][k]
            cand = tuple(cand)
            cp = _charpoly(alg.mult_matrix(cand))
            if any(c.denominator != 1 for c in cp):
                continue
            new_rows = _lattice_extend(rows, cand, n)
            if new_rows is not None:
                rows = new_rows
                enlarged = True
                break
        if not enlarged:
            raise InternalCheckError(
                "saturation stalled before reaching the target discriminant"
            )


def _lattice_extend(rows, extra, n):
    """Hermite basis of the lattice spanned by rows + extra, or None when
    extra is already inside."""
    den = 1
    for v in list(rows) + [extra]:
        for c in v:
            den = math.lcm(den, c.denominator)
    scaled = [[int(c * den) for c in v] for v in rows]
    basis = hnf_columns(scaled, n)
    vec = [int(c * den) for c in extra]
    if lattice_contains(basis, vec):
        return None
    basis2 = hnf_columns(scaled + [vec], n)
    return [tuple(Fraction(x, den) for x in b) for b in basis2]


# ---------------------------------------------------------------------------
# generic fields from config


_GENERIC_KEYS = {
    "type",
    "min_poly",
    "integral_basis",
    "index",
    "class_number",
    "frobenius",
}


def build_generic(config: dict) -> FieldDescription:
    """Field from an explicit config; see the JSON schema in the CLI docs."""
    unknown = set(config) - _GENERIC_KEYS
    if unknown:
        raise InputError(f"unknown config keys: {sorted(unknown)}")
    for key in ("min_poly", "integral_basis", "index", "frobenius"):
        if key not in config:
            raise InputError(f"generic field config needs {key!r}")
    min_poly = tuple(int(c) for c in config["min_poly"])
    n = len(min_poly) - 1
    if n < 1 or min_poly[-1] != 1:
        raise InputError("min_poly must be monic with positive degree")
    flat = config["integral_basis"]
    if len(flat) != n * n:
        raise InputError(f"integral_basis needs {n * n} [num, den] pairs")
    entries = []
    for pair in flat:
        if len(pair) != 2:
            raise InputError("integral_basis entries are [num, den] pairs")
        entries.append(Fraction(int(pair[0]), int(pair[1])))
    rows = [tuple(entries[i * n : (i + 1) * n]) for i in range(n)]
    index = int(config["index"])
    if index < 1:
        raise InputError("index must be a positive integer")

    poly = Poly(list(reversed(min_poly)), _X)
    disc_f = int(poly.discriminant())
    disc, rem = divmod(disc_f, index * index)
    if rem:
        raise InputError("index^2 does not divide disc(min_poly)")
    r1 = poly.count_roots()
    signature = (r1, (n - r1) // 2)

    # exact arithmetic in Q[x]/(min_poly) to get structure constants
    def polymul(u, v):
        out = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        out[i + j] += a * b
        for k in range(2 * n - 2, n - 1, -1):
            c = out[k]
            if c:
                for j in range(n):
                    out[k - n + j] -= c * min_poly[j]
                out[k] = 0
        return out[:n]

    binv = _rational_inverse([list(r) for r in rows])
    mult_table = []
    for i in range(n):
        mrow = []
        for j in range(n):
            prod = polymul(list(rows[i]), list(rows[j]))
            coords = [
                sum(prod[k] * binv[k][s] for k in range(n)) for s in range(n)
            ]
            vec = []
            for c in coords:
                if c.denominator != 1:
                    raise InputError(
                        "integral_basis is not multiplicatively closed"
                    )
                vec.append(int(c))
            mrow.append(tuple(vec))
        mult_table.append(tuple(mrow))
    theta_poly = [Fraction(1) if k == 1 else Fraction(0) for k in range(n)]
    theta_coords = []
    for s in range(n):
        c = sum(theta_poly[k] * binv[k][s] for k in range(n))
        if c.denominator != 1:
            raise InputError("theta is not in the span of the integral basis")
        theta_coords.append(int(c))

    fr = config["frobenius"]
    if set(fr) != {"conductor", "classes"}:
        raise InputError("frobenius config needs exactly conductor and classes")
    m = int(fr["conductor"])
    if m < 1:
        raise InputError("conductor must be positive")
    classes = {}
    for key, val in fr["classes"].items():
        u = int(key)
        if math.gcd(u, m) != 1:
            raise InputError(f"residue {u} is not coprime to the conductor")
        classes[u % m] = int(val)
    for u in range(1, m + 1):
        if math.gcd(u, m) == 1 and u % m not in classes:
            raise InputError(f"frobenius classes miss residue {u}")
    indices = sorted(set(classes.values()))
    if indices != list(range(n)):
        raise InputError(
            f"frobenius images must be exactly 0..{n - 1}, got {indices}"
        )
    if classes[1 % m] != 0:
        raise InputError("residue 1 must map to element 0")
    # group table from residue multiplication; must be well defined
    reps = {}
    for u, e in classes.items():
        reps.setdefault(e, u)
    table = [[None] * n for _ in range(n)]
    units = [u for u in range(1, m + 1) if math.gcd(u, m) == 1]
    for u in units:
        for v in units:
            a, b = classes[u % m], classes[v % m]
            c = classes[(u * v) % m]
            if table[a][b] is None:
                table[a][b] = c
            elif table[a][b] != c:
                raise InputError("frobenius classes are not multiplicative")
    if any(x is None for row in table for x in row):
        raise InputError("frobenius classes do not cover the group")
    group = FiniteGroup(table, validate=True)

    conj_cols = None
    if signature[1] == 0:
        conj_cols = [
            tuple(1 if i == j else 0 for i in range(n)) for j in range(n)
        ]
    elif n == 2:
        # the nontrivial automorphism theta -> -a1 - theta is conjugation
        a1 = min_poly[1]
        cols = []
        for j in range(2):
            u, v = rows[j]
            img = [u - a1 * v, -v]
            col = []
            for s in range(2):
                c = sum(img[k] * binv[k][s] for k in range(2))
                if c.denominator != 1:
                    raise InputError("conjugation does not preserve the basis")
                col.append(int(c))
            cols.append(tuple(col))
        conj_cols = cols

    known = config.get("class_number")
    return FieldDescription(
        degree=n,
        min_poly=min_poly,
        integral_basis=rows,
        discriminant=disc,
        signature=signature,
        index=index,
        galois_group=group,
        element_labels=tuple(f"g{i}" for i in range(n)),
        frobenius_conductor=m,
        frobenius_map=classes,
        known_class_number=int(known) if known is not None else None,
        kind="generic",
        kind_data=(tuple(min_poly),),
        mult_table=mult_table,
        theta_coords=theta_coords,
        conj_cols=conj_cols,
        basis_labels=tuple(
            "1" if i == 0 else f"b{i}" for i in range(n)
        ),
    )


def field_from_config(config: dict) -> FieldDescription:
    if not isinstance(config, dict) or "type" not in config:
        raise InputError("field config needs a 'type' key")
    kind = config["type"]
    if kind == "quadratic":
        unknown = set(config) - {"type", "d"}
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        if "d" not in config:
            raise InputError("quadratic config needs 'd'")
        return build_quadratic(int(config["d"]))
    if kind == "multiquadratic":
        unknown = set(config) - {"type", "ds"}
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        if "ds" not in config:
            raise InputError("multiquadratic config needs 'ds'")
        return build_multiquadratic([int(d) for d in config["ds"]])
    if kind == "generic":
        return build_generic(config)
    raise InputError(f"unknown field type {kind!r}")


# ---------------------------------------------------------------------------
# bounds


def _guarded_int(value, direction: str) -> int:
    """Exact ceil/floor of an mpmath value, escalating precision when the
    value sits suspiciously close to an integer."""
    for dps in (60, 120, 240):
        with mpmath.workdps(dps):
            v = value()
            candidate = mpmath.ceil(v) if direction == "up" else mpmath.floor(v)
            if abs(v - mpmath.mpf(int(candidate))) > mpmath.mpf(10) ** (-dps // 3):
                return int(candidate)
    raise InternalCheckError("bound evaluation is ambiguously close to an integer")


def bach_sorenson_bound(K: FieldDescription, h: int, variant: str = "effective") -> int:
    """Smallest-witness prime bound (conditional on GRH): the ceiling of
    (4 h ln|disc| + 2.5 n h + 5)^2.  variant="display" drops the 2.5
    factor; the default reproduces the quoted source."""
    if h < 1:
        raise InputError("class number must be >= 1")
    if abs(K.discriminant) < 2:
        raise InputError("need |discriminant| >= 2")
    if variant not in ("effective", "display"):
        raise InputError("variant must be 'effective' or 'display'")
    coef = Fraction(5, 2) if variant == "effective" else Fraction(1)
    n, D = K.degree, abs(K.discriminant)

    def value():
        return (
            4 * h * mpmath.log(D) + mpmath.mpf(coef.numerator) / coef.denominator * n * h + 5
        ) ** 2

    return _guarded_int(value, "up")


def lenstra_class_bound(K: FieldDescription) -> int:
    """Floor of d (n - 1 + ln d)^(n-1) / (n-1)! with d = (2/pi)^r2 sqrt|disc|."""
    if K.degree < 2:
        raise InputError("bound needs degree >= 2")
    n = K.degree
    r2 = K.signature[1]
    D = abs(K.discriminant)

    def value():
        d = (2 / mpmath.pi) ** r2 * mpmath.sqrt(D)
        return d * (n - 1 + mpmath.log(d)) ** (n - 1) / math.factorial(n - 1)

    out = _guarded_int(value, "down")
    return max(out, 1)


def minkowski_bound(K: FieldDescription) -> Fraction:
    """(4/pi)^r2 (n!/n^n) sqrt|disc| as an exact rational when possible,
    otherwise a rational upper bound within 1e-12 (safe as a factor-base
    cutoff: rounding up can only enlarge the base)."""
    n = K.degree
    r2 = K.signature[1]
    D = abs(K.discriminant)
    root = math.isqrt(D)
    if r2 == 0 and root * root == D:
        return Fraction(math.factorial(n) * root, n**n)
    with mpmath.workdps(60):
        v = (4 / mpmath.pi) ** r2 * mpmath.mpf(math.factorial(n)) / n**n * mpmath.sqrt(D)
        scaled = int(mpmath.ceil(v * 10**12))
    return Fraction(scaled, 10**12)
