"""Independent brute-force reference implementations used only by tests.

Everything here recomputes answers from first principles (closure
enumeration, literal powering, exhaustive search) without going through
the package's own linear-algebra or formula paths, so the two sides can
be compared honestly.
"""

import itertools
import math
from fractions import Fraction


# ---------------------------------------------------------------------------
# abelian side


def tuple_add(a, b, mods):
    return tuple((x + y) % d for x, y, d in zip(a, b, mods))


def closure_of_tuples(gens, mods):
    """All sums of the generators inside prod Z/mods, by plain BFS."""
    zero = tuple([0] * len(mods))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple_add(x, g, mods)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def tuple_order(a, mods):
    out = 1
    for x, d in zip(a, mods):
        out = math.lcm(out, d // math.gcd(d, x))
    return out


def invariant_factors_by_counting(orders):
    """Invariant factors of prod Z/orders via torsion counts, not SNF.

    |A[m]| = prod gcd(order_i, m); read off prime-power jumps.
    """
    from sympy import factorint

    total = math.prod(orders)
    if total == 1:
        return ()
    exp = math.lcm(*orders)

    def torsion(m):
        return math.prod(math.gcd(o, m) for o in orders)

    per_prime = {}
    for p in sorted(factorint(total)):
        counts = []
        prev = 1
        r = 1
        while exp % p**r == 0:
            cur = torsion(p**r)
            ratio = cur // prev
            k = 0
            while p**k < ratio:
                k += 1
            counts.append(k)
            prev = cur
            r += 1
        per_prime[p] = counts
    n_factors = max(c[0] for c in per_prime.values())
    exps = {p: [0] * n_factors for p in per_prime}
    for p, counts in per_prime.items():
        for r, cnt in enumerate(counts, start=1):
            for i in range(cnt):
                slot = n_factors - 1 - i
                exps[p][slot] = max(exps[p][slot], r)
    out = []
    for i in range(n_factors):
        f = 1
        for p in per_prime:
            f *= p ** exps[p][i]
        out.append(f)
    return tuple(f for f in out if f > 1)


# ---------------------------------------------------------------------------
# extension side: literal arithmetic on pairs


def ext_pow(ext, x, k):
    """Power by literal repeated multiplication (no squaring shortcut)."""
    out = ext.identity()
    for _ in range(k):
        out = ext.multiply(out, x)
    return out


def ext_order(ext, x):
    k = 1
    y = x
    while y != ext.identity():
        y = ext.multiply(y, x)
        k += 1
    return k


def naive_density(ext, members, m, d):
    """Fiber count of sigma over the class with sigma^(d*m) = id, over |E|."""
    hits = 0
    for g in members:
        for sigma in ext.fiber(g):
            if ext_pow(ext, sigma, d * m) == ext.identity():
                hits += 1
    return Fraction(hits, ext.order)


def naive_exact_order_density(ext, members, n, d):
    hits = 0
    for g in members:
        for sigma in ext.fiber(g):
            if ext_order(ext, sigma) == d * n:
                hits += 1
    return Fraction(hits, ext.order)


def sections_by_generator_lift(ext, limit=None):
    """All homomorphic sections of ext, found by exhausting lifts of a
    generating set of G and closing under multiplication.

    Complete: a section is a homomorphism, hence determined by its values
    on generators, and every value must project correctly.
    """
    G = ext.group
    gens = G.minimal_generators()
    found = []
    lift_choices = [list(ext.fiber(g)) for g in gens]
    for combo in itertools.product(*lift_choices):
        section = {0: ext.identity()}
        assignment = dict(zip(gens, combo))
        ok = True
        frontier = [0]
        while frontier and ok:
            nxt = []
            for g in frontier:
                for gen, lift in assignment.items():
                    h = G.table[g][gen]
                    val = ext.multiply(section[g], lift)
                    if h in section:
                        if section[h] != val:
                            ok = False
                            break
                    else:
                        section[h] = val
                        nxt.append(h)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(section) != G.order:
            continue
        # closure consistency on all pairs
        good = all(
            ext.multiply(section[a], section[b]) == section[G.table[a][b]]
            for a in range(G.order)
            for b in range(G.order)
        )
        if good:
            found.append(tuple(section[g] for g in range(G.order)))
            if limit is not None and len(found) >= limit:
                return found
    return found


def has_section_by_enumeration(ext):
    return bool(sections_by_generator_lift(ext, limit=1))


# ---------------------------------------------------------------------------
# cocycle cohomology by enumeration (tiny cases only)


def h1_size_by_enumeration(group, kernel, action):
    """|H^1(G, A)| = #cocycles / #coboundaries, both counted literally.

    A 1-cocycle is f: G -> A with f(gh) = f(g) + g.f(h); enumerated over
    all |A|^(|G|-1) assignments, so keep the inputs tiny.
    """
    n = group.order
    elems = list(kernel.elements())
    cocycles = 0
    for combo in itertools.product(elems, repeat=n - 1):
        f = {0: kernel.identity()}
        for g in range(1, n):
            f[g] = combo[g - 1]
        good = all(
            f[group.table[g][h]] == f[g] + action.apply(g, f[h])
            for g in range(n)
            for h in range(n)
        )
        if good:
            cocycles += 1
    coboundaries = set()
    for a in elems:
        cob = tuple((action.apply(g, a) - a).coords for g in range(n))
        coboundaries.add(cob)
    assert cocycles % len(coboundaries) == 0
    return cocycles // len(coboundaries)
