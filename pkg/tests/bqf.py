"""Form class groups of negative discriminants, self-contained.

Reduced positive definite binary quadratic forms under Gauss composition,
written without touching the package so its class group output can be
checked against an unrelated construction.  Structure is recovered by
order counting in each primary part rather than by matrix reduction.
"""

import math


def is_discriminant(D):
    return D < 0 and D % 4 in (0, 1)


def reduce_form(a, b, c):
    """Reduction by the classical translate/flip loop."""
    while True:
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            b2 = b + 2 * a * k
            c = c + k * (b + a * k)
            b = b2
        elif a > c:
            a, b, c = c, -b, a
        else:
            break
    if (a == c and b < 0) or b == -a:
        b = -b
    return a, b, c


def reduced_forms(D):
    """Every reduced form of discriminant D, primitive or not."""
    assert is_discriminant(D)
    out = []
    a = 1
    while 4 * a * a <= -D + a * a:
        start = -a + 1
        for b in range(start, a + 1):
            t = b * b - D
            if t % (4 * a) == 0:
                c = t // (4 * a)
                if c >= a and not (a == c and b < 0):
                    out.append((a, b, c))
        a += 1
    return sorted(f for f in out if math.gcd(math.gcd(f[0], f[1]), f[2]) == 1)


def _extended_sl2(x, y):
    """u, v with x*v - y*u = 1 for coprime x, y."""
    g, s, t = _xgcd(x, y)
    assert g == 1
    # x*s + y*t = 1, so v = s, u = -t
    return -t, s


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _coprime_rep(form, modulus):
    """Equivalent form whose first coefficient is coprime to the modulus."""
    a, b, c = form
    for x in range(0, 4 * modulus + 2):
        for y in range(0, 4 * modulus + 2):
            if math.gcd(x, y) != 1:
                continue
            val = a * x * x + b * x * y + c * y * y
            if math.gcd(val, modulus) == 1:
                u, v = _extended_sl2(x, y)
                b2 = 2 * (a * x * u + c * y * v) + b * (x * v + y * u)
                c2 = a * u * u + b * u * v + c * v * v
                assert b2 * b2 - 4 * val * c2 == b * b - 4 * a * c
                return val, b2, c2
    raise AssertionError("primitive form represents no unit residue")


def compose(f1, f2, D):
    """Dirichlet composition after forcing coprime first coefficients."""
    a1, b1, c1 = f1
    a2, b2, c2 = _coprime_rep(f2, f1[0])
    # b3 = b1 mod 2a1 and b2 mod 2a2; both are square roots of D with the
    # same parity, so the CRT step works modulo the shared factor 2
    g, inv, _ = _xgcd(a1, a2)
    assert g == 1
    t = ((b2 - b1) // 2 * inv) % a2
    b3 = b1 + 2 * a1 * t
    a3 = a1 * a2
    assert (b3 * b3 - D) % (4 * a3) == 0
    return reduce_form(a3, b3, (b3 * b3 - D) // (4 * a3))


def identity_form(D):
    if D % 4 == 0:
        return reduce_form(1, 0, -D // 4)
    return reduce_form(1, 1, (1 - D) // 4)


def form_count(D):
    return len(reduced_forms(D))


def _power(f, k, D, ident):
    acc = ident
    base = f
    while k:
        if k & 1:
            acc = compose(acc, base, D)
        base = compose(base, base, D)
        k >>= 1
    return acc


def _primary_exponents(forms, q, D, ident):
    """Multiset of exponents e with the q-part = product of Z/q^e, found by
    counting solutions of x^(q^k) = identity.

    With s_k = log_q #solutions, the increment s_k - s_(k-1) counts the
    e_i that are >= k, which pins down the whole multiset.
    """
    total = 0
    hh = len(forms)
    while hh % q == 0:
        hh //= q
        total += 1
    logs = []
    k = 0
    while not logs or logs[-1] != total:
        k += 1
        c = sum(1 for f in forms if _power(f, q**k, D, ident) == ident)
        log = 0
        while c > 1:
            assert c % q == 0
            c //= q
            log += 1
        logs.append(log)
    at_least = []
    prev = 0
    for log in logs:
        at_least.append(log - prev)
        prev = log
    mult = []
    for k in range(len(at_least), 0, -1):
        exactly = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        mult.extend([k] * exactly)
    return sorted(mult, reverse=True)


def form_class_invariants(D):
    """Invariant factors of the form class group, ascending divisibility."""
    forms = reduced_forms(D)
    ident = identity_form(D)
    h = len(forms)
    primes = []
    hh = h
    q = 2
    while q * q <= hh:
        if hh % q == 0:
            primes.append(q)
            while hh % q == 0:
                hh //= q
        q += 1
    if hh > 1:
        primes.append(hh)
    per_prime = {q: _primary_exponents(forms, q, D, ident) for q in primes}
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for q, exps in per_prime.items():
            if i < len(exps):
                d *= q ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))
