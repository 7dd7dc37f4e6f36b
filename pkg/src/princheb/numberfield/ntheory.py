"""Small elementary number theory helpers shared by the field modules."""

import math

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from ..errors import InputError


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out 2s of n; (a|2) = 0, 1, -1 for a even, a = +-1 mod 8, else
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi from here, n odd positive
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def primes_upto(n: int) -> list[int]:
    """All primes <= n by a bytearray sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


def is_squarefree(d: int) -> bool:
    if d == 0:
        return False
    return all(e == 1 for e in factorint(abs(d)).values())


def squarefree_part(d: int) -> int:
    """The squarefree integer s with d = s * (square), keeping the sign."""
    if d == 0:
        raise InputError("0 has no squarefree part")
    s = 1 if d > 0 else -1
    for p, e in factorint(abs(d)).items():
        if e % 2:
            s *= p
    return s


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a mod p; raises if none exists."""
    r = sqrt_mod(a % p, p)
    if r is None:
        raise InputError(f"{a} is not a square mod {p}")
    return int(r)


def pell_fundamental_unit(m: int) -> float:
    """Value of the fundamental unit of Q(sqrt m), m squarefree > 1.

    Solves x^2 - m y^2 = +-4 by brute force on y; past a cutoff falls back
    to the continued-fraction +-1 solution, which is a power of the
    fundamental unit and therefore a safe overestimate for bound work.
    """
    if m <= 1 or not is_squarefree(m):
        raise InputError("need a squarefree integer > 1")
    # (x + y sqrt m)/2 is a unit of the maximal order iff x^2 - m y^2 = +-4;
    # minimal y (and -4 before +4) gives the fundamental one
    for y in range(1, 10000):
        for off in (-4, 4):
            x2 = m * y * y + off
            if x2 > 0:
                x = math.isqrt(x2)
                if x * x == x2:
                    return (x + y * math.sqrt(m)) / 2
    # continued fraction of sqrt(m): convergents until p^2 - m q^2 = +-1
    a0 = math.isqrt(m)
    pm, p0 = 1, a0
    qm, q0 = 0, 1
    num, den, a = 0, 1, a0
    for _ in range(10000):
        num = den * a - num
        den = (m - num * num) // den
        a = (a0 + num) // den
        p0, pm = a * p0 + pm, p0
        q0, qm = a * q0 + qm, q0
        if p0 * p0 - m * q0 * q0 in (1, -1):
            return p0 + q0 * math.sqrt(m)
    raise InputError(f"no unit found for {m}")


__all__ = [
    "factorint",
    "isprime",
    "is_squarefree",
    "kronecker",
    "pell_fundamental_unit",
    "primes_upto",
    "sqrt_mod_prime",
    "squarefree_part",
]
