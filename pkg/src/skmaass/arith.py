"""Exact integer helpers: factorization, Kronecker symbol, smooth parts and
the root counts used by the class-number formulas for d = -4 and d = -3.

Everything here works on Python ints, so there is no overflow.
"""

from math import gcd

import numpy as np

__all__ = [
    "factor",
    "is_prime",
    "divisors",
    "ord_p",
    "prime_divisors",
    "kronecker",
    "is_squarefree",
    "is_fundamental_discriminant",
    "fundamental_part",
    "smooth_part",
    "count_roots_minus_one",
    "count_roots_omega",
    "RootCountMismatch",
    "units_index",
    "crt_pair",
]


class RootCountMismatch(ArithmeticError):
    """Closed-form root count disagrees with brute force."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    # deterministic Miller-Rabin, valid far beyond 2**64
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n >= 1`` as sorted ``(prime, exponent)`` pairs.

    >>> factor(12)
    [(2, 2), (3, 1)]
    """
    if n < 1:
        raise ValueError(f"factor() needs a positive integer, got {n}")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factor(abs(n))]


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor(n):
        divs = [x * p**i for x in divs for i in range(e + 1)]
    return sorted(divs)


def ord_p(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("ord_p(0) is infinite")
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n); equals the Legendre symbol for odd prime n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if a % 2 == 0 and n % 2 == 0:
        return 0
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(abs(n)))


def is_fundamental_discriminant(d: int) -> bool:
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        q = d // 4
        return q % 4 in (2, 3) and is_squarefree(q)
    return False


def fundamental_part(D: int) -> tuple[int, int]:
    """Split a discriminant ``D`` (``D % 4`` in {0, 1}, ``D != 0``) as ``d * f**2``
    with ``d`` fundamental. Returns ``(d, f)``."""
    if D == 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    sign = -1 if D < 0 else 1
    core, f = sign, 1
    for p, e in factor(abs(D)):
        core *= p ** (e % 2)
        f *= p ** (e // 2)
    if core % 4 != 1:
        # core is squarefree and = 2, 3 mod 4, so 4*core must be the field discriminant
        core *= 4
        f //= 2
    return core, f


def smooth_part(x: int, n: int) -> int:
    """The part of ``x`` supported on the primes dividing ``n``: prod_{p|n} p^ord_p(x)."""
    if x == 0:
        raise ValueError("smooth_part is undefined at x = 0")
    if n < 2:
        raise ValueError(f"smooth_part needs n >= 2, got {n}")
    out = 1
    for p in prime_divisors(n):
        out *= p ** ord_p(x, p)
    return out


def _brute_count(n: int, poly) -> int:
    u = np.arange(n, dtype=np.int64)
    hits = (poly(u) % n == 0) & (np.gcd(u, n) == 1)
    if n == 1:
        # Z/1Z has the single unit 0
        return 1
    return int(np.count_nonzero(hits))


def _closed_form(n: int, special: int, residue: int, modulus: int) -> int:
    s = 0
    for p, e in factor(n):
        if p == special:
            if e > 1:
                return 0
        elif p % modulus == residue:
            s += 1
        else:
            return 0
    return 2**s


def count_roots_minus_one(n: int, check: bool = True) -> int:
    """#{u in (Z/nZ)^x : u^2 = -1 mod n}.

    The closed form 2^s (n = 2^e p_1^e_1 ... p_s^e_s, e <= 1, all p_i = 1 mod 4)
    is returned; with ``check`` it is compared against a brute-force count.
    """
    if n < 1:
        raise ValueError("n must be positive")
    value = _closed_form(n, 2, 1, 4)
    if check:
        brute = _brute_count(n, lambda u: u * u + 1)
        if brute != value:
            raise RootCountMismatch(f"u^2=-1 mod {n}: formula {value}, brute force {brute}")
    return value


def count_roots_omega(n: int, check: bool = True) -> int:
    """#{u in (Z/nZ)^x : u^2 + u + 1 = 0 mod n}, closed form with optional brute force."""
    if n < 1:
        raise ValueError("n must be positive")
    value = _closed_form(n, 3, 1, 6)
    if check:
        brute = _brute_count(n, lambda u: u * u + u + 1)
        if brute != value:
            raise RootCountMismatch(f"u^2+u+1=0 mod {n}: formula {value}, brute force {brute}")
    return value


def units_index(d: int) -> int:
    """u(d): index of the units of an order of conductor > 1 in the full unit group."""
    return {-3: 3, -4: 2}.get(d, 1)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    g = gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2

