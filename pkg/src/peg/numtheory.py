"""Elementary number theory over plain Python integers.

Everything here is exact; these routines feed the obstruction wing, where
verdicts must be certificates rather than approximations.
"""

from __future__ import annotations

import math

_SMALL_PRIME_LIMIT = 10**6

# Deterministic Miller-Rabin bases, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality: trial division below 10**6, Miller-Rabin above."""
    if n < 2:
        return False
    if n < _SMALL_PRIME_LIMIT:
        if n in (2, 3):
            return True
        if n % 2 == 0 or n % 3 == 0:
            return False
        f = 5
        while f * f <= n:
            if n % f == 0 or n % (f + 2) == 0:
                return False
            f += 6
        return True
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_from(start: int):
    """Yield primes >= start in increasing order."""
    n = max(2, start)
    while True:
        if is_prime(n):
            yield n
        n += 1


def is_square_free(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        while n % f == 0:
            n //= f
        f += 1
    return True


def jacobi_symbol(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd positive m, via quadratic reciprocity.

    Agrees with the Legendre symbol when m is an odd prime.
    """
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {m}")
    a %= m
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def square_classes_mod(m: int) -> set[int]:
    """The set {x^2 mod m : x in Z/m}. Brute-force oracle for residue tests."""
    if m < 1:
        raise ValueError("modulus must be positive")
    return {x * x % m for x in range(m)}


def min_solution_8x2(p: int) -> int | None:
    """Smallest positive x with 8*x^2 == 1 (mod p), or None when unsolvable.

    p must be an odd prime.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"expected an odd prime, got {p}")
    for x in range(1, p):
        if (8 * x * x - 1) % p == 0:
            return x
    return None


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n
