"""Elementary number theory: quadratic characters, Jacobsthal sums,
class numbers of Q(sqrt(-p)), two-squares decompositions, derangements
and small prime generation.

Everything here is exact integer arithmetic on Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

__all__ = [
    "PrimeContext",
    "prime_context",
    "is_prime",
    "legendre_symbol",
    "jacobi_symbol",
    "jacobsthal_sum",
    "jacobsthal_sum_full",
    "two_squares_decomposition",
    "half_range_character_sum",
    "class_number_from_sum",
    "class_number_oracle",
    "derangement_count",
    "integer_sqrt_exact",
    "primes_in_range",
]

# Deterministic for n < 3.3e24; beyond that the test is still extremely strong.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a fixed base set (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(p: int) -> None:
    if not isinstance(p, int) or p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p!r} is not an odd prime")


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by quadratic reciprocity."""
    if not isinstance(n, int) or n < 1 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs a positive odd modulus, got {n!r}")
    a %= n
    acc = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                acc = -acc
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            acc = -acc
        a %= n
    return acc if n == 1 else 0


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p).

    ``p`` must be an odd prime; this is checked with Miller-Rabin and a
    ``ValueError`` is raised otherwise, since a composite modulus would
    silently give a Jacobi symbol instead.
    """
    _require_odd_prime(p)
    return jacobi_symbol(a, p)


@dataclass(frozen=True)
class PrimeContext:
    """An odd prime with its table of Legendre symbols.

    ``chi[a]`` is (a/p) for 0 <= a < p. Instances are immutable; build them
    with :func:`prime_context` which caches one per prime.
    """

    p: int
    chi: Tuple[int, ...]

    @property
    def residue_class(self) -> int:
        return self.p % 4

    @property
    def half(self) -> int:
        return (self.p - 1) // 2

    def symbol(self, a: int) -> int:
        return self.chi[a % self.p]


@lru_cache(maxsize=None)
def prime_context(p: int) -> PrimeContext:
    _require_odd_prime(p)
    chi = [-1] * p
    chi[0] = 0
    for x in range(1, (p - 1) // 2 + 1):
        chi[x * x % p] = 1
    return PrimeContext(p, tuple(chi))


def jacobsthal_sum(ctx: PrimeContext, k: int) -> int:
    """J(k) = sum over x in 1..(p-1)/2 of (x(x^2+k)/p)."""
    p, chi = ctx.p, ctx.chi
    return sum(chi[x * (x * x + k) % p] for x in range(1, ctx.half + 1))


def jacobsthal_sum_full(ctx: PrimeContext, k: int) -> int:
    """Half of the complete sum over x in 0..p-1.

    Equals :func:`jacobsthal_sum` when p = 1 (mod 4); for p = 3 (mod 4) the
    terms at x and -x cancel and this is 0.
    """
    p, chi = ctx.p, ctx.chi
    total = sum(chi[x * (x * x + k) % p] for x in range(p))
    if total % 2:
        raise ArithmeticError(f"odd complete Jacobsthal sum {total} at p={p}, k={k}")
    return total // 2


def two_squares_decomposition(p: int) -> Tuple[int, int]:
    """Return (a, b) with a*a + b*b == p, a = 1 (mod 4) and b >= 0."""
    if p % 4 != 1:
        raise ValueError(f"{p} is not 1 mod 4")
    _require_odd_prime(p)
    for b in range(math.isqrt(p) + 1):
        a = integer_sqrt_exact(p - b * b)
        if a is None or a % 2 == 0:
            continue
        # a is odd, so exactly one of +a, -a is 1 mod 4
        return (a if a % 4 == 1 else -a), b
    raise ArithmeticError(f"no two-squares decomposition found for {p}")


def half_range_character_sum(ctx: PrimeContext) -> int:
    return sum(ctx.chi[1 : ctx.half + 1])


def class_number_from_sum(ctx: PrimeContext) -> int:
    """h(-p) from the half-range character sum, for p = 3 (mod 4), p > 3."""
    p = ctx.p
    if p % 4 != 3 or p <= 3:
        raise ValueError(f"class number formula needs p = 3 mod 4 and p > 3, got {p}")
    s = half_range_character_sum(ctx)
    divisor = 2 - ctx.chi[2]
    h, r = divmod(s, divisor)
    if r or h <= 0:
        raise ArithmeticError(f"p={p}: sum {s} not a positive multiple of {divisor}")
    return h


def class_number_oracle(p: int) -> int:
    """Count reduced primitive forms ax^2 + bxy + cy^2 of discriminant -p."""
    if p % 4 != 3 or p <= 3:
        raise ValueError(f"oracle needs p = 3 mod 4 and p > 3, got {p}")
    count = 0
    # reduced forms satisfy 3a^2 <= |D|
    a = 1
    while 3 * a * a <= p:
        for b in range(-a + 1, a + 1):
            num = b * b + p
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            count += 1
        a += 1
    return count


def derangement_count(n: int) -> int:
    """D_n by the recurrence D_n = n*D_{n-1} + (-1)^n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    d = 1
    for m in range(1, n + 1):
        d = m * d + (-1) ** m
    return d


def integer_sqrt_exact(n: int) -> Optional[int]:
    """The square root of n if n is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def primes_in_range(lo: int, hi: int) -> List[int]:
    """Odd primes p with lo <= p <= hi, ascending."""
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    if hi < 3:
        return []
    sieve = bytearray(b"\x01") * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for q in range(2, math.isqrt(hi) + 1):
        if sieve[q]:
            sieve[q * q :: q] = bytes(len(range(q * q, hi + 1, q)))
    return [q for q in range(max(lo, 3), hi + 1) if sieve[q] and q % 2]
