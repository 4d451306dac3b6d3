"""Exact integer arithmetic shared by every other module.

Everything here is plain ``int`` arithmetic: Jacobi symbols, deterministic
primality, trial-division factorization and squarefree kernels.  No floats,
no probabilistic answers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TRIAL_DIVISION_BOUND = 10**6

# Deterministic Miller-Rabin witness set; correct for every n below 3.3e24
# (Sorenson-Webster), far beyond anything this package sweeps over.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FactorizationError(Exception):
    """Raised when an input is out of reach of trial division."""


@dataclass(frozen=True)
class FactoredInt:
    """A nonzero integer as sign times a product of prime powers."""

    sign: int
    factors: dict[int, int] = field(default_factory=dict)

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors.items():
            n *= p**e
        return n

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self.factors.items())]
        body = " * ".join(parts) if parts else "1"
        return body if self.sign > 0 else f"-{body}"


def jacobi(n: int, m: int) -> int:
    """Jacobi symbol (n/m) for odd positive m; the Legendre symbol when m is prime."""
    if m <= 0 or m % 2 == 0:
        raise ValueError(f"jacobi: modulus must be odd and positive, got {m}")
    n %= m
    result = 1
    while n != 0:
        while n % 2 == 0:
            n //= 2
            if m % 8 in (3, 5):
                result = -result
        n, m = m, n
        if n % 4 == 3 and m % 4 == 3:
            result = -result
        n %= m
    return result if m == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic primality test for n >= 0."""
    if n < 0:
        raise ValueError("is_prime expects a non-negative integer")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


def prime_sieve(limit: int) -> list[int]:
    """All primes below ``limit`` by Eratosthenes."""
    if limit <= 2:
        return []
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for i in range(2, limit):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return [i for i in range(limit) if flags[i]]


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p < hi."""
    return [p for p in range(max(lo, 2), hi) if is_prime(p)]


def factor_small(n: int, bound: int = TRIAL_DIVISION_BOUND) -> FactoredInt:
    """Factor a nonzero integer by trial division up to ``bound``.

    A cofactor surviving all divisors up to ``bound`` is prime whenever it is
    at most bound**2; anything larger raises ``FactorizationError`` rather
    than returning a partial answer.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    factors: dict[int, int] = {}

    def strip(m: int, p: int) -> int:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        return m

    n = strip(n, 2)
    n = strip(n, 3)
    d = 5
    while d <= bound and d * d <= n:
        n = strip(n, d)
        n = strip(n, d + 2)
        d += 6
    if n > 1:
        if n > bound * bound:
            raise FactorizationError(f"cofactor {n} exceeds trial-division bound {bound}")
        factors[n] = factors.get(n, 0) + 1
    return FactoredInt(sign, factors)


def squarefree_part(n: int, bound: int = TRIAL_DIVISION_BOUND) -> int:
    """The squarefree s with n = s * t**2 and sign(s) = sign(n)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    fac = factor_small(n, bound)
    s = fac.sign
    for p, e in fac.factors.items():
        if e % 2 == 1:
            s *= p
    return s


def valuation(n: int, p: int) -> int:
    """v_p(n) for nonzero n."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v
