"""Odd primes, the residue character mod 4, and smallest-prime-factor queries.

The prime 2 is excluded throughout: every series in this package ranges
over odd numbers only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class PrimeChar:
    """An odd prime with its residue class mod 4 and character value."""

    p: int
    residue: int
    chi: int

    @property
    def title_sign(self) -> int:
        """Sign of 1/p in the prime series: +1 exactly for p = 4n - 1."""
        return -self.chi


def chi4(m: int) -> int:
    """The completely multiplicative character mod 4 on odd integers."""
    if m % 2 == 0:
        raise ValueError(f"chi4 is defined on odd integers only, got {m}")
    return 1 if m % 4 == 1 else -1


@lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 3:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit ** 0.5) + 1):
        if flags[i]:
            flags[i * i::i] = bytearray(len(flags[i * i::i]))
    return tuple(i for i in range(3, limit + 1, 2) if flags[i])


def sieve_odd_primes(limit: int) -> list[PrimeChar]:
    """All odd primes <= limit, in increasing order; empty below 3."""
    return [PrimeChar(p, p % 4, chi4(p)) for p in _sieve(limit)]


_GROW = [1000]


def odd_primes(count: int) -> list[PrimeChar]:
    """The first ``count`` odd primes (3, 5, 7, ...)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    while len(_sieve(_GROW[0])) < count:
        _GROW[0] *= 2
    primes = _sieve(_GROW[0])[:count]
    return [PrimeChar(p, p % 4, chi4(p)) for p in primes]


def nth_odd_prime(index: int) -> PrimeChar:
    """The index-th odd prime, 1-based (1 -> 3)."""
    if index < 1:
        raise ValueError("index is 1-based")
    return odd_primes(index)[-1]


def smallest_prime_factor(m: int) -> int:
    """Least prime dividing an odd m >= 3."""
    if m < 3 or m % 2 == 0:
        raise ValueError(f"need an odd integer >= 3, got {m}")
    d = 3
    while d * d <= m:
        if m % d == 0:
            return d
        d += 2
    return m
