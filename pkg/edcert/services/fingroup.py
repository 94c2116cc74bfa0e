from collections import defaultdict
from itertools import zip_longest
from math import prod
from typing import Iterable

from sympy import factorint, isprime, multiplicity

from edcert.errors import InvalidFactor, NotPrime, ZeroValuation
from edcert.models.finite_group import FiniteAbelianGroup


def _require_prime(p: int) -> None:
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise NotPrime(f"{p!r} is not a prime")


def normalize(factors: Iterable[int]) -> FiniteAbelianGroup:
    """Canonical invariant factors of Z/f_1 + ... + Z/f_k.

    Splits every factor into prime powers and regroups them into the
    divisibility chain.
    """
    exponents = defaultdict(list)
    for factor in factors:
        if isinstance(factor, bool) or not isinstance(factor, int) or factor <= 0:
            raise InvalidFactor(f"cyclic factors must be positive integers, got {factor!r}")
        for p, e in factorint(factor).items():
            exponents[int(p)].append(int(e))

    columns = [
        [p ** e for e in sorted(exps, reverse=True)]
        for p, exps in sorted(exponents.items())
    ]
    largest_first = [prod(parts) for parts in zip_longest(*columns, fillvalue=1)]
    return FiniteAbelianGroup(tuple(reversed(largest_first)))


def rank(group: FiniteAbelianGroup) -> int:
    """Minimum number of generators; 0 for the trivial group."""
    return len(group.invariant_factors)


def rank_p(group: FiniteAbelianGroup, p: int) -> int:
    """rank(G / pG)."""
    _require_prime(p)
    return sum(1 for factor in group.invariant_factors if factor % p == 0)


def nu_p(m: int, p: int) -> int:
    """p-adic valuation of m; nu_p(0) is refused rather than infinite."""
    _require_prime(p)
    if m == 0:
        raise ZeroValuation("nu_p(0) is infinite")
    return int(multiplicity(p, abs(m)))


def direct_sum(*groups: FiniteAbelianGroup) -> FiniteAbelianGroup:
    return normalize([factor for group in groups for factor in group.invariant_factors])


def primes_dividing(group: FiniteAbelianGroup) -> list[int]:
    return sorted(int(p) for p in factorint(group.order)) if group.order > 1 else []
