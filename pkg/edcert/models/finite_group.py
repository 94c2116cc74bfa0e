from dataclasses import dataclass
from math import prod
from typing import Tuple

from edcert.errors import InvalidFactor


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group in canonical invariant-factor form s_1 | s_2 | ... | s_r."""
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(self.invariant_factors)
        for factor in factors:
            if isinstance(factor, bool) or not isinstance(factor, int) or factor < 2:
                raise InvalidFactor(f"invariant factors must be integers >= 2, got {factor!r}")
        for smaller, larger in zip(factors, factors[1:]):
            if larger % smaller:
                raise InvalidFactor(f"invariant factors {factors} do not form a divisibility chain")
        object.__setattr__(self, 'invariant_factors', factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        return " + ".join(f"Z/{factor}" for factor in self.invariant_factors)
