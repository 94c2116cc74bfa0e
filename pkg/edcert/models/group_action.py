from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional, Tuple

from sympy import isprime

from edcert.errors import InvalidDimension, NotPrime, ZeroChi


@dataclass(frozen=True)
class ActionQuery:
    """An abelian p-group acting on a smooth projective X of dimension n with chi(X, O_X) = chi."""
    n: int
    p: int
    chi: Optional[int] = None

    def __post_init__(self):
        if self.n < 0:
            raise InvalidDimension(f"dimension must be >= 0, got {self.n}")
        if not isprime(self.p):
            raise NotPrime(f"{self.p!r} is not a prime")

    def require_chi(self) -> int:
        if self.chi is None or self.chi == 0:
            raise ZeroChi("chi(X, O_X) = 0: the fixed-point method gives no bound")
        return self.chi


@dataclass(frozen=True)
class RankBoundResult:
    """raw exact bound, its floor, and optionally the (rank G1, |G2|) caps of G = G1 x G2."""
    raw: Fraction
    integral: int
    decomposition: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.integral != floor(self.raw):
            raise ValueError(f"integral bound {self.integral} is not floor({self.raw})")


@dataclass(frozen=True)
class SurfaceChern:
    """Chern numbers (c1^2, c2) of a surface; arithmetic only."""
    c1_sq: int
    c2: int
