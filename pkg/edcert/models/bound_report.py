from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from edcert.errors import SoundnessError
from edcert.models.finite_group import FiniteAbelianGroup


@dataclass(frozen=True)
class WitnessEntry:
    """One (B, p) cell: dim A - dim B + (p-1)/p * rank_p(ker ∩ B).

    `prime` is None for the degree-1 row, where no prime divides the degree.
    """
    subvariety: str
    dim: int
    prime: Optional[int]
    rank_p: int
    value: Fraction


@dataclass(frozen=True)
class UpperWitness:
    """Minimizing B for dim A - dim B + rank(ker ∩ B)."""
    subvariety: str
    dim: int
    rank: int
    value: int


@dataclass(frozen=True)
class EdBoundReport:
    instance: str
    isogeny: str
    dim: int
    degree: int
    kernel: FiniteAbelianGroup
    lower: Optional[int]
    upper: int
    exact: Optional[int]
    lower_witness: Tuple[WitnessEntry, ...]
    upper_witness: UpperWitness
    coprimality: bool
    enumeration_complete: bool
    assumptions: Tuple[str, ...]

    def __post_init__(self):
        if self.upper > self.dim:
            raise SoundnessError(f"upper bound {self.upper} exceeds dim A = {self.dim}")
        if self.lower is not None and self.lower > self.upper:
            raise SoundnessError(f"certified lower bound {self.lower} exceeds upper bound {self.upper}")
        if (self.exact is not None) != (self.coprimality and self.enumeration_complete):
            raise SoundnessError("exact value must be present exactly under coprimality and completeness")
        if self.exact is not None and not (self.exact == self.upper == self.lower):
            raise SoundnessError(
                f"exact {self.exact} disagrees with bounds [{self.lower}, {self.upper}]"
            )

    @property
    def lower_certified(self) -> bool:
        return self.lower is not None

    @property
    def incompressible(self) -> Optional[bool]:
        if self.lower is None:
            return None
        return self.lower == self.dim
