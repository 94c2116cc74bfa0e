from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from edcert.errors import MalformedSpec, OddRankSubvariety, SingularMatrix
from edcert.models.int_matrix import IntMatrix, Lattice

ZERO_LABEL = "0"
FULL_LABEL = "A"
LABEL_SEPARATOR = "x"


class VarietyKind(str, Enum):
    PRODUCT = "product"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Factor:
    """A simple factor of a product instance."""
    label: str
    dim: int

    def __post_init__(self):
        if not self.label:
            raise MalformedSpec("factor label must be non-empty")
        if self.label in (ZERO_LABEL, FULL_LABEL):
            raise MalformedSpec(f"factor label {self.label!r} is reserved")
        if LABEL_SEPARATOR in self.label:
            raise MalformedSpec(f"factor label {self.label!r} may not contain {LABEL_SEPARATOR!r}")
        if isinstance(self.dim, bool) or not isinstance(self.dim, int) or self.dim < 1:
            raise MalformedSpec(f"factor {self.label!r} must have integer dim >= 1")


@dataclass(frozen=True)
class Subvariety:
    """Abelian subvariety B, modelled by its saturated lattice Λ_B."""
    label: str
    lattice: Lattice

    def __post_init__(self):
        if not self.label:
            raise MalformedSpec("subvariety label must be non-empty")
        if self.lattice.rank % 2:
            raise OddRankSubvariety(
                f"subvariety {self.label!r} has odd lattice rank {self.lattice.rank}"
            )

    @property
    def dim(self) -> int:
        return self.lattice.rank // 2


@dataclass(frozen=True)
class AbelianVarietyInstance:
    """A at the lattice level: ambient lattice Z^{2g} plus its subvariety data."""
    label: str
    kind: VarietyKind
    ambient_rank: int
    factors: Tuple[Factor, ...] = ()
    declared_subvarieties: Tuple[Subvariety, ...] = ()
    completeness_asserted: bool = False

    def __post_init__(self):
        if not self.label:
            raise MalformedSpec("instance name must be non-empty")
        if self.ambient_rank < 2 or self.ambient_rank % 2:
            raise MalformedSpec(f"ambient rank must be even and >= 2, got {self.ambient_rank}")
        if self.kind is VarietyKind.PRODUCT:
            if not self.factors:
                raise MalformedSpec("product instance needs at least one factor")
            if self.ambient_rank != 2 * sum(factor.dim for factor in self.factors):
                raise MalformedSpec("ambient rank must equal twice the sum of factor dims")
            labels = [factor.label for factor in self.factors]
            if len(set(labels)) != len(labels):
                raise MalformedSpec(f"duplicate factor labels in {labels}")
            if self.declared_subvarieties:
                raise MalformedSpec("product instances enumerate their own subvarieties")
        for subvariety in self.declared_subvarieties:
            if subvariety.lattice.ambient_rank != self.ambient_rank:
                raise MalformedSpec(
                    f"subvariety {subvariety.label!r} lives in Z^{subvariety.lattice.ambient_rank}, "
                    f"not Z^{self.ambient_rank}"
                )

    @property
    def dim(self) -> int:
        return self.ambient_rank // 2

    @property
    def is_product(self) -> bool:
        return self.kind is VarietyKind.PRODUCT

    @property
    def enumeration_complete(self) -> bool:
        return self.is_product or self.completeness_asserted

    @property
    def assumptions(self) -> Tuple[str, ...]:
        """Mathematical assumptions that the lattice model cannot verify."""
        if self.is_product:
            names = ", ".join(factor.label for factor in self.factors)
            return (
                f"factors {names} are simple and pairwise non-isogenous (asserted, not verified)",
                "every factor has End = Z (asserted, not verified)",
            )
        if self.completeness_asserted:
            return ("the declared subvariety list plus 0 and A is complete (asserted, not verified)",)
        return ("the declared subvariety list is not asserted complete; lower bounds are refused",)


@dataclass(frozen=True)
class Isogeny:
    """alpha: source -> target given by an integer matrix acting on column vectors."""
    source: AbelianVarietyInstance
    target: AbelianVarietyInstance
    matrix: IntMatrix
    degree: int
    label: str = "alpha"

    def __post_init__(self):
        # deferred: services import the models
        from edcert.services.intlinalg import determinant

        n = self.source.ambient_rank
        if self.target.ambient_rank != n:
            raise MalformedSpec("source and target must have the same ambient rank")
        if not self.matrix.is_square or self.matrix.rows != n:
            raise MalformedSpec(f"isogeny matrix must be {n}x{n}, got {self.matrix.rows}x{self.matrix.cols}")
        det = determinant(self.matrix)
        if det == 0:
            raise SingularMatrix("isogeny matrix has determinant 0")
        if self.degree != abs(det):
            raise MalformedSpec(f"degree {self.degree} differs from |det| = {abs(det)}")
