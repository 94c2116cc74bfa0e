from itertools import combinations
from typing import Any, List, Mapping, Optional, Sequence, Tuple

from edcert.errors import (
    ForeignSubvariety,
    IncompatibleComposition,
    InvalidMultiplier,
    MalformedSpec,
    UnsaturatedSubvariety,
)
from edcert.models.abelian_variety import (
    FULL_LABEL,
    LABEL_SEPARATOR,
    ZERO_LABEL,
    AbelianVarietyInstance,
    Factor,
    Isogeny,
    Subvariety,
    VarietyKind,
)
from edcert.models.finite_group import FiniteAbelianGroup
from edcert.models.int_matrix import IntMatrix, Lattice
from edcert.services import intlinalg
from edcert.utils.logger import get_logger

logger = get_logger(__name__)

PRODUCT_KEYS = {"kind", "factors"}
CUSTOM_KEYS = {"kind", "ambient_rank", "subvarieties", "complete"}


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _reject_unknown(mapping: Mapping, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    missing = allowed - set(mapping)
    if unknown:
        raise MalformedSpec(f"unknown fields in {where}: {sorted(unknown)}")
    if missing:
        raise MalformedSpec(f"missing fields in {where}: {sorted(missing)}")


def _build_subvariety(ambient_rank: int, entry: Any) -> Subvariety:
    if not isinstance(entry, Mapping):
        raise MalformedSpec("each subvariety must be an object with 'label' and 'basis'")
    _reject_unknown(entry, {"label", "basis"}, "subvariety")
    label, basis = entry["label"], entry["basis"]
    if not isinstance(label, str) or not label:
        raise MalformedSpec("subvariety label must be a non-empty string")
    if not isinstance(basis, list) or not all(
        isinstance(row, list) and len(row) == ambient_rank and all(_is_int(x) for x in row)
        for row in basis
    ):
        raise MalformedSpec(f"basis of {label!r} must be a list of integer rows of length {ambient_rank}")
    lattice = intlinalg.lattice_from_generators(ambient_rank, basis)
    if lattice.rank != len(basis):
        raise MalformedSpec(f"basis rows of {label!r} are linearly dependent")
    if not intlinalg.is_saturated(lattice):
        raise UnsaturatedSubvariety(f"lattice of {label!r} is not saturated in Z^{ambient_rank}")
    return Subvariety(label, lattice)


def build_instance(name: str, variety: Mapping[str, Any]) -> AbelianVarietyInstance:
    """Validate a variety description (see the instance file schema)."""
    if not isinstance(variety, Mapping) or "kind" not in variety:
        raise MalformedSpec("variety must be an object with a 'kind'")

    if variety["kind"] == VarietyKind.PRODUCT.value:
        _reject_unknown(variety, PRODUCT_KEYS, "product variety")
        raw_factors = variety["factors"]
        if not isinstance(raw_factors, list) or not raw_factors:
            raise MalformedSpec("'factors' must be a non-empty list")
        factors = []
        for entry in raw_factors:
            if not isinstance(entry, Mapping):
                raise MalformedSpec("each factor must be an object with 'label' and 'dim'")
            _reject_unknown(entry, {"label", "dim"}, "factor")
            if not isinstance(entry["label"], str):
                raise MalformedSpec("factor label must be a string")
            factors.append(Factor(entry["label"], entry["dim"]))
        ambient_rank = 2 * sum(factor.dim for factor in factors)
        instance = AbelianVarietyInstance(name, VarietyKind.PRODUCT, ambient_rank, factors=tuple(factors))

    elif variety["kind"] == VarietyKind.CUSTOM.value:
        _reject_unknown(variety, CUSTOM_KEYS, "custom variety")
        ambient_rank = variety["ambient_rank"]
        if not _is_int(ambient_rank) or ambient_rank < 2 or ambient_rank % 2:
            raise MalformedSpec(f"ambient_rank must be an even integer >= 2, got {ambient_rank!r}")
        if not isinstance(variety["complete"], bool):
            raise MalformedSpec("'complete' must be a boolean")
        if not isinstance(variety["subvarieties"], list):
            raise MalformedSpec("'subvarieties' must be a list")
        declared: List[Subvariety] = []
        for entry in variety["subvarieties"]:
            subvariety = _build_subvariety(ambient_rank, entry)
            for other in declared:
                if other.label == subvariety.label or other.lattice == subvariety.lattice:
                    raise MalformedSpec(f"subvarieties {other.label!r} and {subvariety.label!r} collide")
            declared.append(subvariety)
        instance = AbelianVarietyInstance(
            name,
            VarietyKind.CUSTOM,
            ambient_rank,
            declared_subvarieties=tuple(declared),
            completeness_asserted=variety["complete"],
        )
        # reserved labels may only name the trivial subvarieties
        for subvariety in declared:
            if subvariety.label == ZERO_LABEL and subvariety.lattice.rank != 0:
                raise MalformedSpec(f"label {ZERO_LABEL!r} is reserved for the zero subvariety")
            if subvariety.label == FULL_LABEL and subvariety.lattice.rank != ambient_rank:
                raise MalformedSpec(f"label {FULL_LABEL!r} is reserved for A itself")
    else:
        raise MalformedSpec(f"unknown variety kind {variety['kind']!r}")

    logger.info(
        f"Built {instance.kind.value} instance of dimension {instance.dim}",
        extra={'instance': name},
    )
    return instance


def isogeny_from_matrix(
    source: AbelianVarietyInstance,
    rows: Sequence[Sequence[int]],
    target: Optional[AbelianVarietyInstance] = None,
    label: str = "alpha",
) -> Isogeny:
    matrix = IntMatrix.from_rows(rows)
    degree = abs(intlinalg.determinant(matrix)) if matrix.is_square else 0
    return Isogeny(source, target or source, matrix, degree, label)


def mult_by_m(instance: AbelianVarietyInstance, m: int) -> Isogeny:
    """The multiplication-by-m endomorphism."""
    if not _is_int(m) or m < 1:
        raise InvalidMultiplier(f"multiplier must be an integer >= 1, got {m!r}")
    n = instance.ambient_rank
    return Isogeny(instance, instance, IntMatrix.scalar(n, m), m ** n, label=f"[{m}]")


def block_diagonal_isogeny(instance: AbelianVarietyInstance, blocks: Sequence[IntMatrix]) -> Isogeny:
    """Product isogeny acting factor by factor."""
    if not instance.is_product or len(blocks) != len(instance.factors):
        raise MalformedSpec("need one block per factor of a product instance")
    for factor, block in zip(instance.factors, blocks):
        if block.rows != 2 * factor.dim:
            raise MalformedSpec(f"block for {factor.label!r} must be {2 * factor.dim}x{2 * factor.dim}")
    matrix = IntMatrix.block_diagonal(blocks)
    return Isogeny(instance, instance, matrix, abs(intlinalg.determinant(matrix)))


def kernel(isogeny: Isogeny) -> FiniteAbelianGroup:
    """ker(alpha) = M^-1 Z^n / Z^n, read off the Smith form of M."""
    snf = intlinalg.smith_normal_form(isogeny.matrix)
    return FiniteAbelianGroup(tuple(s for s in snf.invariant_factors if s > 1))


def kernel_lattice(isogeny: Isogeny) -> Lattice:
    """f^-1(Λ'): the lattice whose quotient by Z^n is ker(alpha)."""
    target = intlinalg.standard_lattice(isogeny.target.ambient_rank)
    return intlinalg.preimage_lattice(isogeny.matrix, target)


def _coordinate_subvariety(instance: AbelianVarietyInstance, chosen: Tuple[int, ...]) -> Subvariety:
    offsets = []
    position = 0
    for factor in instance.factors:
        offsets.append(position)
        position += 2 * factor.dim
    generators = []
    for index in chosen:
        start = offsets[index]
        for k in range(2 * instance.factors[index].dim):
            vector = [0] * instance.ambient_rank
            vector[start + k] = 1
            generators.append(vector)
    if not chosen:
        label = ZERO_LABEL
    elif len(chosen) == len(instance.factors):
        label = FULL_LABEL
    else:
        label = LABEL_SEPARATOR.join(instance.factors[index].label for index in chosen)
    return Subvariety(label, intlinalg.lattice_from_generators(instance.ambient_rank, generators))


def enumerate_subvarieties(instance: AbelianVarietyInstance) -> Tuple[List[Subvariety], bool]:
    """Subvariety family ordered by (dim, label), and whether it is known to be complete."""
    if instance.is_product:
        count = len(instance.factors)
        family = [
            _coordinate_subvariety(instance, chosen)
            for size in range(count + 1)
            for chosen in combinations(range(count), size)
        ]
    else:
        family = list(instance.declared_subvarieties)
        lattices = {subvariety.lattice for subvariety in family}
        zero = intlinalg.zero_lattice(instance.ambient_rank)
        full = intlinalg.standard_lattice(instance.ambient_rank)
        if zero not in lattices:
            family.append(Subvariety(ZERO_LABEL, zero))
        if full not in lattices:
            family.append(Subvariety(FULL_LABEL, full))
    family.sort(key=lambda subvariety: (subvariety.dim, subvariety.label))
    return family, instance.enumeration_complete


def kernel_intersect(isogeny: Isogeny, subvariety: Subvariety) -> FiniteAbelianGroup:
    """L = ker(alpha) ∩ B, computed as (f^-1(Λ') ∩ B_Q) / Λ_B."""
    if subvariety.lattice.ambient_rank != isogeny.source.ambient_rank:
        raise ForeignSubvariety(
            f"subvariety {subvariety.label!r} does not live in {isogeny.source.label!r}"
        )
    meet = intlinalg.span_intersect(kernel_lattice(isogeny), subvariety.lattice)
    return intlinalg.lattice_quotient(meet, subvariety.lattice)


def image_in_quotient(isogeny: Isogeny, subvariety: Subvariety) -> FiniteAbelianGroup:
    """Image of ker(alpha) under A -> A/B."""
    if subvariety.lattice.ambient_rank != isogeny.source.ambient_rank:
        raise ForeignSubvariety(
            f"subvariety {subvariety.label!r} does not live in {isogeny.source.label!r}"
        )
    n = isogeny.source.ambient_rank
    r = subvariety.lattice.rank
    if r == n:
        return FiniteAbelianGroup()
    _, completion_inverse = intlinalg.unimodular_completion(subvariety.lattice)
    preimage = kernel_lattice(isogeny)
    # coordinates in the completed basis; the last n - r of them describe A/B
    projected = []
    for row in preimage.rows:
        coordinates = [sum(row[i] * completion_inverse[i, j] for i in range(n)) for j in range(n)]
        projected.append(coordinates[r:])
    image = intlinalg.lattice_from_generators(n - r, projected, preimage.denominator)
    return intlinalg.lattice_quotient(image, intlinalg.standard_lattice(n - r))


def quotient_map_injective(isogeny: Isogeny, subvariety: Subvariety) -> bool:
    """ker(alpha)/L -> A/B is injective, i.e. |image| * |L| = |ker(alpha)|."""
    image = image_in_quotient(isogeny, subvariety)
    meet = kernel_intersect(isogeny, subvariety)
    return image.order * meet.order == kernel(isogeny).order


def compose(beta: Isogeny, alpha: Isogeny) -> Isogeny:
    """beta ∘ alpha."""
    if alpha.target != beta.source:
        raise IncompatibleComposition(
            f"target {alpha.target.label!r} of {alpha.label} is not the source of {beta.label}"
        )
    return Isogeny(
        alpha.source,
        beta.target,
        beta.matrix @ alpha.matrix,
        beta.degree * alpha.degree,
        label=f"{beta.label}*{alpha.label}",
    )
