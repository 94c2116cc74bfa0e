"""The bound engine for ed(alpha).

For every abelian subvariety B, with L = ker(alpha) ∩ B:

    lower term  max_p  dim A - dim B + (p-1)/p * rank_p(L)
    upper term         dim A - dim B + rank(L)

A certified lower bound is the ceiling of the min of the lower terms over a
complete family; the upper bound is the min of the upper terms over whatever
family is available.
"""
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import primefactors

from edcert.errors import CoprimalityFails, InvalidArgument, InvalidDimension, SoundnessError, Uncertified
from edcert.models.abelian_variety import Isogeny, Subvariety
from edcert.models.bound_report import EdBoundReport, UpperWitness, WitnessEntry
from edcert.models.finite_group import FiniteAbelianGroup
from edcert.services import abvar, fingroup
from edcert.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_WORKERS = 4


@dataclass(frozen=True)
class SubvarietyTerm:
    subvariety: Subvariety
    intersection: FiniteAbelianGroup


def subvariety_terms(
    isogeny: Isogeny,
    family: Sequence[Subvariety],
    workers: int = 1,
) -> List[SubvarietyTerm]:
    """ker(alpha) ∩ B for every B, in family order regardless of worker count."""
    workers = max(1, workers)
    if workers == 1 or len(family) < 2:
        return [SubvarietyTerm(b, abvar.kernel_intersect(isogeny, b)) for b in family]

    results: List[Tuple[int, SubvarietyTerm]] = []
    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_map = {
            executor.submit(abvar.kernel_intersect, isogeny, subvariety): (index, subvariety)
            for index, subvariety in enumerate(family)
        }
        for future in as_completed(future_map):
            index, subvariety = future_map[future]
            results.append((index, SubvarietyTerm(subvariety, future.result())))
    return [term for _, term in sorted(results, key=lambda item: item[0])]


def _lower_from_terms(
    dim: int, degree: int, terms: Sequence[SubvarietyTerm]
) -> Tuple[int, Tuple[WitnessEntry, ...]]:
    # rank_p vanishes for primes not dividing deg(alpha), so these primes suffice
    primes = [int(p) for p in primefactors(degree)]
    table: List[WitnessEntry] = []
    minimum: Optional[Fraction] = None
    for term in terms:
        b = term.subvariety
        baseline = Fraction(dim - b.dim)
        if not primes:
            table.append(WitnessEntry(b.label, b.dim, None, 0, baseline))
            best = baseline
        else:
            best = baseline
            for p in primes:
                r = fingroup.rank_p(term.intersection, p)
                value = baseline + Fraction(p - 1, p) * r
                table.append(WitnessEntry(b.label, b.dim, p, r, value))
                best = max(best, value)
        logger.debug(f"Lower term {best} for {b.label}", extra={'subvariety': b.label})
        if minimum is None or best < minimum:
            minimum = best
    # ceiling once, after the min: ed is an integer >= the raw min
    return math.ceil(minimum), tuple(table)


def _upper_from_terms(dim: int, terms: Sequence[SubvarietyTerm]) -> UpperWitness:
    candidates = [
        UpperWitness(
            term.subvariety.label,
            term.subvariety.dim,
            fingroup.rank(term.intersection),
            dim - term.subvariety.dim + fingroup.rank(term.intersection),
        )
        for term in terms
    ]
    best = min(candidates, key=lambda w: (w.value, w.dim, w.subvariety))
    if best.value > dim:
        # trivial cap ed <= dim A; B = 0 is always in the family, so this is unreachable
        raise SoundnessError(f"no subvariety reaches the trivial cap dim A = {dim}")
    return best


def _complete_family(isogeny: Isogeny) -> List[Subvariety]:
    family, complete = abvar.enumerate_subvarieties(isogeny.source)
    if not complete:
        raise Uncertified(
            f"subvariety enumeration of {isogeny.source.label!r} is not complete; "
            "a min over a partial family is not a lower bound"
        )
    return family


def lower_bound(isogeny: Isogeny, workers: int = 1) -> Tuple[int, Tuple[WitnessEntry, ...]]:
    family = _complete_family(isogeny)
    terms = subvariety_terms(isogeny, family, workers)
    return _lower_from_terms(isogeny.source.dim, isogeny.degree, terms)


def upper_bound(isogeny: Isogeny, workers: int = 1) -> Tuple[int, UpperWitness]:
    family, _ = abvar.enumerate_subvarieties(isogeny.source)
    witness = _upper_from_terms(isogeny.source.dim, subvariety_terms(isogeny, family, workers))
    return witness.value, witness


def coprimality_check(degree: int, g: int) -> bool:
    """gcd(degree, g!) == 1, scanned as gcd(degree, k) for 2 <= k <= g."""
    if g < 1:
        raise InvalidDimension(f"dimension must be >= 1, got {g}")
    return all(gcd(degree, k) == 1 for k in range(2, g + 1))


def exact_ed(isogeny: Isogeny, workers: int = 1) -> Tuple[int, UpperWitness]:
    dim = isogeny.source.dim
    if not coprimality_check(isogeny.degree, dim):
        raise CoprimalityFails(f"deg = {isogeny.degree} is not coprime to ({dim})!")
    family = _complete_family(isogeny)
    terms = subvariety_terms(isogeny, family, workers)
    witness = _upper_from_terms(dim, terms)
    lower, _ = _lower_from_terms(dim, isogeny.degree, terms)
    if lower != witness.value:
        raise SoundnessError(
            f"coprime degree but lower bound {lower} differs from upper bound {witness.value}"
        )
    return witness.value, witness


def is_incompressible(isogeny: Isogeny, workers: int = 1) -> Tuple[bool, Tuple[WitnessEntry, ...]]:
    lower, table = lower_bound(isogeny, workers)
    return lower == isogeny.source.dim, table


def ed_upper_fiber_product(e1: int, e2: int) -> int:
    """ed of a fiber product is at most the sum."""
    if e1 < 0 or e2 < 0:
        raise InvalidArgument("essential dimensions are non-negative")
    return e1 + e2


def ed_upper_abelian_cover(group: FiniteAbelianGroup) -> int:
    """An abelian cover is a fiber product of rank(G) cyclic covers, each of ed <= 1."""
    bound = 0
    for _ in group.invariant_factors:
        bound = ed_upper_fiber_product(bound, 1)
    return bound


class BoundService:
    """Assembles the full bound report for one isogeny."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = max(1, workers or DEFAULT_WORKERS)

    def report(self, isogeny: Isogeny) -> EdBoundReport:
        source = isogeny.source
        family, complete = abvar.enumerate_subvarieties(source)
        logger.info(
            f"Evaluating {len(family)} subvarieties (complete={complete})",
            extra={'instance': source.label},
        )
        terms = subvariety_terms(isogeny, family, self.workers)
        witness = _upper_from_terms(source.dim, terms)

        lower: Optional[int] = None
        table: Tuple[WitnessEntry, ...] = ()
        if complete:
            lower, table = _lower_from_terms(source.dim, isogeny.degree, terms)
        else:
            logger.warning("Lower bound refused: enumeration incomplete", extra={'instance': source.label})

        coprime = coprimality_check(isogeny.degree, source.dim)
        exact = witness.value if coprime and complete else None

        return EdBoundReport(
            instance=source.label,
            isogeny=isogeny.label,
            dim=source.dim,
            degree=isogeny.degree,
            kernel=abvar.kernel(isogeny),
            lower=lower,
            upper=witness.value,
            exact=exact,
            lower_witness=table,
            upper_witness=witness,
            coprimality=coprime,
            enumeration_complete=complete,
            assumptions=source.assumptions,
        )
