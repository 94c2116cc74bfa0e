"""Seeded randomized cross-checks.

Each suite draws from its own `random.Random(f"{seed}:{suite}")`, so adding
or resizing one suite never shifts the cases of another.
"""
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

from sympy import primerange

from edcert.errors import EdCertError, InvalidInput
from edcert.models.abelian_variety import FULL_LABEL, LABEL_SEPARATOR, ZERO_LABEL, Isogeny
from edcert.models.finite_group import FiniteAbelianGroup
from edcert.models.int_matrix import IntMatrix
from edcert.services import abvar, fingroup, intlinalg
from edcert.services.edim import BoundService
from edcert.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TRIALS = 200
DEFAULT_SEED = 20240607
DEFAULT_MAX_DIM = 6
DEFAULT_MAX_ENTRY = 20
MAX_FAILURES_SHOWN = 5


@dataclass(frozen=True)
class OracleConfig:
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    max_dim: int = DEFAULT_MAX_DIM
    max_entry: int = DEFAULT_MAX_ENTRY

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidInput(f"trials must be >= 1, got {self.trials}")
        if self.max_dim < 2:
            raise InvalidInput(f"max-dim must be >= 2, got {self.max_dim}")
        if self.max_entry < 1:
            raise InvalidInput(f"max-entry must be >= 1, got {self.max_entry}")

    @property
    def instance_trials(self) -> int:
        return max(1, self.trials // 2)


@dataclass
class SuiteResult:
    suite: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)


def _random_matrix(rng: random.Random, rows: int, cols: int, bound: int) -> IntMatrix:
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)])


def _random_nonsingular(rng: random.Random, n: int, bound: int) -> IntMatrix:
    while True:
        matrix = _random_matrix(rng, n, n, bound)
        if intlinalg.determinant(matrix) != 0:
            return matrix


def _random_unimodular_2x2(rng: random.Random) -> IntMatrix:
    upper = IntMatrix.from_rows([[1, rng.randint(-3, 3)], [0, 1]])
    lower = IntMatrix.from_rows([[1, 0], [rng.randint(-3, 3), 1]])
    return upper @ lower


def invariant_factors_from_divisors(matrix: IntMatrix) -> FiniteAbelianGroup:
    """Cokernel torsion via ratios of determinantal divisors, independent of the Smith reduction."""
    divisors = [d for d in intlinalg.determinantal_divisors(matrix) if d != 0]
    ratios = [d // prev for prev, d in zip([1] + divisors, divisors)]
    return FiniteAbelianGroup(tuple(r for r in ratios if r > 1))


def _elliptic_product(g: int):
    return abvar.build_instance(
        f"E^{g}", {"kind": "product", "factors": [{"label": f"E{k}", "dim": 1} for k in range(1, g + 1)]}
    )


def suite_snf(config: OracleConfig) -> SuiteResult:
    rng = random.Random(f"{config.seed}:snf")
    result = SuiteResult("snf")
    for case in range(config.trials):
        rows, cols = rng.randint(1, config.max_dim), rng.randint(1, config.max_dim)
        matrix = _random_matrix(rng, rows, cols, config.max_entry)
        snf = intlinalg.smith_normal_form(matrix)
        result.cases += 1
        expected = invariant_factors_from_divisors(matrix)
        got = tuple(s for s in snf.invariant_factors if s > 1)
        if got != expected.invariant_factors:
            result.fail(f"case {case}: factors {got} vs determinantal divisors {expected.invariant_factors}")
        if snf.left_transform @ matrix @ snf.right_transform != snf.diagonal:
            result.fail(f"case {case}: U*M*V != S")
        if not (intlinalg.is_unimodular(snf.left_transform) and intlinalg.is_unimodular(snf.right_transform)):
            result.fail(f"case {case}: transforms not unimodular")
    return result


def suite_quotient(config: OracleConfig) -> SuiteResult:
    rng = random.Random(f"{config.seed}:quotient")
    result = SuiteResult("quotient")
    for case in range(config.instance_trials):
        g = rng.randint(1, max(1, config.max_dim // 2))
        instance = abvar.build_instance(
            f"simple{g}", {"kind": "custom", "ambient_rank": 2 * g, "subvarieties": [], "complete": True}
        )
        matrix = _random_nonsingular(rng, 2 * g, config.max_entry)
        isogeny = abvar.isogeny_from_matrix(instance, matrix.to_rows())
        result.cases += 1
        kernel = abvar.kernel(isogeny)
        quotient = intlinalg.lattice_quotient(abvar.kernel_lattice(isogeny), intlinalg.standard_lattice(2 * g))
        if not (kernel.order == quotient.order == isogeny.degree):
            result.fail(f"case {case}: |ker| {kernel.order}, |Λ'/Λ| {quotient.order}, deg {isogeny.degree}")
        standard = intlinalg.standard_lattice(2 * g)
        cokernel = intlinalg.lattice_quotient(standard, intlinalg.image_lattice(matrix, standard))
        if cokernel != kernel:
            result.fail(f"case {case}: ker {kernel} but Z^n / M Z^n = {cokernel}")
    return result


def _random_block_isogeny(rng: random.Random, config: OracleConfig) -> Isogeny:
    g = rng.randint(1, min(3, max(1, config.max_dim // 2)))
    instance = _elliptic_product(g)
    blocks = [_random_nonsingular(rng, 2, min(config.max_entry, 6)) for _ in range(g)]
    return abvar.block_diagonal_isogeny(instance, blocks)


def suite_kernel_splitting(config: OracleConfig) -> SuiteResult:
    rng = random.Random(f"{config.seed}:kernel-splitting")
    result = SuiteResult("kernel-splitting")
    for case in range(config.instance_trials):
        isogeny = _random_block_isogeny(rng, config)
        factors = isogeny.source.factors
        block_kernels = []
        for k in range(len(factors)):
            block = IntMatrix.from_rows([row[2 * k:2 * k + 2] for row in isogeny.matrix.to_rows()[2 * k:2 * k + 2]])
            block_kernels.append(invariant_factors_from_divisors(block))
        index_of = {factor.label: k for k, factor in enumerate(factors)}
        family, _ = abvar.enumerate_subvarieties(isogeny.source)
        for subvariety in family:
            if subvariety.label == ZERO_LABEL:
                chosen = []
            elif subvariety.label == FULL_LABEL:
                chosen = list(range(len(factors)))
            else:
                chosen = [index_of[label] for label in subvariety.label.split(LABEL_SEPARATOR)]
            result.cases += 1
            expected = fingroup.direct_sum(*(block_kernels[k] for k in chosen))
            got = abvar.kernel_intersect(isogeny, subvariety)
            if got != expected:
                result.fail(f"case {case} {subvariety.label}: {got} vs {expected}")
            if not abvar.quotient_map_injective(isogeny, subvariety):
                result.fail(f"case {case} {subvariety.label}: ker/L -> A/B not injective")
    return result


def _check_ordering(result: SuiteResult, label: str, lower, upper: int, dim: int) -> None:
    if upper > dim or (lower is not None and lower > upper):
        result.fail(f"{label}: lower {lower}, upper {upper}, dim {dim}")


def suite_ordering(config: OracleConfig) -> SuiteResult:
    rng = random.Random(f"{config.seed}:ordering")
    result = SuiteResult("ordering")
    service = BoundService(workers=1)
    for case in range(config.instance_trials):
        if rng.random() < 0.25:
            instance = _elliptic_product(rng.randint(1, 3))
            isogeny = abvar.mult_by_m(instance, rng.randint(1, 6))
        else:
            isogeny = _random_block_isogeny(rng, config)
        result.cases += 1
        try:
            report = service.report(isogeny)
        except EdCertError as exc:
            result.fail(f"case {case}: {type(exc).__name__}: {exc}")
            continue
        _check_ordering(result, f"case {case}", report.lower, report.upper, report.dim)
    return result


def suite_coprime(config: OracleConfig) -> SuiteResult:
    rng = random.Random(f"{config.seed}:coprime")
    result = SuiteResult("coprime")
    service = BoundService(workers=1)
    for case in range(config.instance_trials):
        g = rng.randint(1, 3)
        primes = [int(p) for p in primerange(g + 1, 30)]
        blocks = []
        for _ in range(g):
            diagonal = IntMatrix.diagonal([rng.choice(primes + [1]), rng.choice(primes)])
            if rng.random() < 0.5:
                diagonal = _random_unimodular_2x2(rng) @ diagonal @ _random_unimodular_2x2(rng)
            blocks.append(diagonal)
        isogeny = abvar.block_diagonal_isogeny(_elliptic_product(g), blocks)
        result.cases += 1
        report = service.report(isogeny)
        if report.exact is None or report.lower != report.upper:
            result.fail(f"case {case}: deg {report.degree}, [{report.lower}, {report.upper}]")
    return result


SUITES: Dict[str, Callable[[OracleConfig], SuiteResult]] = {
    "snf": suite_snf,
    "quotient": suite_quotient,
    "kernel-splitting": suite_kernel_splitting,
    "ordering": suite_ordering,
    "coprime": suite_coprime,
}


def run_oracle(config: OracleConfig, suites: Sequence[str] = tuple(SUITES)) -> List[SuiteResult]:
    results = []
    for name in suites:
        logger.info(
            f"Running suite {name}",
            extra={'suite': name, 'seed': config.seed, 'trials': config.trials},
        )
        suite = SUITES[name](config)
        if not suite.passed:
            logger.error(f"Suite {name} found {len(suite.failures)} discrepancies", extra={'suite': name})
        results.append(suite)
    return results
