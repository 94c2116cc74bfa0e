import argparse
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from edcert import __version__
from edcert.errors import CoprimalityFails, EdCertError, MalformedSpec, SoundnessError, Uncertified
from edcert.models.group_action import ActionQuery
from edcert.services import abvar, edim, groupbounds
from edcert.services.batch_service import BatchService
from edcert.services.edim import DEFAULT_WORKERS, BoundService
from edcert.services.oracle import (
    DEFAULT_MAX_DIM,
    DEFAULT_MAX_ENTRY,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    MAX_FAILURES_SHOWN,
    OracleConfig,
    run_oracle,
)
from edcert.services.golden_fixtures import run_fixtures
from edcert.utils import report
from edcert.utils.csv_handler import read_instance_paths, write_batch_results, write_witness_table
from edcert.utils.instance_loader import load_instance
from edcert.utils.logger import get_logger, set_level

logger = get_logger(__name__)

GROUPBOUND_KINDS = ('rc', 'abelian', 'orbit', 'symalt', 'local', 'cy', 'todd')
NEEDS_PRIME = {'rc', 'abelian', 'orbit', 'local', 'cy', 'todd'}
NEEDS_CHI = {'abelian', 'orbit', 'cy'}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='edcert',
        description='Certified bounds on the essential dimension of isogenies of abelian varieties',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', help='DEBUG, INFO, WARNING or ERROR (default: LOG_LEVEL or WARNING)')
    parser.add_argument('--workers', type=int, default=DEFAULT_WORKERS,
                        help=f'threads for subvariety and batch evaluation (default {DEFAULT_WORKERS})')
    commands = parser.add_subparsers(dest='command', required=True)

    def with_json(sub: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sub.add_argument('--json', action='store_true', help='print only the machine-readable block')
        return sub

    with_json(commands.add_parser('kernel', help='kernel structure of the isogeny')).add_argument('file')
    with_json(commands.add_parser('subvarieties', help='enumerated subvariety family')).add_argument('file')

    bounds = with_json(commands.add_parser('bounds', help='lower/upper/exact bounds with witnesses'))
    bounds.add_argument('file')
    bounds.add_argument('--require-lower', action='store_true', help='exit 3 unless the lower bound is certified')
    bounds.add_argument('--table-out', help='write the per-(B, p) witness table to this CSV')

    with_json(commands.add_parser('exact', help='exact ed under the coprimality hypothesis')).add_argument('file')

    group = with_json(commands.add_parser('groupbound', help='bounds for abelian p-group actions'))
    group.add_argument('--kind', required=True, choices=GROUPBOUND_KINDS)
    group.add_argument('--n', type=int, required=True)
    group.add_argument('--p', type=int)
    group.add_argument('--chi', type=int)

    with_json(commands.add_parser('verify-paper', help='run the golden example battery'))

    oracle = with_json(commands.add_parser('oracle', help='seeded randomized cross-checks'))
    oracle.add_argument('--trials', type=int, default=DEFAULT_TRIALS)
    oracle.add_argument('--seed', type=int, default=DEFAULT_SEED)
    oracle.add_argument('--max-dim', type=int, default=DEFAULT_MAX_DIM)
    oracle.add_argument('--max-entry', type=int, default=DEFAULT_MAX_ENTRY)

    batch = commands.add_parser('batch', help='bounds for every instance listed in a CSV')
    batch.add_argument('--input', '-i', required=True, help="input CSV with an 'instance' column")
    batch.add_argument('--output', '-o', required=True, help='output CSV for results')

    return parser


def _emit(data: Dict[str, Any], as_json: bool = False) -> None:
    print(report.render(data, as_json))


def cmd_kernel(args) -> int:
    instance, isogeny = load_instance(args.file)
    _emit(report.envelope(
        'kernel',
        instance=instance.label,
        isogeny=isogeny.label,
        degree=isogeny.degree,
        kernel=report.group_block(abvar.kernel(isogeny)),
    ), args.json)
    return 0


def cmd_subvarieties(args) -> int:
    instance, _ = load_instance(args.file)
    family, complete = abvar.enumerate_subvarieties(instance)
    _emit(report.subvarieties_data(instance, family, complete), args.json)
    return 0


def cmd_bounds(args) -> int:
    _, isogeny = load_instance(args.file)
    bound_report = BoundService(args.workers).report(isogeny)
    if args.require_lower and not bound_report.lower_certified:
        raise Uncertified(
            f"lower bound for {bound_report.instance!r} is not certified: subvariety enumeration is incomplete"
        )
    if args.table_out:
        write_witness_table(bound_report, args.table_out)
    _emit(report.bounds_data(bound_report), args.json)
    return 0


def cmd_exact(args) -> int:
    _, isogeny = load_instance(args.file)
    try:
        value, witness = edim.exact_ed(isogeny, args.workers)
    except CoprimalityFails as exc:
        # the bounds still hold; show them before refusing
        _emit(report.bounds_data(BoundService(args.workers).report(isogeny)), args.json)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(report.envelope(
        'exact',
        instance=isogeny.source.label,
        isogeny=isogeny.label,
        degree=isogeny.degree,
        exact=value,
        witness={'subvariety': witness.subvariety, 'dim': witness.dim, 'rank': witness.rank},
        assumptions=list(isogeny.source.assumptions),
    ), args.json)
    return 0


def groupbound_data(kind: str, n: int, p: Optional[int], chi: Optional[int]) -> Dict[str, Any]:
    if kind in NEEDS_PRIME and p is None:
        raise MalformedSpec(f"--p is required for --kind {kind}")
    if kind in NEEDS_CHI and chi is None:
        raise MalformedSpec(f"--chi is required for --kind {kind}")

    fields: Dict[str, Any] = {'kind': kind, 'n': n, 'p': p, 'chi': chi}
    if kind == 'rc':
        fields['integral'] = groupbounds.rc_rank_bound(n, p)
    elif kind == 'abelian':
        result = groupbounds.abelian_rank_bound(ActionQuery(n, p, chi))
        fields.update(raw=result.raw, integral=result.integral,
                      rank_g1_cap=result.decomposition[0], order_g2_cap=result.decomposition[1])
    elif kind == 'orbit':
        raw, integral = groupbounds.orbit_index_bound(ActionQuery(n, p, chi))
        fields.update(raw=raw, integral=integral)
    elif kind == 'symalt':
        m_sym, m_alt = groupbounds.sym_alt_degree_bounds(n)
        fields.update(max_symmetric=m_sym, max_alternating=m_alt)
    elif kind == 'local':
        index_cap, rank_cap = groupbounds.local_ring_bounds(n, p)
        fields.update(index_exponent_cap=index_cap, rank_cap=rank_cap)
    elif kind == 'cy':
        fields['integral'] = groupbounds.cy_rank_bound(n, p, chi)
    else:
        fields['exponent'] = groupbounds.todd_denominator_exponent(n, p)
    return report.envelope('groupbound', **fields)


def cmd_groupbound(args) -> int:
    _emit(groupbound_data(args.kind, args.n, args.p, args.chi), args.json)
    return 0


def cmd_verify_paper(args) -> int:
    results = run_fixtures()
    failed = [result.name for result in results if not result.passed]
    _emit(report.envelope(
        'verify-paper',
        passed=len(results) - len(failed),
        total=len(results),
        fixtures=[
            {'name': r.name, 'anchor': r.anchor, 'passed': r.passed, 'detail': r.detail}
            for r in results
        ],
    ), args.json)
    if failed:
        raise SoundnessError(f"fixtures failed: {', '.join(failed)}")
    return 0


def cmd_oracle(args) -> int:
    config = OracleConfig(args.trials, args.seed, args.max_dim, args.max_entry)
    results = run_oracle(config)
    _emit(report.envelope(
        'oracle',
        seed=config.seed,
        trials=config.trials,
        max_dim=config.max_dim,
        max_entry=config.max_entry,
        suites=[
            {
                'suite': suite.suite,
                'cases': suite.cases,
                'failures': len(suite.failures),
                'first_failures': suite.failures[:MAX_FAILURES_SHOWN],
            }
            for suite in results
        ],
    ), args.json)
    failed = [suite.suite for suite in results if not suite.passed]
    if failed:
        raise SoundnessError(f"oracle discrepancies in: {', '.join(failed)}")
    return 0


def cmd_batch(args) -> int:
    try:
        paths = read_instance_paths(args.input)
    except (OSError, ValueError) as e:
        raise MalformedSpec(f"cannot read batch input {args.input}: {e}") from e
    rows = BatchService(args.workers).evaluate(paths)
    write_batch_results(rows, args.output)
    failed = sum(1 for row in rows if row['status'] != 'ok')
    print(f"evaluated {len(rows)} instances ({failed} failed) -> {args.output}")
    return 0


COMMANDS = {
    'kernel': cmd_kernel,
    'subvarieties': cmd_subvarieties,
    'bounds': cmd_bounds,
    'exact': cmd_exact,
    'groupbound': cmd_groupbound,
    'verify-paper': cmd_verify_paper,
    'oracle': cmd_oracle,
    'batch': cmd_batch,
}


def run(argv: Optional[List[str]] = None) -> int:
    # Load environment variables
    load_dotenv()

    args = build_parser().parse_args(argv)
    set_level(args.log_level)

    logger.info(f"Starting {args.command}", extra={'command': args.command})
    try:
        if args.workers < 1:
            raise MalformedSpec(f"--workers must be >= 1, got {args.workers}")
        code = COMMANDS[args.command](args)
    except EdCertError as e:
        logger.error(f"{args.command} failed: {e}", extra={'command': args.command})
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception:
        logger.error(f"{args.command} crashed", exc_info=True, extra={'command': args.command})
        raise

    logger.info(f"Finished {args.command}", extra={'command': args.command})
    return code


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
