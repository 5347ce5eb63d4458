# Command line entry point: dimension of real algebraic sets

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import pydantic

from lib.critvals import SigmaMode
from lib.dimension import DimensionOptions, DimResult, dim_las_vegas, dim_proper, dimension
from lib.exceptions import GenericityExhaustedError, RealDimError, UsageError
from lib.formulations import ALL_FORMULATIONS
from lib.generic import RandomSource, RngConfig
from lib.oracle2d import dim2d_oracle
from lib.problems import ProblemFile, generate_instance, parse_generate_spec, parse_problem
from lib.report import ReportFormats, RunReport
from utils import get_config, get_logger

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_GENERICITY = 2

DRIVERS = {
    'general': dimension,
    'proper': dim_proper,
    'las-vegas': dim_las_vegas,
}

logger = logging.getLogger('realdim')


class _Parser(argparse.ArgumentParser):
    """Reports bad flags as an input error instead of exiting with 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='realdim',
        description='Exact dimension of the real solution set of a polynomial system.',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='Compute the dimension of a problem')
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument('--input', type=Path, help='Problem file')
    source.add_argument('--generate', metavar='FAMILY:PARAMS', help='Benchmark instance: p:N, b:N or s:C,N[,SEED]')
    run.add_argument('--mode', choices=tuple(DRIVERS), default='general',
                     help='general needs no assumption; proper and las-vegas assume the polynomial map is proper')
    run.add_argument('--seed', type=int, default=0, help='Seed for every generic choice (default: 0)')
    run.add_argument('--coeff-bound', type=int, default=None, help='Bound of the random integers')
    run.add_argument('--retries', type=int, default=None, help='Generic draws per node before giving up')
    run.add_argument('--sos', action='store_true', help='Replace the system by the sum of squares of its equations')
    run.add_argument('--formulation', choices=[f.config.id for f in ALL_FORMULATIONS], default=None)
    run.add_argument('--sigma', choices=[m.value for m in SigmaMode], default=None)
    run.add_argument('--trace', action='store_true', help='Print per-depth statistics')
    run.add_argument('--json', action='store_true', help='Print the report as a JSON object')
    run.add_argument('--parallel', action='store_true', help='Visit the top-level fibers in worker processes')
    run.add_argument('--no-timings', action='store_true', help='Report 0 ms so reports are reproducible byte for byte')
    run.add_argument('--log-file', action='store_true', help='Also write the log to logs/run_<seed>.log')

    oracle = commands.add_parser('oracle2d', help='Dimension of a plane curve by projection')
    oracle.add_argument('--input', type=Path, required=True, help='Problem file with one bivariate polynomial')

    generate = commands.add_parser('generate', help='Print a benchmark instance as a problem file')
    generate.add_argument('spec', metavar='FAMILY:PARAMS', help='p:N, b:N or s:C,N[,SEED]')

    return parser


def load_problem(args: argparse.Namespace) -> ProblemFile:
    if getattr(args, 'generate', None):
        family, params = parse_generate_spec(args.generate)
        return generate_instance(family, params)
    return parse_problem(args.input.read_text(encoding='utf-8'))


def run(args: argparse.Namespace) -> Tuple[RunReport, DimResult]:
    """Solve the problem selected by `args` and build its report."""
    problem = load_problem(args)
    if args.sos:
        problem = problem.sum_of_squares()

    overrides = {k: v for k, v in dict(coeff_bound=args.coeff_bound, retry_budget=args.retries).items() if v is not None}
    rng_config = RngConfig(seed=args.seed, **overrides)
    option_overrides = dict(parallel=args.parallel)
    if args.formulation:
        option_overrides['formulation'] = args.formulation
    if args.sigma:
        option_overrides['sigma_mode'] = SigmaMode(args.sigma)
    options = DimensionOptions(**option_overrides)

    logger.info('Running %s on %s (%s equations in %s variables)', args.mode, problem.name or 'input',
                len(problem.polynomials), len(problem.variables))
    result = DRIVERS[args.mode](problem.polynomials, RandomSource(rng_config), options)

    report = RunReport.from_result(
        result,
        seed=rng_config.seed,
        mode=args.mode,
        formulation=options.formulation,
        sigma=options.sigma_mode.value,
        coeff_bound=rng_config.coeff_bound,
        retry_budget=rng_config.retry_budget,
    )
    if args.no_timings:
        report = report.without_timings()
    return report, result


def _command_run(args: argparse.Namespace) -> int:
    if args.log_file or get_config().getboolean('Logging', 'LogToFile', fallback=False):
        file_logger = get_logger('lib', to_file=True, filename=f"run_{args.seed}.log")
        file_logger.setLevel(logging.INFO)
    report, _ = run(args)
    converter = ReportFormats.json.value if args.json else ReportFormats.text.value
    print(converter.convert(report, include_trace=args.trace))
    return EXIT_OK


def _command_oracle(args: argparse.Namespace) -> int:
    problem = parse_problem(args.input.read_text(encoding='utf-8'))
    if len(problem.polynomials) != 1:
        raise RealDimError('oracle2d expects exactly one polynomial')
    print(dim2d_oracle(problem.polynomials[0]))
    return EXIT_OK


def _command_generate(args: argparse.Namespace) -> int:
    family, params = parse_generate_spec(args.spec)
    sys.stdout.write(str(generate_instance(family, params)))
    return EXIT_OK


COMMANDS = {
    'run': _command_run,
    'oracle2d': _command_oracle,
    'generate': _command_generate,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except GenericityExhaustedError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GENERICITY
    except (RealDimError, pydantic.ValidationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
