"""
Main entry point for the LL-G toolkit.

Command-line front end: dataset summaries, maximum-likelihood fits, the
model-comparison table, the fit ledger, sampling, single-value distribution
functions, shape analysis and series moments.
"""
import argparse
import logging
import sys

from config import Config as C
from competitors import model_for
from data_collector import DataCollector
from dataset import load_dataset
from errors import DataError, DomainError, FitError, ParameterError, SeriesDivergenceError
from mle import LLGModel, maximize
from report import (format_comparison, format_critical_points, format_fit, format_ledger,
                    format_moments, format_summary, load_ledger)
from selection import ALL_MODELS, compare
from series import moment
from shapes import hazard_critical_points, pdf_critical_points

logger = logging.getLogger(__name__)

DISTRIBUTION_MODELS = ('llw', 'lln', 'llu')
POINT_COMMANDS = ('cdf', 'pdf', 'quantile', 'hazard', 'sf')


class UsageError(Exception):
    """Raised for command-line problems argparse itself does not catch."""


class ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with the usage exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(C.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_params(text):
    """
    Parse "a=1.5,b=0.2,alpha=0.01,beta=1.2" into a dictionary of floats.

    Raises:
        UsageError: On a malformed pair or non-numeric value
    """
    params = {}
    for pair in filter(None, (p.strip() for p in text.split(','))):
        name, sep, value = pair.partition('=')
        if not sep:
            raise UsageError(f"Expected name=value in --params, got '{pair}'")
        try:
            params[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"Parameter '{name.strip()}' is not a number: '{value}'") from None
    return params


def build_distribution(model_name, params_text):
    """Build an LLGDistribution from a model name and a --params string."""
    model = model_for(model_name)
    if not isinstance(model, LLGModel):
        raise UsageError(f"Model '{model_name}' has no distribution functions; "
                         f"use one of {', '.join(DISTRIBUTION_MODELS)}")
    params = parse_params(params_text)
    unknown = set(params) - set(model.param_names)
    missing = [n for n in model.param_names if n not in params]
    if unknown or missing:
        raise UsageError(f"Model '{model_name}' takes parameters {', '.join(model.param_names)}"
                         + (f"; unknown: {', '.join(sorted(unknown))}" if unknown else "")
                         + (f"; missing: {', '.join(missing)}" if missing else ""))
    return model.distribution([params[n] for n in model.param_names])


def _add_output_flags(parser):
    parser.add_argument('--json', action='store_true', help="emit JSON lines")


def _add_fit_flags(parser):
    parser.add_argument('--data', required=True, help="file path, '-' for stdin, or 'bjerkedal'")
    parser.add_argument('--starts', type=int, default=C.N_STARTS, help="optimizer starts per model")
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--workers', type=int, default=1, help="thread-pool size")
    parser.add_argument('--log', metavar='PATH', help="append fits to a CSV ledger")
    _add_output_flags(parser)


def _add_distribution_flags(parser):
    parser.add_argument('--model', default='llw', choices=DISTRIBUTION_MODELS)
    parser.add_argument('--params', required=True,
                        help="comma-separated name=value pairs, e.g. a=2,b=0.5,alpha=1,beta=1")


def build_parser():
    parser = ArgumentParser(prog=C.PROJECT_NAME, description=C.REPORT_NAME)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for progress, -vv for debug diagnostics")
    sub = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)

    p = sub.add_parser('summary', help="summary statistics of a dataset")
    p.add_argument('--data', required=True)
    _add_output_flags(p)

    p = sub.add_parser('fit', help="maximum-likelihood fit of one model")
    p.add_argument('--model', required=True)
    _add_fit_flags(p)

    p = sub.add_parser('compare', help="fit several models and tabulate criteria")
    p.add_argument('--models', default='all', help="'all' or a comma-separated list")
    _add_fit_flags(p)

    p = sub.add_parser('ledger', help="show the fits recorded by --log")
    p.add_argument('--path', default=C.FITS_LOG_PATH, help="ledger location")
    _add_output_flags(p)

    p = sub.add_parser('sample', help="draw variates by inverse transform")
    _add_distribution_flags(p)
    p.add_argument('-n', type=int, required=True, dest='n')
    p.add_argument('--seed', type=int, default=0)

    for name in POINT_COMMANDS:
        p = sub.add_parser(name, help=f"evaluate the {name} at one point")
        _add_distribution_flags(p)
        p.add_argument('--at', type=float, required=True, help="x, or u for quantile")
        _add_output_flags(p)

    p = sub.add_parser('shape', help="critical points of the density and hazard")
    _add_distribution_flags(p)
    p.add_argument('--grid', type=int, default=C.SHAPE_GRID_N)
    p.add_argument('--curve', choices=('density', 'hazard', 'both'), default='both')
    _add_output_flags(p)

    p = sub.add_parser('moments', help="series moments r = 1..4 with tail diagnostic")
    _add_distribution_flags(p)
    p.add_argument('--kmax', type=int, default=C.SERIES_K, help="truncation K (= J)")
    p.add_argument('--strict', action='store_true', help="fail on a poor series tail")
    _add_output_flags(p)
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def _model_list(text):
    if text.strip().lower() == 'all':
        return list(ALL_MODELS)
    names = [m.strip().lower() for m in text.split(',') if m.strip()]
    if not names:
        raise UsageError("--models needs at least one model name")
    for name in names:
        model_for(name)
    return names


def run_summary(args):
    print(format_summary(load_dataset(args.data), as_json=args.json))


def _require_support(data, models):
    """Reject non-positive data up front when any model lives on x > 0."""
    if any(m.support[0] >= 0.0 for m in models):
        data.require_positive()


def run_fit(args):
    data = load_dataset(args.data)
    model = model_for(args.model)
    _require_support(data, [model])
    result = maximize(model, data, args.starts, args.seed, args.workers)
    if args.log:
        DataCollector.initialize(args.log)
        DataCollector.log_fit(data.label, result)
    print(format_fit(result, data.label, as_json=args.json))


def run_compare(args):
    data = load_dataset(args.data)
    names = _model_list(args.models)
    _require_support(data, [model_for(name) for name in names])
    rows = compare(data, names, args.starts, args.seed, args.workers)
    if args.log:
        DataCollector.initialize(args.log)
        for row in rows:
            if row.fit is not None:
                DataCollector.log_fit(data.label, row.fit)
    print(format_comparison(rows, as_json=args.json))


def run_ledger(args):
    print(format_ledger(load_ledger(args.path), as_json=args.json))


def run_sample(args):
    d = build_distribution(args.model, args.params)
    for value in d.sample(args.n, args.seed):
        print(repr(float(value)))


def run_point(args):
    d = build_distribution(args.model, args.params)
    value = getattr(d, args.command)(args.at)
    if args.json:
        print(f'{{"{args.command}": {value!r}, "at": {args.at!r}}}')
    else:
        print(repr(value))


def run_shape(args):
    d = build_distribution(args.model, args.params)
    points = []
    if args.curve in ('density', 'both'):
        points += pdf_critical_points(d, args.grid)
    if args.curve in ('hazard', 'both'):
        points += hazard_critical_points(d, args.grid)
    print(format_critical_points(points, as_json=args.json))


def run_moments(args):
    d = build_distribution(args.model, args.params)
    values = {r: moment(d, r, args.kmax, args.kmax, strict=args.strict) for r in C.MOMENT_ORDERS}
    print(format_moments(values, as_json=args.json))


COMMANDS = {
    'summary': run_summary,
    'fit': run_fit,
    'compare': run_compare,
    'ledger': run_ledger,
    'sample': run_sample,
    'shape': run_shape,
    'moments': run_moments,
    **{name: run_point for name in POINT_COMMANDS},
}


def main(argv=None):
    """
    Run the command line and return its exit code.

    Exit codes: 0 success, 1 usage, 2 data error, 3 fit failure.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        COMMANDS[args.command](args)
    except (UsageError, ParameterError, DomainError) as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return C.EXIT_USAGE
    except DataError as e:
        print(f"{parser.prog}: data error: {e}", file=sys.stderr)
        return C.EXIT_DATA
    except FitError as e:
        print(f"{parser.prog}: fit failed: {e}", file=sys.stderr)
        for diag in e.diagnostics:
            print(f"  start {diag['start']}: {diag['message']} (objective {diag['objective']:g})",
                  file=sys.stderr)
        return C.EXIT_FIT
    except SeriesDivergenceError as e:
        print(f"{parser.prog}: series failed: {e}", file=sys.stderr)
        return C.EXIT_FIT
    return C.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
