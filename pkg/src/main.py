import sys
import math
import argparse
import logging
from typing import Optional

from src.config import RunConfig, load_config_file, parse_ratio
from src.errors import ComputationRefused, ConfigError
from src.exact_stats import build_exact_triangle, build_float_triangle, max_relative_error, table_rows
from src.limit_fn import build_piecewise, limit_rows
from src.asymptotics import (convergence_report, convergence_trend_failures, exact_cross_check,
                             lehmer_report, lehmer_trend_failures)
from src.laplace import G, closed_form_check, delay_residual_grid
from src.renderer import Plot, Renderer, Series
from src.selftest import run_selftest
from src.utils.export_utils import open_output, render
from src.utils.numeric_utils import QuadratureConfig
import src.constants as constants


logger = logging.getLogger(__name__)
console = logging.getLogger('console')

SUBCOMMANDS = ('table', 'limit', 'converge', 'laplace', 'selftest')

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_INVALID = 2

TABLE_FIELDS = ['n', 'k', 'value_exact_num', 'value_exact_den', 'value_float']
LIMIT_FIELDS = ['x', 'r', 'F_quadrature', 'F_ode', 'closed_form_or_empty']
CONVERGE_FIELDS = ['x', 'n', 'k', 'scaled', 'limit', 'abs_error']
LEHMER_FIELDS = ['n', 'b_n', 'ratio']
LAPLACE_FIELDS = ['t', 'g_hat', 'invariant_ratio']
DELAY_FIELDS = ['x', 'G', 'residual']


####################################################################################################
#  MAIN
####################################################################################################

def main(args: list[str]) -> int:
    """
    Main function. args is the full argv, program name first.
    Returns the exit status.
    """
    try:
        cfg = parse_config(args[1:])
    except SystemExit as exit_:
        # argparse reports usage errors (status 2) and --help (status 0) this way
        return exit_.code if isinstance(exit_.code, int) else EXIT_INVALID
    except ConfigError as err:
        console.error(f'error: {err}')
        return EXIT_INVALID

    handler = COMMANDS[cfg.command]
    try:
        return handler(cfg)
    except ConfigError as err:
        console.error(f'error: {err}')
        return EXIT_INVALID
    except ComputationRefused as err:
        logger.error(f'{cfg.command} refused: {err}')
        console.error(f'refused: {err}')
        return EXIT_REFUSED


def build_parser() -> argparse.ArgumentParser:
    """
    The argument parser with one subparser per command.
    """
    parser = argparse.ArgumentParser(
        prog='partition_limits',
        description='Partition statistics b(n,k), their scaling limit F, and the Laplace check.')
    parser.add_argument('--config', metavar='PATH', help='flat key=value file mirroring the flags')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_output(sub: argparse.ArgumentParser, plot: bool = True) -> None:
        sub.add_argument('--format', dest='fmt', choices=('csv', 'json'), default='csv')
        sub.add_argument('--out', metavar='PATH', help='output file (default: standard output)')
        if plot:
            sub.add_argument('--plot', metavar='PATH', help='also write a plot (.svg, .png, .bmp or .tga)')

    def add_quadrature(sub: argparse.ArgumentParser) -> None:
        sub.add_argument('--r-max', type=int, default=constants.R_MAX)
        sub.add_argument('--abs-tol', type=float, default=constants.QUAD_ABS_TOL)
        sub.add_argument('--max-depth', type=int, default=constants.QUAD_MAX_DEPTH)

    table = subparsers.add_parser('table', help='build the b(n,k) triangle')
    table.add_argument('--n-max', type=int, default=30)
    table.add_argument('--exact', action='store_true', help='include exact rationals')
    table.add_argument('--compare', action='store_true', help='report the float-vs-exact error')
    table.add_argument('--compensated', action='store_true', help='compensated prefix sums')
    add_output(table, plot=False)

    limit = subparsers.add_parser('limit', help='evaluate F(x)')
    limit.add_argument('--x', dest='x_list', nargs='+', type=parse_ratio, default=None)
    limit.add_argument('--method', choices=('quadrature', 'ode', 'both'), default='quadrature')
    add_quadrature(limit)
    add_output(limit)

    converge = subparsers.add_parser('converge', help='e^gamma b(n, floor(xn)) against F(x)')
    converge.add_argument('--x', dest='x_list', nargs='+', type=parse_ratio, default=None)
    converge.add_argument('--n', dest='n_list', nargs='+', type=int, default=None)
    converge.add_argument('--lehmer', action='store_true', help='report e^gamma b(n)/n instead')
    converge.add_argument('--check', action='store_true', help='assert the trend invariants')
    add_quadrature(converge)
    add_output(converge)

    laplace = subparsers.add_parser('laplace', help='delay equation and Laplace closed form')
    laplace.add_argument('--t', dest='t_list', nargs='+', type=float, default=None)
    laplace.add_argument('--x-max', type=float, default=constants.X_MAX)
    laplace.add_argument('--delay-check', action='store_true', help='report delay-equation residuals')
    laplace.add_argument('--h', type=float, default=constants.DELAY_STEP)
    add_quadrature(laplace)
    add_output(laplace)

    selftest = subparsers.add_parser('selftest', help='run the oracle and invariant suite')
    selftest.add_argument('--quick', action='store_true')
    selftest.add_argument('--perturb-gamma', type=float, default=0.0, help=argparse.SUPPRESS)

    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """
    Parse argv into a validated RunConfig. Settings from --config come
    first so explicit flags override them.
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument('--config')
    known, remaining = pre.parse_known_args(argv)

    if known.config is not None and remaining and remaining[0] in SUBCOMMANDS:
        remaining = [remaining[0], *load_config_file(known.config), *remaining[1:]]

    ns = build_parser().parse_args(remaining)
    values = {key: value for key, value in vars(ns).items() if key != 'config'}

    if values['command'] == 'limit' and values.get('x_list') is None:
        r_max = values['r_max']
        count = constants.LIMIT_GRID_SIZE
        values['x_list'] = [parse_ratio(f'{i}/{count}') for i in range(1, count + 1)
                            if i * (r_max + 1) > count]
    if values['command'] == 'converge':
        if values.get('x_list') is None:
            values['x_list'] = [parse_ratio(x) for x in constants.DEFAULT_X_LIST]
        if values.get('n_list') is None:
            values['n_list'] = list(constants.LEHMER_N_LIST if values['lehmer'] else constants.DEFAULT_N_LIST)
    if values['command'] == 'laplace' and values.get('t_list') is None:
        values['t_list'] = list(constants.DEFAULT_T_LIST)

    values = {key: value for key, value in values.items() if value is not None}
    return RunConfig(**values).validate()


####################################################################################################
#  COMMANDS
####################################################################################################

def cmd_table(cfg: RunConfig) -> int:
    """
    Build the float triangle, and the exact one up to its cap when asked,
    and write the table export.
    """
    flt = build_float_triangle(cfg.n_max, compensated=cfg.compensated)

    exact = None
    if cfg.exact or cfg.compare:
        exact_n = min(cfg.n_max, constants.EXACT_CAP)
        if exact_n < cfg.n_max:
            console.warning(f'Exact columns stop at n={exact_n}, the exact-arithmetic cap.')
        exact = build_exact_triangle(exact_n)

    if cfg.compare:
        err, n, k = max_relative_error(exact, flt)
        console.info(f'max relative float-vs-exact error: {err:.3e} at b({n},{k})')

    rows = list(table_rows(flt, exact if cfg.exact else None))
    write_report(cfg, rows, TABLE_FIELDS)
    return EXIT_OK


def cmd_limit(cfg: RunConfig) -> int:
    """
    Evaluate F on the x grid by the requested methods.
    """
    pw = build_piecewise(cfg.r_max, QuadratureConfig(cfg.abs_tol, cfg.max_depth))
    rows = list(limit_rows(pw, cfg.x_list, cfg.method))
    write_report(cfg, rows, LIMIT_FIELDS)

    if cfg.plot:
        lo = pw.lower_bound
        xs = [lo + (1 - lo) * i / constants.PLOT_SAMPLES for i in range(1, constants.PLOT_SAMPLES + 1)]
        plot = Plot(title='F(x)', x_label='x', y_label='F(x)',
                    series=[Series('F', xs, [pw(x) for x in xs])],
                    guides=[(1 / r, f'1/{r}') for r in range(1, min(pw.r_max, 8) + 1)])
        Renderer(plot).save(cfg.plot)
    return EXIT_OK


def cmd_converge(cfg: RunConfig) -> int:
    """
    Convergence or Lehmer report; with --check, exit 1 on a violated trend.
    """
    flt = build_float_triangle(max(cfg.n_list))
    failures: list[str] = []

    if cfg.lehmer:
        report = lehmer_report(flt, cfg.n_list)
        rows = report.as_dicts()
        write_report(cfg, rows, LEHMER_FIELDS)
        if cfg.check:
            failures = lehmer_trend_failures(report)
        if cfg.plot:
            plot = Plot(title='e^gamma b(n) / n', x_label='n', y_label='ratio',
                        series=[Series('ratio', [r['n'] for r in rows], [r['ratio'] for r in rows])])
            Renderer(plot).save(cfg.plot)
    else:
        pw = build_piecewise(cfg.r_max, QuadratureConfig(cfg.abs_tol, cfg.max_depth))
        report = convergence_report(flt, pw, cfg.x_list, cfg.n_list)
        rows = report.as_dicts()
        write_report(cfg, rows, CONVERGE_FIELDS)
        if cfg.check:
            failures = convergence_trend_failures(report, cfg.x_list)
            check_n = [n for n in constants.EXACT_CHECK_N_LIST if n <= min(flt.n_max, constants.EXACT_CAP)]
            if check_n:
                exact = build_exact_triangle(max(check_n))
                deviation = exact_cross_check(exact, flt, check_n)
                if not deviation < constants.FLOAT_RELATIVE_TOLERANCE:
                    failures.append(f'float rows deviate from exact rows by {deviation:.2e}')
        if cfg.plot:
            series = []
            for x in cfg.x_list:
                ns = [row.n for row in report.rows if row.x == float(x)]
                series.append(Series(f'x={float(x):g}', ns, report.errors_for(x)))
            plot = Plot(title='|e^gamma b(n, floor(xn)) - F(x)|', x_label='n', y_label='abs error',
                        series=series, log_x=True, log_y=True)
            Renderer(plot).save(cfg.plot)

    for failure in failures:
        console.error(f'check failed: {failure}')
    if cfg.check and not failures:
        console.info('all trend checks passed')
    return EXIT_REFUSED if failures else EXIT_OK


def cmd_laplace(cfg: RunConfig) -> int:
    """
    Laplace closed-form constancy, or delay-equation residuals with
    --delay-check (exit 1 if a residual reaches the tolerance).
    """
    if math.ceil(cfg.x_max) > cfg.r_max:
        logger.error(f'x_max={cfg.x_max} is beyond the pieces built for r_max={cfg.r_max}')
        raise ConfigError(f'--x-max {cfg.x_max:g} needs --r-max of at least {math.ceil(cfg.x_max)}')
    pw = build_piecewise(cfg.r_max, QuadratureConfig(cfg.abs_tol, cfg.max_depth))

    status = EXIT_OK
    if cfg.delay_check:
        rows = delay_residual_grid(pw, constants.DELAY_GRID, cfg.h)
        write_report(cfg, rows, DELAY_FIELDS)
        worst = max(abs(row['residual']) for row in rows)
        console.info(f'max delay-equation residual: {worst:.3e}')
        if not worst < constants.DELAY_TOLERANCE:
            console.error(f'check failed: residual {worst:.3e} >= {constants.DELAY_TOLERANCE:g}')
            status = EXIT_REFUSED
    else:
        check = closed_form_check(pw, cfg.t_list, cfg.x_max)
        summary = check.summary()
        write_report(cfg, check.as_dicts(), LAPLACE_FIELDS, summary)
        console.info(f'empirical K = {summary["empirical_K"]!r}, max relative spread = {summary["max_rel_spread"]:.3e}')

    if cfg.plot:
        xs = [cfg.x_max * i / constants.PLOT_SAMPLES for i in range(constants.PLOT_SAMPLES + 1)]
        plot = Plot(title='G(x) = F(1/x)', x_label='x', y_label='G(x)',
                    series=[Series('G', xs, [G(pw, x) for x in xs])],
                    guides=[(float(j), str(j)) for j in range(1, math.floor(cfg.x_max) + 1)])
        Renderer(plot).save(cfg.plot)
    return status


def cmd_selftest(cfg: RunConfig) -> int:
    """
    Run the check suite, one PASS/FAIL line per check on the output.
    """
    results = run_selftest(cfg.quick, cfg.perturb_gamma)
    with open_output(cfg.out) as out:
        for result in results:
            out.write(result.line() + '\n')
    failed = [r for r in results if not r.passed]
    console.info(f'{len(results) - len(failed)}/{len(results)} checks passed')
    return EXIT_REFUSED if failed else EXIT_OK


def write_report(cfg: RunConfig, rows: list[dict], fieldnames: list[str], summary: Optional[dict] = None) -> None:
    """Write rows to --out (or stdout) in the configured format."""
    text = render(rows, fieldnames, cfg.fmt, summary)
    with open_output(cfg.out) as out:
        out.write(text)


COMMANDS = {
    'table': cmd_table,
    'limit': cmd_limit,
    'converge': cmd_converge,
    'laplace': cmd_laplace,
    'selftest': cmd_selftest,
}


if __name__ == '__main__':
    sys.exit(main(sys.argv))
