"""
Desk-scale run of the oracle and invariant checks behind the command
`selftest`. Each check reports one pass/fail line.
"""

import math
import logging
from fractions import Fraction
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import src.constants as constants
from src.asymptotics import (convergence_report, convergence_trend_failures, lehmer_report,
                             lehmer_trend_failures)
from src.config import parse_ratio
from src.exact_stats import (brute_force_b, build_exact_triangle, build_float_triangle,
                             max_relative_error)
from src.laplace import (G, closed_form_check, delay_ode_residual, e1_continued_fraction, e1_series,
                         e1_switchover_gap, exp_integral_E1)
from src.limit_fn import build_piecewise, eval_F, eval_F_ode, f1, f2
from src.utils.numeric_utils import uniform_grid


logger = logging.getLogger(__name__)
console = logging.getLogger('console')


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f'{"PASS" if self.passed else "FAIL"}  {self.name}: {self.detail}'


@contextmanager
def perturbed_gamma(delta: float):
    """
    Temporarily shift the Euler-Mascheroni constant. Test hook for the
    sensitivity harness.
    """
    original = constants.EULER_GAMMA
    constants.EULER_GAMMA = original + delta
    try:
        yield
    finally:
        constants.EULER_GAMMA = original


class SelfTest:
    """
    The check suite. Tables are built lazily and shared between checks.
    """

    def __init__(self, quick: bool = False) -> None:
        self.quick = quick
        """Run the reduced suite."""
        self.oracle_n = 15 if quick else 30
        self.fidelity_n = 100 if quick else 300
        self.samples = 20 if quick else 200
        self.ode_samples = 10 if quick else 200
        self.r_max = 6 if quick else constants.R_MAX
        self.lehmer_n_list = tuple(range(100, 1001, 100)) if quick else constants.LEHMER_N_LIST

    @cached_property
    def exact(self):
        return build_exact_triangle(max(self.oracle_n, self.fidelity_n))

    @cached_property
    def floats(self):
        n_max = max(self.fidelity_n, max(self.lehmer_n_list))
        if not self.quick:
            n_max = max(n_max, max(constants.DEFAULT_N_LIST))
        return build_float_triangle(n_max)

    @cached_property
    def pw(self):
        return build_piecewise(self.r_max)

    def checks(self) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
        suite = [
            ('oracle_equivalence', self.check_oracle),
            ('spot_values', self.check_spot_values),
            ('float_fidelity', self.check_float_fidelity),
            ('closed_form_agreement', self.check_closed_forms),
            ('ode_agreement', self.check_ode),
            ('breakpoint_continuity', self.check_continuity),
            ('lehmer_trend', self.check_lehmer),
            ('delay_equation', self.check_delay),
            ('e1_correctness', self.check_e1),
        ]
        if not self.quick:
            suite.insert(7, ('convergence_trend', self.check_convergence))
            suite.append(('laplace_closed_form', self.check_laplace))
        return suite

    def run(self) -> list[CheckResult]:
        results = []
        for name, check in self.checks():
            try:
                passed, detail = check()
            except Exception as err:  # pylint: disable=broad-except
                logger.exception(f'Check {name} raised')
                passed, detail = False, f'raised {type(err).__name__}: {err}'
            result = CheckResult(name, passed, detail)
            if not passed:
                logger.warning(result.line())
            results.append(result)
        return results

    ################################################################################################
    # CHECKS
    ################################################################################################

    def check_oracle(self) -> tuple[bool, str]:
        mismatches = [(n, k) for n in range(1, self.oracle_n + 1) for k in range(1, n + 1)
                      if self.exact.entry(n, k) != brute_force_b(n, k)]
        cases = self.oracle_n * (self.oracle_n + 1) // 2
        return len(mismatches) == 0, f'{cases - len(mismatches)}/{cases} entries match brute force'

    def check_spot_values(self) -> tuple[bool, str]:
        got = (self.exact.total(3), self.exact.total(4), self.exact.entry(4, 2))
        want = (Fraction(11, 6), Fraction(7, 3), Fraction(3, 4))
        return got == want, f'b(3)={got[0]}, b(4)={got[1]}, b(4,2)={got[2]}'

    def check_float_fidelity(self) -> tuple[bool, str]:
        err, n, k = max_relative_error(self.exact, self.floats)
        return err < constants.FLOAT_RELATIVE_TOLERANCE, f'max relative error {err:.2e} at b({n},{k})'

    def check_closed_forms(self) -> tuple[bool, str]:
        half = self.samples // 2
        worst = max(
            max(abs(eval_F(self.pw, x) - f1(x)) for x in uniform_grid(0.5, 1.0, half)),
            max(abs(eval_F(self.pw, x) - f2(x)) for x in uniform_grid(1 / 3, 0.5, self.samples - half)),
        )
        return worst < 1e-8, f'max |quadrature - closed form| = {worst:.2e} over {self.samples} points'

    def check_ode(self) -> tuple[bool, str]:
        xs = uniform_grid(1 / 6, 0.5, self.ode_samples)
        worst = max(abs(eval_F(self.pw, x) - eval_F_ode(self.pw, x)) for x in xs)
        return worst < 1e-6, f'max |quadrature - ODE| = {worst:.2e} over {len(xs)} points in (1/6, 1/2]'

    def check_continuity(self) -> tuple[bool, str]:
        worst = max(abs(eval_F(self.pw, 1 / r) - eval_F(self.pw, 1 / r + 1e-9)) for r in range(2, 7))
        return worst < 1e-5, f'max jump at 1/r, r=2..6: {worst:.2e}'

    def check_convergence(self) -> tuple[bool, str]:
        x_list = [parse_ratio(x) for x in constants.DEFAULT_X_LIST]
        report = convergence_report(self.floats, self.pw, x_list, constants.DEFAULT_N_LIST)
        failures = convergence_trend_failures(report, x_list)
        if failures:
            return False, '; '.join(failures)
        last = max(row.abs_error for row in report.rows if row.n == constants.DEFAULT_N_LIST[-1])
        return True, f'errors decrease and halve for {len(x_list)} x values; worst at n={constants.DEFAULT_N_LIST[-1]}: {last:.2e}'

    def check_lehmer(self) -> tuple[bool, str]:
        report = lehmer_report(self.floats, self.lehmer_n_list)
        failures = lehmer_trend_failures(report)
        last = report.rows[-1]
        detail = f'ratio at n={last.n} is {last.ratio!r}'
        return len(failures) == 0, '; '.join(failures) if failures else detail

    def check_delay(self) -> tuple[bool, str]:
        exact_zero = abs(delay_ode_residual(self.pw, 1.5))
        grid = [x for x in constants.DELAY_GRID if abs(x - round(x)) > 0.01]
        worst = max(abs(delay_ode_residual(self.pw, x)) for x in grid)
        passed = exact_zero < 1e-6 and worst < constants.DELAY_TOLERANCE
        return passed, f'residual at 1.5: {exact_zero:.1e}; max over {len(grid)} grid points: {worst:.2e}'

    def check_e1(self) -> tuple[bool, str]:
        sandwich = all(math.exp(-t) / (t + 1) < exp_integral_E1(t) < math.exp(-t) / t for t in (1, 2, 5, 10))
        gap_half = abs(e1_series(0.5) - e1_continued_fraction(0.5))
        gap = e1_switchover_gap()
        values = [exp_integral_E1(t) for t in (0.25, 0.5, 1.0, 1.5, 2.0, 5.0)]
        decreasing = all(b < a for a, b in zip(values, values[1:])) and values[-1] > 0
        passed = sandwich and decreasing and gap < 1e-10 and gap_half < 1e-10
        return passed, f'switchover gap {gap:.1e} (t=0.5: {gap_half:.1e}); sandwich {sandwich}; decreasing {decreasing}'

    def check_laplace(self) -> tuple[bool, str]:
        gap = e1_switchover_gap()
        check = closed_form_check(self.pw, constants.DEFAULT_T_LIST, constants.X_MAX)
        spread = check.max_rel_spread
        passed = spread < constants.SPREAD_TOLERANCE and gap < 1e-10 and G(self.pw, 0.5) == 0.0
        return passed, f'K ~ {check.empirical_K:.6f}, spread {spread:.2e}, E1 switchover gap {gap:.1e}'


def run_selftest(quick: bool = False, perturb_gamma: float = 0.0) -> list[CheckResult]:
    """
    Run the suite, optionally with gamma shifted by perturb_gamma.
    """
    logger.info(f'Running selftest (quick={quick}, perturb_gamma={perturb_gamma})...')
    with perturbed_gamma(perturb_gamma):
        results = SelfTest(quick).run()
    logger.info(f'Selftest finished: {sum(r.passed for r in results)}/{len(results)} passed.')
    return results
