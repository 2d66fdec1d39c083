"""Self-verification suites runnable from the command line.

Each group re-derives one family of invariants from scratch and reports
pass/fail with a short detail string.  These are the same properties the
test suite pins down, packaged so a user can re-run them against any
precision configuration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .arith import HighPrecReal, format_decimal, parse_decimal, precision, working_digits
from .beta import beta_closed, beta_direct
from .exclusion import init_state, sieved_tail_oracle, step, step_closed_form
from .logmethod import (analytic_tail_bound, master_identity_residual,
                        product_pi2_8, product_pi4, product_two)
from .primes import chi4


@dataclass(frozen=True)
class CheckResult:
    group: str
    passed: bool
    detail: str


def _soundness(config) -> CheckResult:
    """Random expression trees evaluated at D and 2D digits must differ by
    no more than the tracked bound at D."""
    rng = random.Random(20251002)
    digits = config.working_digits
    failures = 0
    trials = 60
    for _ in range(trials):
        prog = _random_program(rng)
        with precision(digits):
            lo = _eval_program(prog)
        with precision(2 * digits):
            hi = _eval_program(prog)
        gap = (lo.value - hi.value).copy_abs()
        if gap > lo.err:
            failures += 1
    return CheckResult(
        "error-bound-soundness", failures == 0,
        f"{trials} expression trees at {digits} vs {2 * digits} digits; "
        f"{failures} bound violations")


def _random_program(rng) -> list:
    # A post-order op list over a small leaf pool; replayed at two precisions.
    leaves = [Fraction(rng.randint(1, 99), rng.randint(1, 99)) for _ in range(6)]
    ops = [rng.choice("+-*/") for _ in range(10)]
    return [leaves, ops]


def _eval_program(prog) -> HighPrecReal:
    leaves, ops = prog
    stack = [HighPrecReal.from_fraction(f) for f in leaves]
    for i, op in enumerate(ops):
        a = stack[i % len(stack)]
        b = stack[(i + 1) % len(stack)]
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        else:
            try:
                r = a / b
            except ZeroDivisionError:
                r = a
        stack[i % len(stack)] = r
    return stack[0]


def _multiplicativity(config) -> CheckResult:
    """chi4(mn) = chi4(m) chi4(n), exhaustively while the product stays <= 1e4."""
    bound = 10_000
    count = 0
    for m in range(1, bound + 1, 2):
        for n in range(1, bound // m + 1, 2):
            if chi4(m * n) != chi4(m) * chi4(n):
                return CheckResult("character-multiplicativity", False,
                                   f"fails at m={m}, n={n}")
            count += 1
    return CheckResult("character-multiplicativity", True,
                       f"{count} odd pairs with product <= {bound}")


def _step_equivalence(config) -> CheckResult:
    """The two step formulas agree within their tracked bounds."""
    worst = Decimal(0)
    for n in (1, 3, 5, 7):
        a = init_state(n)
        b = init_state(n)
        for _ in range(8):
            a = step(a)
            b = step_closed_form(b)
            gap = (a.V - b.V).value.copy_abs()
            allowance = 10 * (a.V.err + b.V.err)
            if gap > allowance:
                return CheckResult("step-equivalence", False,
                                   f"n={n}, prime step {a.k}: gap {gap}")
            worst = max(worst, gap)
    return CheckResult("step-equivalence", True,
                       f"8 steps at n=1,3,5,7; largest gap {worst}")


def _oracle_equivalence(config) -> CheckResult:
    """V - s equals the brute-force sieved tail within combined bounds."""
    steps = max(1, min(6, config.primes))
    limit = 5001
    for n in (3, 5, 7):
        state = init_state(n)
        for _ in range(steps):
            state = step(state)
            tail = sieved_tail_oracle(n, state.k, limit)
            diff = state.V - state.s - tail
            allowance = state.V.err + state.s.err + tail.err
            if diff.value.copy_abs() > allowance:
                return CheckResult(
                    "sieved-tail-oracle", False,
                    f"n={n}, k={state.k}: |V-s-oracle| = {diff.value} > {allowance}")
    return CheckResult("sieved-tail-oracle", True,
                       f"n=3,5,7 through {steps} steps, oracle limit {limit}")


def _beta_direct_bound(config) -> CheckResult:
    """Truncated alternating sums sit within their first-omitted-term bound."""
    for n in (3, 5, 9):
        ref = beta_closed(n, working_digits() - 10).value
        for terms in (3, 10, 40):
            approx = beta_direct(n, terms)
            gap = (approx.value - ref).value.copy_abs()
            if gap > approx.value.err + ref.err:
                return CheckResult("beta-direct-bound", False,
                                   f"n={n}, terms={terms}: gap {gap}")
    return CheckResult("beta-direct-bound", True, "n=3,5,9 at 3/10/40 terms")


def _master_identity(config) -> CheckResult:
    """(1/2) ln 2 minus the partial assembly stays within the analytic tail."""
    for max_k in (2, 4, 6):
        residual = master_identity_residual(max_k)
        bound = analytic_tail_bound(max_k)
        if residual.value.copy_abs() > bound:
            return CheckResult("master-identity", False,
                               f"max_k={max_k}: residual {residual.value} > {bound}")
    return CheckResult("master-identity", True, "residual within tail at max_k=2,4,6")


def _product_rationals(config) -> CheckResult:
    """First factors and partials of the three products, as exact rationals."""
    cases = (
        (product_pi4(2), [Fraction(3, 4), Fraction(5, 4)], Fraction(15, 16)),
        (product_pi2_8(2), [Fraction(9, 8), Fraction(25, 24)], Fraction(75, 64)),
        (product_two(2), [Fraction(2, 1), Fraction(2, 3)], Fraction(4, 3)),
    )
    for prod, factors, second_partial in cases:
        if prod.factors[:2] != factors:
            return CheckResult("product-rationals", False,
                               f"{prod.product_id}: factors {prod.factors[:2]}")
        expected = HighPrecReal.from_fraction(second_partial)
        gap = (prod.partials[1].value - expected.value).copy_abs()
        if gap > prod.partials[1].err + expected.err:
            return CheckResult("product-rationals", False,
                               f"{prod.product_id}: second partial off by {gap}")
    return CheckResult("product-rationals", True, "pi4, pi2_8 and two match exactly")


def _format_roundtrip(config) -> CheckResult:
    """parse(format(x, d)) is within 0.5e-d + err of x."""
    samples = [HighPrecReal.from_fraction(Fraction(a, b))
               for a, b in ((1, 3), (22, 7), (-5, 17), (1, 1), (355, 113))]
    for x in samples:
        for d in (2, 7, 12):
            back = parse_decimal(format_decimal(x, d))
            gap = (back.value - x.value).copy_abs()
            if gap > Decimal("0.5").scaleb(-d) + x.err:
                return CheckResult("format-roundtrip", False,
                                   f"{x.value} at {d} places: gap {gap}")
    return CheckResult("format-roundtrip", True, "5 values at 2/7/12 places")


GROUPS = (
    _soundness,
    _multiplicativity,
    _step_equivalence,
    _oracle_equivalence,
    _beta_direct_bound,
    _master_identity,
    _product_rationals,
    _format_roundtrip,
)


def run_checks(config) -> list[CheckResult]:
    with precision(config.working_digits):
        return [group(config) for group in GROUPS]
