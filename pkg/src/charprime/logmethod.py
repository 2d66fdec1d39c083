"""The accelerated route to W(1): products, the half-log-2 identity, scans.

Taking logarithms of the product 2 = prod (p - chi4(p))/(p + chi4(p)) over
odd primes and expanding each factor as the odd-power series in 1/p groups
the terms by exponent into the master identity

    (1/2) ln 2 = W(1) + W(3)/3 + W(5)/5 + W(7)/7 + ...

where W(n) = sum over odd primes of (-chi4(p))/p^n.  Every W(n) with n >= 3
converges fast and is certified by the exclusion recurrence (or, for large
n, by the complement of beta(n)), so W(1) falls out to many digits even
though its own series converges painfully slowly.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import gcd

from .arith import (HighPrecReal, _ERR_UP, _up, constant, exp_hp, ln_fraction,
                    precision, working_digits)
from .beta import beta_closed
from .exclusion import SeriesValue, composite_tail_bound, run
from .primes import odd_primes

_ONE = Decimal(1)


# ---------------------------------------------------------------------------
# Euler products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductPartials:
    """Running partial products over odd primes in natural order."""

    product_id: str
    factors: list[Fraction]
    partials: list[HighPrecReal]
    rigorous: bool

    @property
    def value(self) -> HighPrecReal:
        return self.partials[-1]


def _running_products(num_primes, factor_of):
    if num_primes < 1:
        raise ValueError("num_primes must be >= 1")
    factors = [factor_of(pc.p, pc.chi) for pc in odd_primes(num_primes)]
    partials = []
    acc = HighPrecReal.exact(1)
    for f in factors:
        acc = acc * f
        partials.append(acc)
    return factors, partials


def product_pi4(num_primes: int) -> ProductPartials:
    """prod p/(p - chi4(p)), converging (conditionally) to pi/4.

    Taken in natural prime order; no rigorous tail exists, so the result is
    flagged non-rigorous.
    """
    factors, partials = _running_products(num_primes, lambda p, chi: Fraction(p, p - chi))
    return ProductPartials("pi4", factors, partials, rigorous=False)


def product_pi2_8(num_primes: int) -> ProductPartials:
    """prod p^2/(p^2 - 1), absolutely convergent to pi^2/8.

    The last partial carries a certified bound: the remaining factors
    multiply in at most exp(1/(2(P+1))), by the telescoping bound on
    sum 1/(m^2 - 1) over odd m > P.
    """
    factors, partials = _running_products(num_primes,
                                          lambda p, chi: Fraction(p * p, p * p - 1))
    last = partials[-1]
    p_last = odd_primes(num_primes)[-1].p
    bound = _ERR_UP.divide(_ONE, Decimal(2 * (p_last + 1)))
    extra = _ERR_UP.multiply(_ERR_UP.multiply(last.value.copy_abs(), bound), Decimal(2))
    partials[-1] = HighPrecReal(last.value, _up(last.err, extra))
    return ProductPartials("pi2_8", factors, partials, rigorous=True)


def product_two(num_primes: int) -> ProductPartials:
    """prod (p - chi4(p))/(p + chi4(p)), converging (conditionally) to 2."""
    factors, partials = _running_products(num_primes,
                                          lambda p, chi: Fraction(p - chi, p + chi))
    return ProductPartials("two", factors, partials, rigorous=False)


# ---------------------------------------------------------------------------
# W(n) for odd n >= 3
# ---------------------------------------------------------------------------

def beta_complement_bound(n: int) -> Decimal:
    """Bound on |W(n) - (1 - beta(n))|: twice 9**(-n).

    The two sums differ by the odd composite terms, which start at 9 and
    thin out geometrically.
    """
    f = HighPrecReal.from_fraction(Fraction(2, 9 ** n))
    return _up(f.value, f.err)


def w_value(n: int, digits: int, max_primes: int = 10_000) -> SeriesValue:
    """W(n) certified to ``digits`` decimal places, odd n >= 3.

    Runs the exclusion recurrence with just enough primes for the surviving
    composite tail to clear the requested tolerance; once the complement of
    beta(n) alone is within tolerance (large n), uses it directly.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"w_value needs odd n >= 3, got {n}")
    if digits < 1:
        raise ValueError("digits must be >= 1")
    tol = _ONE.scaleb(-digits)
    if n >= 9 and beta_complement_bound(n) < tol / 10:
        bv = beta_closed(n, digits + 8)
        w = 1 - bv.value
        value = HighPrecReal(w.value, _up(w.err, beta_complement_bound(n)))
        return SeriesValue("W", n, value, method="beta-complement", rigorous=True)
    depth = None
    for k in range(1, max_primes + 1):
        if composite_tail_bound(n, k) < tol / 4:
            depth = k
            break
    if depth is None:
        raise ValueError(
            f"cannot certify W({n}) to {digits} digits within {max_primes} primes")
    return run(n, depth, digits + 8).series


# ---------------------------------------------------------------------------
# Assembly of W(1)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssemblyStep:
    k: int
    n: int
    w: SeriesValue
    running: HighPrecReal


@dataclass(frozen=True)
class AssemblyResult:
    series: SeriesValue
    steps: list[AssemblyStep]


def analytic_tail_bound(max_k: int) -> Decimal:
    """Bound on sum_{k > max_k} W(2k+1)/(2k+1).

    Each W(n) is below (4/3) 3^-n and the leftover sum is geometric with
    ratio 1/9, so the first term times 9/8 dominates.
    """
    n = 2 * max_k + 3
    first = HighPrecReal.from_fraction(Fraction(4, 3 * n * 3 ** n))
    return _ERR_UP.multiply(_up(first.value, first.err), Decimal("1.125"))


def assemble_O(max_k: int, digits: int) -> AssemblyResult:
    """W(1) = (1/2) ln 2 - sum_{k=1..max_k} W(2k+1)/(2k+1), with trace.

    Raises when max_k leaves an analytic tail too large for the requested
    digits, naming roughly what is achievable.
    """
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    if digits < 1:
        raise ValueError("digits must be >= 1")
    tail = analytic_tail_bound(max_k)
    half = Decimal("0.5")
    if tail >= half.scaleb(-digits):
        achievable = 0
        while tail < half.scaleb(-(achievable + 1)):
            achievable += 1
        raise ValueError(
            f"max_k={max_k} certifies only {achievable} digits, "
            f"not the {digits} requested; increase max_k")
    with precision(max(digits + 10, working_digits())):
        total = constant("ln2", digits + 8) / 2
        steps = []
        for k in range(1, max_k + 1):
            n = 2 * k + 1
            w = w_value(n, digits + 4)
            total = total - w.value / n
            steps.append(AssemblyStep(k, n, w, total))
    value = HighPrecReal(total.value, _up(total.err, tail))
    series = SeriesValue("W", 1, value, method="log-assembly", rigorous=True)
    return AssemblyResult(series, steps)


def master_identity_residual(max_k: int, digits: int = 11,
                             reference_depth: int | None = None) -> HighPrecReal:
    """(1/2) ln 2 minus the partial sum of W(2k+1)/(2k+1) through max_k.

    The k = 0 term W(1) is taken from an assembly at higher depth, so the
    residual isolates the genuine tail beyond max_k.
    """
    if max_k < 0:
        raise ValueError("max_k must be >= 0")
    depth = reference_depth or max_k + 10
    o_ref = assemble_O(depth, digits).series.value
    total = constant("ln2", digits + 8) / 2 - o_ref
    for k in range(1, max_k + 1):
        n = 2 * k + 1
        total = total - w_value(n, digits + 4).value / n
    return total


# ---------------------------------------------------------------------------
# Closed-form scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedFormCandidate:
    """A reduced fraction N with ln(pi) - ln(N) close to the scanned value."""

    numerator: int
    denominator: int
    residual: HighPrecReal


def closed_form_scan(value: HighPrecReal, max_den: int, tol: Decimal) -> list[ClosedFormCandidate]:
    """All reduced N = num/den, den <= max_den, with |value - (ln pi - ln N)| < tol.

    Sorted by |residual|.  The scanned value must be certified well below
    the tolerance, otherwise candidates would be meaningless.
    """
    tol = Decimal(tol)
    if tol <= 0:
        return []
    if not value.err < tol / 10:
        raise ValueError("value is not certified finely enough for this tolerance")
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    digits = working_digits()
    lnpi = constant("lnpi", digits + 5)
    # Candidates must sit in a narrow window around exp(ln pi - value):
    # |ln N - (ln pi - value)| < tol bounds |N - center| by roughly
    # center * (e^tol - 1); the factor below over-covers up to tol = 2.
    center = exp_hp(lnpi - value)
    factor = Decimal(2) if tol <= Decimal("0.5") else Decimal(8)
    half_width = center.value * tol * factor + center.err
    out = []
    for den in range(1, max_den + 1):
        approx = center.value * den
        window = half_width * den
        lo = int((approx - window).to_integral_value(rounding="ROUND_FLOOR"))
        hi = int((approx + window).to_integral_value(rounding="ROUND_CEILING"))
        for num in range(max(lo, 1), hi + 1):
            if abs(Decimal(num) - approx) > window:
                continue
            if gcd(num, den) != 1:
                continue
            residual = value - (lnpi - ln_fraction(num, den))
            if residual.value.copy_abs() < tol:
                out.append(ClosedFormCandidate(num, den, residual))
    out.sort(key=lambda c: (c.residual.value.copy_abs(), c.denominator, c.numerator))
    return out
