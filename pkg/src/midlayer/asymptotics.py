"""High-precision evaluation of the main counting formula and a few counting utilities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

import mpmath

from .errors import AlphaOutOfRange, InvalidParameter
from .lower_bound import defect_rate
from .reports import IsoReport
from .set_family import _mpf_to_fraction


def _to_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


@dataclass(frozen=True)
class LogCountEstimate:
    d: int
    log2_total: mpmath.mpf
    exponent_rational: Fraction
    linear_term: int
    prefactor: int
    precision_bits: int

    def identity_residual(self):
        """``log2_total`` minus its three-term decomposition, at the stored precision."""
        with mpmath.workprec(self.precision_bits):
            parts = mpmath.log(self.prefactor, 2) + _to_mpf(self.exponent_rational) / mpmath.ln(2) + self.linear_term
            return self.log2_total - parts

    def to_json(self) -> dict:
        digits = max(15, int(self.precision_bits * 0.30103))
        return {
            "schema": "v1",
            "d": self.d,
            "log2_total": mpmath.nstr(self.log2_total, digits),
            "exponent_rational": f"{self.exponent_rational.numerator}/{self.exponent_rational.denominator}",
            "linear_term": str(self.linear_term),
            "prefactor": str(self.prefactor),
            "precision_bits": str(self.precision_bits),
        }


def main_formula_log2(d: int, precision_bits: int = 128) -> LogCountEstimate:
    """log2 of ``(2d-1) * exp(y) * 2^C(2d-2, d-1)`` with ``y`` kept exact."""
    if d < 2:
        raise InvalidParameter("d must be >= 2")
    y = defect_rate(d)
    linear = comb(2 * d - 2, d - 1)
    with mpmath.workprec(precision_bits + 16):
        total = mpmath.log(2 * d - 1, 2) + _to_mpf(y) * mpmath.log(mpmath.e, 2) + linear
    with mpmath.workprec(precision_bits):
        total = +total
    return LogCountEstimate(d, total, y, linear, 2 * d - 1, precision_bits)


@dataclass(frozen=True)
class StirlingGap:
    d: int
    exact: mpmath.mpf
    expansion: mpmath.mpf
    gap_times_sqrt_d: mpmath.mpf


STATED_SECOND_DENOMINATOR = 24
CORRECT_SECOND_DENOMINATOR = 16


def stirling_gap(d: int, precision_bits: int = 128, second_denominator: int = STATED_SECOND_DENOMINATOR) -> StirlingGap:
    """Compare the exponent with ``m^1.5 / (2 sqrt(pi)) - m^0.5 / (c sqrt(pi))``, ``m = d - 1``.

    ``c`` defaults to the commonly quoted 24; the central-binomial series
    gives 16, and only then does the gap shrink like ``d^-0.5``.
    """
    if d < 2:
        raise InvalidParameter("d must be >= 2")
    with mpmath.workprec(precision_bits):
        exact = _to_mpf(defect_rate(d))
        root_pi = mpmath.sqrt(mpmath.pi)
        m = d - 1
        expansion = m ** mpmath.mpf(1.5) / (2 * root_pi) - mpmath.sqrt(m) / (second_denominator * root_pi)
        gap = (exact - expansion) * mpmath.sqrt(d)
    return StirlingGap(d, exact, expansion, gap)


def binary_entropy_interval(alpha: Fraction):
    a = mpmath.iv.mpf(alpha.numerator) / alpha.denominator
    if alpha == 0:
        return mpmath.iv.mpf(0)
    if alpha == 1:
        return mpmath.iv.mpf(0)
    return -(a * mpmath.iv.log(a) + (1 - a) * mpmath.iv.log(1 - a)) / mpmath.iv.log(2)


def entropy_bound_check(n: int, alpha, precision_bits: int = 96) -> IsoReport:
    """Exact ``sum_{i <= alpha n} C(n, i)`` against a rounded-down ``2^(H(alpha) n)``."""
    alpha = Fraction(alpha).limit_denominator(10**12) if isinstance(alpha, float) else Fraction(alpha)
    if not (0 <= alpha <= Fraction(1, 2)):
        raise AlphaOutOfRange("alpha must lie in [0, 1/2]")
    lhs = sum(comb(n, i) for i in range(floor(alpha * n) + 1))
    saved = mpmath.iv.prec
    try:
        mpmath.iv.prec = precision_bits
        rhs_iv = mpmath.iv.power(2, binary_entropy_interval(alpha) * n)
        with mpmath.workprec(precision_bits):
            rhs_low = _mpf_to_fraction(mpmath.mpf(rhs_iv.a))
    finally:
        mpmath.iv.prec = saved
    return IsoReport("entropy", Fraction(lhs), rhs_low, sense="<=")


def composition_count(n: int, max_parts: int | None = None) -> int:
    """Compositions of ``n``; with ``max_parts=b`` only those with fewer than ``b`` plus signs."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    if max_parts is None:
        return 2 ** (n - 1)
    return sum(comb(n - 1, i) for i in range(max_parts))


def composition_bound(n: int, b: int):
    """``2^(b log2(e n / b))``, valid for ``b < n / 2``."""
    if not (1 <= b < n / 2):
        raise InvalidParameter("need 1 <= b < n/2")
    return mpmath.power(mpmath.e * n / b, b)
