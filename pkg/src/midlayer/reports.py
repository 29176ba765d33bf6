from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class IsoReport:
    """One side-by-side evaluation of an inequality.

    ``slack`` is always ``lhs - rhs``. ``sense`` records which way the
    inequality is expected to go, so ``holds`` works for both ``>=`` and
    ``<=`` checks. ``hypothesis_met`` says whether the statement's size or
    structure hypothesis applies to this input; when it is False the numbers
    are informational only.
    """

    variant: str
    lhs: Fraction
    rhs: Fraction
    hypothesis_met: bool = True
    sense: str = ">="
    tolerance: Fraction = Fraction(0)

    @property
    def slack(self) -> Fraction:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        if self.sense == ">=":
            return self.slack >= -self.tolerance
        if self.sense == "<=":
            return self.slack <= self.tolerance
        return self.slack == 0

    def csv_row(self) -> list[str]:
        return [
            self.variant,
            _fmt(self.lhs),
            _fmt(self.rhs),
            _fmt(self.slack),
            "true" if self.hypothesis_met else "false",
        ]


CSV_HEADER = ["variant", "lhs", "rhs", "slack", "hypothesis_met"]


def _fmt(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
