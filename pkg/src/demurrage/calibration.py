"""Survival-coefficient calibration from storage-cost and price forecasts.

Each forecast interval yields a minimum extraction rate: the fraction of the
remaining backing that must be taken to cover that interval's storage bill.
The calibrated extraction rate is the arithmetic mean of those minima plus a
backlog correction for unsold inventory; the survival coefficient applied to
certificates is one minus the extraction rate.

The result also reports the compounding-consistent geometric alternative for
audit, since averaging rates arithmetically slightly understates the decay a
multiplicative process needs.
"""

from dataclasses import dataclass
from decimal import Decimal

from .errors import InfeasibleRate
from .money import MoneyAmount
from .numerics import D, engine_context

ZERO = Decimal(0)
ONE = Decimal(1)


@dataclass(frozen=True)
class IntervalForecast:
    """Forecast storage cost and metal price for one calibration interval."""

    interval_index: int
    storage_cost_per_gram: MoneyAmount
    metal_price_per_gram: MoneyAmount

    def __post_init__(self):
        if self.storage_cost_per_gram.currency != self.metal_price_per_gram.currency:
            raise ValueError(
                "storage cost and metal price must share a currency: "
                f"{self.storage_cost_per_gram.currency} vs "
                f"{self.metal_price_per_gram.currency}"
            )
        if self.metal_price_per_gram.amount <= 0:
            raise ValueError(
                f"metal price must be positive: {self.metal_price_per_gram}"
            )
        if self.storage_cost_per_gram.amount < 0:
            raise ValueError(
                f"storage cost cannot be negative: {self.storage_cost_per_gram}"
            )


@dataclass(frozen=True)
class CalibrationResult:
    """Calibrated rates plus every intermediate value, for audit."""

    per_interval_min_rate: tuple[Decimal, ...]
    mean_rate: Decimal
    geometric_mean_rate: Decimal  # audit alternative, not used downstream
    backlog_correction: Decimal
    extraction_rate: Decimal
    survival_coefficient: Decimal
    interval_unit: str = "day"


@dataclass(frozen=True)
class RateCheck:
    """Per-interval outcome of checking a chosen rate against forecasts."""

    passes: tuple[bool, ...]
    first_failing_interval: int | None


def min_extraction_rate(forecast: IntervalForecast) -> Decimal:
    """Smallest extraction fraction covering the interval's storage cost."""
    with engine_context():
        return (
            forecast.storage_cost_per_gram.amount
            / forecast.metal_price_per_gram.amount
        )


def calibrate(
    forecasts: list[IntervalForecast],
    backlog_correction: Decimal = ZERO,
    interval_unit: str = "day",
) -> CalibrationResult:
    """Calibrate the extraction rate over a forecast horizon.

    Raises ``InfeasibleRate`` when the calibrated extraction rate reaches 1,
    i.e. the backing would be consumed within a single interval.
    """
    if not forecasts:
        raise ValueError("at least one forecast interval is required")
    backlog_correction = D(backlog_correction)
    if backlog_correction < 0:
        raise ValueError(f"backlog correction must be >= 0: {backlog_correction}")
    currencies = {f.storage_cost_per_gram.currency for f in forecasts}
    if len(currencies) > 1:
        raise ValueError(f"forecasts mix currencies: {sorted(currencies)}")

    rates = tuple(min_extraction_rate(f) for f in forecasts)
    with engine_context():
        mean_rate = sum(rates, ZERO) / len(rates)
        extraction = mean_rate + backlog_correction
        if extraction >= 1:
            raise InfeasibleRate(f"infeasible calibration: extraction {extraction} >= 1")
        survivals = ONE
        for rate in rates:
            survivals *= ONE - rate
        if survivals <= 0:
            geometric = ONE
        else:
            geometric = ONE - survivals ** (ONE / len(rates))
    return CalibrationResult(
        per_interval_min_rate=rates,
        mean_rate=mean_rate,
        geometric_mean_rate=geometric,
        backlog_correction=backlog_correction,
        extraction_rate=extraction,
        survival_coefficient=ONE - extraction,
        interval_unit=interval_unit,
    )


def solvency_check(
    forecasts: list[IntervalForecast], chosen_rate: Decimal
) -> RateCheck:
    """Check a chosen extraction rate covers storage cost in every interval.

    Interval d passes iff price(d) * rate >= cost(d).
    """
    chosen_rate = D(chosen_rate)
    passes = []
    first_failing = None
    with engine_context():
        for forecast in forecasts:
            ok = (
                forecast.metal_price_per_gram.amount * chosen_rate
                >= forecast.storage_cost_per_gram.amount
            )
            passes.append(ok)
            if not ok and first_failing is None:
                first_failing = forecast.interval_index
    return RateCheck(passes=tuple(passes), first_failing_interval=first_failing)
