"""Issuer economics for certificates that do NOT decay.

A full-reserve issuer of non-decaying backed certificates earns a one-off
processing fee per token but pays warehouse cost per gram-day for as long as
the backing sits in the vault. Once any holding outlives the fee, the issuer
is under water: the breakeven horizon is fee / (rate * grams-per-token) days.
These operations make that argument checkable and simulatable.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, NamedTuple

from .money import MoneyAmount, Weight
from .numerics import D, engine_context

ZERO = Decimal(0)


@dataclass(frozen=True)
class RedemptionRecord:
    """One customer's buy-and-redeem round trip."""

    customer_id: str
    tokens: int
    buy_day: int
    redeem_day: int

    def __post_init__(self):
        if self.tokens < 1:
            raise ValueError(f"tokens must be >= 1: {self.tokens}")
        if self.redeem_day < self.buy_day:
            raise ValueError(
                f"redeem day {self.redeem_day} precedes buy day {self.buy_day}"
            )

    @property
    def holding_days(self) -> int:
        return self.redeem_day - self.buy_day


@dataclass(frozen=True)
class IssuerFeeModel:
    """Fee income and custody cost rates for a non-decaying issuer.

    The warehouse rate is quoted per ``rate_basis`` grams per day: basis 1 g
    for a per-gram rate, 31.1035 g for a per-troy-ounce rate. Keeping the
    basis explicit lets an ounce-quoted rate applied to ounce-sized tokens
    cancel exactly instead of routing through a non-terminating division.
    """

    processing_fee_per_token: MoneyAmount
    warehouse_rate: MoneyAmount
    rate_basis: Weight = field(default_factory=lambda: Weight(Decimal(1)))
    grams_per_token: Weight = field(default_factory=lambda: Weight(Decimal(1)))

    def __post_init__(self):
        if self.processing_fee_per_token.currency != self.warehouse_rate.currency:
            raise ValueError("fee and warehouse rate must share a currency")
        if self.processing_fee_per_token.amount < 0:
            raise ValueError("processing fee cannot be negative")
        if self.warehouse_rate.amount < 0:
            raise ValueError("warehouse rate cannot be negative")
        if self.rate_basis.grams <= 0:
            raise ValueError("rate basis must be positive")
        if self.grams_per_token.grams <= 0:
            raise ValueError("grams per token must be positive")

    @property
    def currency(self) -> str:
        return self.processing_fee_per_token.currency

    @property
    def cost_per_token_day(self) -> Decimal:
        with engine_context():
            return (
                self.warehouse_rate.amount
                * self.grams_per_token.grams
                / self.rate_basis.grams
            )


def gross_profit(
    records: Iterable[RedemptionRecord], fees: IssuerFeeModel
) -> MoneyAmount:
    """Total processing-fee income over the records."""
    with engine_context():
        total = sum((fees.processing_fee_per_token.amount * r.tokens for r in records), ZERO)
    return MoneyAmount(fees.currency, total)


def warehouse_cost(
    records: Iterable[RedemptionRecord], fees: IssuerFeeModel
) -> MoneyAmount:
    """Total custody cost: rate x tokens x holding days x grams per token."""
    with engine_context():
        total = sum(
            (fees.cost_per_token_day * r.tokens * r.holding_days for r in records),
            ZERO,
        )
    return MoneyAmount(fees.currency, total)


@dataclass(frozen=True)
class SolvencyAssessment:
    insolvent: bool
    margin: MoneyAmount  # profit minus cost; negative when insolvent


def assess_solvency(
    records: Iterable[RedemptionRecord], fees: IssuerFeeModel
) -> SolvencyAssessment:
    """Insolvent iff custody cost strictly exceeds fee income."""
    records = list(records)
    profit = gross_profit(records, fees)
    cost = warehouse_cost(records, fees)
    margin = profit - cost
    return SolvencyAssessment(insolvent=cost > profit, margin=margin)


def breakeven_horizon(fees: IssuerFeeModel) -> Fraction | None:
    """Holding days beyond which a single customer's custody cost beats the fee.

    Exact rational days. None means the issuer never breaks even downward:
    with a zero warehouse rate no holding duration loses money.
    """
    denominator = (
        Fraction(fees.warehouse_rate.amount)
        * Fraction(fees.grams_per_token.grams)
        / Fraction(fees.rate_basis.grams)
    )
    if denominator == 0:
        return None
    return Fraction(fees.processing_fee_per_token.amount) / denominator


@dataclass(frozen=True)
class Purchase:
    day: int
    customer_id: str
    tokens: int


@dataclass(frozen=True)
class Redemption:
    day: int
    customer_id: str
    tokens: int


TimelineEntry = Purchase | Redemption


class DayRow(NamedTuple):
    day: int
    cumulative_profit: Decimal
    cumulative_cost: Decimal
    cumulative_yield: Decimal
    margin: Decimal
    insolvent: bool


@dataclass(frozen=True)
class SimulationResult:
    currency: str
    rows: list[DayRow]
    first_insolvency_day: int | None

    @property
    def final(self) -> DayRow:
        return self.rows[-1]


def simulate_issuer(
    timeline: list[TimelineEntry],
    fees: IssuerFeeModel,
    horizon_days: int,
    invest_yield_per_gram_day: Decimal = ZERO,
) -> SimulationResult:
    """Day-by-day fold of fee income, custody cost and optional invest yield.

    Fee income books on the purchase day; custody cost accrues per token for
    every day from the day after purchase through the redemption day, and
    indefinitely for unredeemed tokens. The margin is profit plus yield minus
    cost; the first day it goes negative is the insolvency day.
    """
    invest_yield_per_gram_day = D(invest_yield_per_gram_day)
    if invest_yield_per_gram_day < 0:
        raise ValueError("invest yield cannot be negative")
    if horizon_days < 0:
        raise ValueError(f"horizon must be >= 0: {horizon_days}")
    days = [entry.day for entry in timeline]
    if days != sorted(days):
        raise ValueError("timeline must be sorted by day")
    if days and days[0] < 0:
        raise ValueError("timeline days must be >= 0")

    with engine_context():
        cost_per_token = fees.cost_per_token_day
        yield_per_token = invest_yield_per_gram_day * fees.grams_per_token.grams
        fee_per_token = fees.processing_fee_per_token.amount

        rows: list[DayRow] = []
        active_tokens = 0
        profit = ZERO
        cost = ZERO
        earned = ZERO
        first_insolvency = None
        pending = list(timeline)
        idx = 0

        for day in range(horizon_days + 1):
            # Custody accrues for tokens held before this day dawned.
            if day > 0 and active_tokens:
                cost += cost_per_token * active_tokens
                earned += yield_per_token * active_tokens
            while idx < len(pending) and pending[idx].day == day:
                entry = pending[idx]
                if isinstance(entry, Purchase):
                    profit += fee_per_token * entry.tokens
                    active_tokens += entry.tokens
                else:
                    if entry.tokens > active_tokens:
                        raise ValueError(
                            f"day {day}: redeeming {entry.tokens} tokens "
                            f"with only {active_tokens} outstanding"
                        )
                    active_tokens -= entry.tokens
                idx += 1
            margin = profit + earned - cost
            insolvent = margin < 0
            if insolvent and first_insolvency is None:
                first_insolvency = day
            rows.append(DayRow(day, profit, cost, earned, margin, insolvent))

    return SimulationResult(
        currency=fees.currency, rows=rows, first_insolvency_day=first_insolvency
    )
