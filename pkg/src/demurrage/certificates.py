"""Decay, pricing, redemption and buy-back arithmetic for one certificate series.

A series is a contract: each unit is backed by ``unit_weight`` grams of metal
at issue, and the backing decays by the per-day survival coefficient to fund
vault storage. Every operation here is a pure function of the series, a unit
count, the elapsed days since issue, and (where money changes hands) a spot
quote.

Two weight bases coexist, on purpose:

* Purchase-side operations (fiat purchase price, in-kind metal due) price the
  certificate's *marked* unit weight: the per-unit residual rounded to the
  4-digit settlement step, as printed on the certificate, then scaled by the
  unit count.
* Redemption-side operations (redeemable weight, buy-back chargeable weight)
  aggregate at full precision and settle only the final figure.
"""

from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal

from .errors import BelowMinimumLot, MetalMismatch
from .money import MoneyAmount, PriceQuote, Weight
from .numerics import D, TROY_OUNCE_GRAMS, engine_context, pow_int, quantize_money

ZERO = Decimal(0)
ONE = Decimal(1)


@dataclass(frozen=True)
class CertificateSeries:
    """Immutable issuance contract for one certificate series."""

    series_id: str
    issuer_id: str
    issue_date: date
    metal: str
    unit_weight: Weight
    purity: Decimal
    survival_coefficient: Decimal
    expiry: date
    delivery_fee_rate: Decimal = ZERO
    repo_fee_rate: Decimal = ZERO
    min_delivery_weight: Weight = field(default_factory=lambda: Weight(ZERO))
    inspection_fee: MoneyAmount | None = None
    issue_count: int = 1
    issue_day: int = 0  # scenario day number of the issue date
    allow_sub_lot_topup: bool = False

    def __post_init__(self):
        object.__setattr__(self, "purity", D(self.purity))
        object.__setattr__(
            self, "survival_coefficient", D(self.survival_coefficient)
        )
        object.__setattr__(self, "delivery_fee_rate", D(self.delivery_fee_rate))
        object.__setattr__(self, "repo_fee_rate", D(self.repo_fee_rate))
        if not 0 < self.survival_coefficient <= 1:
            raise ValueError(
                f"survival coefficient must be in (0, 1]: {self.survival_coefficient}"
            )
        if not 0 <= self.delivery_fee_rate < 1:
            raise ValueError(
                f"delivery fee rate must be in [0, 1): {self.delivery_fee_rate}"
            )
        if not 0 <= self.repo_fee_rate < 1:
            raise ValueError(f"repo fee rate must be in [0, 1): {self.repo_fee_rate}")
        if self.expiry <= self.issue_date:
            raise ValueError("expiry must be after the issue date")
        if self.unit_weight.grams <= 0:
            raise ValueError("unit weight must be positive")
        if not 0 < self.purity <= 1:
            raise ValueError(f"purity must be in (0, 1]: {self.purity}")
        if self.issue_count < 1:
            raise ValueError(f"issue count must be >= 1: {self.issue_count}")

    @property
    def expiry_day(self) -> int:
        """Scenario day number of the expiry date."""
        return self.issue_day + (self.expiry - self.issue_date).days

    def elapsed_days(self, on: date) -> int:
        """Calendar-date subtraction: whole days from issue to ``on``."""
        days = (on - self.issue_date).days
        if days < 0:
            raise ValueError(f"{on} precedes the issue date {self.issue_date}")
        return days


@dataclass(frozen=True)
class Settlement:
    """Outcome of a physical redemption: metal handed over plus cash top-up."""

    redeemable: Weight   # settled net-of-fee claim
    deliverable: Weight  # rounded up to a whole number of delivery lots
    top_up: MoneyAmount  # price of the round-up gap at the spot quote


@dataclass(frozen=True)
class BuybackValue:
    chargeable: Weight
    payout: MoneyAmount


@dataclass(frozen=True)
class InKindCost:
    metal_due: Weight
    fee: MoneyAmount


def _check_units(units: int) -> None:
    if units < 1:
        raise ValueError(f"units must be >= 1: {units}")


def _check_elapsed(elapsed_days: int) -> None:
    if elapsed_days < 0:
        raise ValueError(f"elapsed days must be >= 0: {elapsed_days}")


def _check_metal(series: CertificateSeries, quote: PriceQuote) -> None:
    if quote.metal != series.metal:
        raise MetalMismatch(
            f"series {series.series_id} is anchored in {series.metal}, "
            f"quote is for {quote.metal}"
        )


def decay_factor(series: CertificateSeries, elapsed_days: int) -> Decimal:
    """Survival coefficient raised to the elapsed day count."""
    _check_elapsed(elapsed_days)
    return pow_int(series.survival_coefficient, elapsed_days)


def residual_weight(
    series: CertificateSeries, units: int, elapsed_days: int
) -> Weight:
    """Backing metal still attached to ``units`` certificates after decay.

    Full precision; round via ``.settled`` only when the figure is surfaced.
    """
    _check_units(units)
    with engine_context():
        return Weight(
            units * series.unit_weight.grams * decay_factor(series, elapsed_days)
        )


def marked_unit_weight(series: CertificateSeries, elapsed_days: int) -> Weight:
    """The residual weight printed on a single certificate: settled to 4 digits."""
    return residual_weight(series, 1, elapsed_days).settled


def redeemable_weight(
    series: CertificateSeries, units: int, elapsed_days: int
) -> Weight:
    """Residual weight net of the delivery fee taken at physical redemption."""
    with engine_context():
        return Weight(
            residual_weight(series, units, elapsed_days).grams
            * (ONE - series.delivery_fee_rate)
        )


def purchase_price(
    series: CertificateSeries,
    units: int,
    elapsed_days: int,
    quote: PriceQuote,
    markup: Decimal = ZERO,
) -> MoneyAmount:
    """Fiat price of ``units`` certificates at the venue's marked-up quote.

    Priced on the marked (4-digit) unit weight, scaled by the unit count,
    settled to cents at the end.
    """
    _check_units(units)
    _check_metal(series, quote)
    markup = D(markup)
    if markup < 0:
        raise ValueError(f"markup must be >= 0: {markup}")
    with engine_context():
        marked = marked_unit_weight(series, elapsed_days).grams
        amount = (
            quote.price_per_troy_ounce
            * (ONE + markup)
            * marked
            * units
            / TROY_OUNCE_GRAMS
        )
        return MoneyAmount(quote.currency, quantize_money(amount))


def buyback_value(
    series: CertificateSeries, units: int, elapsed_days: int, quote: PriceQuote
) -> BuybackValue:
    """Weight the issuer charges for, and the fiat it pays, on a buy-back."""
    _check_metal(series, quote)
    with engine_context():
        chargeable = Weight(
            residual_weight(series, units, elapsed_days).grams
            * (ONE - series.repo_fee_rate)
        )
        payout = quote.value_of(chargeable).settled
    return BuybackValue(chargeable=chargeable, payout=payout)


def redemption_settlement(
    series: CertificateSeries, units: int, elapsed_days: int, quote: PriceQuote
) -> Settlement:
    """Physical redemption rounded up to whole delivery lots.

    The settled redeemable weight is rounded up to the next multiple of the
    series' minimum delivery weight; the gap is paid for in cash at the spot
    quote. A claim below one lot is rejected unless the series allows
    topping up a full lot.
    """
    _check_metal(series, quote)
    redeemable = redeemable_weight(series, units, elapsed_days).settled
    if redeemable.grams <= 0:
        raise ValueError("nothing redeemable: claim has decayed to zero")
    lot = series.min_delivery_weight.grams
    if lot <= 0:
        return Settlement(
            redeemable=redeemable,
            deliverable=redeemable,
            top_up=MoneyAmount.zero(quote.currency).settled,
        )
    if redeemable.grams < lot and not series.allow_sub_lot_topup:
        raise BelowMinimumLot(
            f"redeemable {redeemable.grams} g is below minimum lot {lot} g"
        )
    with engine_context():
        whole_lots, remainder = divmod(redeemable.grams, lot)
        if remainder != 0:
            whole_lots += 1
        deliverable = Weight(whole_lots * lot)
        gap = deliverable - redeemable
        top_up = quote.value_of(gap).settled
    return Settlement(redeemable=redeemable, deliverable=deliverable, top_up=top_up)


def in_kind_purchase_cost(
    series: CertificateSeries, units: int, elapsed_days: int
) -> InKindCost:
    """Metal a buyer must hand over for ``units`` certificates, plus inspection fee.

    The metal due is the marked unit weight times the unit count, mirroring
    the fiat purchase basis.
    """
    _check_units(units)
    if series.inspection_fee is None:
        raise ValueError(
            f"series {series.series_id} has no inspection fee configured"
        )
    with engine_context():
        metal_due = marked_unit_weight(series, elapsed_days) * units
        fee = (series.inspection_fee * units).settled
    return InKindCost(metal_due=metal_due, fee=fee)
