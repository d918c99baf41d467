"""Shared fixtures: the golden gold-certificate series and spot quotes."""

from datetime import date
from decimal import Decimal, localcontext

import pytest

from demurrage import CertificateSeries, MoneyAmount, PriceQuote, Weight


def iter_pow(base: Decimal, n: int, prec: int = 40) -> Decimal:
    """Independent decay oracle: n successive multiplications."""
    with localcontext() as ctx:
        ctx.prec = prec
        acc = Decimal(1)
        for _ in range(n):
            acc *= base
        return acc


def make_series(**overrides) -> CertificateSeries:
    fields = dict(
        series_id="sdc_au999",
        issuer_id="LIN",
        issue_date=date(2030, 1, 1),
        metal="XAU",
        unit_weight=Weight(Decimal(1)),
        purity=Decimal("0.999"),
        survival_coefficient=Decimal("0.99996"),
        expiry=date(2079, 12, 31),
        delivery_fee_rate=Decimal("0.003"),
        repo_fee_rate=Decimal("0.002"),
        min_delivery_weight=Weight(Decimal(1000)),
        inspection_fee=MoneyAmount("USD", Decimal(5)),
        issue_count=1_000_000_000,
    )
    fields.update(overrides)
    return CertificateSeries(**fields)


@pytest.fixture
def au_series() -> CertificateSeries:
    """The worked example series: 1 g of 99.9% gold per coin, 0.99996/day."""
    return make_series()


@pytest.fixture
def quote_1500() -> PriceQuote:
    return PriceQuote("XAU", "USD", Decimal(1500))


@pytest.fixture
def quote_1600() -> PriceQuote:
    return PriceQuote("XAU", "USD", Decimal(1600))
