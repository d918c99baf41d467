"""Unit discipline and settlement rounding of the quantity types."""

from decimal import Decimal

import pytest

from demurrage import CurrencyMismatch, MoneyAmount, PriceQuote, Weight
from demurrage.numerics import TROY_OUNCE_GRAMS, pow_int

from conftest import iter_pow


class TestWeight:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Weight(Decimal("-1"))

    def test_subtraction_below_zero_rejected(self):
        with pytest.raises(ValueError):
            Weight(Decimal(1)) - Weight(Decimal(2))

    def test_arithmetic(self):
        assert (Weight(Decimal("1.5")) + Weight(Decimal("0.5"))).grams == 2
        assert (Weight(Decimal(3)) * 2).grams == 6
        assert (2 * Weight(Decimal(3))).grams == 6

    def test_settled_rounds_half_even_to_4_digits(self):
        assert Weight(Decimal("0.00005")).settled.grams == Decimal("0.0000")
        assert Weight(Decimal("0.00015")).settled.grams == Decimal("0.0002")
        assert Weight(Decimal("1971.0115508")).settled.grams == Decimal("1971.0116")

    def test_ordering(self):
        assert Weight(Decimal(1)) < Weight(Decimal(2))


class TestMoneyAmount:
    def test_same_currency_arithmetic(self):
        a = MoneyAmount("USD", Decimal("1.10"))
        b = MoneyAmount("USD", Decimal("2.20"))
        assert (a + b).amount == Decimal("3.30")
        assert (b - a).amount == Decimal("1.10")
        assert (a * 3).amount == Decimal("3.30")

    @pytest.mark.parametrize("op", ["add", "sub", "lt", "le", "gt", "ge"])
    def test_cross_currency_rejected(self, op):
        a = MoneyAmount("USD", Decimal(1))
        b = MoneyAmount("EUR", Decimal(1))
        with pytest.raises(CurrencyMismatch):
            getattr(a, f"__{op}__")(b)

    def test_settled_rounds_half_even_to_cents(self):
        assert MoneyAmount("USD", Decimal("2.125")).settled.amount == Decimal("2.12")
        assert MoneyAmount("USD", Decimal("2.135")).settled.amount == Decimal("2.14")

    def test_zero(self):
        assert MoneyAmount.zero("CHF").amount == 0


class TestPriceQuote:
    def test_requires_positive_price(self):
        with pytest.raises(ValueError):
            PriceQuote("XAU", "USD", Decimal(0))

    def test_value_of_one_troy_ounce(self):
        quote = PriceQuote("XAU", "USD", Decimal(1600))
        value = quote.value_of(Weight(TROY_OUNCE_GRAMS))
        assert value.settled.amount == Decimal("1600.00")
        assert value.currency == "USD"


class TestPowInt:
    def test_zero_exponent(self):
        assert pow_int(Decimal("0.99996"), 0) == 1

    def test_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            pow_int(Decimal(2), -1)

    @pytest.mark.parametrize("n", [1, 2, 7, 64, 183, 365, 1001])
    def test_matches_iterative_oracle(self, n):
        base = Decimal("0.99996")
        closed = pow_int(base, n)
        iterated = iter_pow(base, n)
        assert abs(closed - iterated) <= Decimal("1e-30") * iterated
