"""Issuer economics of non-decaying certificates: fees vs warehouse cost."""

from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from demurrage import (
    IssuerFeeModel,
    MoneyAmount,
    Purchase,
    Redemption,
    RedemptionRecord,
    Weight,
    assess_solvency,
    breakeven_horizon,
    gross_profit,
    simulate_issuer,
    warehouse_cost,
)
from demurrage.numerics import TROY_OUNCE_GRAMS


def fee_model(fee="0.20", rate="0.0001", grams="1") -> IssuerFeeModel:
    return IssuerFeeModel(
        processing_fee_per_token=MoneyAmount("USD", Decimal(fee)),
        warehouse_rate=MoneyAmount("USD", Decimal(rate)),
        grams_per_token=Weight(Decimal(grams)),
    )


def record(tokens: int, hold_days: int, customer="c") -> RedemptionRecord:
    return RedemptionRecord(customer_id=customer, tokens=tokens, buy_day=0, redeem_day=hold_days)


class TestClosedForms:
    def test_empty_records_zero_profit(self):
        fees = fee_model()
        assert gross_profit([], fees).amount == 0
        assert warehouse_cost([], fees).amount == 0

    def test_hand_profit(self):
        assert gross_profit([record(100, 10)], fee_model()).settled.amount == Decimal("20.00")
        fees = fee_model(fee="1")
        assert gross_profit([record(3, 0), record(7, 0)], fees).settled.amount == Decimal("10.00")

    def test_hand_warehouse_cost(self):
        assert warehouse_cost([record(1, 0)], fee_model()).amount == 0
        got = warehouse_cost([record(100, 365)], fee_model(rate="0.0001"))
        assert got.settled.amount == Decimal("3.65")

    def test_cost_additivity(self):
        fees = fee_model()
        a, b = record(17, 40, "a"), record(5, 333, "b")
        assert (
            warehouse_cost([a, b], fees).amount
            == warehouse_cost([a], fees).amount + warehouse_cost([b], fees).amount
        )
        assert (
            gross_profit([a, b], fees).amount
            == gross_profit([a], fees).amount + gross_profit([b], fees).amount
        )

    def test_record_validation(self):
        with pytest.raises(ValueError):
            RedemptionRecord("c", tokens=0, buy_day=0, redeem_day=1)
        with pytest.raises(ValueError):
            RedemptionRecord("c", tokens=1, buy_day=5, redeem_day=4)


class TestAssessment:
    def test_solvent_with_margin(self):
        fees = fee_model(fee="1", rate="0.0001")
        outcome = assess_solvency([record(3, 0), record(7, 365)], fees)
        # profit $10, cost 7 x 365 x 0.0001 = $0.2555
        assert not outcome.insolvent
        assert outcome.margin.settled.amount == Decimal("9.74")

    def test_equal_profit_and_cost_is_solvent(self):
        fees = fee_model(fee="0.1", rate="0.001")
        outcome = assess_solvency([record(1, 100)], fees)
        assert outcome.margin.amount == 0
        assert not outcome.insolvent

    def test_holding_past_breakeven_is_insolvent(self):
        fees = fee_model(fee="0.2", rate="0.001")
        assert breakeven_horizon(fees) == 200
        assert assess_solvency([record(1, 201)], fees).insolvent
        assert not assess_solvency([record(1, 200)], fees).insolvent

    @given(
        fee_m=st.integers(1, 10_000),
        rate_m=st.integers(1, 1000),
        hold=st.integers(0, 3000),
        tokens=st.integers(1, 50),
    )
    @settings(max_examples=200, deadline=None)
    def test_insolvent_iff_holding_exceeds_breakeven(self, fee_m, rate_m, hold, tokens):
        fees = fee_model(
            fee=str(Decimal(fee_m) / 100), rate=str(Decimal(rate_m) / 10_000)
        )
        horizon = breakeven_horizon(fees)
        outcome = assess_solvency([record(tokens, hold)], fees)
        assert outcome.insolvent == (hold > horizon)

    @given(
        fee_m=st.integers(1, 10_000),
        rate_m=st.integers(1, 1000),
        scale=st.integers(1, 500),
        hold=st.integers(0, 2000),
    )
    @settings(max_examples=150, deadline=None)
    def test_scaling_both_rates_changes_nothing(self, fee_m, rate_m, scale, hold):
        fee = Decimal(fee_m) / 100
        rate = Decimal(rate_m) / 10_000
        base = fee_model(fee=str(fee), rate=str(rate))
        scaled = fee_model(fee=str(fee * scale), rate=str(rate * scale))
        assert breakeven_horizon(base) == breakeven_horizon(scaled)
        records = [record(3, hold)]
        assert (
            assess_solvency(records, base).insolvent
            == assess_solvency(records, scaled).insolvent
        )


class TestBreakeven:
    def test_per_ounce_quoted_rates(self):
        fees = IssuerFeeModel(
            processing_fee_per_token=MoneyAmount("USD", Decimal("0.20")),
            warehouse_rate=MoneyAmount("USD", Decimal("0.001")),
            rate_basis=Weight(TROY_OUNCE_GRAMS),
            grams_per_token=Weight(TROY_OUNCE_GRAMS),
        )
        assert breakeven_horizon(fees) == Fraction(200)

    def test_zero_fee_loses_immediately(self):
        assert breakeven_horizon(fee_model(fee="0")) == 0

    def test_zero_rate_never_breaks_even(self):
        assert breakeven_horizon(fee_model(rate="0")) is None


class TestSimulation:
    def test_single_unredeemed_purchase_crosses_at_201(self):
        fees = fee_model(fee="0.2", rate="0.001")
        result = simulate_issuer([Purchase(0, "c", 1)], fees, 250)
        assert result.first_insolvency_day == 201
        assert not result.rows[200].insolvent
        assert result.rows[201].insolvent

    def test_empty_timeline_is_all_zero(self):
        result = simulate_issuer([], fee_model(), 30)
        assert result.first_insolvency_day is None
        assert all(row.margin == 0 and row.cumulative_cost == 0 for row in result.rows)

    def test_yield_matching_rate_holds_margin_at_zero(self):
        fees = fee_model(fee="0", rate="0.001")
        result = simulate_issuer(
            [Purchase(0, "c", 5)], fees, 500, invest_yield_per_gram_day=Decimal("0.001")
        )
        assert result.first_insolvency_day is None
        assert all(row.margin == 0 for row in result.rows)

    def test_final_day_matches_closed_forms(self):
        fees = fee_model(fee="0.5", rate="0.0003")
        timeline = [
            Purchase(0, "a", 10),
            Purchase(3, "b", 4),
            Redemption(40, "a", 6),
            Redemption(90, "b", 4),
            Redemption(100, "a", 4),
        ]
        records = [
            RedemptionRecord("a", 6, 0, 40),
            RedemptionRecord("a", 4, 0, 100),
            RedemptionRecord("b", 4, 3, 90),
        ]
        result = simulate_issuer(timeline, fees, 120)
        assert result.final.cumulative_profit == gross_profit(records, fees).amount
        assert result.final.cumulative_cost == warehouse_cost(records, fees).amount

    def test_unsorted_timeline_rejected(self):
        with pytest.raises(ValueError):
            simulate_issuer([Purchase(5, "a", 1), Purchase(2, "b", 1)], fee_model(), 10)

    def test_over_redemption_rejected(self):
        with pytest.raises(ValueError):
            simulate_issuer([Purchase(0, "a", 1), Redemption(1, "a", 2)], fee_model(), 10)

    def test_same_day_buy_and_redeem_accrues_nothing(self):
        fees = fee_model(fee="0.1", rate="0.001")
        result = simulate_issuer([Purchase(5, "a", 2), Redemption(5, "a", 2)], fees, 10)
        assert result.final.cumulative_cost == 0
        assert result.final.cumulative_profit == Decimal("0.2")
