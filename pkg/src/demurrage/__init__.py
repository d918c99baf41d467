"""Deterministic engine for commodity-backed certificates with decaying face weight.

Certificates are backed one-for-one by vaulted metal; the redeemable weight
shrinks by a per-day survival coefficient so storage pays for itself instead
of silently eroding the issuer. The package covers the certificate lifecycle
(quote, sell, redeem, buy back), coefficient calibration from storage-cost
forecasts, post-expiry repricing, the solvency model showing why non-decaying
backed certificates cannot last, and an append-only audit ledger, all on
exact decimal arithmetic.
"""

from .calibration import (
    CalibrationResult,
    IntervalForecast,
    RateCheck,
    calibrate,
    min_extraction_rate,
    solvency_check,
)
from .certificates import (
    BuybackValue,
    CertificateSeries,
    InKindCost,
    Settlement,
    buyback_value,
    decay_factor,
    in_kind_purchase_cost,
    marked_unit_weight,
    purchase_price,
    redeemable_weight,
    redemption_settlement,
    residual_weight,
)
from .errors import (
    BelowMinimumLot,
    CurrencyMismatch,
    DemurrageError,
    InfeasibleRate,
    LedgerCorrupted,
    LedgerError,
    MetalMismatch,
    NoPeerData,
    ScenarioError,
)
from .money import MoneyAmount, PriceQuote, Weight
from .numerics import TROY_OUNCE_GRAMS, pow_int
from .overdue import (
    OverduePolicy,
    PeerCoefficientSample,
    SeriesVersion,
    overdue_coefficient,
    peer_max,
    peer_mean,
    successor_coefficient,
)
from .solvency import (
    IssuerFeeModel,
    Purchase,
    Redemption,
    RedemptionRecord,
    SimulationResult,
    SolvencyAssessment,
    assess_solvency,
    breakeven_horizon,
    gross_profit,
    simulate_issuer,
    warehouse_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BelowMinimumLot",
    "BuybackValue",
    "CalibrationResult",
    "CertificateSeries",
    "CurrencyMismatch",
    "DemurrageError",
    "InKindCost",
    "InfeasibleRate",
    "IntervalForecast",
    "IssuerFeeModel",
    "LedgerCorrupted",
    "LedgerError",
    "MetalMismatch",
    "MoneyAmount",
    "NoPeerData",
    "OverduePolicy",
    "PeerCoefficientSample",
    "PriceQuote",
    "Purchase",
    "RateCheck",
    "Redemption",
    "RedemptionRecord",
    "ScenarioError",
    "SeriesVersion",
    "Settlement",
    "SimulationResult",
    "SolvencyAssessment",
    "TROY_OUNCE_GRAMS",
    "Weight",
    "assess_solvency",
    "breakeven_horizon",
    "buyback_value",
    "calibrate",
    "decay_factor",
    "gross_profit",
    "in_kind_purchase_cost",
    "marked_unit_weight",
    "min_extraction_rate",
    "overdue_coefficient",
    "peer_max",
    "peer_mean",
    "pow_int",
    "purchase_price",
    "redeemable_weight",
    "redemption_settlement",
    "residual_weight",
    "simulate_issuer",
    "solvency_check",
    "successor_coefficient",
    "warehouse_cost",
]
