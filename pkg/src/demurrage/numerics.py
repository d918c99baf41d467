"""Decimal arithmetic kernel: fixed context, integer powers, settlement rounding.

All engine math runs on ``decimal.Decimal`` inside one explicit 40-digit
half-even context so results never depend on the caller's ambient context.
Rounding happens only at settlement boundaries: weights to 4 fractional
digits of grams, money to 2 fractional digits of the currency unit.
"""

from decimal import Decimal, Context, ROUND_HALF_EVEN, localcontext

# Grams per troy ounce used for every metal-price conversion.
TROY_OUNCE_GRAMS = Decimal("31.1035")

# Internal working precision; far beyond the 1e-12 relative floor the
# settlement figures need, so iterated products stay faithful.
ENGINE_CONTEXT = Context(prec=40, rounding=ROUND_HALF_EVEN)

WEIGHT_STEP = Decimal("0.0001")
MONEY_STEP = Decimal("0.01")

Numberish = int | str | Decimal


def D(value: Numberish | float) -> Decimal:
    """Coerce to Decimal, routing floats through str to avoid binary dust."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, float):
        return Decimal(str(value))
    return Decimal(value)


def engine_context():
    """Local decimal context every kernel computation runs under."""
    return localcontext(ENGINE_CONTEXT)


def pow_int(base: Decimal, exponent: int) -> Decimal:
    """base**exponent for integer exponent >= 0, by squaring.

    Square-and-multiply keeps the operation count at O(log n) and makes the
    result a pure function of (base, exponent, context) on every platform.
    """
    if exponent < 0:
        raise ValueError(f"exponent must be >= 0, got {exponent}")
    with engine_context():
        result = Decimal(1)
        square = +base  # round into the engine context once
        n = exponent
        while n:
            if n & 1:
                result *= square
            n >>= 1
            if n:
                square *= square
        return result


def quantize_weight(grams: Decimal) -> Decimal:
    """Round grams half-even to the 4-digit settlement step."""
    with engine_context():
        return grams.quantize(WEIGHT_STEP, rounding=ROUND_HALF_EVEN)


def quantize_money(amount: Decimal) -> Decimal:
    """Round a currency amount half-even to the 2-digit settlement step."""
    with engine_context():
        return amount.quantize(MONEY_STEP, rounding=ROUND_HALF_EVEN)
