"""Unit-disciplined quantities: gram weights, currency amounts, metal quotes.

Weights and money carry full precision internally; ``settled`` views apply
the half-even settlement rounding (4 fractional digits for grams, 2 for
currency). Mixing currencies, or pricing one metal with another's quote,
raises instead of coercing.
"""

from dataclasses import dataclass
from datetime import date
from decimal import Decimal

from .errors import CurrencyMismatch
from .numerics import D, TROY_OUNCE_GRAMS, engine_context, quantize_money, quantize_weight


@dataclass(frozen=True, order=True)
class Weight:
    """A non-negative quantity of metal in grams."""

    grams: Decimal

    def __post_init__(self):
        object.__setattr__(self, "grams", D(self.grams))
        if self.grams < 0:
            raise ValueError(f"weight cannot be negative: {self.grams} g")

    @property
    def settled(self) -> "Weight":
        """This weight at the 4-digit settlement precision."""
        return Weight(quantize_weight(self.grams))

    def __add__(self, other: "Weight") -> "Weight":
        with engine_context():
            return Weight(self.grams + other.grams)

    def __sub__(self, other: "Weight") -> "Weight":
        with engine_context():
            return Weight(self.grams - other.grams)

    def __mul__(self, factor: int | Decimal) -> "Weight":
        with engine_context():
            return Weight(self.grams * D(factor))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"{self.grams} g"


@dataclass(frozen=True)
class MoneyAmount:
    """An amount tagged with its ISO-4217-style currency code."""

    currency: str
    amount: Decimal

    def __post_init__(self):
        object.__setattr__(self, "currency", self.currency.upper())
        object.__setattr__(self, "amount", D(self.amount))
        if not self.currency:
            raise ValueError("currency code must be non-empty")

    @classmethod
    def zero(cls, currency: str) -> "MoneyAmount":
        return cls(currency, Decimal(0))

    def _require_same_currency(self, other: "MoneyAmount") -> None:
        if self.currency != other.currency:
            raise CurrencyMismatch(
                f"cannot combine {self.currency} with {other.currency}"
            )

    @property
    def settled(self) -> "MoneyAmount":
        """This amount at the 2-digit settlement precision."""
        return MoneyAmount(self.currency, quantize_money(self.amount))

    def __add__(self, other: "MoneyAmount") -> "MoneyAmount":
        self._require_same_currency(other)
        with engine_context():
            return MoneyAmount(self.currency, self.amount + other.amount)

    def __sub__(self, other: "MoneyAmount") -> "MoneyAmount":
        self._require_same_currency(other)
        with engine_context():
            return MoneyAmount(self.currency, self.amount - other.amount)

    def __mul__(self, factor: int | Decimal) -> "MoneyAmount":
        with engine_context():
            return MoneyAmount(self.currency, self.amount * D(factor))

    __rmul__ = __mul__

    def __lt__(self, other: "MoneyAmount") -> bool:
        self._require_same_currency(other)
        return self.amount < other.amount

    def __le__(self, other: "MoneyAmount") -> bool:
        self._require_same_currency(other)
        return self.amount <= other.amount

    def __gt__(self, other: "MoneyAmount") -> bool:
        self._require_same_currency(other)
        return self.amount > other.amount

    def __ge__(self, other: "MoneyAmount") -> bool:
        self._require_same_currency(other)
        return self.amount >= other.amount

    def __str__(self) -> str:
        return f"{self.amount} {self.currency}"


@dataclass(frozen=True)
class PriceQuote:
    """Spot price of a metal per troy ounce in a settlement currency."""

    metal: str
    currency: str
    price_per_troy_ounce: Decimal
    as_of: date | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "price_per_troy_ounce", D(self.price_per_troy_ounce)
        )
        if self.price_per_troy_ounce <= 0:
            raise ValueError(
                f"price must be positive: {self.price_per_troy_ounce}"
            )

    @property
    def per_gram(self) -> Decimal:
        with engine_context():
            return self.price_per_troy_ounce / TROY_OUNCE_GRAMS

    def value_of(self, weight: Weight) -> MoneyAmount:
        """Market value of ``weight`` at this quote, unrounded."""
        with engine_context():
            return MoneyAmount(
                self.currency,
                weight.grams * self.price_per_troy_ounce / TROY_OUNCE_GRAMS,
            )
