"""Repricing of certificates redeemed after their expiry date.

Holders who sit past expiry get a harsher decay coefficient. Preference
order: the issuer's own most recent still-live successor series sets the
rate; failing that, the rate is blended from peer issuers' coefficients
observed in a look-back window before expiry (mean plus a fraction of the
maximum, so lateness is never rewarded).

Coefficients throughout are per-interval extraction rates in (0, 1); the
survival factor applied from expiry onward is one minus the coefficient.
"""

from dataclasses import dataclass
from decimal import Decimal

from .errors import InfeasibleRate, NoPeerData
from .numerics import D, engine_context

ZERO = Decimal(0)
MAX_BLEND = Decimal("0.5")


@dataclass(frozen=True)
class PeerCoefficientSample:
    """One peer issuer's extraction coefficient observed in the window."""

    issuer_id: str
    coefficient: Decimal
    window: tuple[int, int] | None = None  # (start_day, end_day)

    def __post_init__(self):
        object.__setattr__(self, "coefficient", D(self.coefficient))
        if not 0 < self.coefficient < 1:
            raise ValueError(f"coefficient must be in (0, 1): {self.coefficient}")
        if self.window is not None and self.window[1] < self.window[0]:
            raise ValueError(f"window end precedes start: {self.window}")


@dataclass(frozen=True)
class OverduePolicy:
    """How much of the peer maximum to add on top of the peer mean."""

    blend_alpha: Decimal = ZERO

    def __post_init__(self):
        # Out-of-range values are pulled to the nearest bound of [0, 0.5].
        alpha = min(max(D(self.blend_alpha), ZERO), MAX_BLEND)
        object.__setattr__(self, "blend_alpha", alpha)


@dataclass(frozen=True)
class SeriesVersion:
    """A series the issuer itself has issued, as successor-rule input."""

    series_id: str
    issue_day: int
    expiry_day: int
    coefficient: Decimal

    def __post_init__(self):
        object.__setattr__(self, "coefficient", D(self.coefficient))
        if not 0 < self.coefficient < 1:
            raise ValueError(f"coefficient must be in (0, 1): {self.coefficient}")


def successor_coefficient(
    versions: list[SeriesVersion], expired_expiry_day: int
) -> Decimal | None:
    """Coefficient of the issuer's most recent series outliving the expiry.

    Candidates were issued before the expiry and expire after it; the
    latest-issued wins. Returns None when no candidate exists, which sends
    the caller to the peer fallback.
    """
    candidates = [
        v
        for v in versions
        if v.issue_day < expired_expiry_day and v.expiry_day > expired_expiry_day
    ]
    if not candidates:
        return None
    best = max(candidates, key=lambda v: (v.issue_day, v.series_id))
    return best.coefficient


def peer_mean(samples: list[PeerCoefficientSample]) -> Decimal:
    """Arithmetic mean of peer coefficients."""
    if not samples:
        raise NoPeerData("no peer data")
    with engine_context():
        return sum((s.coefficient for s in samples), ZERO) / len(samples)


def peer_max(samples: list[PeerCoefficientSample]) -> Decimal:
    """Largest peer coefficient."""
    if not samples:
        raise NoPeerData("no peer data")
    return max(s.coefficient for s in samples)


def overdue_coefficient(
    samples: list[PeerCoefficientSample], policy: OverduePolicy
) -> Decimal:
    """Peer mean plus the policy's blend fraction of the peer maximum."""
    with engine_context():
        rate = peer_mean(samples) + policy.blend_alpha * peer_max(samples)
    if rate >= 1:
        raise InfeasibleRate(f"infeasible overdue rate: {rate} >= 1")
    return rate
