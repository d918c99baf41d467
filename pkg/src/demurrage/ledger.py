"""Append-only event log and replayed registry state for certificate series.

The registry is a fold over events. Each series account tracks the physical
vault, per-holder certificate lots, and the issuer's accrued grams, with one
conservation law holding after every append:

    vault_grams == holder claim grams (at the account's day) + issuer accrual

Decay moves grams from holder claims to issuer accrual; it is materialised
lazily whenever an event advances the day. Physical redemption removes grams
from the vault and from claims; cash top-ups move no grams. Claims follow the
certificate's age, not the holder's: a transferred lot keeps its original
acquisition day, and every unit of a series carries the same per-unit claim,
decayed from the issue day (re-based at any overdue repricings).

Persistence is tamper-evident rather than cryptographic: the log is one event
per line, and every line records a checksum of the line before it, so a
flipped byte breaks the chain at the damaged line.
"""

import hashlib
import json
from dataclasses import dataclass, field, replace
from datetime import date
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Mapping, Union

from .certificates import CertificateSeries, marked_unit_weight
from .errors import LedgerCorrupted, LedgerError
from .money import MoneyAmount, Weight
from .numerics import D, engine_context, pow_int

ZERO = Decimal(0)
ONE = Decimal(1)

LOG_HEADER = "demurrage-log\t1"
SNAPSHOT_FORMAT = "demurrage-snapshot"
SNAPSHOT_VERSION = 1

_ID_FORBIDDEN = set("\t\n;=,")


class UnknownSeries(LedgerError):
    pass


class DuplicateSeries(LedgerError):
    pass


class InsufficientBalance(LedgerError):
    pass


class DayRegression(LedgerError):
    pass


class OverIssuance(LedgerError):
    pass


class InvalidEvent(LedgerError):
    pass


# ---------------------------------------------------------------------------
# Events
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesIssued:
    series: CertificateSeries


@dataclass(frozen=True)
class UnitsSold:
    units: int
    price: MoneyAmount
    buyer: str


@dataclass(frozen=True)
class UnitsSoldInKind:
    units: int
    metal_in: Weight
    fee: MoneyAmount
    buyer: str


@dataclass(frozen=True)
class Transferred:
    units: int
    sender: str
    recipient: str


@dataclass(frozen=True)
class Redeemed:
    units: int
    holder: str
    deliverable: Weight
    top_up: MoneyAmount


@dataclass(frozen=True)
class BoughtBack:
    units: int
    holder: str
    payout: MoneyAmount


@dataclass(frozen=True)
class OverdueRepriced:
    new_coefficient: Decimal  # extraction rate applied from effective_day
    effective_day: int


Action = Union[
    SeriesIssued,
    UnitsSold,
    UnitsSoldInKind,
    Transferred,
    Redeemed,
    BoughtBack,
    OverdueRepriced,
]

_KIND_NAMES = {
    SeriesIssued: "SeriesIssued",
    UnitsSold: "UnitsSold",
    UnitsSoldInKind: "UnitsSoldInKind",
    Transferred: "Transferred",
    Redeemed: "Redeemed",
    BoughtBack: "BoughtBack",
    OverdueRepriced: "OverdueRepriced",
}


@dataclass(frozen=True)
class LedgerEvent:
    sequence: int
    day: int
    series_id: str
    action: Action

    @property
    def kind(self) -> str:
        return _KIND_NAMES[type(self.action)]


# ---------------------------------------------------------------------------
# State
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lot:
    units: int
    acquisition_day: int


@dataclass(frozen=True)
class Repricing:
    effective_day: int
    extraction_rate: Decimal


@dataclass(frozen=True)
class SeriesAccount:
    series: CertificateSeries
    as_of_day: int
    outstanding_units: int = 0
    holdings: Mapping[str, tuple[Lot, ...]] = field(default_factory=dict)
    vault_grams: Decimal = ZERO
    issuer_accrued_grams: Decimal = ZERO
    extracted_grams: Decimal = ZERO
    repricings: tuple[Repricing, ...] = ()

    def holder_balance(self, holder: str) -> int:
        return sum(lot.units for lot in self.holdings.get(holder, ()))

    def unit_claim_grams(self, day: int) -> Decimal:
        """Backing grams one unit claims on ``day``.

        Decays at the series coefficient from issue; each repricing switches
        the survival factor from its effective day onward.
        """
        segments = [(self.series.issue_day, self.series.survival_coefficient)]
        segments += [(r.effective_day, ONE - r.extraction_rate) for r in self.repricings]
        with engine_context():
            claim = self.series.unit_weight.grams
            for i, (start, survival) in enumerate(segments):
                end = segments[i + 1][0] if i + 1 < len(segments) else day
                span = min(day, end) - start
                if span <= 0:
                    break
                claim *= pow_int(survival, span)
        return claim

    def holder_claims_grams(self, day: int) -> Decimal:
        with engine_context():
            return self.unit_claim_grams(day) * self.outstanding_units

    def conservation_gap(self) -> Decimal:
        """vault - (claims + accrual) at the account's day; ~0 when conserved."""
        with engine_context():
            return self.vault_grams - (
                self.holder_claims_grams(self.as_of_day) + self.issuer_accrued_grams
            )


@dataclass(frozen=True)
class LedgerState:
    accounts: Mapping[str, SeriesAccount] = field(default_factory=dict)
    last_sequence: int = 0
    last_day: int | None = None
    event_count: int = 0


EMPTY_STATE = LedgerState()


# ---------------------------------------------------------------------------
# Append / replay
# ---------------------------------------------------------------------------


def _advanced(account: SeriesAccount, day: int) -> SeriesAccount:
    """Materialise decay between the account's day and ``day``."""
    if day == account.as_of_day:
        return account
    with engine_context():
        before = account.holder_claims_grams(account.as_of_day)
        after = account.holder_claims_grams(day)
        delta = before - after
        return replace(
            account,
            as_of_day=day,
            issuer_accrued_grams=account.issuer_accrued_grams + delta,
            extracted_grams=account.extracted_grams + delta,
        )


def _without_units(
    holdings: Mapping[str, tuple[Lot, ...]], holder: str, units: int
) -> dict[str, tuple[Lot, ...]]:
    """Remove ``units`` from ``holder`` FIFO by acquisition order."""
    remaining = units
    kept: list[Lot] = []
    for lot in holdings.get(holder, ()):
        if remaining == 0:
            kept.append(lot)
            continue
        take = min(lot.units, remaining)
        remaining -= take
        if lot.units > take:
            kept.append(Lot(lot.units - take, lot.acquisition_day))
    out = dict(holdings)
    if kept:
        out[holder] = tuple(kept)
    else:
        out.pop(holder, None)
    return out


def _with_lot(
    holdings: Mapping[str, tuple[Lot, ...]], holder: str, lot: Lot
) -> dict[str, tuple[Lot, ...]]:
    out = dict(holdings)
    out[holder] = out.get(holder, ()) + (lot,)
    return out


def append(state: LedgerState, event: LedgerEvent) -> LedgerState:
    """Apply one event, returning the next state. Raises on any invalid event."""
    seq = event.sequence
    if seq <= state.last_sequence:
        raise InvalidEvent(
            f"sequence {seq} does not increase past {state.last_sequence}", seq
        )
    if state.last_day is not None and event.day < state.last_day:
        raise DayRegression(
            f"day regression: event day {event.day} < ledger day {state.last_day}", seq
        )

    action = event.action
    if isinstance(action, SeriesIssued):
        account = _issue(state, event, action)
    else:
        existing = state.accounts.get(event.series_id)
        if existing is None:
            raise UnknownSeries(f"unknown series {event.series_id!r}", seq)
        account = _advanced(existing, event.day)
        account = _apply(account, event, action)

    accounts = dict(state.accounts)
    accounts[event.series_id] = account
    return LedgerState(
        accounts=accounts,
        last_sequence=seq,
        last_day=event.day,
        event_count=state.event_count + 1,
    )


def _issue(state: LedgerState, event: LedgerEvent, action: SeriesIssued) -> SeriesAccount:
    series = action.series
    if event.series_id in state.accounts:
        raise DuplicateSeries(f"series {event.series_id!r} already issued", event.sequence)
    if event.series_id != series.series_id:
        raise InvalidEvent(
            f"event series id {event.series_id!r} != {series.series_id!r}",
            event.sequence,
        )
    if event.day != series.issue_day:
        raise InvalidEvent(
            f"issue event day {event.day} != series issue day {series.issue_day}",
            event.sequence,
        )
    with engine_context():
        backing = series.unit_weight.grams * series.issue_count
    return SeriesAccount(
        series=series,
        as_of_day=event.day,
        vault_grams=backing,
        issuer_accrued_grams=backing,
    )


def _apply(account: SeriesAccount, event: LedgerEvent, action: Action) -> SeriesAccount:
    seq, day = event.sequence, event.day
    series = account.series

    if isinstance(action, (UnitsSold, UnitsSoldInKind)):
        if action.units < 1:
            raise InvalidEvent(f"units must be >= 1: {action.units}", seq)
        if account.outstanding_units + action.units > series.issue_count:
            raise OverIssuance(
                f"over-issuance: {account.outstanding_units} + {action.units} "
                f"> issue count {series.issue_count}",
                seq,
            )
        with engine_context():
            claim = account.unit_claim_grams(day) * action.units
        holdings = _with_lot(account.holdings, action.buyer, Lot(action.units, day))
        if isinstance(action, UnitsSold):
            with engine_context():
                return replace(
                    account,
                    outstanding_units=account.outstanding_units + action.units,
                    holdings=holdings,
                    issuer_accrued_grams=account.issuer_accrued_grams - claim,
                )
        expected = marked_unit_weight(series, day - series.issue_day) * action.units
        if action.metal_in.grams != expected.grams:
            raise InvalidEvent(
                f"in-kind metal {action.metal_in.grams} g != "
                f"marked weight {expected.grams} g",
                seq,
            )
        with engine_context():
            return replace(
                account,
                outstanding_units=account.outstanding_units + action.units,
                holdings=holdings,
                vault_grams=account.vault_grams + action.metal_in.grams,
                issuer_accrued_grams=account.issuer_accrued_grams
                + action.metal_in.grams
                - claim,
            )

    if isinstance(action, Transferred):
        if action.units < 1:
            raise InvalidEvent(f"units must be >= 1: {action.units}", seq)
        if account.holder_balance(action.sender) < action.units:
            raise InsufficientBalance(
                f"insufficient balance: {action.sender!r} holds "
                f"{account.holder_balance(action.sender)}, transferring {action.units}",
                seq,
            )
        moved: list[Lot] = []
        remaining = action.units
        for lot in account.holdings.get(action.sender, ()):
            if remaining == 0:
                break
            take = min(lot.units, remaining)
            moved.append(Lot(take, lot.acquisition_day))
            remaining -= take
        holdings = _without_units(account.holdings, action.sender, action.units)
        for lot in moved:
            holdings = _with_lot(holdings, action.recipient, lot)
        return replace(account, holdings=holdings)

    if isinstance(action, (Redeemed, BoughtBack)):
        if action.units < 1:
            raise InvalidEvent(f"units must be >= 1: {action.units}", seq)
        if account.holder_balance(action.holder) < action.units:
            raise InsufficientBalance(
                f"insufficient balance: {action.holder!r} holds "
                f"{account.holder_balance(action.holder)}, settling {action.units}",
                seq,
            )
        with engine_context():
            claim = account.unit_claim_grams(day) * action.units
        holdings = _without_units(account.holdings, action.holder, action.units)
        if isinstance(action, BoughtBack):
            with engine_context():
                return replace(
                    account,
                    outstanding_units=account.outstanding_units - action.units,
                    holdings=holdings,
                    issuer_accrued_grams=account.issuer_accrued_grams + claim,
                )
        lot_grams = series.min_delivery_weight.grams
        if lot_grams > 0 and action.deliverable.grams % lot_grams != 0:
            raise InvalidEvent(
                f"deliverable {action.deliverable.grams} g is not a multiple "
                f"of the {lot_grams} g delivery lot",
                seq,
            )
        if action.deliverable.grams > account.vault_grams:
            raise InvalidEvent(
                f"vault shortfall: delivering {action.deliverable.grams} g "
                f"from {account.vault_grams} g",
                seq,
            )
        with engine_context():
            return replace(
                account,
                outstanding_units=account.outstanding_units - action.units,
                holdings=holdings,
                vault_grams=account.vault_grams - action.deliverable.grams,
                issuer_accrued_grams=account.issuer_accrued_grams
                + claim
                - action.deliverable.grams,
            )

    if isinstance(action, OverdueRepriced):
        rate = D(action.new_coefficient)
        if not 0 < rate < 1:
            raise InvalidEvent(f"overdue coefficient must be in (0, 1): {rate}", seq)
        if action.effective_day < series.expiry_day:
            raise InvalidEvent(
                f"repricing effective day {action.effective_day} precedes "
                f"expiry day {series.expiry_day}",
                seq,
            )
        if action.effective_day < day:
            raise InvalidEvent(
                f"repricing effective day {action.effective_day} precedes "
                f"event day {day}",
                seq,
            )
        if account.repricings and action.effective_day <= account.repricings[-1].effective_day:
            raise InvalidEvent(
                f"repricing effective day {action.effective_day} does not "
                f"follow {account.repricings[-1].effective_day}",
                seq,
            )
        return replace(
            account,
            repricings=account.repricings + (Repricing(action.effective_day, rate),),
        )

    raise InvalidEvent(f"unknown action {type(action).__name__}", seq)


def replay(events: Iterable[LedgerEvent]) -> LedgerState:
    """Fold events from the empty state; same log, same state, every time."""
    state = EMPTY_STATE
    for event in events:
        state = append(state, event)
    return state


# ---------------------------------------------------------------------------
# Log persistence (line-delimited, checksum-chained)
# ---------------------------------------------------------------------------


def _checksum(line: str) -> str:
    return hashlib.sha256(line.encode("utf-8")).hexdigest()[:16]


def _clean_id(value: str) -> str:
    if not value or set(value) & _ID_FORBIDDEN:
        raise ValueError(f"identifier not serialisable: {value!r}")
    return value


def _enc_money(m: MoneyAmount) -> str:
    return f"{m.currency}:{m.amount}"


def _dec_money(text: str) -> MoneyAmount:
    currency, amount = text.split(":", 1)
    return MoneyAmount(currency, Decimal(amount))


def _series_params(series: CertificateSeries) -> dict[str, str]:
    return {
        "issuer": _clean_id(series.issuer_id),
        "issue_date": series.issue_date.isoformat(),
        "metal": _clean_id(series.metal),
        "unit_weight_g": str(series.unit_weight.grams),
        "purity": str(series.purity),
        "survival": str(series.survival_coefficient),
        "expiry": series.expiry.isoformat(),
        "delivery_fee_rate": str(series.delivery_fee_rate),
        "repo_fee_rate": str(series.repo_fee_rate),
        "min_delivery_weight_g": str(series.min_delivery_weight.grams),
        "inspection_fee": (
            _enc_money(series.inspection_fee) if series.inspection_fee else "-"
        ),
        "issue_count": str(series.issue_count),
        "issue_day": str(series.issue_day),
        "allow_sub_lot_topup": "1" if series.allow_sub_lot_topup else "0",
    }


def _series_from_params(series_id: str, params: dict[str, str]) -> CertificateSeries:
    return CertificateSeries(
        series_id=series_id,
        issuer_id=params["issuer"],
        issue_date=date.fromisoformat(params["issue_date"]),
        metal=params["metal"],
        unit_weight=Weight(Decimal(params["unit_weight_g"])),
        purity=Decimal(params["purity"]),
        survival_coefficient=Decimal(params["survival"]),
        expiry=date.fromisoformat(params["expiry"]),
        delivery_fee_rate=Decimal(params["delivery_fee_rate"]),
        repo_fee_rate=Decimal(params["repo_fee_rate"]),
        min_delivery_weight=Weight(Decimal(params["min_delivery_weight_g"])),
        inspection_fee=(
            None
            if params["inspection_fee"] == "-"
            else _dec_money(params["inspection_fee"])
        ),
        issue_count=int(params["issue_count"]),
        issue_day=int(params["issue_day"]),
        allow_sub_lot_topup=params["allow_sub_lot_topup"] == "1",
    )


def _action_params(action: Action) -> dict[str, str]:
    if isinstance(action, SeriesIssued):
        return _series_params(action.series)
    if isinstance(action, UnitsSold):
        return {
            "units": str(action.units),
            "price": _enc_money(action.price),
            "buyer": _clean_id(action.buyer),
        }
    if isinstance(action, UnitsSoldInKind):
        return {
            "units": str(action.units),
            "metal_in_g": str(action.metal_in.grams),
            "fee": _enc_money(action.fee),
            "buyer": _clean_id(action.buyer),
        }
    if isinstance(action, Transferred):
        return {
            "units": str(action.units),
            "sender": _clean_id(action.sender),
            "recipient": _clean_id(action.recipient),
        }
    if isinstance(action, Redeemed):
        return {
            "units": str(action.units),
            "holder": _clean_id(action.holder),
            "deliverable_g": str(action.deliverable.grams),
            "top_up": _enc_money(action.top_up),
        }
    if isinstance(action, BoughtBack):
        return {
            "units": str(action.units),
            "holder": _clean_id(action.holder),
            "payout": _enc_money(action.payout),
        }
    if isinstance(action, OverdueRepriced):
        return {
            "coefficient": str(action.new_coefficient),
            "effective_day": str(action.effective_day),
        }
    raise ValueError(f"unknown action {type(action).__name__}")


def _action_from_params(kind: str, params: dict[str, str], series_id: str) -> Action:
    if kind == "SeriesIssued":
        return SeriesIssued(_series_from_params(series_id, params))
    if kind == "UnitsSold":
        return UnitsSold(
            units=int(params["units"]),
            price=_dec_money(params["price"]),
            buyer=params["buyer"],
        )
    if kind == "UnitsSoldInKind":
        return UnitsSoldInKind(
            units=int(params["units"]),
            metal_in=Weight(Decimal(params["metal_in_g"])),
            fee=_dec_money(params["fee"]),
            buyer=params["buyer"],
        )
    if kind == "Transferred":
        return Transferred(
            units=int(params["units"]),
            sender=params["sender"],
            recipient=params["recipient"],
        )
    if kind == "Redeemed":
        return Redeemed(
            units=int(params["units"]),
            holder=params["holder"],
            deliverable=Weight(Decimal(params["deliverable_g"])),
            top_up=_dec_money(params["top_up"]),
        )
    if kind == "BoughtBack":
        return BoughtBack(
            units=int(params["units"]),
            holder=params["holder"],
            payout=_dec_money(params["payout"]),
        )
    if kind == "OverdueRepriced":
        return OverdueRepriced(
            new_coefficient=Decimal(params["coefficient"]),
            effective_day=int(params["effective_day"]),
        )
    raise ValueError(f"unknown event kind {kind!r}")


def event_lines(events: Iterable[LedgerEvent]) -> list[str]:
    """Serialise events to log lines, including the header, chained."""
    lines = [LOG_HEADER]
    for event in events:
        params = ";".join(
            f"{k}={v}" for k, v in _action_params(event.action).items()
        )
        body = "\t".join(
            [
                str(event.sequence),
                str(event.day),
                _clean_id(event.series_id),
                event.kind,
                params,
                _checksum(lines[-1]),
            ]
        )
        lines.append(body)
    return lines


def write_log(events: Iterable[LedgerEvent], path: str | Path) -> None:
    Path(path).write_text("\n".join(event_lines(events)) + "\n", encoding="utf-8")


def parse_log(text: str) -> list[LedgerEvent]:
    """Parse and chain-verify a serialised log; raises LedgerCorrupted."""
    lines = text.splitlines()
    if not lines:
        return []
    if lines[0] != LOG_HEADER:
        raise LedgerCorrupted("log corrupted at line 1: bad header", line=1)
    events = []
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 6:
            raise LedgerCorrupted(
                f"log corrupted at line {number}: expected 6 fields", line=number
            )
        seq_s, day_s, series_id, kind, params_s, chain = parts
        if chain != _checksum(lines[number - 2]):
            raise LedgerCorrupted(
                f"log corrupted at line {number - 1}: checksum chain broken",
                line=number - 1,
            )
        try:
            params = dict(
                item.split("=", 1) for item in params_s.split(";") if item
            )
            event = LedgerEvent(
                sequence=int(seq_s),
                day=int(day_s),
                series_id=series_id,
                action=_action_from_params(kind, params, series_id),
            )
        except (ValueError, KeyError, ArithmeticError) as exc:
            raise LedgerCorrupted(
                f"log corrupted at line {number}: {exc}", line=number
            ) from exc
        events.append(event)
    return events


def read_log(path: str | Path) -> list[LedgerEvent]:
    return parse_log(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Snapshot persistence
# ---------------------------------------------------------------------------


def state_to_document(state: LedgerState) -> dict:
    return {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "last_sequence": state.last_sequence,
        "last_day": state.last_day,
        "event_count": state.event_count,
        "accounts": {
            sid: {
                "series": _series_params(account.series),
                "as_of_day": account.as_of_day,
                "outstanding_units": account.outstanding_units,
                "vault_grams": str(account.vault_grams),
                "issuer_accrued_grams": str(account.issuer_accrued_grams),
                "extracted_grams": str(account.extracted_grams),
                "repricings": [
                    [r.effective_day, str(r.extraction_rate)]
                    for r in account.repricings
                ],
                "holdings": {
                    holder: [[lot.units, lot.acquisition_day] for lot in lots]
                    for holder, lots in sorted(account.holdings.items())
                },
            }
            for sid, account in sorted(state.accounts.items())
        },
    }


def state_from_document(doc: dict) -> LedgerState:
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise ValueError(f"not a ledger snapshot: format={doc.get('format')!r}")
    if doc.get("version") != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version: {doc.get('version')!r}")
    accounts = {}
    for sid, entry in doc["accounts"].items():
        accounts[sid] = SeriesAccount(
            series=_series_from_params(sid, entry["series"]),
            as_of_day=entry["as_of_day"],
            outstanding_units=entry["outstanding_units"],
            holdings={
                holder: tuple(Lot(units, acq) for units, acq in lots)
                for holder, lots in entry["holdings"].items()
            },
            vault_grams=Decimal(entry["vault_grams"]),
            issuer_accrued_grams=Decimal(entry["issuer_accrued_grams"]),
            extracted_grams=Decimal(entry["extracted_grams"]),
            repricings=tuple(
                Repricing(eff, Decimal(rate)) for eff, rate in entry["repricings"]
            ),
        )
    return LedgerState(
        accounts=accounts,
        last_sequence=doc["last_sequence"],
        last_day=doc["last_day"],
        event_count=doc["event_count"],
    )


def write_snapshot(state: LedgerState, path: str | Path) -> None:
    text = json.dumps(state_to_document(state), sort_keys=True, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_snapshot(path: str | Path) -> LedgerState:
    return state_from_document(json.loads(Path(path).read_text(encoding="utf-8")))
