"""Scenario configs: one TOML document drives every subcommand.

A scenario names certificate series, a day-indexed spot-price path, a
lifecycle timeline, and optional calibration / overdue / solvency sections.
Decimal-valued fields must be TOML strings (or ints): TOML floats are binary
floats and would smuggle representation error into settlement arithmetic.

``validate_raw`` returns every violation with a dotted field path rather than
stopping at the first, so a config author gets the whole list in one pass.
Price lookups are exact-day: a referenced day with no price row is a
validation error, never an interpolation.
"""

from dataclasses import dataclass, field
from datetime import date, timedelta
from decimal import Decimal, InvalidOperation
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from importlib import resources

from .calibration import IntervalForecast
from .certificates import CertificateSeries
from .errors import ScenarioError
from .money import MoneyAmount, PriceQuote, Weight
from .numerics import TROY_OUNCE_GRAMS
from .overdue import OverduePolicy, PeerCoefficientSample, SeriesVersion
from .solvency import IssuerFeeModel, Purchase, Redemption, TimelineEntry

TIMELINE_KINDS = ("sell", "sell_in_kind", "transfer", "redeem", "buyback")
WAREHOUSE_RATE_UNITS = ("gram_day", "troy_ounce_day")


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class TradeDefaults:
    series_id: str
    day: int
    units: int
    markup: Decimal = Decimal(0)


@dataclass(frozen=True)
class SdcEvent:
    day: int
    kind: str  # one of TIMELINE_KINDS
    series_id: str
    units: int
    counterparty: str
    recipient: str | None = None  # transfers only
    markup: Decimal = Decimal(0)


@dataclass(frozen=True)
class CalibrationSection:
    forecasts: list[IntervalForecast]
    backlog_correction: Decimal
    interval_unit: str


@dataclass(frozen=True)
class OverdueSection:
    policy: OverduePolicy
    lookback_days: int
    expired_series_id: str
    peers: list[PeerCoefficientSample]
    own_versions: list[SeriesVersion]


@dataclass(frozen=True)
class SolvencySection:
    fees: IssuerFeeModel
    timeline: list[TimelineEntry]
    horizon_days: int
    invest_yield_per_gram_day: Decimal


@dataclass(frozen=True)
class Scenario:
    name: str
    series: dict[str, CertificateSeries]
    prices: dict[tuple[int, str], PriceQuote]
    quote: TradeDefaults | None = None
    redeem: TradeDefaults | None = None
    buyback: TradeDefaults | None = None
    timeline: list[SdcEvent] = field(default_factory=list)
    calibration: CalibrationSection | None = None
    overdue: OverdueSection | None = None
    solvency: SolvencySection | None = None

    def price_at(self, day: int, metal: str) -> PriceQuote:
        try:
            return self.prices[(day, metal)]
        except KeyError:
            raise ScenarioError(
                f"no price for metal {metal!r} on day {day} (exact-day match required)",
                [(f"prices[{day},{metal}]", "missing price row")],
            ) from None


# ---------------------------------------------------------------------------
# Field readers: each records a diagnostic instead of raising
# ---------------------------------------------------------------------------


class _Reader:
    def __init__(self):
        self.diagnostics: list[Diagnostic] = []

    def fail(self, path: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(path, message))

    def decimal(self, raw, path: str, *, required=True, default=None) -> Decimal | None:
        if raw is None:
            if required:
                self.fail(path, "required decimal value is missing")
            return default
        if isinstance(raw, float):
            self.fail(path, "decimal values must be TOML strings or ints, not floats")
            return None
        try:
            return Decimal(str(raw))
        except InvalidOperation:
            self.fail(path, f"not a decimal value: {raw!r}")
            return None

    def integer(self, raw, path: str, *, required=True, default=None, minimum=None) -> int | None:
        if raw is None:
            if required:
                self.fail(path, "required integer value is missing")
            return default
        if not isinstance(raw, int) or isinstance(raw, bool):
            self.fail(path, f"not an integer: {raw!r}")
            return None
        if minimum is not None and raw < minimum:
            self.fail(path, f"must be >= {minimum}: {raw}")
            return None
        return raw

    def string(self, raw, path: str, *, required=True, default=None, choices=None) -> str | None:
        if raw is None:
            if required:
                self.fail(path, "required string value is missing")
            return default
        if not isinstance(raw, str) or not raw:
            self.fail(path, f"not a non-empty string: {raw!r}")
            return None
        if choices is not None and raw not in choices:
            self.fail(path, f"must be one of {sorted(choices)}: {raw!r}")
            return None
        return raw

    def calendar_date(self, raw, path: str, *, required=True) -> date | None:
        if raw is None:
            if required:
                self.fail(path, "required date value is missing")
            return None
        if isinstance(raw, date):
            return raw
        if isinstance(raw, str):
            try:
                return date.fromisoformat(raw)
            except ValueError:
                pass
        self.fail(path, f"not a calendar date: {raw!r}")
        return None

    def money(self, raw, path: str, *, required=True) -> MoneyAmount | None:
        if raw is None:
            if required:
                self.fail(path, "required money value is missing")
            return None
        if not isinstance(raw, dict):
            self.fail(path, "money values are tables: { currency = ..., amount = ... }")
            return None
        currency = self.string(raw.get("currency"), f"{path}.currency")
        amount = self.decimal(raw.get("amount"), f"{path}.amount")
        if currency is None or amount is None:
            return None
        return MoneyAmount(currency, amount)


def _in_range(reader: _Reader, value: Decimal | None, path: str, *, low, high,
              low_open=False, high_open=False) -> None:
    if value is None:
        return
    low_ok = value > low if low_open else value >= low
    high_ok = value < high if high_open else value <= high
    if not (low_ok and high_ok):
        lo = "(" if low_open else "["
        hi = ")" if high_open else "]"
        reader.fail(path, f"range violation: {value} outside {lo}{low}, {high}{hi}")


# ---------------------------------------------------------------------------
# Parse + validate + build
# ---------------------------------------------------------------------------


def load_raw(path: str | Path) -> dict:
    """Parse the TOML document; parse errors point at the offending line."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(
            f"config parse error: {exc}", [("file", str(exc))]
        ) from exc


def _read_series(reader: _Reader, raw: dict) -> dict[str, CertificateSeries]:
    series_map: dict[str, CertificateSeries] = {}
    for sid, entry in sorted(raw.get("series", {}).items()):
        p = f"series.{sid}"
        if not isinstance(entry, dict):
            reader.fail(p, "series entries are tables")
            continue
        issuer = reader.string(entry.get("issuer"), f"{p}.issuer")
        metal = reader.string(entry.get("metal"), f"{p}.metal")
        issue_date = reader.calendar_date(entry.get("issue_date"), f"{p}.issue_date")
        expiry = reader.calendar_date(entry.get("expiry"), f"{p}.expiry")
        unit_weight = reader.decimal(entry.get("unit_weight_g"), f"{p}.unit_weight_g")
        purity = reader.decimal(entry.get("purity"), f"{p}.purity")
        survival = reader.decimal(
            entry.get("survival_coefficient"), f"{p}.survival_coefficient"
        )
        delivery = reader.decimal(
            entry.get("delivery_fee_rate"), f"{p}.delivery_fee_rate",
            required=False, default=Decimal(0),
        )
        repo = reader.decimal(
            entry.get("repo_fee_rate"), f"{p}.repo_fee_rate",
            required=False, default=Decimal(0),
        )
        min_weight = reader.decimal(
            entry.get("min_delivery_weight_g"), f"{p}.min_delivery_weight_g",
            required=False, default=Decimal(0),
        )
        inspection = reader.money(
            entry.get("inspection_fee"), f"{p}.inspection_fee", required=False
        )
        issue_count = reader.integer(
            entry.get("issue_count"), f"{p}.issue_count", minimum=1
        )
        issue_day = reader.integer(
            entry.get("issue_day"), f"{p}.issue_day", required=False, default=0, minimum=0
        )
        allow_topup = bool(entry.get("allow_sub_lot_topup", False))

        if unit_weight is not None and unit_weight <= 0:
            reader.fail(f"{p}.unit_weight_g", f"must be positive: {unit_weight}")
        _in_range(reader, purity, f"{p}.purity", low=0, high=1, low_open=True)
        _in_range(
            reader, survival, f"{p}.survival_coefficient",
            low=0, high=1, low_open=True,
        )
        _in_range(reader, delivery, f"{p}.delivery_fee_rate", low=0, high=1, high_open=True)
        _in_range(reader, repo, f"{p}.repo_fee_rate", low=0, high=1, high_open=True)
        if min_weight is not None and min_weight < 0:
            reader.fail(f"{p}.min_delivery_weight_g", f"must be >= 0: {min_weight}")
        if issue_date and expiry and expiry <= issue_date:
            reader.fail(f"{p}.expiry", f"expiry {expiry} must be after issue {issue_date}")

        ok = not any(d.path.startswith(p) for d in reader.diagnostics)
        if ok:
            series_map[sid] = CertificateSeries(
                series_id=sid,
                issuer_id=issuer,
                issue_date=issue_date,
                metal=metal,
                unit_weight=Weight(unit_weight),
                purity=purity,
                survival_coefficient=survival,
                expiry=expiry,
                delivery_fee_rate=delivery,
                repo_fee_rate=repo,
                min_delivery_weight=Weight(min_weight),
                inspection_fee=inspection,
                issue_count=issue_count,
                issue_day=issue_day,
                allow_sub_lot_topup=allow_topup,
            )
    return series_map


def _read_prices(reader: _Reader, raw: dict,
                 series_map: dict[str, CertificateSeries]) -> dict[tuple[int, str], PriceQuote]:
    prices: dict[tuple[int, str], PriceQuote] = {}
    # scenario day 0 in calendar terms, for decorating quotes with a date
    base_date = min(
        (s.issue_date - timedelta(days=s.issue_day) for s in series_map.values()),
        default=None,
    )
    for i, entry in enumerate(raw.get("prices", [])):
        p = f"prices[{i}]"
        day = reader.integer(entry.get("day"), f"{p}.day", minimum=0)
        metal = reader.string(entry.get("metal"), f"{p}.metal")
        currency = reader.string(entry.get("currency"), f"{p}.currency")
        per_oz = reader.decimal(entry.get("per_troy_ounce"), f"{p}.per_troy_ounce")
        if per_oz is not None and per_oz <= 0:
            reader.fail(f"{p}.per_troy_ounce", f"must be positive: {per_oz}")
            per_oz = None
        if None in (day, metal, currency, per_oz):
            continue
        key = (day, metal)
        if key in prices:
            reader.fail(p, f"duplicate price for metal {metal!r} on day {day}")
            continue
        as_of = base_date + timedelta(days=day) if base_date else None
        prices[key] = PriceQuote(
            metal=metal, currency=currency, price_per_troy_ounce=per_oz, as_of=as_of
        )
    return prices


def _require_price(reader: _Reader, prices, day: int | None, series, path: str) -> None:
    if day is None or series is None:
        return
    if (day, series.metal) not in prices:
        reader.fail(
            path,
            f"no price row for metal {series.metal!r} on day {day} "
            "(exact-day match required)",
        )


def _check_day_in_validity(reader: _Reader, day, series, path: str, overdue_present: bool) -> None:
    if day is None or series is None:
        return
    if day < series.issue_day:
        reader.fail(path, f"day {day} precedes series issue day {series.issue_day}")
    elif day > series.expiry_day and not overdue_present:
        reader.fail(
            path,
            f"day {day} is past expiry day {series.expiry_day} "
            "and no [overdue] section is configured",
        )


def _read_trade(reader: _Reader, raw: dict, section: str,
                series_map, prices, overdue_present: bool,
                needs_markup: bool) -> TradeDefaults | None:
    entry = raw.get(section)
    if entry is None:
        return None
    p = section
    sid = reader.string(entry.get("series"), f"{p}.series")
    series = series_map.get(sid) if sid else None
    if sid and series is None:
        reader.fail(f"{p}.series", f"references undefined series {sid!r}")
    day = reader.integer(entry.get("day"), f"{p}.day", minimum=0)
    units = reader.integer(entry.get("units"), f"{p}.units", minimum=1)
    markup = reader.decimal(
        entry.get("markup"), f"{p}.markup", required=False, default=Decimal(0)
    )
    if markup is not None and markup < 0:
        reader.fail(f"{p}.markup", f"must be >= 0: {markup}")
    if not needs_markup and entry.get("markup") is not None:
        reader.fail(f"{p}.markup", "markup applies only to purchases")
    _check_day_in_validity(reader, day, series, f"{p}.day", overdue_present)
    _require_price(reader, prices, day, series, f"{p}.day")
    if None in (sid, day, units) or series is None:
        return None
    return TradeDefaults(series_id=sid, day=day, units=units, markup=markup or Decimal(0))


def _read_timeline(reader: _Reader, raw: dict, series_map, prices,
                   overdue_present: bool) -> list[SdcEvent]:
    events: list[SdcEvent] = []
    last_day = None
    for i, entry in enumerate(raw.get("timeline", [])):
        p = f"timeline[{i}]"
        day = reader.integer(entry.get("day"), f"{p}.day", minimum=0)
        kind = reader.string(entry.get("kind"), f"{p}.kind", choices=TIMELINE_KINDS)
        sid = reader.string(entry.get("series"), f"{p}.series")
        units = reader.integer(entry.get("units"), f"{p}.units", minimum=1)
        counterparty = reader.string(entry.get("counterparty"), f"{p}.counterparty")
        recipient = reader.string(
            entry.get("recipient"), f"{p}.recipient", required=(kind == "transfer")
        )
        markup = reader.decimal(
            entry.get("markup"), f"{p}.markup", required=False, default=Decimal(0)
        )
        series = series_map.get(sid) if sid else None
        if sid and series is None:
            reader.fail(f"{p}.series", f"references undefined series {sid!r}")
        _check_day_in_validity(reader, day, series, f"{p}.day", overdue_present)
        if kind in ("sell", "redeem", "buyback"):
            _require_price(reader, prices, day, series, f"{p}.day")
        if kind == "sell_in_kind" and series is not None and series.inspection_fee is None:
            reader.fail(
                f"{p}.kind",
                f"series {sid!r} has no inspection fee configured for in-kind sales",
            )
        if day is not None and last_day is not None and day < last_day:
            reader.fail(f"{p}.day", f"timeline days must be non-decreasing: {day} < {last_day}")
        if day is not None:
            last_day = day
        if None in (day, kind, sid, units, counterparty) or series is None:
            continue
        events.append(
            SdcEvent(
                day=day, kind=kind, series_id=sid, units=units,
                counterparty=counterparty, recipient=recipient,
                markup=markup or Decimal(0),
            )
        )
    return events


def _read_calibration(reader: _Reader, raw: dict) -> CalibrationSection | None:
    entry = raw.get("calibration")
    if entry is None:
        return None
    p = "calibration"
    backlog = reader.decimal(
        entry.get("backlog_correction"), f"{p}.backlog_correction",
        required=False, default=Decimal(0),
    )
    if backlog is not None and backlog < 0:
        reader.fail(f"{p}.backlog_correction", f"must be >= 0: {backlog}")
    unit = reader.string(
        entry.get("interval_unit"), f"{p}.interval_unit", required=False, default="day"
    )
    currency = reader.string(entry.get("currency"), f"{p}.currency")
    intervals = entry.get("intervals", [])
    if not intervals:
        reader.fail(f"{p}.intervals", "at least one forecast interval is required")
    forecasts: list[IntervalForecast] = []
    for i, row in enumerate(intervals):
        rp = f"{p}.intervals[{i}]"
        index = reader.integer(row.get("index"), f"{rp}.index", minimum=1)
        cost = reader.decimal(row.get("storage_cost_per_gram"), f"{rp}.storage_cost_per_gram")
        price = reader.decimal(row.get("metal_price_per_gram"), f"{rp}.metal_price_per_gram")
        if cost is not None and cost < 0:
            reader.fail(f"{rp}.storage_cost_per_gram", f"must be >= 0: {cost}")
            cost = None
        if price is not None and price <= 0:
            reader.fail(f"{rp}.metal_price_per_gram", f"must be positive: {price}")
            price = None
        if None in (index, cost, price, currency):
            continue
        forecasts.append(
            IntervalForecast(
                interval_index=index,
                storage_cost_per_gram=MoneyAmount(currency, cost),
                metal_price_per_gram=MoneyAmount(currency, price),
            )
        )
    if not forecasts and intervals:
        return None
    if currency is None:
        return None
    return CalibrationSection(
        forecasts=forecasts, backlog_correction=backlog or Decimal(0), interval_unit=unit
    )


def _read_overdue(reader: _Reader, raw: dict, series_map) -> OverdueSection | None:
    entry = raw.get("overdue")
    if entry is None:
        return None
    p = "overdue"
    alpha = reader.decimal(entry.get("blend_alpha"), f"{p}.blend_alpha")
    _in_range(reader, alpha, f"{p}.blend_alpha", low=0, high=Decimal("0.5"))
    lookback = reader.integer(entry.get("lookback_days"), f"{p}.lookback_days", minimum=1)
    sid = reader.string(entry.get("expired_series"), f"{p}.expired_series")
    if sid and sid not in series_map:
        reader.fail(f"{p}.expired_series", f"references undefined series {sid!r}")
    peers: list[PeerCoefficientSample] = []
    for i, row in enumerate(entry.get("peers", [])):
        rp = f"{p}.peers[{i}]"
        issuer = reader.string(row.get("issuer"), f"{rp}.issuer")
        coeff = reader.decimal(row.get("coefficient"), f"{rp}.coefficient")
        _in_range(reader, coeff, f"{rp}.coefficient", low=0, high=1, low_open=True, high_open=True)
        if issuer is None or coeff is None or not 0 < coeff < 1:
            continue
        peers.append(PeerCoefficientSample(issuer_id=issuer, coefficient=coeff))
    versions: list[SeriesVersion] = []
    for i, row in enumerate(entry.get("own_versions", [])):
        rp = f"{p}.own_versions[{i}]"
        vsid = reader.string(row.get("series"), f"{rp}.series")
        issue_day = reader.integer(row.get("issue_day"), f"{rp}.issue_day", minimum=0)
        expiry_day = reader.integer(row.get("expiry_day"), f"{rp}.expiry_day", minimum=0)
        coeff = reader.decimal(row.get("coefficient"), f"{rp}.coefficient")
        _in_range(reader, coeff, f"{rp}.coefficient", low=0, high=1, low_open=True, high_open=True)
        if None in (vsid, issue_day, expiry_day, coeff) or not 0 < coeff < 1:
            continue
        versions.append(
            SeriesVersion(
                series_id=vsid, issue_day=issue_day,
                expiry_day=expiry_day, coefficient=coeff,
            )
        )
    if not peers and not versions:
        reader.fail(p, "needs peer samples or own successor versions")
    if None in (alpha, lookback, sid) or sid not in series_map:
        return None
    return OverdueSection(
        policy=OverduePolicy(blend_alpha=alpha),
        lookback_days=lookback,
        expired_series_id=sid,
        peers=peers,
        own_versions=versions,
    )


def _read_solvency(reader: _Reader, raw: dict) -> SolvencySection | None:
    entry = raw.get("solvency")
    if entry is None:
        return None
    p = "solvency"
    currency = reader.string(entry.get("currency"), f"{p}.currency")
    fee = reader.decimal(entry.get("processing_fee_per_token"), f"{p}.processing_fee_per_token")
    rate = reader.decimal(entry.get("warehouse_rate"), f"{p}.warehouse_rate")
    rate_unit = reader.string(
        entry.get("warehouse_rate_unit"), f"{p}.warehouse_rate_unit",
        required=False, default="gram_day", choices=WAREHOUSE_RATE_UNITS,
    )
    grams = reader.decimal(
        entry.get("grams_per_token"), f"{p}.grams_per_token", required=False, default=Decimal(1)
    )
    horizon = reader.integer(entry.get("horizon_days"), f"{p}.horizon_days", minimum=0)
    invest = reader.decimal(
        entry.get("invest_yield_per_gram_day"), f"{p}.invest_yield_per_gram_day",
        required=False, default=Decimal(0),
    )
    if fee is not None and fee < 0:
        reader.fail(f"{p}.processing_fee_per_token", f"must be >= 0: {fee}")
    if rate is not None and rate < 0:
        reader.fail(f"{p}.warehouse_rate", f"must be >= 0: {rate}")
    if grams is not None and grams <= 0:
        reader.fail(f"{p}.grams_per_token", f"must be positive: {grams}")
    if invest is not None and invest < 0:
        reader.fail(f"{p}.invest_yield_per_gram_day", f"must be >= 0: {invest}")

    timeline: list[TimelineEntry] = []
    last_day = None
    for i, row in enumerate(entry.get("timeline", [])):
        rp = f"{p}.timeline[{i}]"
        day = reader.integer(row.get("day"), f"{rp}.day", minimum=0)
        kind = reader.string(row.get("kind"), f"{rp}.kind", choices=("purchase", "redeem"))
        customer = reader.string(row.get("customer"), f"{rp}.customer")
        tokens = reader.integer(row.get("tokens"), f"{rp}.tokens", minimum=1)
        if day is not None and last_day is not None and day < last_day:
            reader.fail(f"{rp}.day", f"timeline days must be non-decreasing: {day} < {last_day}")
        if day is not None:
            last_day = day
        if None in (day, kind, customer, tokens):
            continue
        cls = Purchase if kind == "purchase" else Redemption
        timeline.append(cls(day=day, customer_id=customer, tokens=tokens))

    if None in (currency, fee, rate, grams, horizon):
        return None
    # Explicit ounce -> gram conversion: an ounce-quoted rate is carried with
    # its 31.1035 g basis so it cancels exactly against ounce-sized tokens.
    basis = TROY_OUNCE_GRAMS if rate_unit == "troy_ounce_day" else Decimal(1)
    return SolvencySection(
        fees=IssuerFeeModel(
            processing_fee_per_token=MoneyAmount(currency, fee),
            warehouse_rate=MoneyAmount(currency, rate),
            rate_basis=Weight(basis),
            grams_per_token=Weight(grams),
        ),
        timeline=timeline,
        horizon_days=horizon,
        invest_yield_per_gram_day=invest or Decimal(0),
    )


def validate_raw(raw: dict) -> list[Diagnostic]:
    """Every violation in the document, with dotted field paths."""
    reader = _Reader()
    _build(reader, raw, name="unnamed")
    return reader.diagnostics


def _build(reader: _Reader, raw: dict, name: str) -> Scenario:
    series_map = _read_series(reader, raw)
    prices = _read_prices(reader, raw, series_map)
    overdue = _read_overdue(reader, raw, series_map)
    overdue_present = raw.get("overdue") is not None
    return Scenario(
        name=raw.get("meta", {}).get("name", name),
        series=series_map,
        prices=prices,
        quote=_read_trade(reader, raw, "quote", series_map, prices, overdue_present, True),
        redeem=_read_trade(reader, raw, "redeem", series_map, prices, overdue_present, False),
        buyback=_read_trade(reader, raw, "buyback", series_map, prices, overdue_present, False),
        timeline=_read_timeline(reader, raw, series_map, prices, overdue_present),
        calibration=_read_calibration(reader, raw),
        overdue=overdue,
        solvency=_read_solvency(reader, raw),
    )


def load_scenario(path: str | Path) -> Scenario:
    """Parse, validate and build; raises ScenarioError with all diagnostics."""
    raw = load_raw(path)
    reader = _Reader()
    scenario = _build(reader, raw, name=Path(path).stem)
    if reader.diagnostics:
        listing = "; ".join(str(d) for d in reader.diagnostics)
        raise ScenarioError(
            f"invalid scenario config: {listing}",
            [(d.path, d.message) for d in reader.diagnostics],
        )
    return scenario


def bundled_scenario_path(name: str) -> Path | None:
    """Filesystem path of a scenario shipped with the package, if any."""
    candidate = resources.files("demurrage").joinpath("scenarios", f"{name}.toml")
    try:
        if candidate.is_file():
            return Path(str(candidate))
    except (OSError, TypeError):
        return None
    return None


def resolve_config(ref: str) -> Path:
    """Resolve a --config argument: a file path, or a bundled scenario name."""
    path = Path(ref)
    if path.is_file():
        return path
    if "/" not in ref and "\\" not in ref:
        bundled = bundled_scenario_path(path.stem if ref.endswith(".toml") else ref)
        if bundled is not None:
            return bundled
    raise FileNotFoundError(f"config not found: {ref}")
