"""Exception types shared across the engine."""


class DemurrageError(Exception):
    """Base class for every domain error raised by this package."""


class CurrencyMismatch(DemurrageError):
    """Arithmetic attempted between amounts in different currencies."""


class MetalMismatch(DemurrageError):
    """A price quote for one metal was applied to a series anchored in another."""


class BelowMinimumLot(DemurrageError):
    """Redeemable weight is under one delivery lot and the series forbids topping up."""


class InfeasibleRate(DemurrageError):
    """A computed extraction rate is >= 1, so the coefficient cannot be applied."""


class NoPeerData(DemurrageError):
    """Peer-market statistics requested over an empty sample set."""


class LedgerError(DemurrageError):
    """An event could not be applied to the registry state.

    ``sequence`` is set when the failure is attributable to a specific event.
    """

    def __init__(self, message: str, sequence: int | None = None):
        super().__init__(message)
        self.sequence = sequence


class LedgerCorrupted(LedgerError):
    """A persisted event log failed its integrity check.

    ``line`` is the 1-based line number of the damaged record.
    """

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.line = line


class ScenarioError(DemurrageError):
    """A scenario config failed to parse or validate.

    ``diagnostics`` holds (field_path, message) pairs, one per violation.
    """

    def __init__(self, message: str, diagnostics: list[tuple[str, str]] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []
