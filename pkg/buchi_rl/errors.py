from typing import Any


class BuchiRLError(Exception):
    """Base error; `detail` is the human-readable message shown by the CLI."""

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class LtlSyntaxError(BuchiRLError):
    def __init__(self, detail: str, position: int) -> None:
        super().__init__(f"{detail} (at column {position})")
        self.position = position


class AutomatonFormatError(BuchiRLError):
    def __init__(self, detail: str, line: int) -> None:
        super().__init__(f"line {line}: {detail}")
        self.line = line


class AutomatonValidationError(BuchiRLError):
    def __init__(self, detail: str, report: Any) -> None:
        super().__init__(detail)
        self.report = report


class UnknownStateError(BuchiRLError):
    pass


class GridFormatError(BuchiRLError):
    def __init__(self, detail: str, line: int | None = None) -> None:
        super().__init__(detail if line is None else f"line {line}: {detail}")
        self.line = line


class UnavailableActionError(BuchiRLError):
    pass


class StateCapExceededError(BuchiRLError):
    pass


class PolicyCoverageError(BuchiRLError):
    pass


class SingularSystemError(BuchiRLError):
    pass


class NonContractiveError(BuchiRLError):
    pass


class ConfigError(BuchiRLError):
    pass


class OptimumExceededError(BuchiRLError):
    pass


class PrismFormatError(BuchiRLError):
    def __init__(self, detail: str, line: int | None = None) -> None:
        super().__init__(detail if line is None else f"line {line}: {detail}")
        self.line = line
