# src/series_core/errors.py
"""Error hierarchy shared by every behaviordict module."""
from dataclasses import dataclass
from typing import List, Optional


class DomainError(ValueError):
    """Base class for input that violates a documented precondition."""

    code = "domain"


class FlatSequenceError(DomainError):
    code = "flat_sequence"


class WindowLengthError(DomainError):
    code = "window_length"


class MissingAxisError(DomainError):
    code = "missing_axis"


class OverlapError(DomainError):
    code = "overlap"


class ScheduleError(DomainError):
    code = "schedule"


class NoConservedTemplateError(DomainError):
    """No candidate reached TP >= 1 with FP == 0 for a behavior class."""

    code = "no_conserved_template"

    def __init__(self, behavior_class: str, detail: str = ""):
        self.behavior_class = behavior_class
        message = f"no conserved template for class '{behavior_class}'"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


@dataclass(frozen=True)
class RowDiagnostic:
    """One rejected row of an input file (line numbers are 1-based)."""

    path: str
    line: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}:{self.line}: {self.code}: {self.message}"


class IngestError(DomainError):
    """Raised once per file with every row diagnostic collected."""

    code = "ingest"

    def __init__(self, diagnostics: List[RowDiagnostic], rows_read: Optional[int] = None):
        self.diagnostics = list(diagnostics)
        self.rows_read = rows_read
        first = str(self.diagnostics[0]) if self.diagnostics else "ingest failed"
        more = len(self.diagnostics) - 1
        suffix = f" (+{more} more)" if more > 0 else ""
        super().__init__(f"{first}{suffix}")


class DictionaryFormatError(DomainError):
    code = "dictionary_format"


class SampleRateError(DomainError):
    """A stream's sample rate differs from the one a dictionary was trained at."""

    code = "sample_rate"
