# src/storage/directives.py
"""``# key: value`` header lines shared by every delimited file format."""
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

from src.series_core.errors import IngestError, RowDiagnostic


def read_directives(path: Path) -> Tuple[Dict[str, str], int]:
    """Leading ``#`` lines as a dict, plus the number of lines consumed."""
    directives: Dict[str, str] = {}
    consumed = 0
    problems: List[RowDiagnostic] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            consumed += 1
            body = line[1:].strip()
            if not body:
                continue
            key, sep, value = body.partition(":")
            if not sep or not key.strip():
                problems.append(
                    RowDiagnostic(str(path), consumed, "bad_directive", f"expected '# key: value', got '{line.rstrip()}'")
                )
                continue
            directives[key.strip()] = value.strip()
    if problems:
        raise IngestError(problems)
    return directives, consumed


def format_directives(items: Iterable[Tuple[str, object]]) -> str:
    return "".join(f"# {key}: {value}\n" for key, value in items)
