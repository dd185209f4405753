"""Small parsing and formatting helpers shared by the CLI and the suites."""

import re
from typing import Any

from ..core.errors import LabArgumentError


def parse_n_range(text: str) -> list[int]:
    """
    Parse a vertex-count selection.

    Accepts a single value ``7``, an inclusive range ``4..9`` or a comma list
    ``4,6,8``. Returns the sorted distinct values.
    """
    raw = text.strip()
    try:
        if ".." in raw:
            lo_text, hi_text = raw.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            if lo > hi:
                raise LabArgumentError(f"empty range {raw!r}")
            values = list(range(lo, hi + 1))
        else:
            values = [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as e:
        raise LabArgumentError(f"cannot parse n selection {text!r}") from e
    if not values or min(values) < 1:
        raise LabArgumentError(f"n selection {text!r} must be nonempty and positive")
    return sorted(set(values))


def format_status_message(success: bool, message: str, details: dict[str, Any] | None = None) -> str:
    """
    Create consistent status lines with a clear pass/fail marker.

    Args:
        success: Whether the run passed
        message: Main message text
        details: Optional key/value lines shown underneath
    """
    icon = "✅" if success else "❌"
    result = f"{icon} {message}"
    if details:
        result += "\n" + "\n".join(f"  • {k}: {v}" for k, v in details.items())
    return result


def safe_filename(filename: str) -> str:
    """Turn a report title such as ``extremal fan:2,3`` into a file-system-safe stem."""
    safe = re.sub(r'[<>:"/\\|?*,\s]', "_", filename.strip())
    safe = re.sub(r"_+", "_", safe)
    safe = safe.strip("_")
    return safe or "untitled"
