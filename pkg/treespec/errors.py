"""
Exceptions raised by the core modules.
Agents catch these and report them as ``{"success": False, "error": ...}``.
"""
from typing import Optional


def describe_count(value: int) -> str:
    """Short text for a count: decimal when small, else as a power of two."""
    if value < 10 ** 18:
        return str(value)
    if value & (value + 1) == 0:
        return f"2^{value.bit_length()}-1"
    if value & (value - 1) == 0:
        return f"2^{value.bit_length() - 1}"
    return f"about 2^{value.bit_length() - 1}"


class CapExceededError(ValueError):
    """A request exceeds a configured size cap."""

    def __init__(self, what: str, requested: int, cap: int, would_produce: Optional[int] = None):
        self.what = what
        self.requested = requested
        self.cap = cap
        self.would_produce = would_produce
        message = f"{what} refused: n={requested} exceeds the cap n<={cap}"
        if would_produce is not None:
            message += f" (would produce {describe_count(would_produce)} elements)"
        super().__init__(message)


class ElementFormatError(ValueError):
    """Malformed element JSON; ``path`` names the offending node."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Malformed element at {path}: {reason}")
