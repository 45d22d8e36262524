"""Exception taxonomy.

UsageError covers violated preconditions and malformed inputs; the CLI maps
it to exit code 2.  AuditFailure covers a claim that was checked and found
false; the CLI maps it to exit code 1.  RectangleViolation is an internal
consistency failure of the execution engine itself.
"""

from __future__ import annotations

__all__ = ["CclabError", "UsageError", "DecodeError", "AuditFailure", "RectangleViolation"]


class CclabError(Exception):
    """Base class for package errors."""


class UsageError(CclabError, ValueError):
    """A caller-supplied argument violates a documented precondition."""


class DecodeError(UsageError):
    """A code string does not parse under the grammar."""


class AuditFailure(CclabError):
    """A verified claim does not hold for the supplied objects."""


class RectangleViolation(AuditFailure):
    """A transcript class failed the product-set check (engine bug)."""

    def __init__(self, transcript: str, witnesses: list[tuple[str, str]]):
        self.transcript = transcript
        self.witnesses = witnesses[:4]
        super().__init__(
            f"transcript class {transcript!r} is not a product set; witnesses: {self.witnesses}"
        )
