"""Error taxonomy shared by every module.

Each error carries a stable ``code`` (used verbatim by the HTTP error
envelope) and the HTTP status it maps to. Validation problems sit in the
4xx range; storage and remote failures map to 5xx.
"""

from __future__ import annotations

from typing import Optional


class DocmarksError(Exception):
    """Base class for every domain error."""

    code = "Internal"
    http_status = 500

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.field = field

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.field is not None:
            payload["field"] = self.field
        return payload


# -- document lifecycle -------------------------------------------------

class DuplicateDocument(DocmarksError):
    code = "DuplicateDocument"
    http_status = 409


class UnknownDocument(DocmarksError):
    code = "UnknownDocument"
    http_status = 404


# -- annotation ----------------------------------------------------------

class EmptySelection(DocmarksError):
    code = "EmptySelection"
    http_status = 400


class OverlappingMention(DocmarksError):
    code = "OverlappingMention"
    http_status = 409


class UnknownCategory(DocmarksError):
    code = "UnknownCategory"
    http_status = 400


class UnknownEntity(DocmarksError):
    code = "UnknownEntity"
    http_status = 404


class UnknownMention(DocmarksError):
    code = "UnknownMention"
    http_status = 404


class SelfMerge(DocmarksError):
    code = "SelfMerge"
    http_status = 400


class CategoryMismatch(DocmarksError):
    code = "CategoryMismatch"
    http_status = 409


class EntityTrashed(DocmarksError):
    code = "EntityTrashed"
    http_status = 409


class InvalidLabel(DocmarksError):
    code = "InvalidLabel"
    http_status = 400


class InvalidTransition(DocmarksError):
    code = "InvalidTransition"
    http_status = 409


# -- serialization -------------------------------------------------------

class ParseError(DocmarksError):
    """Malformed annotated HTML. ``line`` and ``column`` locate the fault."""

    code = "ParseError"
    http_status = 400

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EntityImportError(DocmarksError):
    """Entity interchange payload violates the schema."""

    code = "ImportError"
    http_status = 400


# -- metadata and persistence ---------------------------------------------

class ValidationError(DocmarksError):
    code = "ValidationError"
    http_status = 400


class ConflictError(DocmarksError):
    code = "ConflictError"
    http_status = 409


class StorageError(DocmarksError):
    code = "StorageError"
    http_status = 500


# -- authentication --------------------------------------------------------

class InvalidCredentials(DocmarksError):
    code = "InvalidCredentials"
    http_status = 401


class TokenExpired(DocmarksError):
    code = "TokenExpired"
    http_status = 401


class InvalidToken(DocmarksError):
    code = "InvalidToken"
    http_status = 401


# -- reconciliation --------------------------------------------------------

class InvalidQid(DocmarksError):
    code = "InvalidQid"
    http_status = 400


class NotFound(DocmarksError):
    """The remote knowledge base has no entity for the requested id."""

    code = "NotFound"
    http_status = 404


class ReconciliationUnavailable(DocmarksError):
    code = "ReconciliationUnavailable"
    http_status = 502


class DanglingEntityWarning(UserWarning):
    """A span referenced an entity that had no meta block; one was synthesized."""


def error_codes() -> dict:
    """Map every concrete error class to its (code, http_status) pair."""
    out = {}
    stack = [DocmarksError]
    while stack:
        cls = stack.pop()
        for sub in cls.__subclasses__():
            out[sub.__name__] = (sub.code, sub.http_status)
            stack.append(sub)
    return out
