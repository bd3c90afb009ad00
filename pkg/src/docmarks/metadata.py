"""Archival metadata records and their validation rules.

One record per document. ``document_number`` is the only required field:
a zero-padded three-digit ordinal between 001 and 999. ``event_date``
accepts either a full day-month-year date (validated against the real
calendar) or a bare four-digit year. Multi-valued fields keep their
insertion order. Validation reports the first offending field by name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from datetime import datetime

from .errors import ValidationError

DOCUMENT_NUMBER_RE = re.compile(r"^\d{3}\Z")
YEAR_RE = re.compile(r"^\d{4}\Z")
DAY_MONTH_YEAR_RE = re.compile(r"^(\d{1,2})-(\d{1,2})-(\d{4})\Z")

PUBLICATION_STATUSES = ("published/edited", "unpublished/unedited")

_LIST_FIELDS = ("document_type", "document_subject", "provenance")


@dataclass
class MetadataRecord:
    document_number: str
    author_role: str = ""
    researcher_curator: str = ""
    abstract: str = ""
    document_type: list = field(default_factory=list)
    document_subject: list = field(default_factory=list)
    publication_status: str = ""
    provenance: list = field(default_factory=list)
    event_place: str = ""
    event_date: str = ""
    additional_notes: str = ""


def _valid_event_date(value: str) -> bool:
    if YEAR_RE.match(value):
        return True
    if DAY_MONTH_YEAR_RE.match(value):
        try:
            datetime.strptime(value, "%d-%m-%Y")
        except ValueError:
            return False
        return True
    return False


def event_date_iso(value: str):
    """ISO form of a valid event date ("13-1-1959" -> "1959-01-13",
    "1959" -> "1959"), or None when the value is empty or unparseable."""
    if YEAR_RE.match(value):
        return value
    m = DAY_MONTH_YEAR_RE.match(value)
    if m:
        try:
            return datetime.strptime(value, "%d-%m-%Y").strftime("%Y-%m-%d")
        except ValueError:
            return None
    return None


def validate_metadata(record: MetadataRecord) -> None:
    """Raise ValidationError naming the first offending field."""
    number = record.document_number
    if not isinstance(number, str) or not DOCUMENT_NUMBER_RE.match(number):
        raise ValidationError(
            "document_number must be a three-digit string", field="document_number"
        )
    if not 1 <= int(number) <= 999:
        raise ValidationError(
            "document_number must fall between 001 and 999", field="document_number"
        )
    for name in (
        "author_role",
        "researcher_curator",
        "abstract",
        "publication_status",
        "event_place",
        "event_date",
        "additional_notes",
    ):
        if not isinstance(getattr(record, name), str):
            raise ValidationError(f"{name} must be a string", field=name)
    for name in _LIST_FIELDS:
        values = getattr(record, name)
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            raise ValidationError(f"{name} must be a list of strings", field=name)
    if record.publication_status and record.publication_status not in PUBLICATION_STATUSES:
        raise ValidationError(
            f"publication_status must be one of {PUBLICATION_STATUSES}",
            field="publication_status",
        )
    if record.event_date and not _valid_event_date(record.event_date):
        raise ValidationError(
            "event_date must be day-month-year or a four-digit year", field="event_date"
        )


def metadata_to_dict(record: MetadataRecord) -> dict:
    return {
        f.name: list(getattr(record, f.name)) if f.name in _LIST_FIELDS else getattr(record, f.name)
        for f in fields(MetadataRecord)
    }


def metadata_from_dict(data: dict) -> MetadataRecord:
    """Build and validate a record from a plain mapping; unknown keys are
    rejected so typos surface instead of silently dropping values."""
    if not isinstance(data, dict):
        raise ValidationError("metadata must be an object", field="metadata")
    known = {f.name for f in fields(MetadataRecord)}
    for key in data:
        if key not in known:
            raise ValidationError(f"unknown metadata field {key!r}", field=key)
    if "document_number" not in data:
        raise ValidationError("document_number is required", field="document_number")
    record = MetadataRecord(**data)
    validate_metadata(record)
    return record
