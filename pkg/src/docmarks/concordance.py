"""Concordance indexes over annotated documents.

Three presentation styles share one entry structure:

* KWIC: keyword centered between its left and right context windows.
* KWOC: keyword pulled out front, followed by the entire context line.
* KWAC: the line rotated at the keyword; context after the keyword comes
  first, then the wrapped-around preceding context.

The context unit is the newline-delimited line containing the mention.
Context windows count words (maximal non-whitespace runs) and are cut
from the line verbatim, then trimmed of edge whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .errors import EntityTrashed, ValidationError
from .model import Document, Entity, Location

_TOKEN_RE = re.compile(r"\S+")


class ConcordanceStyle(str, Enum):
    KWIC = "KWIC"
    KWOC = "KWOC"
    KWAC = "KWAC"


class SortOrder(str, Enum):
    KEYWORD_THEN_RIGHT = "keyword_then_right"
    POSITION = "position"


@dataclass(frozen=True)
class ConcordanceConfig:
    style: ConcordanceStyle = ConcordanceStyle.KWIC
    window_words: int = 5
    sort: SortOrder = SortOrder.KEYWORD_THEN_RIGHT
    case_fold_sort: bool = True
    kwoc_separator: str = " — "
    kwac_separator: str = " / "

    def __post_init__(self):
        if self.window_words < 1:
            raise ValidationError("window_words must be at least 1", field="window_words")


@dataclass(frozen=True)
class ConcordanceEntry:
    mention_id: str
    keyword: str
    left_context: str
    right_context: str
    line: str
    position: int
    style: ConcordanceStyle


class EntityListing(NamedTuple):
    entity: Entity
    occurrences: int
    wikidata_linked: bool


def _line_bounds(text: str, start: int, end: int):
    # The context line covers the whole mention, even one that crosses a
    # newline: from the line start before `start` to the line end after `end`.
    line_start = text.rfind("\n", 0, start) + 1
    line_end = text.find("\n", end)
    if line_end == -1:
        line_end = len(text)
    return line_start, line_end


def _clip_left(segment: str, window_words: int) -> str:
    tokens = list(_TOKEN_RE.finditer(segment))
    if len(tokens) > window_words:
        segment = segment[tokens[-window_words].start():]
    return segment.strip()


def _clip_right(segment: str, window_words: int) -> str:
    tokens = list(_TOKEN_RE.finditer(segment))
    if len(tokens) > window_words:
        segment = segment[: tokens[window_words - 1].end()]
    return segment.strip()


def _entry_for(doc: Document, mention, cfg: ConcordanceConfig) -> ConcordanceEntry:
    start, end = mention.span
    line_start, line_end = _line_bounds(doc.text, start, end)
    line = doc.text[line_start:line_end]
    return ConcordanceEntry(
        mention_id=mention.mention_id,
        keyword=doc.text[start:end],
        left_context=_clip_left(line[: start - line_start], cfg.window_words),
        right_context=_clip_right(line[end - line_start:], cfg.window_words),
        line=line,
        position=start,
        style=cfg.style,
    )


def build_index(doc: Document, entity_id: str, cfg: ConcordanceConfig = None) -> list:
    """One entry per live mention of the entity, sorted per the config."""
    cfg = cfg or ConcordanceConfig()
    entity = doc.entity(entity_id)
    if entity.location is not Location.ACTIVE:
        raise EntityTrashed(
            f"entity {entity_id!r} is in {entity.location.value}; restore it first"
        )
    entries = [_entry_for(doc, m, cfg) for m in doc.live_mentions_of(entity_id)]
    fold = (lambda s: s.casefold()) if cfg.case_fold_sort else (lambda s: s)
    if cfg.sort is SortOrder.KEYWORD_THEN_RIGHT:
        entries.sort(key=lambda e: (fold(e.keyword), fold(e.right_context), e.position))
    else:
        entries.sort(key=lambda e: e.position)
    return entries


def render_plain(entry: ConcordanceEntry, cfg: ConcordanceConfig = None) -> str:
    """One line of plain text. KWIC delimits the keyword with tabs so the
    column alignment survives any fixed-width display."""
    cfg = cfg or ConcordanceConfig()
    if entry.style is ConcordanceStyle.KWIC:
        return f"{entry.left_context}\t{entry.keyword}\t{entry.right_context}"
    if entry.style is ConcordanceStyle.KWOC:
        return f"{entry.keyword}{cfg.kwoc_separator}{entry.line}"
    head = entry.keyword if not entry.right_context else f"{entry.keyword} {entry.right_context}"
    return f"{head}{cfg.kwac_separator}{entry.left_context}"


def entry_to_dict(entry: ConcordanceEntry, cfg: ConcordanceConfig = None) -> dict:
    return {
        "mention_id": entry.mention_id,
        "keyword": entry.keyword,
        "left_context": entry.left_context,
        "right_context": entry.right_context,
        "line": entry.line,
        "position": entry.position,
        "style": entry.style.value,
        "rendered": render_plain(entry, cfg),
    }


def list_entities(doc: Document, category_name: str) -> list:
    """Active entities of one category, ordered case-insensitively by sort
    key, each with its live occurrence count and link status."""
    doc.category(category_name)
    rows = [
        EntityListing(e, doc.occurrence_count(e.entity_id), e.wikidata_id is not None)
        for e in doc.entities.values()
        if e.category == category_name and e.location is Location.ACTIVE
    ]
    rows.sort(key=lambda r: (r.entity.sort_key.casefold(), r.entity.entity_id))
    return rows
