"""Core document model: text, mention spans, entities, categories.

Offsets are Unicode scalar values (Python string indexes), start inclusive,
end exclusive. Mentions of two kinds point at entities: "mention" categories
name things in the world (people, places, organizations), "reference"
categories mark textual objects (bibliographic references, quotations).
All mutation goes through the engine module; these types hold state and
enforce their own local invariants.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .errors import (
    InvalidLabel,
    UnknownCategory,
    UnknownEntity,
    UnknownMention,
)

WIKIDATA_QID_RE = re.compile(r"^Q\d+\Z")
MENTION_ID_RE = re.compile(r"^mention-([1-9]\d*)\Z")
ENTITY_ID_RE = re.compile(r"^#\S+\Z")

# Apostrophes belong to words ("l'Italia", "dell'uomo"), both straight and
# typographic.
_WORD_EXTRA = "'’"


def is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch in _WORD_EXTRA


class Kind(str, Enum):
    MENTION = "mention"
    REFERENCE = "reference"


class Location(str, Enum):
    ACTIVE = "active"
    SCRAP = "scrap"
    TRASH = "trash"


class DocumentStatus(str, Enum):
    TO_BE_STARTED = "ToBeStarted"
    IN_PROGRESS = "InProgress"
    FINISHED = "Finished"


class Span(NamedTuple):
    """Half-open [start, end) interval in scalar-value offsets."""

    start: int
    end: int

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class Category:
    """An annotation category. ``rdfa_type`` is the CURIE emitted as the
    ontology class of entities in this category; ``rdfa_property`` links
    mention spans to their entity."""

    name: str
    kind: Kind
    display_class: str
    rdfa_type: str
    rdfa_property: str = "dcterms:references"


DEFAULT_CATEGORIES = (
    Category("People", Kind.MENTION, "person", "foaf:Person"),
    Category("Places", Kind.MENTION, "place", "dcterms:Location"),
    Category("Organizations", Kind.MENTION, "organization", "foaf:Organization"),
    Category(
        "Bibliographic references",
        Kind.REFERENCE,
        "bibliographic",
        "dcterms:BibliographicResource",
    ),
    Category("Quotations", Kind.REFERENCE, "quotation", "schema:Quotation"),
)


@dataclass
class Mention:
    """One annotated span. ``category`` is a denormalized copy of the
    entity's category name and must stay equal to it."""

    mention_id: str
    span: Span
    entity_id: str
    category: str
    kind: Kind


@dataclass
class Entity:
    """A document-local referent shared by one or more mentions.

    ``parked_mentions`` holds the mention records of a trashed entity;
    they leave the document's live mention list so nothing renders or
    counts them, but their spans stay reserved so restoring the entity
    can never collide.
    """

    entity_id: str
    label: str
    category: str
    sort_key: str
    wikidata_id: Optional[str] = None
    treccani_id: Optional[str] = None
    location: Location = Location.ACTIVE
    aliases: list = field(default_factory=list)
    parked_mentions: list = field(default_factory=list)


def entity_id_from_label(label: str) -> str:
    """Slug for an entity id: "#" plus the label with whitespace removed and
    the first letter of every word upper-cased. Deterministic and preserves
    non-ASCII letters ("Café Rouge" -> "#CaféRouge")."""
    words = label.split()
    if not words:
        raise InvalidLabel("label must contain at least one non-space character")
    return "#" + "".join(w[0].upper() + w[1:] for w in words)


@dataclass
class Document:
    doc_id: str
    text: str
    mentions: list = field(default_factory=list)
    entities: dict = field(default_factory=dict)
    categories: dict = field(default_factory=dict)
    status: DocumentStatus = DocumentStatus.TO_BE_STARTED
    metadata_id: Optional[str] = None
    mention_counter: int = 0

    # -- lookups ---------------------------------------------------------

    def category(self, name: str) -> Category:
        try:
            return self.categories[name]
        except KeyError:
            raise UnknownCategory(f"no category named {name!r}", field="category") from None

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise UnknownEntity(f"no entity {entity_id!r} in document") from None

    def mention(self, mention_id: str) -> Mention:
        for m in self.mentions:
            if m.mention_id == mention_id:
                return m
        raise UnknownMention(f"no mention {mention_id!r} in document")

    # -- mention bookkeeping ----------------------------------------------

    def next_mention_id(self) -> str:
        """Ids are monotonic for the life of the document and never reused,
        even after a purge."""
        self.mention_counter += 1
        return f"mention-{self.mention_counter}"

    def insert_mention(self, mention: Mention) -> None:
        bisect.insort(self.mentions, mention, key=lambda m: m.span.start)

    def live_mentions_of(self, entity_id: str) -> list:
        return [m for m in self.mentions if m.entity_id == entity_id]

    def occurrence_count(self, entity_id: str) -> int:
        entity = self.entity(entity_id)
        if entity.location is Location.TRASH:
            return len(entity.parked_mentions)
        return len(self.live_mentions_of(entity_id))

    def reserved_spans(self):
        """All spans that block a new mention: live ones plus spans parked
        on trashed entities (those must stay free for restore)."""
        for m in self.mentions:
            yield m.span
        for entity in self.entities.values():
            for m in entity.parked_mentions:
                yield m.span

    def overlapping(self, span: Span) -> bool:
        return any(span.overlaps(s) for s in self.reserved_spans())

    # -- consistency ------------------------------------------------------

    def validate(self) -> None:
        """Check every structural invariant; raise ValueError on the first
        violation. Used by tests and by the parser after reconstruction."""
        n = len(self.text)
        seen_ids = set()
        all_mentions = list(self.mentions)
        for entity in self.entities.values():
            all_mentions.extend(entity.parked_mentions)
        for m in all_mentions:
            if not MENTION_ID_RE.match(m.mention_id):
                raise ValueError(f"bad mention id {m.mention_id!r}")
            if m.mention_id in seen_ids:
                raise ValueError(f"duplicate mention id {m.mention_id!r}")
            seen_ids.add(m.mention_id)
            if not (0 <= m.span.start < m.span.end <= n):
                raise ValueError(f"span {m.span} out of bounds for {m.mention_id}")
            if m.entity_id not in self.entities:
                raise ValueError(f"{m.mention_id} references unknown entity {m.entity_id!r}")
            if self.entities[m.entity_id].category != m.category:
                raise ValueError(f"{m.mention_id} category copy out of sync")
        ordered = sorted((m.span for m in all_mentions))
        for a, b in zip(ordered, ordered[1:]):
            if a.end > b.start:
                raise ValueError(f"overlapping spans {a} and {b}")
        for m in self.mentions:
            if self.entities[m.entity_id].location is Location.TRASH:
                raise ValueError(f"live mention {m.mention_id} references trashed entity")
        for entity in self.entities.values():
            if not ENTITY_ID_RE.match(entity.entity_id):
                raise ValueError(f"bad entity id {entity.entity_id!r}")
            if entity.category not in self.categories:
                raise ValueError(f"entity {entity.entity_id} has unknown category")
            if entity.treccani_id is not None and entity.wikidata_id is None:
                raise ValueError(f"entity {entity.entity_id} has treccani_id without wikidata_id")
            if entity.parked_mentions and entity.location is not Location.TRASH:
                raise ValueError(f"entity {entity.entity_id} parks mentions while {entity.location}")
            if entity.wikidata_id is not None and not WIKIDATA_QID_RE.match(entity.wikidata_id):
                raise ValueError(f"bad wikidata id {entity.wikidata_id!r}")


def default_categories() -> dict:
    return {c.name: c for c in DEFAULT_CATEGORIES}


def new_document(doc_id: str, text: str, categories=None) -> Document:
    """Fresh document with the default (or a custom) category set."""
    cats = default_categories() if categories is None else {c.name: c for c in categories}
    names = [c.name for c in (categories or DEFAULT_CATEGORIES)]
    if len(set(names)) != len(names):
        raise ValueError("category names must be unique")
    return Document(doc_id=doc_id, text=text, categories=cats)
