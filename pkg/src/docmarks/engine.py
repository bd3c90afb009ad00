"""Annotation operations. Every state change to a document goes through
these functions; they keep the model invariants (non-overlap, category
sync, id monotonicity) intact.
"""

from __future__ import annotations

import re

from .errors import (
    CategoryMismatch,
    EmptySelection,
    EntityTrashed,
    InvalidLabel,
    InvalidTransition,
    OverlappingMention,
    SelfMerge,
    ValidationError,
)
from .model import (
    Category,
    Document,
    DocumentStatus,
    Entity,
    Location,
    Mention,
    Span,
    entity_id_from_label,
    is_word_char,
)


def _as_span(doc: Document, sel) -> Span:
    span = Span(*sel)
    if not (0 <= span.start <= span.end <= len(doc.text)):
        raise ValidationError(
            f"selection {span} outside document bounds [0, {len(doc.text)}]",
            field="span",
        )
    return span


def extend_to_word(doc: Document, sel) -> Span:
    """Snap a selection outward to word boundaries.

    A word is a maximal run of alphanumeric characters plus apostrophes.
    Idempotent; an empty selection strictly inside a word grows to that
    word, an empty selection between words comes back unchanged.
    """
    span = _as_span(doc, sel)
    text = doc.text
    start, end = span
    while 0 < start < len(text) and is_word_char(text[start - 1]) and is_word_char(text[start]):
        start -= 1
    while 0 < end < len(text) and is_word_char(text[end - 1]) and is_word_char(text[end]):
        end += 1
    return Span(start, end)


def _on_word_boundaries(text: str, start: int, end: int) -> bool:
    left_ok = start == 0 or not (is_word_char(text[start - 1]) and is_word_char(text[start]))
    right_ok = end == len(text) or not (is_word_char(text[end - 1]) and is_word_char(text[end]))
    return left_ok and right_ok


def _next_free_entity_id(doc: Document, base: str) -> str:
    # Distinct labels can slug to the same id; suffix -2, -3, ... resolves.
    eid = base
    n = 1
    while eid in doc.entities:
        n += 1
        eid = f"{base}-{n}"
    return eid


def _entity_for_surface(doc: Document, surface: str, category: Category) -> Entity:
    """Reuse the active entity whose id the surface slugs to (same category),
    otherwise create a fresh entity, suffixing the id if the slug is taken."""
    base = entity_id_from_label(surface)
    existing = doc.entities.get(base)
    if (
        existing is not None
        and existing.location is Location.ACTIVE
        and existing.category == category.name
    ):
        return existing
    eid = _next_free_entity_id(doc, base)
    entity = Entity(entity_id=eid, label=surface, category=category.name, sort_key=surface)
    doc.entities[eid] = entity
    return entity


def _new_mention(doc: Document, span: Span, entity: Entity, category: Category) -> Mention:
    mention = Mention(
        mention_id=doc.next_mention_id(),
        span=span,
        entity_id=entity.entity_id,
        category=category.name,
        kind=category.kind,
    )
    doc.insert_mention(mention)
    return mention


def mark_selection(doc: Document, sel, category_name: str):
    """Annotate a selection. Returns ``(mention, entity)``; the entity is
    either freshly created from the selected text or the existing active
    entity the text slugs to."""
    span = _as_span(doc, sel)
    if span.start == span.end:
        raise EmptySelection("selection is empty")
    surface = doc.text[span.start:span.end]
    if not surface.strip():
        raise EmptySelection("selection contains only whitespace")
    category = doc.category(category_name)
    if doc.overlapping(span):
        raise OverlappingMention(f"selection {span} overlaps an existing mention")
    entity = _entity_for_surface(doc, surface, category)
    mention = _new_mention(doc, span, entity, category)
    return mention, entity


def highlight_all_instances(
    doc: Document,
    sel,
    category_name: str,
    *,
    whole_word: bool = True,
    case_sensitive: bool = True,
):
    """Mark every non-overlapping occurrence of the selected word(s).

    The selection is first snapped to word boundaries; occurrences are
    scanned left to right, skipping any that would overlap an existing
    mention. All created mentions share one entity: the active entity the
    surface slugs to, or one carrying the surface as an alias, or a new one.
    Returns the created mentions in document order.
    """
    span = extend_to_word(doc, sel)
    if span.start == span.end:
        raise EmptySelection("selection is empty")
    needle = doc.text[span.start:span.end]
    if not needle.strip():
        raise EmptySelection("selection contains only whitespace")
    category = doc.category(category_name)

    flags = 0 if case_sensitive else re.IGNORECASE
    pattern = re.compile(re.escape(needle), flags)
    entity = None
    created = []
    pos = 0
    while (m := pattern.search(doc.text, pos)) is not None:
        start, end = m.start(), m.end()
        if whole_word and not _on_word_boundaries(doc.text, start, end):
            pos = start + 1
            continue
        if doc.overlapping(Span(start, end)):
            pos = start + 1
            continue
        if entity is None:
            entity = _resolve_by_alias(doc, needle, category) or _entity_for_surface(
                doc, needle, category
            )
        created.append(_new_mention(doc, Span(start, end), entity, category))
        pos = end
    return created


def _resolve_by_alias(doc: Document, surface: str, category: Category):
    for entity in doc.entities.values():
        if (
            entity.location is Location.ACTIVE
            and entity.category == category.name
            and surface in entity.aliases
        ):
            return entity
    return None


def merge_entities(doc: Document, source_id: str, target_id: str) -> Entity:
    """Fold ``source`` into ``target``: every mention rebinds, the source's
    label and aliases survive as target aliases, the source is deleted."""
    source = doc.entity(source_id)
    target = doc.entity(target_id)
    if source_id == target_id:
        raise SelfMerge("cannot merge an entity into itself")
    if source.location is not Location.ACTIVE or target.location is not Location.ACTIVE:
        raise EntityTrashed("merge requires both entities to be active")
    if source.category != target.category:
        raise CategoryMismatch(
            f"cannot merge {source.category!r} into {target.category!r}"
        )
    for mention in doc.mentions:
        if mention.entity_id == source_id:
            mention.entity_id = target_id
    for alias in [source.label, *source.aliases]:
        if alias != target.label and alias not in target.aliases:
            target.aliases.append(alias)
    del doc.entities[source_id]
    return target


def move_mention(doc: Document, mention_id: str, target_id: str) -> Mention:
    """Rebind one mention to another entity of the same category. If that
    leaves the old entity without mentions it moves to trash automatically."""
    mention = doc.mention(mention_id)
    target = doc.entity(target_id)
    if mention.entity_id == target_id:
        return mention
    if target.location is not Location.ACTIVE:
        raise EntityTrashed(f"target entity {target_id!r} is in {target.location.value}")
    if target.category != mention.category:
        raise CategoryMismatch(
            f"mention category {mention.category!r} does not match {target.category!r}"
        )
    old = doc.entity(mention.entity_id)
    mention.entity_id = target_id
    if not doc.live_mentions_of(old.entity_id):
        old.location = Location.TRASH
    return mention


def relabel_entity(doc: Document, entity_id: str, new_label: str) -> Entity:
    """Change the display label. The entity id never changes; the sort key
    follows only while it still equals the old label."""
    entity = doc.entity(entity_id)
    if not new_label.strip():
        raise InvalidLabel("label must contain at least one non-space character")
    if entity.sort_key == entity.label:
        entity.sort_key = new_label
    entity.label = new_label
    return entity


def set_sort_key(doc: Document, entity_id: str, sort_key: str) -> Entity:
    entity = doc.entity(entity_id)
    entity.sort_key = sort_key
    return entity


def add_alias(doc: Document, entity_id: str, alias: str) -> Entity:
    """Record an alternate surface for the entity; duplicates and the label
    itself are no-ops."""
    entity = doc.entity(entity_id)
    alias = alias.strip()
    if not alias:
        raise InvalidLabel("alias must contain at least one non-space character")
    if alias != entity.label and alias not in entity.aliases:
        entity.aliases.append(alias)
    return entity


def move_to(doc: Document, entity_id: str, destination) -> Entity:
    """Move an entity between active, scrap, and trash.

    Trashing parks the entity's mentions (suppressed from rendering but
    their spans stay reserved); leaving trash restores them verbatim, so
    trash-then-restore is the identity on serialized output.
    """
    entity = doc.entity(entity_id)
    destination = Location(destination)
    if entity.location is destination:
        raise InvalidTransition(f"entity already in {destination.value}")
    if destination is Location.TRASH:
        entity.parked_mentions = doc.live_mentions_of(entity_id)
        doc.mentions = [m for m in doc.mentions if m.entity_id != entity_id]
    elif entity.location is Location.TRASH:
        for mention in entity.parked_mentions:
            doc.insert_mention(mention)
        entity.parked_mentions = []
    entity.location = destination
    return entity


def empty_trash(doc: Document) -> int:
    """Permanently delete every trashed entity and its parked mentions.
    Returns the number of entities purged; their mention ids are never
    reused."""
    trashed = [eid for eid, e in doc.entities.items() if e.location is Location.TRASH]
    for eid in trashed:
        del doc.entities[eid]
    return len(trashed)


def set_status(doc: Document, status) -> Document:
    """Any status can follow any other; progress tracking is advisory."""
    doc.status = DocumentStatus(status)
    return doc
