"""Entity interchange: versioned JSON export/import of an entity set.

Lets curated authority lists travel between documents. Import merges by
entity id; for ids already present the imported label, sort key, and
link fields win and aliases are unioned. New ids arrive as active
entities with no mentions. The whole payload is validated before any
mutation so a bad record cannot half-apply.
"""

from __future__ import annotations

import json

from .errors import CategoryMismatch, EntityImportError, UnknownCategory
from .model import Document, Entity, ENTITY_ID_RE, WIKIDATA_QID_RE

SCHEMA_VERSION = 1

_FIELDS = ("entity_id", "label", "sort_key", "category", "wikidata_id", "treccani_id", "aliases")


def export_entities(doc: Document) -> str:
    """JSON text for the document's full entity set (any location), sorted
    by id for stable diffs."""
    records = [
        {
            "entity_id": e.entity_id,
            "label": e.label,
            "sort_key": e.sort_key,
            "category": e.category,
            "wikidata_id": e.wikidata_id,
            "treccani_id": e.treccani_id,
            "aliases": list(e.aliases),
        }
        for e in sorted(doc.entities.values(), key=lambda e: e.entity_id.casefold())
    ]
    return json.dumps(
        {"schema_version": SCHEMA_VERSION, "entities": records},
        ensure_ascii=False,
        indent=2,
    )


def _check_record(index: int, record) -> None:
    where = f"entities[{index}]"
    if not isinstance(record, dict):
        raise EntityImportError(f"{where} must be an object")
    missing = [k for k in _FIELDS if k not in record]
    if missing:
        raise EntityImportError(f"{where} is missing fields: {', '.join(missing)}")
    if not isinstance(record["entity_id"], str) or not ENTITY_ID_RE.match(record["entity_id"]):
        raise EntityImportError(f"{where}.entity_id must look like '#Label'")
    if not isinstance(record["label"], str) or not record["label"].strip():
        raise EntityImportError(f"{where}.label must be a non-empty string")
    if not isinstance(record["sort_key"], str):
        raise EntityImportError(f"{where}.sort_key must be a string")
    if not isinstance(record["category"], str):
        raise EntityImportError(f"{where}.category must be a string")
    for key in ("wikidata_id", "treccani_id"):
        value = record[key]
        if value is not None and not isinstance(value, str):
            raise EntityImportError(f"{where}.{key} must be a string or null")
    if record["wikidata_id"] is not None and not WIKIDATA_QID_RE.match(record["wikidata_id"]):
        raise EntityImportError(f"{where}.wikidata_id must match 'Q<digits>'")
    if record["wikidata_id"] is None and record["treccani_id"] is not None:
        raise EntityImportError(f"{where} has treccani_id without wikidata_id")
    aliases = record["aliases"]
    if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
        raise EntityImportError(f"{where}.aliases must be a list of strings")


def import_entities(doc: Document, payload: str) -> Document:
    """Merge an exported entity set into the document. Raises
    EntityImportError on schema violations and UnknownCategory when a
    record names a category the document does not declare."""
    try:
        data = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise EntityImportError(f"payload is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise EntityImportError("payload must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise EntityImportError(
            f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}"
        )
    records = data.get("entities")
    if not isinstance(records, list):
        raise EntityImportError("entities must be a list")

    # Validate everything up front; imports are all-or-nothing.
    for i, record in enumerate(records):
        _check_record(i, record)
    for record in records:
        if record["category"] not in doc.categories:
            raise UnknownCategory(
                f"document has no category {record['category']!r}", field="category"
            )
        existing = doc.entities.get(record["entity_id"])
        if existing is not None and existing.category != record["category"]:
            raise CategoryMismatch(
                f"{record['entity_id']} is {existing.category!r} here, "
                f"{record['category']!r} in the import"
            )

    for record in records:
        existing = doc.entities.get(record["entity_id"])
        if existing is None:
            doc.entities[record["entity_id"]] = Entity(
                entity_id=record["entity_id"],
                label=record["label"],
                category=record["category"],
                sort_key=record["sort_key"] or record["label"],
                wikidata_id=record["wikidata_id"],
                treccani_id=record["treccani_id"],
                aliases=list(dict.fromkeys(record["aliases"])),
            )
            continue
        existing.label = record["label"]
        existing.sort_key = record["sort_key"] or record["label"]
        existing.wikidata_id = record["wikidata_id"]
        existing.treccani_id = record["treccani_id"]
        for alias in record["aliases"]:
            if alias != existing.label and alias not in existing.aliases:
                existing.aliases.append(alias)
    return doc
