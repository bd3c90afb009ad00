"""docmarks: standoff annotation, concordance indexing, and linked-data
export for scholarly texts."""

from .concordance import (
    ConcordanceConfig,
    ConcordanceEntry,
    ConcordanceStyle,
    SortOrder,
    build_index,
    list_entities,
    render_plain,
)
from .engine import (
    add_alias,
    empty_trash,
    extend_to_word,
    highlight_all_instances,
    mark_selection,
    merge_entities,
    move_mention,
    move_to,
    relabel_entity,
    set_sort_key,
    set_status,
)
from .interchange import export_entities, import_entities
from .metadata import MetadataRecord, validate_metadata
from .model import (
    Category,
    DEFAULT_CATEGORIES,
    Document,
    DocumentStatus,
    Entity,
    Kind,
    Location,
    Mention,
    Span,
    entity_id_from_label,
    new_document,
)
from .rdfa import parse_rdfa, render_rdfa
from .tei import export_tei
from .wikidata import EntityDetails, WikidataCandidate, WikidataClient, link_entity, unlink_entity

__version__ = "0.1.0"

__all__ = [
    "Category",
    "ConcordanceConfig",
    "ConcordanceEntry",
    "ConcordanceStyle",
    "DEFAULT_CATEGORIES",
    "Document",
    "DocumentStatus",
    "Entity",
    "EntityDetails",
    "Kind",
    "Location",
    "Mention",
    "MetadataRecord",
    "SortOrder",
    "Span",
    "WikidataCandidate",
    "WikidataClient",
    "add_alias",
    "build_index",
    "empty_trash",
    "entity_id_from_label",
    "export_entities",
    "export_tei",
    "extend_to_word",
    "highlight_all_instances",
    "import_entities",
    "link_entity",
    "list_entities",
    "mark_selection",
    "merge_entities",
    "move_mention",
    "move_to",
    "new_document",
    "parse_rdfa",
    "relabel_entity",
    "render_plain",
    "render_rdfa",
    "set_sort_key",
    "set_status",
    "unlink_entity",
    "validate_metadata",
    "__version__",
]
