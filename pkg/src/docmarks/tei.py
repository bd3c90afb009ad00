"""TEI P5 export.

Annotation categories map onto TEI naming elements (persName, placeName,
orgName, bibl, quote); unknown categories fall back to the generic
``name`` element. The map is a parameter so projects can re-skin it
without touching the serializer. Each element's ``ref`` carries the
entity id and, when the entity is linked, the full Wikidata IRI as a
second space-separated value.

Header slots come from the document's metadata record; absent fields
render as empty-but-valid elements so the output always validates as
well-formed XML.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .metadata import MetadataRecord, event_date_iso
from .model import Document
from .rdfa import WIKIDATA_ENTITY_BASE

TEI_NS = "http://www.tei-c.org/ns/1.0"

DEFAULT_TEI_ELEMENTS = {
    "People": "persName",
    "Places": "placeName",
    "Organizations": "orgName",
    "Bibliographic references": "bibl",
    "Quotations": "quote",
}
FALLBACK_TEI_ELEMENT = "name"


def _attr(value: str) -> str:
    return escape(value, {'"': "&quot;"})


def _text(value: str) -> str:
    # Newlines become explicit line breaks; TEI collapses raw whitespace.
    return escape(value).replace("\n", "<lb/>\n")


def _ref_for(entity) -> str:
    if entity.wikidata_id is not None:
        return f"{entity.entity_id} {WIKIDATA_ENTITY_BASE}{entity.wikidata_id}"
    return entity.entity_id


def _body(doc: Document, element_map: dict) -> str:
    parts = ["<p>"]
    cursor = 0
    for mention in doc.mentions:
        start, end = mention.span
        entity = doc.entities[mention.entity_id]
        element = element_map.get(mention.category, FALLBACK_TEI_ELEMENT)
        parts.append(_text(doc.text[cursor:start]))
        parts.append(
            f'<{element} ref="{_attr(_ref_for(entity))}">'
            f"{_text(doc.text[start:end])}</{element}>"
        )
        cursor = end
    parts.append(_text(doc.text[cursor:]))
    parts.append("</p>")
    return "".join(parts)


def _header(doc: Document, metadata: MetadataRecord) -> str:
    title_n = f' n="{_attr(metadata.document_number)}"' if metadata.document_number else ""
    provenance = "".join(f"<bibl>{escape(p)}</bibl>" for p in metadata.provenance) or "<bibl/>"
    doc_types = "".join(f"<term>{escape(t)}</term>" for t in metadata.document_type)
    subjects = "".join(f"<term>{escape(t)}</term>" for t in metadata.document_subject)
    when = event_date_iso(metadata.event_date)
    date_attr = f' when="{when}"' if when else ""
    return (
        "<teiHeader>\n"
        "<fileDesc>\n"
        "<titleStmt>\n"
        f"<title{title_n}>{escape(doc.doc_id)}</title>\n"
        f"<author>{escape(metadata.author_role)}</author>\n"
        f"<respStmt><resp>curator</resp><name>{escape(metadata.researcher_curator)}</name></respStmt>\n"
        "</titleStmt>\n"
        f"<publicationStmt><p>{escape(metadata.publication_status)}</p></publicationStmt>\n"
        f"<notesStmt><note>{escape(metadata.additional_notes)}</note></notesStmt>\n"
        f"<sourceDesc>{provenance}</sourceDesc>\n"
        "</fileDesc>\n"
        "<profileDesc>\n"
        f"<abstract><p>{escape(metadata.abstract)}</p></abstract>\n"
        "<creation>\n"
        f"<date{date_attr}>{escape(metadata.event_date)}</date>\n"
        f"<placeName>{escape(metadata.event_place)}</placeName>\n"
        "</creation>\n"
        "<textClass>\n"
        f'<keywords scheme="#document-type">{doc_types}</keywords>\n'
        f'<keywords scheme="#document-subject">{subjects}</keywords>\n'
        "</textClass>\n"
        "</profileDesc>\n"
        "</teiHeader>\n"
    )


def export_tei(doc: Document, metadata: MetadataRecord = None, element_map: dict = None) -> str:
    """Well-formed TEI for the document's live annotation state."""
    metadata = metadata if metadata is not None else MetadataRecord(document_number="")
    element_map = DEFAULT_TEI_ELEMENTS if element_map is None else element_map
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<TEI xmlns="{TEI_NS}">\n'
        f"{_header(doc, metadata)}"
        "<text>\n<body>\n"
        f"{_body(doc, element_map)}\n"
        "</body>\n</text>\n"
        "</TEI>\n"
    )
