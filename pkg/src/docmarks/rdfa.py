"""RDFa-in-HTML serialization: the document's interchange form.

The body carries the text with each live mention wrapped in a ``span``;
the head carries one meta group per visible entity. Attribute order and
whitespace are fixed so that rendering is deterministic and byte-stable:

* span attributes: id, typeof, about, class, property, resource
* meta group per entity, in order: typeof, rdfs:label, dcterms:relation
  (the relation meta appears exactly when a Wikidata link is set)

``parse_rdfa`` inverts the rendering. It also accepts foreign HTML: text
nodes become the document text and non-annotation markup is dropped.
"""

from __future__ import annotations

import re
import warnings
from html.parser import HTMLParser

from .errors import DanglingEntityWarning, ParseError
from .model import (
    Category,
    Document,
    DocumentStatus,
    Entity,
    Kind,
    MENTION_ID_RE,
    Mention,
    Span,
    default_categories,
)

PREFIXES = {
    "dcterms": "http://purl.org/dc/terms/",
    "foaf": "http://xmlns.com/foaf/0.1/",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "schema": "http://schema.org/",
}

WIKIDATA_ENTITY_BASE = "http://www.wikidata.org/entity/"

_BODY_TAG_RE = re.compile(r"<body[\s>]", re.IGNORECASE)


def escape_text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def escape_attr(s: str) -> str:
    return escape_text(s).replace('"', "&quot;")


# -- rendering -----------------------------------------------------------


def _render_metas(doc: Document) -> list:
    lines = []
    for entity in doc.entities.values():
        if entity.location.value == "trash":
            continue
        category = doc.categories[entity.category]
        eid = escape_attr(entity.entity_id)
        lines.append(f'<meta about="{eid}" typeof="{category.rdfa_type}">')
        lines.append(
            f'<meta about="{eid}" property="rdfs:label" content="{escape_attr(entity.label)}">'
        )
        if entity.wikidata_id is not None:
            lines.append(
                f'<meta about="{eid}" property="dcterms:relation" '
                f'resource="{WIKIDATA_ENTITY_BASE}{entity.wikidata_id}">'
            )
    return lines


def _render_body(doc: Document) -> str:
    parts = []
    cursor = 0
    for mention in doc.mentions:
        start, end = mention.span
        category = doc.categories[mention.category]
        parts.append(escape_text(doc.text[cursor:start]))
        parts.append(
            f'<span id="{mention.mention_id}"'
            f' typeof="{category.rdfa_type}"'
            f' about="#{mention.mention_id}"'
            f' class="{mention.kind.value} {category.display_class}"'
            f' property="{category.rdfa_property}"'
            f' resource="{escape_attr(mention.entity_id)}"'
            f">{escape_text(doc.text[start:end])}</span>"
        )
        cursor = end
    parts.append(escape_text(doc.text[cursor:]))
    return "".join(parts)


def render_rdfa(doc: Document) -> str:
    """Deterministic full-document render; equal documents give equal bytes."""
    prefix = " ".join(f"{k}: {v}" for k, v in sorted(PREFIXES.items()))
    head = "".join(line + "\n" for line in _render_metas(doc))
    return (
        "<!DOCTYPE html>\n"
        f'<html prefix="{prefix}">\n'
        "<head>\n"
        '<meta charset="utf-8">\n'
        f"<title>{escape_text(doc.doc_id)}</title>\n"
        f"{head}"
        "</head>\n"
        f'<body data-doc-id="{escape_attr(doc.doc_id)}" data-status="{doc.status.value}">'
        f"{_render_body(doc)}</body>\n"
        "</html>\n"
    )


# -- parsing ---------------------------------------------------------------

_MENTION_ATTRS = ("id", "typeof", "about", "class", "property", "resource")


class _Parser(HTMLParser):
    """Streaming reconstruction. Text offsets accumulate as body text nodes
    arrive; spans record their start offset when opened."""

    def __init__(self, capture_everywhere: bool):
        super().__init__(convert_charrefs=True)
        self.capture_everywhere = capture_everywhere
        self.in_body = capture_everywhere
        self.skip_depth = 0  # inside head/script/style/title
        self.parts = []
        self.length = 0
        self.open_span = None  # (attrs, start_offset, pos)
        self.inner_spans = 0  # plain spans nested inside an open mention span
        self.spans = []  # (attrs, start, end, pos)
        self.metas = []  # attrs dicts in document order
        self.body_attrs = {}

    # -- helpers ---------------------------------------------------------

    def _capturing(self) -> bool:
        return self.in_body and self.skip_depth == 0

    def _fail(self, message: str):
        line, col = self.getpos()
        raise ParseError(message, line=line, column=col)

    # -- tag events --------------------------------------------------------

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if tag in ("head", "script", "style", "title"):
            self.skip_depth += 1
            return
        if tag == "body":
            self.in_body = True
            self.body_attrs = attrs
            return
        if tag == "meta":
            self._handle_meta(attrs)
            return
        if tag == "span" and self._capturing():
            self._open_span(attrs)

    def handle_startendtag(self, tag, attrs):
        attrs = dict(attrs)
        if tag == "meta":
            self._handle_meta(attrs)
        elif tag == "span" and self._capturing():
            if "resource" in attrs or MENTION_ID_RE.match(attrs.get("id") or ""):
                self._fail("mention span is empty (self-closing)")

    def handle_endtag(self, tag):
        if tag in ("head", "script", "style", "title"):
            self.skip_depth = max(0, self.skip_depth - 1)
            return
        if tag == "body":
            self.in_body = self.capture_everywhere
            return
        if tag == "span" and self._capturing() and self.open_span is not None:
            if self.inner_spans:
                self.inner_spans -= 1
                return
            attrs, start, pos = self.open_span
            self.spans.append((attrs, start, self.length, pos))
            self.open_span = None

    def handle_data(self, data):
        if self._capturing():
            self.parts.append(data)
            self.length += len(data)

    # -- annotation pieces ---------------------------------------------------

    def _handle_meta(self, attrs):
        about = attrs.get("about")
        if about and about.startswith("#"):
            self.metas.append(attrs)

    def _open_span(self, attrs):
        is_mention = "resource" in attrs or MENTION_ID_RE.match(attrs.get("id") or "")
        if not is_mention:
            if self.open_span is not None:
                self.inner_spans += 1
            return
        if self.open_span is not None:
            self._fail("nested mention spans are not allowed")
        mention_id = attrs.get("id") or ""
        if not MENTION_ID_RE.match(mention_id):
            self._fail(f"mention span has malformed id {mention_id!r}")
        if attrs.get("about") != f"#{mention_id}":
            self._fail(f"mention span about must be '#{mention_id}'")
        resource = attrs.get("resource") or ""
        if not resource.startswith("#"):
            self._fail(f"mention span resource {resource!r} is not an entity id")
        class_tokens = (attrs.get("class") or "").split()
        if len(class_tokens) < 2:
            self._fail("mention span class must carry kind and display class")
        try:
            Kind(class_tokens[0])
        except ValueError:
            self._fail(f"unknown mention kind {class_tokens[0]!r}")
        if not attrs.get("typeof") or not attrs.get("property"):
            self._fail("mention span must carry typeof and property")
        self.open_span = (attrs, self.length, self.getpos())


def _category_for_span(categories: dict, attrs) -> Category:
    kind = Kind(attrs["class"].split()[0])
    display_class = attrs["class"].split()[1]
    for category in categories.values():
        if category.kind is kind and category.display_class == display_class:
            return category
    category = Category(
        name=display_class,
        kind=kind,
        display_class=display_class,
        rdfa_type=attrs["typeof"],
        rdfa_property=attrs.get("property", "dcterms:references"),
    )
    categories[category.name] = category
    return category


def _category_for_type(categories: dict, rdfa_type: str) -> Category:
    for category in categories.values():
        if category.rdfa_type == rdfa_type:
            return category
    local = rdfa_type.split(":")[-1].lower() or "unknown"
    category = Category(
        name=rdfa_type, kind=Kind.MENTION, display_class=local, rdfa_type=rdfa_type
    )
    categories[category.name] = category
    return category


def parse_rdfa(html: str, doc_id: str = None) -> Document:
    """Rebuild a document from annotated HTML.

    Plain HTML without annotations yields its text content and no
    mentions. A span whose resource has no meta group synthesizes the
    entity and emits a DanglingEntityWarning. Malformed mention spans
    raise ParseError with the source location.
    """
    has_body = _BODY_TAG_RE.search(html) is not None
    parser = _Parser(capture_everywhere=not has_body)
    try:
        parser.feed(html)
        parser.close()
    except ParseError:
        raise
    except Exception as exc:  # html.parser rarely raises, but stay typed
        raise ParseError(f"unparseable HTML: {exc}") from exc
    if parser.open_span is not None:
        _, _, pos = parser.open_span
        raise ParseError("mention span never closed", line=pos[0], column=pos[1])

    text = "".join(parser.parts)
    categories = default_categories()
    doc = Document(
        doc_id=doc_id or parser.body_attrs.get("data-doc-id") or "untitled",
        text=text,
        categories=categories,
    )
    try:
        doc.status = DocumentStatus(parser.body_attrs.get("data-status"))
    except ValueError:
        doc.status = DocumentStatus.TO_BE_STARTED

    # Entity records come from the meta groups, in document order.
    meta_entities = {}
    for attrs in parser.metas:
        about = attrs["about"]
        record = meta_entities.setdefault(about, {"typeof": None, "label": None, "qid": None})
        prop = attrs.get("property")
        if prop is None and "typeof" in attrs:
            record["typeof"] = attrs["typeof"]
        elif prop == "rdfs:label":
            record["label"] = attrs.get("content")
        elif prop == "dcterms:relation":
            resource = attrs.get("resource") or ""
            if resource.startswith(WIKIDATA_ENTITY_BASE):
                record["qid"] = resource[len(WIKIDATA_ENTITY_BASE):]

    max_counter = 0
    seen_mention_ids = set()
    for attrs, start, end, pos in parser.spans:
        mention_id = attrs["id"]
        if mention_id in seen_mention_ids:
            raise ParseError(
                f"duplicate mention id {mention_id!r}", line=pos[0], column=pos[1]
            )
        seen_mention_ids.add(mention_id)
        max_counter = max(max_counter, int(MENTION_ID_RE.match(mention_id).group(1)))
        category = _category_for_span(categories, attrs)
        entity_id = attrs["resource"]
        if entity_id not in meta_entities and entity_id not in doc.entities:
            warnings.warn(
                DanglingEntityWarning(
                    f"span {mention_id} references {entity_id!r} with no meta group"
                )
            )
            doc.entities[entity_id] = Entity(
                entity_id=entity_id,
                label=entity_id.lstrip("#"),
                category=category.name,
                sort_key=entity_id.lstrip("#"),
            )
        if entity_id in meta_entities and entity_id not in doc.entities:
            record = meta_entities[entity_id]
            label = record["label"] if record["label"] is not None else entity_id.lstrip("#")
            doc.entities[entity_id] = Entity(
                entity_id=entity_id,
                label=label,
                category=category.name,
                sort_key=label,
                wikidata_id=record["qid"],
            )
        doc.insert_mention(
            Mention(
                mention_id=mention_id,
                span=Span(start, end),
                entity_id=entity_id,
                category=doc.entities[entity_id].category,
                kind=doc.categories[doc.entities[entity_id].category].kind,
            )
        )

    # Meta groups with no mentions still carry entities (imported authority
    # records); keep them, in meta order.
    ordered = {}
    for about, record in meta_entities.items():
        if about in doc.entities:
            ordered[about] = doc.entities[about]
            continue
        label = record["label"] if record["label"] is not None else about.lstrip("#")
        category = _category_for_type(categories, record["typeof"] or "foaf:Organization")
        ordered[about] = Entity(
            entity_id=about,
            label=label,
            category=category.name,
            sort_key=label,
            wikidata_id=record["qid"],
        )
    for about, entity in doc.entities.items():
        if about not in ordered:
            ordered[about] = entity
    doc.entities = ordered
    doc.mention_counter = max_counter
    doc.validate()
    return doc
