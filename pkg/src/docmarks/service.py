"""JSON HTTP service exposing the annotation engine under /api/v1.

The server keeps an in-memory working copy per document; annotation
routes mutate the working copy and nothing touches disk until the save
route runs, which checks the client's base revision against the store
(stale saves get 409). One writer mutates a given document at a time
(per-document locks). Every mutating route requires a bearer token.

Errors leave as a uniform envelope::

    {"error": {"code": "...", "message": "...", "field": "..."?}}
"""

from __future__ import annotations

import secrets
import threading
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, RedirectResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import engine
from .auth import DEFAULT_TTL_SECONDS, AuthManager
from .concordance import (
    ConcordanceConfig,
    ConcordanceStyle,
    SortOrder,
    build_index,
    entry_to_dict,
    list_entities,
)
from .errors import DocmarksError, InvalidToken, ValidationError
from .interchange import export_entities, import_entities
from .metadata import metadata_from_dict, metadata_to_dict
from .model import Document, DocumentStatus, Entity, Location, Mention, new_document
from .rdfa import parse_rdfa, render_rdfa
from .store import DocumentStore, UserStore, check_doc_id
from .tei import export_tei
from .wikidata import WikidataClient, link_entity, unlink_entity

API_PREFIX = "/api/v1"


# -- request bodies ------------------------------------------------------------


class LoginBody(BaseModel):
    username: str
    password: str


class ChangePasswordBody(BaseModel):
    old_password: str
    new_password: str


class UploadBody(BaseModel):
    doc_id: str
    content: str
    content_type: str = "auto"


class StatusBody(BaseModel):
    status: str


class SaveBody(BaseModel):
    base_revision: int


class MarkBody(BaseModel):
    start: int
    end: int
    category: str


class MergeBody(BaseModel):
    source: str
    target: str


class MoveBody(BaseModel):
    target: str


class LabelBody(BaseModel):
    label: str


class SortKeyBody(BaseModel):
    sort_key: str


class AliasBody(BaseModel):
    alias: str


class LocationBody(BaseModel):
    location: str


class LinkBody(BaseModel):
    qid: str


# -- serialization helpers -------------------------------------------------------


def _mention_dict(doc: Document, m: Mention) -> dict:
    return {
        "mention_id": m.mention_id,
        "start": m.span.start,
        "end": m.span.end,
        "entity_id": m.entity_id,
        "category": m.category,
        "kind": m.kind.value,
        "text": doc.text[m.span.start:m.span.end],
    }


def _entity_dict(doc: Document, e: Entity) -> dict:
    return {
        "entity_id": e.entity_id,
        "label": e.label,
        "sort_key": e.sort_key,
        "category": e.category,
        "kind": doc.categories[e.category].kind.value,
        "wikidata_id": e.wikidata_id,
        "treccani_id": e.treccani_id,
        "location": e.location.value,
        "aliases": list(e.aliases),
        "occurrences": doc.occurrence_count(e.entity_id),
        "wikidata_linked": e.wikidata_id is not None,
    }


def _doc_info(app: FastAPI, doc: Document) -> dict:
    return {
        "doc_id": doc.doc_id,
        "status": doc.status.value,
        "revision": app.state.store.revision(doc.doc_id),
        "mentions": len(doc.mentions),
        "entities": len(doc.entities),
        "metadata": app.state.store.load_metadata(doc.doc_id) is not None,
    }


def _parse_enum(enum_cls, value, field: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ValidationError(f"{field} must be one of: {allowed}", field=field) from None


# -- app construction --------------------------------------------------------------


def create_app(
    storage_root,
    *,
    token_secret: Optional[str] = None,
    token_ttl: int = DEFAULT_TTL_SECONDS,
    wikidata_client: Optional[WikidataClient] = None,
    clock=time.time,
    ui_dir=None,
) -> FastAPI:
    app = FastAPI(title="docmarks", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = DocumentStore(storage_root)
    app.state.users = UserStore(storage_root)
    # An ephemeral secret still works for a single process; restarts then
    # invalidate outstanding tokens, which is the safe failure mode.
    app.state.auth = AuthManager(
        token_secret or secrets.token_hex(32), ttl_seconds=token_ttl, clock=clock
    )
    app.state.wikidata = wikidata_client or WikidataClient()
    app.state.working = {}
    app.state.doc_locks = {}
    app.state.registry_lock = threading.Lock()

    @contextmanager
    def doc_lock(doc_id: str):
        with app.state.registry_lock:
            lock = app.state.doc_locks.setdefault(doc_id, threading.Lock())
        with lock:
            yield

    def working(doc_id: str) -> Document:
        doc = app.state.working.get(doc_id)
        if doc is None:
            doc, _ = app.state.store.load(doc_id)  # raises UnknownDocument
            if app.state.store.load_metadata(doc_id) is not None:
                doc.metadata_id = doc_id
            app.state.working[doc_id] = doc
        return doc

    def require_token(request: Request) -> dict:
        header = request.headers.get("authorization") or ""
        if not header.lower().startswith("bearer "):
            raise InvalidToken("missing bearer token")
        return app.state.auth.verify(header[7:].strip())

    def entity_id_param(entity_id: str) -> str:
        # Paths accept the id with or without the leading '#' so clients
        # are not forced to percent-encode it.
        return entity_id if entity_id.startswith("#") else f"#{entity_id}"

    # -- error envelope ---------------------------------------------------

    @app.exception_handler(DocmarksError)
    async def domain_error(request: Request, exc: DocmarksError):
        return JSONResponse(status_code=exc.http_status, content={"error": exc.to_payload()})

    @app.exception_handler(RequestValidationError)
    async def body_error(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        field = None
        if errors:
            loc = [str(p) for p in errors[0].get("loc", []) if p != "body"]
            field = ".".join(loc) or None
        message = errors[0].get("msg", "invalid request") if errors else "invalid request"
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "ValidationError", "message": message, "field": field}},
        )

    # -- health ------------------------------------------------------------

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {"ok": True}

    # -- auth ----------------------------------------------------------------

    @app.post(f"{API_PREFIX}/auth/login")
    def login(body: LoginBody):
        role = app.state.users.authenticate(body.username, body.password)
        token = app.state.auth.issue(body.username, role)
        return {"token": token, "role": role, "expires_in": app.state.auth.ttl_seconds}

    @app.post(f"{API_PREFIX}/auth/change-password")
    def change_password(body: ChangePasswordBody, claims: dict = Depends(require_token)):
        app.state.users.change_password(claims["sub"], body.old_password, body.new_password)
        return {"ok": True}

    # -- documents --------------------------------------------------------------

    @app.get(f"{API_PREFIX}/documents")
    def list_documents(status: Optional[str] = None, q: Optional[str] = None):
        wanted = _parse_enum(DocumentStatus, status, "status") if status is not None else None
        docs = []
        for doc_id in app.state.store.list_ids():
            doc = working(doc_id)
            if wanted is not None and doc.status is not wanted:
                continue
            if q and q.lower() not in doc_id.lower():
                continue
            docs.append(_doc_info(app, doc))
        return {"documents": docs}

    @app.post(f"{API_PREFIX}/documents", status_code=201)
    def upload_document(body: UploadBody, claims: dict = Depends(require_token)):
        check_doc_id(body.doc_id)
        if body.content_type not in ("auto", "text", "html"):
            raise ValidationError(
                "content_type must be auto, text, or html", field="content_type"
            )
        as_html = body.content_type == "html" or (
            body.content_type == "auto"
            and body.content.lstrip()[:15].lower().startswith(("<!doctype", "<html"))
        )
        if as_html:
            doc = parse_rdfa(body.content, doc_id=body.doc_id)
        else:
            doc = new_document(body.doc_id, body.content)
        app.state.store.create(doc)
        app.state.working[body.doc_id] = doc
        return _doc_info(app, doc)

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}")
    def document_info(doc_id: str):
        return _doc_info(app, working(doc_id))

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/text")
    def document_text(doc_id: str):
        return {"text": working(doc_id).text}

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/html")
    def document_html(doc_id: str):
        return Response(render_rdfa(working(doc_id)), media_type="text/html; charset=utf-8")

    @app.put(f"{API_PREFIX}/documents/{{doc_id}}/status")
    def set_status(doc_id: str, body: StatusBody, claims: dict = Depends(require_token)):
        status = _parse_enum(DocumentStatus, body.status, "status")
        with doc_lock(doc_id):
            doc = working(doc_id)
            engine.set_status(doc, status)
            return _doc_info(app, doc)

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/save")
    def save_document(doc_id: str, body: SaveBody, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            revision = app.state.store.save(doc, base_revision=body.base_revision)
            return {"doc_id": doc_id, "revision": revision}

    # -- annotation ----------------------------------------------------------------

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/extend")
    def extend(doc_id: str, start: int, end: int):
        span = engine.extend_to_word(working(doc_id), (start, end))
        return {"start": span.start, "end": span.end}

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/mentions")
    def list_mentions(doc_id: str):
        doc = working(doc_id)
        return {"mentions": [_mention_dict(doc, m) for m in doc.mentions]}

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/mentions", status_code=201)
    def mark(doc_id: str, body: MarkBody, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            mention, entity = engine.mark_selection(doc, (body.start, body.end), body.category)
            return {"mention": _mention_dict(doc, mention), "entity": _entity_dict(doc, entity)}

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/highlight-all", status_code=201)
    def highlight_all(doc_id: str, body: MarkBody, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            mentions = engine.highlight_all_instances(
                doc, (body.start, body.end), body.category
            )
            entity = doc.entities[mentions[0].entity_id] if mentions else None
            return {
                "mentions": [_mention_dict(doc, m) for m in mentions],
                "entity": _entity_dict(doc, entity) if entity else None,
            }

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/merge")
    def merge(doc_id: str, body: MergeBody, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = engine.merge_entities(
                doc, entity_id_param(body.source), entity_id_param(body.target)
            )
            return {"entity": _entity_dict(doc, entity)}

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/mentions/{{mention_id}}/move")
    def move_mention(
        doc_id: str, mention_id: str, body: MoveBody, claims: dict = Depends(require_token)
    ):
        with doc_lock(doc_id):
            doc = working(doc_id)
            mention = engine.move_mention(doc, mention_id, entity_id_param(body.target))
            return {"mention": _mention_dict(doc, mention)}

    @app.put(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/label")
    def relabel(
        doc_id: str, entity_id: str, body: LabelBody, claims: dict = Depends(require_token)
    ):
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = engine.relabel_entity(doc, entity_id_param(entity_id), body.label)
            return {"entity": _entity_dict(doc, entity)}

    @app.put(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/sort-key")
    def set_sort_key(
        doc_id: str, entity_id: str, body: SortKeyBody, claims: dict = Depends(require_token)
    ):
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = engine.set_sort_key(doc, entity_id_param(entity_id), body.sort_key)
            return {"entity": _entity_dict(doc, entity)}

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/aliases")
    def add_alias(
        doc_id: str, entity_id: str, body: AliasBody, claims: dict = Depends(require_token)
    ):
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = engine.add_alias(doc, entity_id_param(entity_id), body.alias)
            return {"entity": _entity_dict(doc, entity)}

    @app.put(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/location")
    def set_location(
        doc_id: str, entity_id: str, body: LocationBody, claims: dict = Depends(require_token)
    ):
        location = _parse_enum(Location, body.location, "location")
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = engine.move_to(doc, entity_id_param(entity_id), location)
            return {"entity": _entity_dict(doc, entity)}

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/empty-trash")
    def empty_trash(doc_id: str, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            return {"purged": engine.empty_trash(working(doc_id))}

    # -- entities and concordance -----------------------------------------------------

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/categories")
    def categories(doc_id: str):
        doc = working(doc_id)
        return {
            "categories": [
                {"name": c.name, "kind": c.kind.value, "display_class": c.display_class}
                for c in doc.categories.values()
            ]
        }

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/entities")
    def entities(doc_id: str, category: Optional[str] = None, location: str = "active"):
        doc = working(doc_id)
        where = _parse_enum(Location, location, "location")
        if category is not None and where is Location.ACTIVE:
            rows = list_entities(doc, category)
            return {"entities": [_entity_dict(doc, r.entity) for r in rows]}
        if category is not None:
            doc.category(category)
        rows = [
            e
            for e in doc.entities.values()
            if e.location is where and (category is None or e.category == category)
        ]
        rows.sort(key=lambda e: (e.sort_key.casefold(), e.entity_id))
        return {"entities": [_entity_dict(doc, e) for e in rows]}

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}")
    def entity_detail(doc_id: str, entity_id: str):
        doc = working(doc_id)
        return {"entity": _entity_dict(doc, doc.entity(entity_id_param(entity_id)))}

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/concordance")
    def concordance(
        doc_id: str,
        entity_id: str,
        style: str = "KWIC",
        window: int = 5,
        sort: str = "keyword_then_right",
        case_fold: bool = True,
    ):
        cfg = ConcordanceConfig(
            style=_parse_enum(ConcordanceStyle, style.upper(), "style"),
            window_words=window,
            sort=_parse_enum(SortOrder, sort, "sort"),
            case_fold_sort=case_fold,
        )
        doc = working(doc_id)
        entries = build_index(doc, entity_id_param(entity_id), cfg)
        return {
            "style": cfg.style.value,
            "window_words": cfg.window_words,
            "entries": [entry_to_dict(e, cfg) for e in entries],
        }

    # -- export and import ---------------------------------------------------------------

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/export/html")
    def export_html(doc_id: str):
        return Response(
            render_rdfa(working(doc_id)),
            media_type="text/html; charset=utf-8",
            headers={"Content-Disposition": f'attachment; filename="{doc_id}.html"'},
        )

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/export/tei")
    def export_tei_route(doc_id: str):
        doc = working(doc_id)
        metadata = app.state.store.load_metadata(doc_id)
        return Response(
            export_tei(doc, metadata),
            media_type="application/xml; charset=utf-8",
            headers={"Content-Disposition": f'attachment; filename="{doc_id}.xml"'},
        )

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/export/entities")
    def export_entities_route(doc_id: str):
        return Response(
            export_entities(working(doc_id)),
            media_type="application/json; charset=utf-8",
            headers={"Content-Disposition": f'attachment; filename="{doc_id}-entities.json"'},
        )

    @app.post(f"{API_PREFIX}/documents/{{doc_id}}/import/entities")
    async def import_entities_route(
        doc_id: str, request: Request, claims: dict = Depends(require_token)
    ):
        payload = (await request.body()).decode("utf-8", errors="replace")
        with doc_lock(doc_id):
            doc = working(doc_id)
            import_entities(doc, payload)
            return {"entities": len(doc.entities)}

    # -- reconciliation ---------------------------------------------------------------------

    @app.get(f"{API_PREFIX}/reconcile/search")
    def reconcile_search(label: str, limit: int = 10):
        candidates = app.state.wikidata.search_candidates(label, limit=limit)
        return {
            "candidates": [
                {
                    "qid": c.qid,
                    "label": c.label,
                    "description": c.description,
                    "match_score": c.match_score,
                }
                for c in candidates
            ]
        }

    @app.get(f"{API_PREFIX}/reconcile/entity/{{qid}}")
    def reconcile_entity(qid: str):
        details = app.state.wikidata.fetch_details(qid)
        return {
            "qid": details.qid,
            "label": details.label,
            "description": details.description,
            "treccani_id": details.treccani_id,
        }

    @app.put(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/wikidata")
    def link(doc_id: str, entity_id: str, body: LinkBody, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = link_entity(doc, entity_id_param(entity_id), body.qid, app.state.wikidata)
            return {"entity": _entity_dict(doc, entity)}

    @app.delete(f"{API_PREFIX}/documents/{{doc_id}}/entities/{{entity_id}}/wikidata")
    def unlink(doc_id: str, entity_id: str, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            entity = unlink_entity(doc, entity_id_param(entity_id))
            return {"entity": _entity_dict(doc, entity)}

    # -- metadata -------------------------------------------------------------------------------

    @app.get(f"{API_PREFIX}/documents/{{doc_id}}/metadata")
    def get_metadata(doc_id: str):
        working(doc_id)
        record = app.state.store.load_metadata(doc_id)
        return {"metadata": metadata_to_dict(record) if record else None}

    @app.put(f"{API_PREFIX}/documents/{{doc_id}}/metadata")
    def put_metadata(doc_id: str, body: dict, claims: dict = Depends(require_token)):
        with doc_lock(doc_id):
            doc = working(doc_id)
            record = app.state.store.upsert_metadata(doc_id, metadata_from_dict(body))
            doc.metadata_id = doc_id
            return {"metadata": metadata_to_dict(record)}

    # -- static UI ---------------------------------------------------------------------------------

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        @app.get("/")
        def index():
            return RedirectResponse(url="/ui/")

    return app
