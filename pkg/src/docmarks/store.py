"""File-backed persistence.

Layout under the storage root:

    users.json                     account records (hashed passwords)
    docs/<doc_id>/state.json       full annotation state + revision number
    docs/<doc_id>/document.html    current render, for inspection/interop
    docs/<doc_id>/metadata.json    archival metadata record
    docs/<doc_id>/revisions.log    JSONL append-only save history

Revisions are per-document, strictly increasing integers. A save that
names a stale base revision is rejected with ConflictError, which is how
lost updates are prevented without locks across processes. Writes are
atomic (temp file + rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from pathlib import Path

from .auth import check_role, hash_password, verify_password
from .errors import (
    ConflictError,
    DuplicateDocument,
    InvalidCredentials,
    StorageError,
    UnknownDocument,
    ValidationError,
)
from .metadata import MetadataRecord, metadata_from_dict, metadata_to_dict, validate_metadata
from .model import (
    Category,
    Document,
    DocumentStatus,
    Entity,
    Kind,
    Location,
    Mention,
    Span,
)
from .rdfa import render_rdfa

STATE_SCHEMA = 1
DOC_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,127}\Z")


def check_doc_id(doc_id: str) -> str:
    if not isinstance(doc_id, str) or not DOC_ID_RE.match(doc_id):
        raise ValidationError(
            "doc_id must be 1-128 characters of letters, digits, '.', '_' or '-'",
            field="doc_id",
        )
    return doc_id


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


# -- state (de)serialization --------------------------------------------------


def _mention_state(m: Mention) -> dict:
    return {
        "mention_id": m.mention_id,
        "start": m.span.start,
        "end": m.span.end,
        "entity_id": m.entity_id,
        "category": m.category,
        "kind": m.kind.value,
    }


def _mention_from_state(data: dict) -> Mention:
    return Mention(
        mention_id=data["mention_id"],
        span=Span(data["start"], data["end"]),
        entity_id=data["entity_id"],
        category=data["category"],
        kind=Kind(data["kind"]),
    )


def document_to_state(doc: Document) -> dict:
    return {
        "schema": STATE_SCHEMA,
        "doc_id": doc.doc_id,
        "text": doc.text,
        "status": doc.status.value,
        "metadata_id": doc.metadata_id,
        "mention_counter": doc.mention_counter,
        "categories": [
            {
                "name": c.name,
                "kind": c.kind.value,
                "display_class": c.display_class,
                "rdfa_type": c.rdfa_type,
                "rdfa_property": c.rdfa_property,
            }
            for c in doc.categories.values()
        ],
        "mentions": [_mention_state(m) for m in doc.mentions],
        "entities": [
            {
                "entity_id": e.entity_id,
                "label": e.label,
                "category": e.category,
                "sort_key": e.sort_key,
                "wikidata_id": e.wikidata_id,
                "treccani_id": e.treccani_id,
                "location": e.location.value,
                "aliases": list(e.aliases),
                "parked_mentions": [_mention_state(m) for m in e.parked_mentions],
            }
            for e in doc.entities.values()
        ],
    }


def document_from_state(state: dict) -> Document:
    if state.get("schema") != STATE_SCHEMA:
        raise StorageError(f"unsupported state schema {state.get('schema')!r}")
    doc = Document(
        doc_id=state["doc_id"],
        text=state["text"],
        status=DocumentStatus(state["status"]),
        metadata_id=state.get("metadata_id"),
        mention_counter=state["mention_counter"],
        categories={
            c["name"]: Category(
                name=c["name"],
                kind=Kind(c["kind"]),
                display_class=c["display_class"],
                rdfa_type=c["rdfa_type"],
                rdfa_property=c["rdfa_property"],
            )
            for c in state["categories"]
        },
    )
    for m in state["mentions"]:
        doc.insert_mention(_mention_from_state(m))
    for e in state["entities"]:
        doc.entities[e["entity_id"]] = Entity(
            entity_id=e["entity_id"],
            label=e["label"],
            category=e["category"],
            sort_key=e["sort_key"],
            wikidata_id=e["wikidata_id"],
            treccani_id=e["treccani_id"],
            location=Location(e["location"]),
            aliases=list(e["aliases"]),
            parked_mentions=[_mention_from_state(m) for m in e["parked_mentions"]],
        )
    return doc


# -- document store ------------------------------------------------------------


class DocumentStore:
    def __init__(self, root):
        self.root = Path(root)
        self.docs_dir = self.root / "docs"
        try:
            self.docs_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create storage root {root}: {exc}") from exc

    def _doc_dir(self, doc_id: str) -> Path:
        return self.docs_dir / check_doc_id(doc_id)

    def exists(self, doc_id: str) -> bool:
        return (self._doc_dir(doc_id) / "state.json").exists()

    def list_ids(self) -> list:
        if not self.docs_dir.exists():
            return []
        return sorted(
            p.name for p in self.docs_dir.iterdir() if (p / "state.json").exists()
        )

    def revision(self, doc_id: str) -> int:
        return self._read_state(doc_id)["revision"]

    def _read_state(self, doc_id: str) -> dict:
        path = self._doc_dir(doc_id) / "state.json"
        if not path.exists():
            raise UnknownDocument(f"no document {doc_id!r} in storage")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"cannot read state for {doc_id!r}: {exc}") from exc

    def _write(self, doc: Document, revision: int) -> None:
        doc_dir = self._doc_dir(doc.doc_id)
        doc_dir.mkdir(parents=True, exist_ok=True)
        state = document_to_state(doc)
        envelope = {"revision": revision, "saved_at": time.time(), "document": state}
        body = json.dumps(envelope, ensure_ascii=False, indent=2)
        _write_atomic(doc_dir / "state.json", body)
        _write_atomic(doc_dir / "document.html", render_rdfa(doc))
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        try:
            with open(doc_dir / "revisions.log", "a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {"revision": revision, "saved_at": envelope["saved_at"], "sha256": digest}
                    )
                    + "\n"
                )
        except OSError as exc:
            raise StorageError(f"cannot append revision log: {exc}") from exc

    def create(self, doc: Document) -> int:
        """First save of a new document; revision 1."""
        if self.exists(doc.doc_id):
            raise DuplicateDocument(f"document {doc.doc_id!r} already exists")
        self._write(doc, 1)
        return 1

    def save(self, doc: Document, base_revision=None) -> int:
        """Persist a new revision. When ``base_revision`` is given it must
        equal the current revision, otherwise the save is stale and
        rejected."""
        current = self.revision(doc.doc_id)
        if base_revision is not None and base_revision != current:
            raise ConflictError(
                f"stale save: base revision {base_revision}, current {current}",
                field="base_revision",
            )
        revision = current + 1
        self._write(doc, revision)
        return revision

    def load(self, doc_id: str):
        """Returns ``(document, revision)`` for the latest saved state."""
        envelope = self._read_state(doc_id)
        doc = document_from_state(envelope["document"])
        return doc, envelope["revision"]

    # -- metadata ---------------------------------------------------------

    def load_metadata(self, doc_id: str):
        path = self._doc_dir(doc_id) / "metadata.json"
        if not path.exists():
            return None
        try:
            return metadata_from_dict(json.loads(path.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"cannot read metadata for {doc_id!r}: {exc}") from exc

    def upsert_metadata(self, doc_id: str, record: MetadataRecord) -> MetadataRecord:
        """Validate and persist the document's metadata record (one per
        document; a later upsert replaces the earlier one)."""
        if not self.exists(doc_id):
            raise UnknownDocument(f"no document {doc_id!r} in storage")
        validate_metadata(record)
        _write_atomic(
            self._doc_dir(doc_id) / "metadata.json",
            json.dumps(metadata_to_dict(record), ensure_ascii=False, indent=2),
        )
        return record


# -- user store -----------------------------------------------------------------


class UserStore:
    def __init__(self, root):
        self.root = Path(root)
        self.path = self.root / "users.json"

    def _read(self) -> dict:
        if not self.path.exists():
            return {}
        try:
            return json.loads(self.path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"cannot read users: {exc}") from exc

    def _write(self, users: dict) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        _write_atomic(self.path, json.dumps(users, indent=2))

    def add_user(self, username: str, password: str, role: str = "annotator") -> None:
        if not username or not re.match(r"^[A-Za-z0-9._-]+\Z", username):
            raise ValidationError("username must be non-empty [A-Za-z0-9._-]", field="username")
        if not password:
            raise ValidationError("password must not be empty", field="password")
        check_role(role)
        users = self._read()
        users[username] = {"role": role, "password": hash_password(password)}
        self._write(users)

    def authenticate(self, username: str, password: str) -> str:
        """Role on success. Unknown user and wrong password raise the same
        InvalidCredentials so callers cannot probe for accounts."""
        users = self._read()
        record = users.get(username)
        if record is None or not verify_password(password, record["password"]):
            raise InvalidCredentials("invalid username or password")
        return record["role"]

    def change_password(self, username: str, old_password: str, new_password: str) -> None:
        role = self.authenticate(username, old_password)
        if not new_password:
            raise ValidationError("password must not be empty", field="new_password")
        users = self._read()
        users[username] = {"role": role, "password": hash_password(new_password)}
        self._write(users)
