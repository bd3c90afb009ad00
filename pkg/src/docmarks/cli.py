"""Command-line entry points.

Environment variables supply defaults; flags override:

    DOCMARKS_STORAGE_ROOT       storage directory (default ./docmarks-data)
    DOCMARKS_TOKEN_KEY          token signing key (ephemeral if unset)
    DOCMARKS_TOKEN_TTL          token lifetime in seconds (default 43200)
    DOCMARKS_WIKIDATA_URL       reconciliation base URL
    DOCMARKS_WIKIDATA_FIXTURES  serve reconciliation from recorded fixtures
    DOCMARKS_UI_DIR             static UI bundle to serve under /ui
"""

from __future__ import annotations

import argparse
import getpass
import os
import sys
from pathlib import Path

from .auth import DEFAULT_TTL_SECONDS
from .concordance import (
    ConcordanceConfig,
    ConcordanceStyle,
    SortOrder,
    build_index,
    list_entities,
    render_plain,
)
from .errors import DocmarksError
from .interchange import export_entities
from .model import new_document
from .rdfa import parse_rdfa, render_rdfa
from .store import DocumentStore, UserStore
from .tei import export_tei
from .wikidata import DEFAULT_BASE_URL, FileFixtureTransport, WikidataClient


def _env(name: str, default=None):
    value = os.environ.get(name)
    return value if value not in (None, "") else default


def _storage_root(args) -> Path:
    return Path(args.storage_root or _env("DOCMARKS_STORAGE_ROOT", "./docmarks-data"))


def _add_storage_flag(parser) -> None:
    parser.add_argument("--storage-root", help="storage directory (env DOCMARKS_STORAGE_ROOT)")


def _wikidata_client():
    fixtures = _env("DOCMARKS_WIKIDATA_FIXTURES")
    base_url = _env("DOCMARKS_WIKIDATA_URL", DEFAULT_BASE_URL)
    if fixtures:
        return WikidataClient(base_url=base_url, transport=FileFixtureTransport(fixtures))
    return WikidataClient(base_url=base_url)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    ui_dir = args.ui_dir or _env("DOCMARKS_UI_DIR")
    app = create_app(
        _storage_root(args),
        token_secret=_env("DOCMARKS_TOKEN_KEY"),
        token_ttl=int(_env("DOCMARKS_TOKEN_TTL", DEFAULT_TTL_SECONDS)),
        wikidata_client=_wikidata_client(),
        ui_dir=ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level=args.log_level)
    return 0


def cmd_add_user(args) -> int:
    password = args.password or getpass.getpass(f"password for {args.username}: ")
    UserStore(_storage_root(args)).add_user(args.username, password, role=args.role)
    print(f"user {args.username} ({args.role}) written")
    return 0


def cmd_import_doc(args) -> int:
    path = Path(args.path)
    content = path.read_text(encoding="utf-8")
    doc_id = args.doc_id or path.stem
    as_html = args.content_type == "html" or (
        args.content_type == "auto"
        and content.lstrip()[:15].lower().startswith(("<!doctype", "<html"))
    )
    doc = parse_rdfa(content, doc_id=doc_id) if as_html else new_document(doc_id, content)
    DocumentStore(_storage_root(args)).create(doc)
    print(f"imported {doc_id} ({len(doc.mentions)} mentions, {len(doc.entities)} entities)")
    return 0


def cmd_export_doc(args) -> int:
    store = DocumentStore(_storage_root(args))
    doc, _ = store.load(args.doc_id)
    if args.format == "html":
        output = render_rdfa(doc)
    elif args.format == "tei":
        output = export_tei(doc, store.load_metadata(args.doc_id))
    else:
        output = export_entities(doc)
    if args.output:
        Path(args.output).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def cmd_build_concordance(args) -> int:
    store = DocumentStore(_storage_root(args))
    doc, _ = store.load(args.doc_id)
    cfg = ConcordanceConfig(
        style=ConcordanceStyle(args.style.upper()),
        window_words=args.window,
        sort=SortOrder(args.sort),
    )
    if args.entity:
        entity_id = args.entity if args.entity.startswith("#") else f"#{args.entity}"
        entity_ids = [entity_id]
    else:
        categories = [args.category] if args.category else list(doc.categories)
        entity_ids = [
            row.entity.entity_id for name in categories for row in list_entities(doc, name)
        ]
    for entity_id in entity_ids:
        for entry in build_index(doc, entity_id, cfg):
            print(render_plain(entry, cfg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docmarks",
        description="annotate texts, build concordances, export linked markup",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--log-level", default="info")
    serve.add_argument("--ui-dir", help="static UI bundle (env DOCMARKS_UI_DIR)")
    _add_storage_flag(serve)
    serve.set_defaults(func=cmd_serve)

    add_user = sub.add_parser("add-user", help="create or replace an account")
    add_user.add_argument("username")
    add_user.add_argument("--role", choices=("annotator", "admin"), default="annotator")
    add_user.add_argument("--password", help="omit to be prompted")
    _add_storage_flag(add_user)
    add_user.set_defaults(func=cmd_add_user)

    import_doc = sub.add_parser("import-doc", help="load a text or annotated HTML file")
    import_doc.add_argument("path")
    import_doc.add_argument("--doc-id", help="defaults to the file stem")
    import_doc.add_argument("--content-type", choices=("auto", "text", "html"), default="auto")
    _add_storage_flag(import_doc)
    import_doc.set_defaults(func=cmd_import_doc)

    export_doc = sub.add_parser("export-doc", help="write a stored document to stdout or a file")
    export_doc.add_argument("doc_id")
    export_doc.add_argument("format", choices=("html", "tei", "entities"))
    export_doc.add_argument("-o", "--output")
    _add_storage_flag(export_doc)
    export_doc.set_defaults(func=cmd_export_doc)

    concordance = sub.add_parser("build-concordance", help="print a concordance to stdout")
    concordance.add_argument("doc_id")
    concordance.add_argument("--entity", help="entity id (leading '#' optional)")
    concordance.add_argument("--category", help="all entities of one category")
    concordance.add_argument(
        "--style", choices=("KWIC", "KWOC", "KWAC", "kwic", "kwoc", "kwac"), default="KWIC"
    )
    concordance.add_argument("--window", type=int, default=5)
    concordance.add_argument(
        "--sort", choices=("keyword_then_right", "position"), default="keyword_then_right"
    )
    _add_storage_flag(concordance)
    concordance.set_defaults(func=cmd_build_concordance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocmarksError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
