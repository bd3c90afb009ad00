import json
import pathlib
import xml.etree.ElementTree as ET

import pytest
from fastapi.routing import APIRoute
from fastapi.testclient import TestClient

from docmarks.service import create_app
from docmarks.store import UserStore
from docmarks.wikidata import FileFixtureTransport, WikidataClient

FIXTURES = pathlib.Path(__file__).parent / "fixtures" / "wikidata"

TEXT = "Aldo Moro guidò la Democrazia Cristiana. Moro parlò a Roma.\nLa DC vinse; la DC governò."


def build_app(root, clock=None):
    UserStore(root).add_user("maria", "pw", role="admin")
    kwargs = {}
    if clock is not None:
        kwargs["clock"] = clock
    return create_app(
        root,
        token_secret="test-secret",
        wikidata_client=WikidataClient(transport=FileFixtureTransport(FIXTURES)),
        **kwargs,
    )


@pytest.fixture
def client(tmp_path):
    app = build_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c


@pytest.fixture
def auth(client):
    resp = client.post("/api/v1/auth/login", json={"username": "maria", "password": "pw"})
    assert resp.status_code == 200
    return {"Authorization": f"Bearer {resp.json()['token']}"}


@pytest.fixture
def doc(client, auth):
    resp = client.post(
        "/api/v1/documents", json={"doc_id": "d1", "content": TEXT}, headers=auth
    )
    assert resp.status_code == 201
    return "d1"


def mark(client, auth, doc_id, start, end, category):
    resp = client.post(
        f"/api/v1/documents/{doc_id}/mentions",
        json={"start": start, "end": end, "category": category},
        headers=auth,
    )
    assert resp.status_code == 201, resp.text
    return resp.json()


EXPECTED_ROUTES = {
    ("GET", "/api/v1/health"),
    ("POST", "/api/v1/auth/login"),
    ("POST", "/api/v1/auth/change-password"),
    ("GET", "/api/v1/documents"),
    ("POST", "/api/v1/documents"),
    ("GET", "/api/v1/documents/{doc_id}"),
    ("GET", "/api/v1/documents/{doc_id}/text"),
    ("GET", "/api/v1/documents/{doc_id}/html"),
    ("PUT", "/api/v1/documents/{doc_id}/status"),
    ("POST", "/api/v1/documents/{doc_id}/save"),
    ("GET", "/api/v1/documents/{doc_id}/extend"),
    ("GET", "/api/v1/documents/{doc_id}/mentions"),
    ("POST", "/api/v1/documents/{doc_id}/mentions"),
    ("POST", "/api/v1/documents/{doc_id}/highlight-all"),
    ("POST", "/api/v1/documents/{doc_id}/merge"),
    ("POST", "/api/v1/documents/{doc_id}/mentions/{mention_id}/move"),
    ("PUT", "/api/v1/documents/{doc_id}/entities/{entity_id}/label"),
    ("PUT", "/api/v1/documents/{doc_id}/entities/{entity_id}/sort-key"),
    ("POST", "/api/v1/documents/{doc_id}/entities/{entity_id}/aliases"),
    ("PUT", "/api/v1/documents/{doc_id}/entities/{entity_id}/location"),
    ("POST", "/api/v1/documents/{doc_id}/empty-trash"),
    ("GET", "/api/v1/documents/{doc_id}/categories"),
    ("GET", "/api/v1/documents/{doc_id}/entities"),
    ("GET", "/api/v1/documents/{doc_id}/entities/{entity_id}"),
    ("GET", "/api/v1/documents/{doc_id}/entities/{entity_id}/concordance"),
    ("GET", "/api/v1/documents/{doc_id}/export/html"),
    ("GET", "/api/v1/documents/{doc_id}/export/tei"),
    ("GET", "/api/v1/documents/{doc_id}/export/entities"),
    ("POST", "/api/v1/documents/{doc_id}/import/entities"),
    ("GET", "/api/v1/reconcile/search"),
    ("GET", "/api/v1/reconcile/entity/{qid}"),
    ("PUT", "/api/v1/documents/{doc_id}/entities/{entity_id}/wikidata"),
    ("DELETE", "/api/v1/documents/{doc_id}/entities/{entity_id}/wikidata"),
    ("GET", "/api/v1/documents/{doc_id}/metadata"),
    ("PUT", "/api/v1/documents/{doc_id}/metadata"),
}

MUTATING_ROUTES = [
    ("POST", "/api/v1/auth/change-password", {"old_password": "a", "new_password": "b"}),
    ("POST", "/api/v1/documents", {"doc_id": "x", "content": "y"}),
    ("PUT", "/api/v1/documents/d1/status", {"status": "Finished"}),
    ("POST", "/api/v1/documents/d1/save", {"base_revision": 1}),
    ("POST", "/api/v1/documents/d1/mentions", {"start": 0, "end": 4, "category": "People"}),
    ("POST", "/api/v1/documents/d1/highlight-all", {"start": 0, "end": 4, "category": "People"}),
    ("POST", "/api/v1/documents/d1/merge", {"source": "A", "target": "B"}),
    ("POST", "/api/v1/documents/d1/mentions/mention-1/move", {"target": "A"}),
    ("PUT", "/api/v1/documents/d1/entities/A/label", {"label": "x"}),
    ("PUT", "/api/v1/documents/d1/entities/A/sort-key", {"sort_key": "x"}),
    ("POST", "/api/v1/documents/d1/entities/A/aliases", {"alias": "x"}),
    ("PUT", "/api/v1/documents/d1/entities/A/location", {"location": "trash"}),
    ("POST", "/api/v1/documents/d1/empty-trash", None),
    ("POST", "/api/v1/documents/d1/import/entities", {"schema_version": 1, "entities": []}),
    ("PUT", "/api/v1/documents/d1/entities/A/wikidata", {"qid": "Q815348"}),
    ("DELETE", "/api/v1/documents/d1/entities/A/wikidata", None),
    ("PUT", "/api/v1/documents/d1/metadata", {"document_number": "001"}),
]


class TestRouteInventory:
    def test_every_route_is_known(self, client):
        actual = set()
        for route in client.app.routes:
            if isinstance(route, APIRoute):
                for method in route.methods - {"HEAD", "OPTIONS"}:
                    actual.add((method, route.path))
        assert actual == EXPECTED_ROUTES

    def test_every_mutating_route_requires_auth(self, client):
        covered = set()
        for method, path, _ in MUTATING_ROUTES:
            template = (
                path.replace("/d1/", "/{doc_id}/")
                .replace("/entities/A/", "/entities/{entity_id}/")
                .replace("/mentions/mention-1/", "/mentions/{mention_id}/")
            )
            covered.add((method, template))
        expected_mutating = {
            (m, p)
            for m, p in EXPECTED_ROUTES
            if m in ("POST", "PUT", "DELETE") and p != "/api/v1/auth/login"
        }
        assert covered == expected_mutating


class TestAuth:
    def test_login_returns_token_and_role(self, client):
        resp = client.post("/api/v1/auth/login", json={"username": "maria", "password": "pw"})
        body = resp.json()
        assert resp.status_code == 200
        assert body["role"] == "admin"
        assert body["expires_in"] == 12 * 60 * 60
        assert body["token"].count(".") == 2

    def test_bad_credentials(self, client):
        resp = client.post("/api/v1/auth/login", json={"username": "maria", "password": "no"})
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "InvalidCredentials"

    @pytest.mark.parametrize("method,path,body", MUTATING_ROUTES)
    def test_missing_token_rejected(self, client, method, path, body):
        resp = client.request(method, path, json=body)
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "InvalidToken"

    @pytest.mark.parametrize("method,path,body", MUTATING_ROUTES)
    def test_garbage_token_rejected(self, client, method, path, body):
        resp = client.request(
            method, path, json=body, headers={"Authorization": "Bearer gar.ba.ge"}
        )
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "InvalidToken"

    def test_expired_token_rejected(self, tmp_path):
        now = [1000.0]
        app = build_app(tmp_path / "data", clock=lambda: now[0])
        with TestClient(app) as client:
            token = client.post(
                "/api/v1/auth/login", json={"username": "maria", "password": "pw"}
            ).json()["token"]
            headers = {"Authorization": f"Bearer {token}"}
            ok = client.post(
                "/api/v1/documents", json={"doc_id": "d1", "content": "x"}, headers=headers
            )
            assert ok.status_code == 201
            now[0] += 12 * 60 * 60 + 1
            stale = client.post(
                "/api/v1/documents", json={"doc_id": "d2", "content": "x"}, headers=headers
            )
            assert stale.status_code == 401
            assert stale.json()["error"]["code"] == "TokenExpired"

    def test_change_password(self, client, auth):
        resp = client.post(
            "/api/v1/auth/change-password",
            json={"old_password": "pw", "new_password": "pw2"},
            headers=auth,
        )
        assert resp.status_code == 200
        assert (
            client.post(
                "/api/v1/auth/login", json={"username": "maria", "password": "pw"}
            ).status_code
            == 401
        )
        assert (
            client.post(
                "/api/v1/auth/login", json={"username": "maria", "password": "pw2"}
            ).status_code
            == 200
        )


class TestHealth:
    def test_health(self, client):
        resp = client.get("/api/v1/health")
        assert resp.status_code == 200
        assert resp.json() == {"ok": True}


class TestDocuments:
    def test_upload_text(self, client, auth):
        resp = client.post(
            "/api/v1/documents", json={"doc_id": "d1", "content": TEXT}, headers=auth
        )
        assert resp.status_code == 201
        body = resp.json()
        assert body["doc_id"] == "d1"
        assert body["revision"] == 1
        assert body["status"] == "ToBeStarted"
        assert body["mentions"] == 0

    def test_upload_duplicate(self, client, auth, doc):
        resp = client.post(
            "/api/v1/documents", json={"doc_id": doc, "content": "x"}, headers=auth
        )
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "DuplicateDocument"

    def test_upload_bad_id(self, client, auth):
        resp = client.post(
            "/api/v1/documents", json={"doc_id": "a/b", "content": "x"}, headers=auth
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["field"] == "doc_id"

    def test_upload_html_parses_annotations(self, client, auth, doc):
        mark(client, auth, doc, 0, 9, "People")
        html = client.get(f"/api/v1/documents/{doc}/html").text
        resp = client.post(
            "/api/v1/documents",
            json={"doc_id": "copy", "content": html, "content_type": "auto"},
            headers=auth,
        )
        assert resp.status_code == 201
        assert resp.json()["mentions"] == 1
        assert client.get("/api/v1/documents/copy/text").json()["text"] == TEXT

    def test_upload_html_detected_without_doctype(self, client, auth):
        resp = client.post(
            "/api/v1/documents",
            json={"doc_id": "h1", "content": "<html><body>hi</body></html>"},
            headers=auth,
        )
        assert resp.status_code == 201
        assert client.get("/api/v1/documents/h1/text").json()["text"] == "hi"

    def test_upload_explicit_text_keeps_markup_verbatim(self, client, auth):
        resp = client.post(
            "/api/v1/documents",
            json={"doc_id": "t1", "content": "<html>x</html>", "content_type": "text"},
            headers=auth,
        )
        assert resp.status_code == 201
        assert client.get("/api/v1/documents/t1/text").json()["text"] == "<html>x</html>"

    def test_upload_bad_content_type(self, client, auth):
        resp = client.post(
            "/api/v1/documents",
            json={"doc_id": "x1", "content": "x", "content_type": "pdf"},
            headers=auth,
        )
        assert resp.status_code == 400

    def test_unknown_document_404(self, client):
        resp = client.get("/api/v1/documents/ghost")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UnknownDocument"

    def test_list_with_filters(self, client, auth):
        for doc_id in ("alpha", "beta"):
            client.post(
                "/api/v1/documents", json={"doc_id": doc_id, "content": "x"}, headers=auth
            )
        client.put(
            "/api/v1/documents/alpha/status", json={"status": "Finished"}, headers=auth
        )
        all_docs = client.get("/api/v1/documents").json()["documents"]
        assert [d["doc_id"] for d in all_docs] == ["alpha", "beta"]
        finished = client.get("/api/v1/documents", params={"status": "Finished"}).json()
        assert [d["doc_id"] for d in finished["documents"]] == ["alpha"]
        q = client.get("/api/v1/documents", params={"q": "BET"}).json()
        assert [d["doc_id"] for d in q["documents"]] == ["beta"]

    def test_list_bad_status(self, client):
        resp = client.get("/api/v1/documents", params={"status": "Paused"})
        assert resp.status_code == 400

    def test_status_update(self, client, auth, doc):
        resp = client.put(
            f"/api/v1/documents/{doc}/status", json={"status": "InProgress"}, headers=auth
        )
        assert resp.status_code == 200
        assert resp.json()["status"] == "InProgress"

    def test_text_and_html(self, client, doc):
        assert client.get(f"/api/v1/documents/{doc}/text").json()["text"] == TEXT
        html_resp = client.get(f"/api/v1/documents/{doc}/html")
        assert html_resp.headers["content-type"].startswith("text/html")
        assert html_resp.text.startswith("<!DOCTYPE html>")


class TestSaveModel:
    def test_save_bumps_revision(self, client, auth, doc):
        mark(client, auth, doc, 0, 9, "People")
        resp = client.post(
            f"/api/v1/documents/{doc}/save", json={"base_revision": 1}, headers=auth
        )
        assert resp.status_code == 200
        assert resp.json()["revision"] == 2

    def test_stale_save_conflicts(self, client, auth, doc):
        client.post(f"/api/v1/documents/{doc}/save", json={"base_revision": 1}, headers=auth)
        resp = client.post(
            f"/api/v1/documents/{doc}/save", json={"base_revision": 1}, headers=auth
        )
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "ConflictError"

    def test_unsaved_work_is_not_persisted(self, tmp_path):
        root = tmp_path / "data"
        app1 = build_app(root)
        with TestClient(app1) as c1:
            token = c1.post(
                "/api/v1/auth/login", json={"username": "maria", "password": "pw"}
            ).json()["token"]
            headers = {"Authorization": f"Bearer {token}"}
            c1.post("/api/v1/documents", json={"doc_id": "d1", "content": TEXT}, headers=headers)
            c1.post(
                "/api/v1/documents/d1/mentions",
                json={"start": 0, "end": 9, "category": "People"},
                headers=headers,
            )
            # a second process sees only the saved revision
            with TestClient(create_app(root, token_secret="test-secret")) as c2:
                assert c2.get("/api/v1/documents/d1/mentions").json()["mentions"] == []
            c1.post("/api/v1/documents/d1/save", json={"base_revision": 1}, headers=headers)
            with TestClient(create_app(root, token_secret="test-secret")) as c3:
                assert len(c3.get("/api/v1/documents/d1/mentions").json()["mentions"]) == 1


class TestAnnotation:
    def test_extend(self, client, doc):
        resp = client.get(f"/api/v1/documents/{doc}/extend", params={"start": 6, "end": 8})
        assert resp.json() == {"start": 5, "end": 9}

    def test_mark_and_list(self, client, auth, doc):
        body = mark(client, auth, doc, 0, 9, "People")
        assert body["mention"]["mention_id"] == "mention-1"
        assert body["mention"]["text"] == "Aldo Moro"
        assert body["entity"]["entity_id"] == "#AldoMoro"
        assert body["entity"]["occurrences"] == 1
        listed = client.get(f"/api/v1/documents/{doc}/mentions").json()["mentions"]
        assert [m["mention_id"] for m in listed] == ["mention-1"]

    def test_mark_overlap_409(self, client, auth, doc):
        mark(client, auth, doc, 0, 9, "People")
        resp = client.post(
            f"/api/v1/documents/{doc}/mentions",
            json={"start": 5, "end": 9, "category": "People"},
            headers=auth,
        )
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "OverlappingMention"

    def test_mark_unknown_category(self, client, auth, doc):
        resp = client.post(
            f"/api/v1/documents/{doc}/mentions",
            json={"start": 0, "end": 4, "category": "Ships"},
            headers=auth,
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "UnknownCategory"

    def test_mark_out_of_bounds(self, client, auth, doc):
        resp = client.post(
            f"/api/v1/documents/{doc}/mentions",
            json={"start": 0, "end": 10_000, "category": "People"},
            headers=auth,
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "ValidationError"

    def test_body_validation_error_envelope(self, client, auth, doc):
        resp = client.post(
            f"/api/v1/documents/{doc}/mentions",
            json={"start": 0, "category": "People"},
            headers=auth,
        )
        assert resp.status_code == 400
        body = resp.json()["error"]
        assert body["code"] == "ValidationError"
        assert body["field"] == "end"

    def test_highlight_all(self, client, auth, doc):
        resp = client.post(
            f"/api/v1/documents/{doc}/highlight-all",
            json={"start": 63, "end": 65, "category": "Organizations"},
            headers=auth,
        )
        assert resp.status_code == 201
        body = resp.json()
        assert len(body["mentions"]) == 2
        assert body["entity"]["entity_id"] == "#DC"
        assert body["entity"]["occurrences"] == 2

    def test_merge(self, client, auth, doc):
        mark(client, auth, doc, 19, 39, "Organizations")
        mark(client, auth, doc, 63, 65, "Organizations")
        resp = client.post(
            f"/api/v1/documents/{doc}/merge",
            json={"source": "DC", "target": "DemocraziaCristiana"},
            headers=auth,
        )
        assert resp.status_code == 200
        entity = resp.json()["entity"]
        assert entity["entity_id"] == "#DemocraziaCristiana"
        assert entity["occurrences"] == 2
        assert "DC" in entity["aliases"]
        gone = client.get(f"/api/v1/documents/{doc}/entities/DC")
        assert gone.status_code == 404

    def test_merge_mismatch(self, client, auth, doc):
        mark(client, auth, doc, 0, 9, "People")
        mark(client, auth, doc, 63, 65, "Organizations")
        resp = client.post(
            f"/api/v1/documents/{doc}/merge",
            json={"source": "AldoMoro", "target": "DC"},
            headers=auth,
        )
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "CategoryMismatch"

    def test_move_mention(self, client, auth, doc):
        mark(client, auth, doc, 0, 4, "People")  # Aldo
        mark(client, auth, doc, 5, 9, "People")  # Moro
        mark(client, auth, doc, 41, 45, "People")  # Moro again
        resp = client.post(
            f"/api/v1/documents/{doc}/mentions/mention-3/move",
            json={"target": "Aldo"},
            headers=auth,
        )
        assert resp.status_code == 200
        assert resp.json()["mention"]["entity_id"] == "#Aldo"

    def test_relabel_sort_key_alias(self, client, auth, doc):
        mark(client, auth, doc, 5, 9, "People")
        resp = client.put(
            f"/api/v1/documents/{doc}/entities/Moro/label",
            json={"label": "Moro, Aldo"},
            headers=auth,
        )
        assert resp.json()["entity"]["label"] == "Moro, Aldo"
        resp = client.put(
            f"/api/v1/documents/{doc}/entities/Moro/sort-key",
            json={"sort_key": "MORO"},
            headers=auth,
        )
        assert resp.json()["entity"]["sort_key"] == "MORO"
        resp = client.post(
            f"/api/v1/documents/{doc}/entities/Moro/aliases",
            json={"alias": "lo statista"},
            headers=auth,
        )
        assert resp.json()["entity"]["aliases"] == ["lo statista"]

    def test_location_and_empty_trash(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        resp = client.put(
            f"/api/v1/documents/{doc}/entities/DC/location",
            json={"location": "trash"},
            headers=auth,
        )
        assert resp.json()["entity"]["location"] == "trash"
        assert client.get(f"/api/v1/documents/{doc}/mentions").json()["mentions"] == []
        trashed = client.get(
            f"/api/v1/documents/{doc}/entities", params={"location": "trash"}
        ).json()["entities"]
        assert [e["entity_id"] for e in trashed] == ["#DC"]
        again = client.put(
            f"/api/v1/documents/{doc}/entities/DC/location",
            json={"location": "trash"},
            headers=auth,
        )
        assert again.status_code == 409
        assert again.json()["error"]["code"] == "InvalidTransition"
        purged = client.post(f"/api/v1/documents/{doc}/empty-trash", headers=auth)
        assert purged.json() == {"purged": 1}

    def test_bad_location_value(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        resp = client.put(
            f"/api/v1/documents/{doc}/entities/DC/location",
            json={"location": "attic"},
            headers=auth,
        )
        assert resp.status_code == 400


class TestEntityViews:
    def test_categories(self, client, doc):
        cats = client.get(f"/api/v1/documents/{doc}/categories").json()["categories"]
        assert [c["name"] for c in cats] == [
            "People",
            "Places",
            "Organizations",
            "Bibliographic references",
            "Quotations",
        ]

    def test_entities_sorted_by_sort_key(self, client, auth, doc):
        mark(client, auth, doc, 0, 9, "People")  # Aldo Moro
        mark(client, auth, doc, 41, 45, "People")  # Moro
        client.put(
            f"/api/v1/documents/{doc}/entities/AldoMoro/sort-key",
            json={"sort_key": "Moro, Aldo"},
            headers=auth,
        )
        rows = client.get(
            f"/api/v1/documents/{doc}/entities", params={"category": "People"}
        ).json()["entities"]
        assert [r["entity_id"] for r in rows] == ["#Moro", "#AldoMoro"]

    def test_entity_detail_with_and_without_hash(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        bare = client.get(f"/api/v1/documents/{doc}/entities/DC").json()["entity"]
        encoded = client.get(f"/api/v1/documents/{doc}/entities/%23DC").json()["entity"]
        assert bare == encoded
        assert bare["entity_id"] == "#DC"

    def test_concordance_route(self, client, auth, doc):
        client.post(
            f"/api/v1/documents/{doc}/highlight-all",
            json={"start": 63, "end": 65, "category": "Organizations"},
            headers=auth,
        )
        resp = client.get(
            f"/api/v1/documents/{doc}/entities/DC/concordance",
            params={"style": "kwoc", "window": 3, "sort": "position"},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["style"] == "KWOC"
        assert len(body["entries"]) == 2
        assert body["entries"][0]["rendered"].startswith("DC — ")
        assert body["entries"][0]["position"] < body["entries"][1]["position"]

    def test_concordance_bad_params(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        assert (
            client.get(
                f"/api/v1/documents/{doc}/entities/DC/concordance", params={"style": "FANCY"}
            ).status_code
            == 400
        )
        assert (
            client.get(
                f"/api/v1/documents/{doc}/entities/DC/concordance", params={"window": 0}
            ).status_code
            == 400
        )

    def test_concordance_of_trashed_entity(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        client.put(
            f"/api/v1/documents/{doc}/entities/DC/location",
            json={"location": "trash"},
            headers=auth,
        )
        resp = client.get(f"/api/v1/documents/{doc}/entities/DC/concordance")
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "EntityTrashed"


class TestExports:
    def test_export_html_matches_view(self, client, auth, doc):
        mark(client, auth, doc, 0, 9, "People")
        view = client.get(f"/api/v1/documents/{doc}/html")
        export = client.get(f"/api/v1/documents/{doc}/export/html")
        assert export.text == view.text
        assert "attachment" in export.headers["content-disposition"]

    def test_export_tei_well_formed(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        client.put(
            f"/api/v1/documents/{doc}/metadata",
            json={"document_number": "042", "event_date": "1959"},
            headers=auth,
        )
        resp = client.get(f"/api/v1/documents/{doc}/export/tei")
        assert resp.status_code == 200
        root = ET.fromstring(resp.text)
        ns = "{http://www.tei-c.org/ns/1.0}"
        assert root.find(f"{ns}text/{ns}body/{ns}p/{ns}orgName").attrib["ref"] == "#DC"
        title = root.find(f"{ns}teiHeader/{ns}fileDesc/{ns}titleStmt/{ns}title")
        assert title.attrib["n"] == "042"

    def test_entity_export_import_round_trip(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        client.put(
            f"/api/v1/documents/{doc}/entities/DC/wikidata",
            json={"qid": "Q815348"},
            headers=auth,
        )
        payload = client.get(f"/api/v1/documents/{doc}/export/entities").text
        assert json.loads(payload)["schema_version"] == 1
        client.post("/api/v1/documents", json={"doc_id": "d2", "content": "x"}, headers=auth)
        resp = client.post(
            "/api/v1/documents/d2/import/entities", content=payload, headers=auth
        )
        assert resp.status_code == 200
        imported = client.get("/api/v1/documents/d2/entities/DC").json()["entity"]
        assert imported["wikidata_id"] == "Q815348"

    def test_import_bad_payload(self, client, auth, doc):
        resp = client.post(
            f"/api/v1/documents/{doc}/import/entities", content="{nope", headers=auth
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "ImportError"


class TestReconciliation:
    def test_search(self, client):
        resp = client.get("/api/v1/reconcile/search", params={"label": "Democrazia Cristiana"})
        assert resp.status_code == 200
        candidates = resp.json()["candidates"]
        assert candidates[0]["qid"] == "Q815348"
        assert candidates[0]["match_score"] == 0

    def test_entity_details(self, client):
        resp = client.get("/api/v1/reconcile/entity/Q220")
        assert resp.json()["treccani_id"] == "Not Detected"

    def test_bad_qid(self, client):
        resp = client.get("/api/v1/reconcile/entity/815348")
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "InvalidQid"

    def test_unknown_qid(self, client):
        resp = client.get("/api/v1/reconcile/entity/Q999999999")
        assert resp.status_code == 404

    def test_link_and_unlink(self, client, auth, doc):
        mark(client, auth, doc, 63, 65, "Organizations")
        resp = client.put(
            f"/api/v1/documents/{doc}/entities/DC/wikidata",
            json={"qid": "Q815348"},
            headers=auth,
        )
        entity = resp.json()["entity"]
        assert entity["wikidata_id"] == "Q815348"
        assert entity["treccani_id"] == "democrazia-cristiana"
        assert entity["wikidata_linked"] is True
        resp = client.delete(
            f"/api/v1/documents/{doc}/entities/DC/wikidata", headers=auth
        )
        entity = resp.json()["entity"]
        assert entity["wikidata_id"] is None
        assert entity["treccani_id"] is None


class TestMetadata:
    def test_get_when_missing(self, client, doc):
        assert client.get(f"/api/v1/documents/{doc}/metadata").json() == {"metadata": None}

    def test_put_and_get(self, client, auth, doc):
        record = {
            "document_number": "042",
            "event_place": "Roma",
            "event_date": "13-1-1959",
            "provenance": ["ACS"],
        }
        resp = client.put(f"/api/v1/documents/{doc}/metadata", json=record, headers=auth)
        assert resp.status_code == 200
        stored = client.get(f"/api/v1/documents/{doc}/metadata").json()["metadata"]
        assert stored["document_number"] == "042"
        assert stored["provenance"] == ["ACS"]
        info = client.get(f"/api/v1/documents/{doc}").json()
        assert info["metadata"] is True

    def test_put_invalid_number(self, client, auth, doc):
        resp = client.put(
            f"/api/v1/documents/{doc}/metadata",
            json={"document_number": "1000"},
            headers=auth,
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["field"] == "document_number"

    def test_put_unknown_field(self, client, auth, doc):
        resp = client.put(
            f"/api/v1/documents/{doc}/metadata",
            json={"document_number": "042", "bogus": 1},
            headers=auth,
        )
        assert resp.status_code == 400
