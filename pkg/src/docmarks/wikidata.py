"""Wikidata reconciliation: candidate search, entity details, link state.

The HTTP transport is injectable so tests (and offline deployments) can
serve recorded JSON fixtures; nothing here requires live network. All
remote failures surface as ReconciliationUnavailable and never corrupt
annotation state.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import (
    InvalidLabel,
    InvalidQid,
    NotFound,
    ReconciliationUnavailable,
    ValidationError,
)
from .model import Document, Entity, WIKIDATA_QID_RE

DEFAULT_BASE_URL = "https://www.wikidata.org"
# Property holding the Treccani encyclopedia identifier of an entity.
DEFAULT_TRECCANI_PROPERTY = "P3365"
DEFAULT_CANDIDATE_LIMIT = 10
NOT_DETECTED = "Not Detected"

_USER_AGENT = "docmarks/0.1 (annotation tooling)"


@dataclass(frozen=True)
class WikidataCandidate:
    qid: str
    label: str
    description: str
    match_score: int  # ordinal rank in the remote result, 0 is best


@dataclass(frozen=True)
class EntityDetails:
    qid: str
    label: str
    description: str
    treccani_id: str  # never empty; NOT_DETECTED when the claim is absent


def requests_transport(timeout: float = 10.0):
    """Default GET-JSON transport on top of requests."""

    def get(url: str, params: dict) -> dict:
        try:
            resp = requests.get(
                url, params=params, timeout=timeout, headers={"User-Agent": _USER_AGENT}
            )
        except requests.RequestException as exc:
            raise ReconciliationUnavailable(f"remote request failed: {exc}") from exc
        if resp.status_code == 404:
            raise NotFound(f"no remote resource at {url}")
        if resp.status_code >= 400:
            raise ReconciliationUnavailable(f"remote returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ReconciliationUnavailable("remote returned unparseable JSON") from exc

    return get


class FileFixtureTransport:
    """Transport that answers from recorded JSON files in a directory.

    Search responses live in ``search_<slug>.json`` (slug: lower-cased
    query, non-alphanumerics collapsed to underscores; missing file means
    zero hits). Entity data lives in ``entity_<QID>.json``; a missing file
    behaves like an unknown id.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    @staticmethod
    def _slug(query: str) -> str:
        return re.sub(r"[^a-z0-9]+", "_", query.lower()).strip("_")

    def __call__(self, url: str, params: dict) -> dict:
        if params.get("action") == "wbsearchentities":
            path = self.directory / f"search_{self._slug(params['search'])}.json"
            if not path.exists():
                return {"search": []}
            return json.loads(path.read_text(encoding="utf-8"))
        m = re.search(r"/Special:EntityData/(Q\d+)\.json$", url)
        if m:
            path = self.directory / f"entity_{m.group(1)}.json"
            if not path.exists():
                raise NotFound(f"no fixture for {m.group(1)}")
            return json.loads(path.read_text(encoding="utf-8"))
        raise ReconciliationUnavailable(f"fixture transport cannot serve {url}")


class WikidataClient:
    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        transport=None,
        languages=("en", "it"),
        treccani_property: str = DEFAULT_TRECCANI_PROPERTY,
        timeout: float = 10.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.languages = tuple(languages)
        self.treccani_property = treccani_property
        self._get = transport if transport is not None else requests_transport(timeout)

    # -- queries -----------------------------------------------------------

    def search_candidates(self, label: str, limit: int = DEFAULT_CANDIDATE_LIMIT) -> list:
        """Ranked candidates for a label; empty list when nothing matches."""
        if not label.strip():
            raise InvalidLabel("search label must not be empty")
        if limit < 1:
            raise ValidationError("limit must be at least 1", field="limit")
        data = self._get(
            f"{self.base_url}/w/api.php",
            {
                "action": "wbsearchentities",
                "search": label,
                "language": self.languages[0],
                "uselang": self.languages[0],
                "format": "json",
                "limit": limit,
            },
        )
        hits = data.get("search")
        if not isinstance(hits, list):
            raise ReconciliationUnavailable("malformed search response")
        candidates = []
        for rank, hit in enumerate(hits[:limit]):
            qid = hit.get("id", "")
            if not WIKIDATA_QID_RE.match(qid):
                continue
            candidates.append(
                WikidataCandidate(
                    qid=qid,
                    label=hit.get("label", ""),
                    description=hit.get("description", ""),
                    match_score=rank,
                )
            )
        return candidates

    def fetch_details(self, qid: str) -> EntityDetails:
        """Label, description, and Treccani identifier for one entity."""
        qid = _check_qid(qid)
        data = self._get(f"{self.base_url}/wiki/Special:EntityData/{qid}.json", {})
        entities = data.get("entities")
        if not isinstance(entities, dict) or not entities:
            raise NotFound(f"no entity data for {qid}")
        # Redirected ids come back keyed by their target.
        entity = entities.get(qid) or next(iter(entities.values()))
        return EntityDetails(
            qid=qid,
            label=_pick_language(entity.get("labels"), self.languages),
            description=_pick_language(entity.get("descriptions"), self.languages),
            treccani_id=self._treccani_claim(entity),
        )

    def _treccani_claim(self, entity: dict) -> str:
        claims = entity.get("claims") or {}
        for claim in claims.get(self.treccani_property, []):
            snak = claim.get("mainsnak") or {}
            if snak.get("snaktype") != "value":
                continue
            value = (snak.get("datavalue") or {}).get("value")
            if isinstance(value, str) and value:
                return value
        return NOT_DETECTED


def _check_qid(qid: str) -> str:
    if not isinstance(qid, str) or not WIKIDATA_QID_RE.match(qid):
        raise InvalidQid(f"{qid!r} does not match 'Q<digits>'", field="qid")
    return qid


def _pick_language(values, languages) -> str:
    if not isinstance(values, dict) or not values:
        return ""
    for lang in languages:
        if lang in values:
            return values[lang].get("value", "")
    first = next(iter(values.values()))
    return first.get("value", "")


# -- link state on entities --------------------------------------------------


def link_entity(doc: Document, entity_id: str, qid: str, client: WikidataClient) -> Entity:
    """Attach a Wikidata id to an entity; the Treccani id rides along from
    the entity details (sentinel when the claim is missing)."""
    qid = _check_qid(qid)
    entity = doc.entity(entity_id)
    details = client.fetch_details(qid)
    entity.wikidata_id = qid
    entity.treccani_id = details.treccani_id
    return entity


def unlink_entity(doc: Document, entity_id: str) -> Entity:
    """Clear the link state. Idempotent: unlinking an unlinked entity is a
    no-op."""
    entity = doc.entity(entity_id)
    entity.wikidata_id = None
    entity.treccani_id = None
    return entity
