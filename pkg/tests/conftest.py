import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from docmarks.wikidata import FileFixtureTransport, WikidataClient

FIXTURES = pathlib.Path(__file__).parent / "fixtures" / "wikidata"


@pytest.fixture
def wikidata_client():
    return WikidataClient(transport=FileFixtureTransport(FIXTURES))


@pytest.fixture
def announce(capsys, request):
    """Print a visible pass line for an acceptance criterion."""

    def _announce(line: str):
        with capsys.disabled():
            print(f"\n[acceptance] PASS {line}")

    return _announce
