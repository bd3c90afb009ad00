import pytest
from hypothesis import given
from hypothesis import strategies as st

from docmarks.errors import ValidationError
from docmarks.metadata import (
    MetadataRecord,
    event_date_iso,
    metadata_from_dict,
    metadata_to_dict,
    validate_metadata,
)


def record(**kwargs):
    kwargs.setdefault("document_number", "042")
    return MetadataRecord(**kwargs)


class TestDocumentNumber:
    @pytest.mark.parametrize("number", ["001", "042", "500", "999"])
    def test_accepts_in_range(self, number):
        validate_metadata(record(document_number=number))

    @pytest.mark.parametrize(
        "number", ["000", "1000", "42", "1", "", "abc", "04 2", "-42", "04.2", "042\n"]
    )
    def test_rejects_out_of_shape(self, number):
        with pytest.raises(ValidationError) as err:
            validate_metadata(record(document_number=number))
        assert err.value.field == "document_number"

    def test_rejects_non_string(self):
        with pytest.raises(ValidationError):
            validate_metadata(record(document_number=42))


class TestEventDate:
    @pytest.mark.parametrize(
        "value", ["1959", "0001", "13-1-1959", "1-1-1959", "01-01-1959", "29-2-1960", "31-12-2026"]
    )
    def test_accepts(self, value):
        validate_metadata(record(event_date=value))

    @pytest.mark.parametrize(
        "value",
        [
            "195",
            "19599",
            "32-1-1959",
            "29-2-1959",  # not a leap year
            "0-1-1959",
            "1-13-1959",
            "1959-01-13",  # ISO order not accepted on input
            "13/1/1959",
            "yesterday",
        ],
    )
    def test_rejects(self, value):
        with pytest.raises(ValidationError) as err:
            validate_metadata(record(event_date=value))
        assert err.value.field == "event_date"

    def test_empty_is_fine(self):
        validate_metadata(record(event_date=""))

    def test_iso_conversion(self):
        assert event_date_iso("13-1-1959") == "1959-01-13"
        assert event_date_iso("1-12-1960") == "1960-12-01"
        assert event_date_iso("1959") == "1959"
        assert event_date_iso("") is None
        assert event_date_iso("29-2-1959") is None

    @given(
        st.integers(min_value=1, max_value=28),
        st.integers(min_value=1, max_value=12),
        st.integers(min_value=1000, max_value=9999),
    )
    def test_any_calendar_day_converts(self, day, month, year):
        value = f"{day}-{month}-{year}"
        validate_metadata(record(event_date=value))
        assert event_date_iso(value) == f"{year:04d}-{month:02d}-{day:02d}"


class TestPublicationStatus:
    @pytest.mark.parametrize("value", ["published/edited", "unpublished/unedited", ""])
    def test_accepts(self, value):
        validate_metadata(record(publication_status=value))

    @pytest.mark.parametrize("value", ["published", "draft", "Published/Edited"])
    def test_rejects(self, value):
        with pytest.raises(ValidationError) as err:
            validate_metadata(record(publication_status=value))
        assert err.value.field == "publication_status"


class TestListFields:
    def test_lists_of_strings_pass(self):
        validate_metadata(
            record(
                document_type=["letter", "report"],
                document_subject=["politics"],
                provenance=["ACS, fondo X", "busta 12"],
            )
        )

    @pytest.mark.parametrize("field_name", ["document_type", "document_subject", "provenance"])
    def test_non_list_rejected(self, field_name):
        with pytest.raises(ValidationError) as err:
            validate_metadata(record(**{field_name: "not a list"}))
        assert err.value.field == field_name

    def test_list_of_non_strings_rejected(self):
        with pytest.raises(ValidationError):
            validate_metadata(record(provenance=["ok", 3]))


class TestDictRoundTrip:
    def test_round_trip(self):
        original = record(
            author_role="prefetto",
            researcher_curator="M. Rossi",
            abstract="short summary",
            document_type=["letter"],
            document_subject=["politics", "party"],
            publication_status="published/edited",
            provenance=["ACS"],
            event_place="Roma",
            event_date="13-1-1959",
            additional_notes="fragile",
        )
        data = metadata_to_dict(original)
        assert metadata_from_dict(data) == original

    def test_lists_are_copied(self):
        original = record(provenance=["ACS"])
        data = metadata_to_dict(original)
        data["provenance"].append("mutated")
        assert original.provenance == ["ACS"]

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError) as err:
            metadata_from_dict({"document_number": "042", "surprise": 1})
        assert err.value.field == "surprise"

    def test_document_number_required(self):
        with pytest.raises(ValidationError) as err:
            metadata_from_dict({"abstract": "x"})
        assert err.value.field == "document_number"

    def test_values_validated(self):
        with pytest.raises(ValidationError):
            metadata_from_dict({"document_number": "1000"})
