import pytest

from turan_lab.core.errors import LabArgumentError
from turan_lab.utils import format_status_message, parse_n_range, safe_filename


def test_parse_n_range_forms():
    assert parse_n_range("7") == [7]
    assert parse_n_range("4..6") == [4, 5, 6]
    assert parse_n_range(" 8,4,6,4 ") == [4, 6, 8]


@pytest.mark.parametrize("text", ["", "6..4", "a..b", "3,-1", ",", "0..4", "0"])
def test_parse_n_range_rejects(text):
    with pytest.raises(LabArgumentError):
        parse_n_range(text)


def test_status_message():
    assert format_status_message(True, "extremal done") == "✅ extremal done"
    message = format_status_message(False, "verify-lemmas", {"failures": 2})
    assert message.splitlines() == ["❌ verify-lemmas", "  • failures: 2"]


def test_safe_filename():
    assert safe_filename("extremal fan:2,3") == "extremal_fan_2_3"
    assert safe_filename("  ") == "untitled"
