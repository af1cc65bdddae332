"""Deterministic report serialization round trips."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhlab.errors import IoFailure
from qhlab.reports import (DEFAULT_TIMESTAMP, Report, emit_report,
                           format_float, new_report, parse_report,
                           report_from_text, report_to_text, to_csv, to_json)


def _sample_report():
    rep = new_report("bound-suite", domain="disc(radius=1)", c="1.2")
    rep.columns = ("k", "d_a", "sep", "status")
    rep.add_row(0, 0.25, 1.0e-3, "pass")
    rep.add_row(1, 0.125, 0.4303, "pass")
    rep.add_row(2, 1.0 / 3.0, 2.0 ** 0.5, "FAIL")
    return rep


def test_default_timestamp_pinned():
    rep = new_report("anything")
    assert rep.metadata["timestamp"] == DEFAULT_TIMESTAMP == \
        "1970-01-01T00:00:00Z"
    assert rep.metadata["kind"] == "anything"
    assert new_report("x", timestamp="2026-01-01T00:00:00Z"
                      ).metadata["timestamp"] == "2026-01-01T00:00:00Z"


def test_csv_round_trip_is_byte_identical():
    text = to_csv(_sample_report())
    assert text.endswith("\n")
    again = to_csv(report_from_text(text))
    assert again == text


def test_json_round_trip_is_byte_identical():
    text = to_json(_sample_report())
    assert text.endswith("\n")
    again = to_json(report_from_text(text))
    assert again == text


def test_cross_format_round_trip():
    rep = _sample_report()
    via_csv = report_from_text(to_csv(rep))
    assert to_json(via_csv) == to_json(rep)
    via_json = report_from_text(to_json(rep))
    assert to_csv(via_json) == to_csv(rep)


def test_non_finite_cells():
    rep = new_report("edge")
    rep.columns = ("v",)
    for v in (math.nan, math.inf, -math.inf):
        rep.add_row(v)
    j = to_json(rep)
    assert "NaN" in j and "Infinity" in j and "-Infinity" in j
    assert to_json(report_from_text(j)) == j
    c = to_csv(rep)
    assert to_csv(report_from_text(c)) == c


def test_empty_report_is_header_only():
    rep = new_report("empty")
    rep.columns = ("a", "b")
    text = to_csv(rep)
    assert text.splitlines()[-1] == "a,b"
    back = report_from_text(text)
    assert back.columns == ("a", "b")
    assert back.rows == []


def test_metadata_values_keep_equals_signs():
    rep = new_report("m", expr="a=b", note="")
    rep.columns = ("x",)
    back = report_from_text(to_csv(rep))
    assert back.metadata["expr"] == "a=b"
    assert back.metadata["note"] == ""


def test_row_and_cell_validation():
    rep = new_report("v")
    rep.columns = ("a", "b")
    with pytest.raises(ValueError):
        rep.add_row(1)
    rep.add_row(True, 2)  # stored, but refuses to serialize
    with pytest.raises(TypeError):
        to_csv(rep)
    rep.rows.clear()
    rep.add_row("x,y", 2)
    with pytest.raises(ValueError):
        to_csv(rep)


def test_report_to_text_format_dispatch():
    rep = _sample_report()
    assert report_to_text(rep, "csv") == to_csv(rep)
    assert report_to_text(rep, "json") == to_json(rep)
    with pytest.raises(ValueError):
        report_to_text(rep, "yaml")


def test_headerless_text_rejected():
    with pytest.raises(ValueError):
        report_from_text("# kind = x\n")


def test_column_accessor():
    rep = _sample_report()
    assert rep.column("k") == [0, 1, 2]
    assert rep.column("status") == ["pass", "pass", "FAIL"]
    with pytest.raises(ValueError):
        rep.column("missing")


def test_emit_and_parse_files(tmp_path):
    rep = _sample_report()
    for fmt in ("csv", "json"):
        path = tmp_path / f"out.{fmt}"
        emit_report(rep, fmt, path)
        back = parse_report(path)
        assert back.metadata == rep.metadata
        assert back.columns == rep.columns
        assert report_to_text(back, fmt) == report_to_text(rep, fmt)


def test_io_failures(tmp_path):
    with pytest.raises(IoFailure):
        emit_report(_sample_report(), "csv", tmp_path)  # a directory
    with pytest.raises(IoFailure):
        parse_report(tmp_path / "absent.csv")


def _stays_text(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return True
    return False


_cells = st.one_of(
    st.integers(-10 ** 12, 10 ** 12),
    st.floats(allow_nan=True, allow_infinity=True),
    st.from_regex(r"[A-Za-z][A-Za-z_ ]{0,8}", fullmatch=True
                  ).filter(_stays_text),
)


@given(rows=st.lists(st.tuples(_cells, _cells, _cells), max_size=8))
def test_round_trip_property(rows):
    rep = new_report("prop")
    rep.columns = ("u", "v", "w")
    for row in rows:
        rep.add_row(*row)
    csv_text = to_csv(rep)
    assert to_csv(report_from_text(csv_text)) == csv_text
    json_text = to_json(rep)
    assert to_json(report_from_text(json_text)) == json_text


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_float_fixed_point(x):
    printed = format_float(x)
    assert format_float(float(printed)) == printed
