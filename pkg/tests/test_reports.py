import csv
import io

import pytest

from shaplab.reports import RunReport, emit_report, format_value, read_report, render, wilson_interval


def sample_report(records=2):
    cols = ["trial", "p", "ok", "note"]
    recs = [{"trial": k, "p": 1 / 3 + k, "ok": k % 2 == 0, "note": None} for k in range(records)]
    return RunReport("demo", {"seed": 1, "n": 4}, cols, recs, {"trials": records, "rate": 0.1}, {"bits": 8})


def test_format_value():
    assert format_value(1 / 3) == "0.33333333333333331"
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value({"a": [1]}) == '{"a":[1]}'
    assert format_value(7) == "7"


def test_csv_layout():
    text = render(sample_report(3), "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["trial", "p", "ok", "note"]
    assert len(rows) == 3 + 1
    assert rows[1] == ["0", "0.33333333333333331", "true", ""]


def test_empty_csv_is_header_only():
    assert render(sample_report(0), "csv") == "trial,p,ok,note\n"


def test_json_round_trip():
    rep = sample_report(4)
    assert read_report(render(rep, "json")) == rep
    empty = sample_report(0)
    assert read_report(render(empty, "json")) == empty


def test_emit_to_file(tmp_path):
    path = tmp_path / "r.csv"
    text = emit_report(sample_report(), "csv", str(path))
    assert path.read_text() == text


def test_record_keys_checked():
    with pytest.raises(ValueError):
        RunReport("x", {}, ["a"], [{"b": 1}])
    with pytest.raises(ValueError):
        render(sample_report(), "xml")


@pytest.mark.parametrize("k, n", [(0, 10), (5, 10), (10, 10), (3, 1000)])
def test_wilson_contains_estimate(k, n):
    lo, hi = wilson_interval(k, n)
    assert 0 <= lo <= k / n <= hi <= 1


def test_wilson_frozen():
    lo, hi = wilson_interval(5, 10)
    assert lo == pytest.approx(0.23659309, abs=1e-7)
    assert hi == pytest.approx(0.76340691, abs=1e-7)
    assert wilson_interval(0, 0) == (0.0, 1.0)
