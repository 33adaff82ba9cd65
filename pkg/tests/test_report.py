import json
import math
import os

import numpy as np
import pytest

from ifmlab.report import (
    AuditReport,
    ClauseResult,
    format_float,
    json_text,
    records_to_jsonl,
    write_text_atomic,
)


def test_format_float_17_digits_round_trip():
    for value in (0.1, 1.0 / 3.0, 2.0 ** -52, 51.2, -7.25e300):
        assert float(format_float(value)) == value
    assert format_float(float("inf")) == "Infinity"
    assert format_float(float("-inf")) == "-Infinity"
    assert format_float(float("nan")) == "NaN"


def test_json_text_is_sorted_and_parseable():
    doc = {"b": [1, 2.5, None, True], "a": {"nested": "x\"y"}}
    text = json_text(doc)
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": {"nested": 'x"y'}, "b": [1, 2.5, None, True]}


def test_json_text_handles_numpy_scalars_and_arrays():
    text = json_text({"v": np.float64(0.5), "n": np.int64(3), "arr": np.asarray([1.0, 2.0])})
    assert json.loads(text) == {"arr": [1.0, 2.0], "n": 3, "v": 0.5}


def test_json_text_rejects_unknown_types():
    with pytest.raises(TypeError):
        json_text({"x": object()})


def test_audit_report_accessors():
    report = AuditReport(
        subject="demo",
        clauses=[
            ClauseResult("ok_clause", True, 0.0),
            ClauseResult("bad_clause", False, 0.25, witness={"a": 0.5}, note="why"),
        ],
    )
    assert not report.passed
    assert [c.clause for c in report.failures()] == ["bad_clause"]
    assert report.clause("ok_clause").passed
    with pytest.raises(KeyError):
        report.clause("absent")
    records = report.to_records()
    assert records[1]["verdict"] == "fail" and records[1]["note"] == "why"
    lines = records_to_jsonl(records).splitlines()
    assert len(lines) == 2 and json.loads(lines[0])["clause"] == "ok_clause"


def test_atomic_write_creates_parents_and_replaces(tmp_path):
    target = tmp_path / "deep" / "dir" / "out.txt"
    write_text_atomic(str(target), "first")
    write_text_atomic(str(target), "second")
    assert target.read_text() == "second"
    assert not [p for p in os.listdir(target.parent) if p.endswith(".tmp")]
