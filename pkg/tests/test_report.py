import json

import jsonschema
import pytest

from coblekit.cli import report_schema
from coblekit.report import VerificationReport, merge_status


def test_expect_records_witness():
    r = VerificationReport("x.y")
    assert r.expect("fine", True)
    assert r.passed and r.witnesses == []
    assert not r.expect("broken", False, {"n": 3})
    assert r.status == "fail"
    assert r.witnesses[0] == {"label": "broken", "witness": {"n": 3}}


def test_inconclusive_does_not_mask_fail():
    r = VerificationReport("x.y")
    r.expect("broken", False)
    r.inconclusive("slices disagree")
    assert r.status == "fail"
    r2 = VerificationReport("x.y")
    r2.inconclusive("slices disagree", [1, 2])
    assert r2.status == "inconclusive"


@pytest.mark.parametrize("statuses,code", [
    (["pass", "pass"], 0),
    (["pass", "fail"], 1),
    (["inconclusive", "pass"], 3),
    (["inconclusive", "fail"], 1),
    ([], 0),
])
def test_merge_status(statuses, code):
    reps = []
    for s in statuses:
        r = VerificationReport("x.y")
        r.status = s
        reps.append(r)
    assert merge_status(reps) == code


def test_json_round_trip_validates():
    r = VerificationReport("cs.points", prime=61, seed=0)
    with r.timed():
        r.counts["table"] = {1: (4, 0), 2: [1, 3]}
        r.certify("identity", "zero polynomial")
    data = json.loads(json.dumps([r.to_json()]))
    jsonschema.validate(data, report_schema())
    assert data[0]["counts"]["table"] == {"1": [4, 0], "2": [1, 3]}
    assert data[0]["elapsed_ms"] >= 0


def test_schema_rejects_fail_without_witness():
    r = VerificationReport("cs.points")
    d = r.to_json()
    d["status"] = "fail"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate([d], report_schema())
    d["status"] = "bogus"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate([d], report_schema())
