import json

import numpy as np
import pytest

from convexlab import bodies as B
from convexlab import specfile
from convexlab.errors import BodySpecError
from convexlab.sphere import random_directions
from conftest import cube, odd_ball


def _zoo():
    return [
        B.Ball([0.1, 0.2, 0.3], 1.25),
        B.Ellipsoid(np.diag([1.0, 4.0, 9.0]), [1.0, 0.0, 0.0]),
        cube(3),
        odd_ball(4, 0.1),
        B.ReuleauxRevolution(0.7, axis=(0.0, 0.6, 0.8)),
        B.minkowski_sum(cube(3), B.Ball(np.zeros(3), 0.1)),
        B.translate(odd_ball(3, 1 / 3), [0.1, 1e-17, 3.0]),
        B.reflect(B.ReuleauxRevolution(1.0)),
    ]


@pytest.mark.parametrize("body", _zoo(), ids=lambda b: b.kind)
def test_round_trip_is_exact(body, tmp_path):
    path = tmp_path / "body.json"
    specfile.save(body, path, label="x")
    again = specfile.load(path)
    assert again.label == "x" and again.kind == body.kind
    U = random_directions(np.random.default_rng(0), body.dim, 50)
    assert np.array_equal(again(U), body(U))
    assert specfile.dumps(again) == specfile.dumps(body, label="x")


def test_unknown_kind_reports_line():
    text = specfile.dumps(cube(2)).replace('"polytope"', '"blob"')
    with pytest.raises(BodySpecError) as info:
        specfile.loads(text)
    assert info.value.line == text.splitlines().index('    "kind": "blob",') + 1


def test_missing_key_reports_line():
    doc = specfile.to_document(B.Ball([0.0, 0.0], 1.0))
    del doc["body"]["radius"]
    text = json.dumps(doc, indent=2)
    with pytest.raises(BodySpecError) as info:
        specfile.loads(text)
    assert "radius" in str(info.value)
    assert info.value.line is not None and str(info.value).startswith(f"line {info.value.line}")


def test_bad_parameters_report_line():
    doc = specfile.to_document(B.Ball([0.0, 0.0], 1.0))
    doc["body"]["radius"] = -1.0
    with pytest.raises(BodySpecError) as info:
        specfile.loads(json.dumps(doc, indent=2))
    assert info.value.line is not None


def test_syntax_error_reports_line():
    with pytest.raises(BodySpecError) as info:
        specfile.loads('{\n  "format": "convexlab-body",\n  "version": 1,\n  oops\n}')
    assert info.value.line == 4


def test_dim_mismatch_rejected():
    doc = specfile.to_document(B.Ball([0.0, 0.0], 1.0))
    doc["body"]["dim"] = 3
    with pytest.raises(BodySpecError):
        specfile.loads(json.dumps(doc))


def test_wrong_format_rejected():
    with pytest.raises(BodySpecError):
        specfile.loads('{"format": "other", "version": 1, "body": {}}')
