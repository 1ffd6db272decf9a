"""Body spec documents: JSON descriptions of support-function bodies.

A document looks like::

    {
      "format": "convexlab-body",
      "version": 1,
      "label": "cw-u1^3",
      "body": {
        "kind": "odd_perturbed_ball",
        "dim": 3,
        "radius": 1.0,
        "eps": 0.1,
        "terms": [{"coef": 1.0, "powers": [3, 0, 0]}]
      }
    }

Body kinds and their keys (besides ``kind`` and ``dim``):

==================== ==============================================
ball                 center (list), radius
ellipsoid            shape (n x n list), center (list)
polytope             vertices (list of points)
odd_perturbed_ball   radius, eps, terms (list of {coef, powers})
reuleaux_revolution  width, axis (list of 3); dim must be 3
sum                  parts (list of {weight, body})
translate            shift (list), body
reflection           body
==================== ==============================================

Floats are written with ``repr`` so a save/load cycle is value-exact.
"""
import json
import re

import numpy as np

from . import bodies as B
from .errors import BodySpecError, ConvexLabError

FORMAT = "convexlab-body"
VERSION = 1


def _floats(a):
    return np.asarray(a, dtype=float).tolist()


def body_to_dict(body):
    d = {"kind": body.kind, "dim": body.dim}
    if isinstance(body, B.Ball):
        d.update(center=_floats(body.center), radius=body.radius)
    elif isinstance(body, B.Ellipsoid):
        d.update(shape=_floats(body.shape), center=_floats(body.center))
    elif isinstance(body, B.Polytope):
        d.update(vertices=_floats(body.vertices))
    elif isinstance(body, B.OddPerturbedBall):
        d.update(
            radius=body.radius,
            eps=body.eps,
            terms=[{"coef": c, "powers": list(p)} for c, p in body.terms],
        )
    elif isinstance(body, B.ReuleauxRevolution):
        d.update(width=body.width, axis=_floats(body.axis))
    elif isinstance(body, B.MinkowskiSum):
        d.update(parts=[{"weight": w, "body": body_to_dict(b)} for b, w in body.parts])
    elif isinstance(body, B.Translated):
        d.update(shift=_floats(body.shift), body=body_to_dict(body.body))
    elif isinstance(body, B.Reflection):
        d.update(body=body_to_dict(body.body))
    else:
        raise BodySpecError(f"bodies of kind {body.kind!r} cannot be serialized")
    return d


def _get(d, key, path):
    if not isinstance(d, dict):
        raise _SchemaError(f"{path} must be an object", path)
    if key not in d:
        raise _SchemaError(f"{path} is missing key {key!r}", f"{path}.{key}", key)
    return d[key]


class _SchemaError(Exception):
    def __init__(self, message, path, key=None):
        super().__init__(message)
        self.path = path
        self.key = key


def body_from_dict(d, path="body"):
    kind = _get(d, "kind", path)
    dim = _get(d, "dim", path)
    try:
        if kind == "ball":
            body = B.Ball(_get(d, "center", path), _get(d, "radius", path))
        elif kind == "ellipsoid":
            body = B.Ellipsoid(_get(d, "shape", path), d.get("center"))
        elif kind == "polytope":
            body = B.Polytope(_get(d, "vertices", path))
        elif kind == "odd_perturbed_ball":
            terms = [
                (_get(t, "coef", f"{path}.terms[{i}]"), _get(t, "powers", f"{path}.terms[{i}]"))
                for i, t in enumerate(_get(d, "terms", path))
            ]
            body = B.OddPerturbedBall(dim, _get(d, "radius", path), terms, d.get("eps", 1.0))
        elif kind == "reuleaux_revolution":
            body = B.ReuleauxRevolution(_get(d, "width", path), d.get("axis", (0.0, 0.0, 1.0)))
        elif kind == "sum":
            parts = [
                (body_from_dict(_get(p, "body", f"{path}.parts[{i}]"), f"{path}.parts[{i}].body"),
                 _get(p, "weight", f"{path}.parts[{i}]"))
                for i, p in enumerate(_get(d, "parts", path))
            ]
            body = B.MinkowskiSum(parts)
        elif kind == "translate":
            body = B.Translated(body_from_dict(_get(d, "body", path), f"{path}.body"), _get(d, "shift", path))
        elif kind == "reflection":
            body = B.Reflection(body_from_dict(_get(d, "body", path), f"{path}.body"))
        else:
            raise _SchemaError(f"{path}: unknown body kind {kind!r}", path, "kind")
    except (ConvexLabError, TypeError, ValueError) as exc:
        raise _SchemaError(f"{path}: invalid {kind} parameters: {exc}", path, "kind") from exc
    if body.dim != dim:
        raise _SchemaError(f"{path}: declared dim {dim} but parameters give {body.dim}", path, "dim")
    return body


def to_document(body, label=None):
    doc = {"format": FORMAT, "version": VERSION}
    label = label if label is not None else body.label
    if label is not None:
        doc["label"] = label
    doc["body"] = body_to_dict(body)
    return doc


def dumps(body, label=None):
    return json.dumps(to_document(body, label), indent=2, allow_nan=False) + "\n"


def _line_of(text, key):
    # first occurrence of the key; a missing key is reported at the nearest "kind"
    for k in (key, "kind"):
        if k is None:
            continue
        m = re.search(r'"%s"\s*:' % re.escape(k), text)
        if m:
            return text.count("\n", 0, m.start()) + 1
    return None


def loads(text):
    """Parse a body spec document; errors carry the 1-based line number when known."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BodySpecError(exc.msg, exc.lineno) from exc
    try:
        if not isinstance(doc, dict):
            raise _SchemaError("document must be a JSON object", "$")
        if doc.get("format") != FORMAT:
            raise _SchemaError(f"format must be {FORMAT!r}", "format", "format")
        if doc.get("version") != VERSION:
            raise _SchemaError(f"unsupported version {doc.get('version')!r}", "version", "version")
        body = body_from_dict(_get(doc, "body", "$"))
    except _SchemaError as exc:
        raise BodySpecError(str(exc), _line_of(text, exc.key)) from None
    body.label = doc.get("label")
    return body


def save(body, path, label=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(body, label))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
