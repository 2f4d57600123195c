"""Interchange files (schema `resfold/1`): one JSON document carrying a ring
block plus any of: complex, form, frame, multiplication, spinor, splitting.

Serialization is canonical (fixed key order, canonical polynomial text), so
write(parse(f)) is byte-identical for canonical files.
"""

from __future__ import annotations

import json

from .complexes import FreeComplex, SelfDualStructure
from .dga import MultiplicationStructure
from .errors import SchemaError
from .fields import CoefficientField
from .matpoly import PolyMatrix
from .poly import PolyRing
from .spinor import HyperbolicFrame, SpinorVector

SCHEMA = "resfold/1"


def _require(doc, key, path, typ=None):
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing field")
    val = doc[key]
    if typ is not None and not isinstance(val, typ):
        raise SchemaError(f"{path}.{key}", f"expected {typ.__name__}")
    return val


def ring_to_json(ring: PolyRing) -> dict:
    out = {"field": ring.field.tag(), "variables": list(ring.variables)}
    if ring.multidegree is not None:
        out["multidegrees"] = {v: list(d) for v, d in ring.multidegree.items()}
    return out


def ring_from_json(doc, path="ring") -> PolyRing:
    tag = _require(doc, "field", path, str)
    try:
        field = CoefficientField.from_tag(tag)
    except Exception as exc:
        raise SchemaError(f"{path}.field", str(exc))
    variables = _require(doc, "variables", path, list)
    multideg = None
    if doc.get("multidegrees") is not None:
        multideg = {v: tuple(d) for v, d in doc["multidegrees"].items()}
    try:
        return PolyRing(field, variables, multideg)
    except Exception as exc:
        raise SchemaError(path, str(exc))


def matrix_to_json(M: PolyMatrix) -> list:
    return [[str(p) for p in row] for row in M.entries]


def matrix_from_json(ring, rows, path) -> PolyMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError(path, "expected a list of rows")
    try:
        return PolyMatrix.from_rows(ring, rows)
    except Exception as exc:
        raise SchemaError(path, f"bad matrix: {exc}")


def complex_to_json(F: FreeComplex) -> dict:
    out = {"ranks": list(F.ranks),
           "differentials": [matrix_to_json(d) for d in F.diffs]}
    if F.degrees is not None:
        out["degrees"] = [[list(x) for x in mod] for mod in F.degrees]
    else:
        out["degrees"] = None
    return out


def complex_from_json(ring, doc, path="complex") -> FreeComplex:
    ranks = tuple(_require(doc, "ranks", path, list))
    diffs = _require(doc, "differentials", path, list)
    if len(diffs) != len(ranks) - 1:
        raise SchemaError(f"{path}.differentials", "count does not match ranks")
    mats = [matrix_from_json(ring, rows, f"{path}.differentials[{i}]")
            for i, rows in enumerate(diffs)]
    degrees = doc.get("degrees")
    if degrees is not None:
        degrees = tuple(tuple(tuple(x) for x in mod) for mod in degrees)
    try:
        F = FreeComplex(ring, ranks, tuple(mats), degrees)
        F.validate()
    except SchemaError:
        raise
    except Exception as exc:
        raise SchemaError(path, str(exc))
    return F


def document(ring: PolyRing, complex=None, form: SelfDualStructure | None = None,
             frame: HyperbolicFrame | None = None,
             multiplication: MultiplicationStructure | None = None,
             spinor: SpinorVector | None = None,
             splitting: PolyMatrix | None = None,
             w: PolyMatrix | None = None,
             meta: dict | None = None) -> dict:
    doc = {"schema": SCHEMA, "ring": ring_to_json(ring)}
    if complex is not None:
        doc["complex"] = complex_to_json(complex)
    if form is not None:
        doc["form"] = {"matrix": matrix_to_json(form.form),
                       "twist_degree": list(form.twist_degree) if form.twist_degree else None}
    if frame is not None:
        doc["frame"] = {"n": frame.n,
                        "embed": [[ring.field.format(x) for x in row] for row in frame.embed]}
    if multiplication is not None:
        doc["multiplication"] = {"m11": matrix_to_json(multiplication.m11),
                                 "m12": matrix_to_json(multiplication.m12)}
    if spinor is not None:
        doc["spinor"] = {"parity": "odd" if spinor.parity else "even",
                         "coefficients": [[[i + 1 for i in k], str(v)] for k, v in spinor.coeffs]}
    if splitting is not None:
        doc["splitting"] = {"basis_change": matrix_to_json(splitting)}
    if w is not None:
        doc["w"] = matrix_to_json(w)
    if meta:
        doc["meta"] = meta
    return doc


class Bundle:
    """Parsed interchange document."""

    def __init__(self, ring, complex=None, form=None, frame=None,
                 multiplication=None, spinor=None, splitting=None, w=None, meta=None):
        self.ring = ring
        self.complex = complex
        self.form = form
        self.frame = frame
        self.multiplication = multiplication
        self.spinor = spinor
        self.splitting = splitting
        self.w = w
        self.meta = meta

    def to_document(self) -> dict:
        return document(self.ring, self.complex, self.form, self.frame,
                        self.multiplication, self.spinor, self.splitting,
                        self.w, self.meta)


def parse_document(doc) -> Bundle:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError("$.schema", f"expected {SCHEMA!r}, got {doc.get('schema')!r}")
    ring = ring_from_json(_require(doc, "ring", "$", dict))
    out = Bundle(ring)
    if doc.get("complex") is not None:
        out.complex = complex_from_json(ring, doc["complex"])
    if doc.get("form") is not None:
        fm = doc["form"]
        mat = matrix_from_json(ring, _require(fm, "matrix", "$.form"), "$.form.matrix")
        for row in mat.entries:
            for p in row:
                if not p.is_constant():
                    raise SchemaError("$.form.matrix", "form entries must be constants")
        twist = fm.get("twist_degree")
        out.form = SelfDualStructure(mat, tuple(twist) if twist else None)
    if doc.get("frame") is not None:
        fr = doc["frame"]
        n = _require(fr, "n", "$.frame", int)
        embed_rows = _require(fr, "embed", "$.frame", list)
        try:
            embed = tuple(tuple(ring.field.parse(x) for x in row) for row in embed_rows)
            gram = None
            if out.form is not None:
                gram = tuple(tuple(p.constant_value() for p in row) for row in out.form.form.entries)
            out.frame = HyperbolicFrame(ring, n, embed, gram)
        except SchemaError:
            raise
        except Exception as exc:
            raise SchemaError("$.frame", str(exc))
    if doc.get("multiplication") is not None:
        mm = doc["multiplication"]
        out.multiplication = MultiplicationStructure(
            matrix_from_json(ring, _require(mm, "m11", "$.multiplication"), "$.multiplication.m11"),
            matrix_from_json(ring, _require(mm, "m12", "$.multiplication"), "$.multiplication.m12"))
    if doc.get("spinor") is not None:
        sp = doc["spinor"]
        parity = 1 if _require(sp, "parity", "$.spinor", str) == "odd" else 0
        coeffs = {}
        n = out.frame.n if out.frame else (out.complex.ranks[2] // 2 if out.complex else 0)
        for pair in _require(sp, "coefficients", "$.spinor", list):
            if len(pair) != 2:
                raise SchemaError("$.spinor.coefficients", "expected [subset, poly] pairs")
            subset, text = pair
            coeffs[tuple(i - 1 for i in subset)] = ring.parse(text)
        out.spinor = SpinorVector.make(ring, n, parity, coeffs)
    if doc.get("splitting") is not None:
        out.splitting = matrix_from_json(ring, _require(doc["splitting"], "basis_change",
                                                        "$.splitting"), "$.splitting.basis_change")
    if doc.get("w") is not None:
        out.w = matrix_from_json(ring, doc["w"], "$.w")
    if doc.get("meta") is not None:
        out.meta = doc["meta"]
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def write_file(path: str, doc: dict):
    with open(path, "w") as fh:
        fh.write(dumps(doc))


def read_file(path: str) -> Bundle:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"not valid JSON: {exc}")
    return parse_document(doc)


def loads(text: str) -> Bundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON: {exc}")
    return parse_document(doc)
