"""JSON documents for elements and reports.

An element is ``{"n": int, "context": "sp_n" | "sp_n1" | "sp_n1_hat",
"entries": [[[w, x, y, z], ...], ...]}`` with ``n`` the group parameter
(matrix size ``n`` for Sp(n), ``n + 1`` otherwise).  Extra keys such as
``"provenance"`` are preserved by the reader but otherwise ignored.  Floats
are written with ``repr`` precision, so a round trip is exact.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import DimensionMismatch, MalformedDocument
from .qmatrix import Form, QMatrix, group_n, size_for


def element_to_json(g: QMatrix, provenance: dict | None = None) -> dict:
    if g.form is None:
        raise MalformedDocument("element has no form context")
    doc = {"n": group_n(g.form, g.rows), "context": g.form.value, "entries": g.entries()}
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def element_from_json(doc) -> QMatrix:
    if not isinstance(doc, dict):
        raise MalformedDocument("element document must be a JSON object")
    try:
        form = Form(doc["context"])
        n = int(doc["n"])
        g = QMatrix.from_entries(doc["entries"], form)
    except KeyError as e:
        raise MalformedDocument(f"missing key {e}") from None
    except (ValueError, TypeError, DimensionMismatch) as e:
        raise MalformedDocument(str(e)) from None
    if g.rows != g.cols or g.rows != size_for(form, n):
        raise MalformedDocument(f"entries of shape {g.shape} do not match n={n} in {form.value}")
    return g


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(f"invalid JSON: {e}") from None


def dumps(doc, indent: int | None = None) -> str:
    return json.dumps(doc, indent=indent)


def read_element(path) -> QMatrix:
    return element_from_json(loads(Path(path).read_text()))


def write_element(path, g: QMatrix, provenance: dict | None = None, indent: int | None = None) -> None:
    Path(path).write_text(dumps(element_to_json(g, provenance), indent) + "\n")


def read_document(source) -> dict:
    """Read a JSON object from a path, or from stdin when ``source`` is '-' or None."""
    import sys
    if source in (None, "-"):
        text = sys.stdin.read()
    else:
        text = Path(source).read_text()
    doc = loads(text)
    if not isinstance(doc, dict):
        raise MalformedDocument("expected a JSON object")
    return doc


def element_of(doc: dict) -> QMatrix:
    """The element inside an element document or a report that embeds one."""
    if "entries" in doc:
        return element_from_json(doc)
    if "element" in doc:
        return element_from_json(doc["element"])
    raise MalformedDocument("document holds no element")
