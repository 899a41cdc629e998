import json

import pytest

from qhi.errors import MalformedDocument
from qhi.generators import ElementRecipe, random_element
from qhi.io import element_from_json, element_of, element_to_json, read_element, write_element
from qhi.qmatrix import Form, QMatrix


@pytest.mark.parametrize("kind,n", [("compact", 3), ("elliptic", 2), ("non-vertical", 3)])
def test_round_trip_is_exact(kind, n, tmp_path):
    g = random_element(ElementRecipe(kind, n, 5)).element
    path = tmp_path / "g.json"
    write_element(path, g)
    back = read_element(path)
    assert back.form is g.form
    assert (back - g).norm() == 0.0


def test_document_shape():
    g = QMatrix.identity(3, Form.BALL)
    doc = element_to_json(g)
    assert doc["n"] == 2 and doc["context"] == "sp_n1"
    assert doc["entries"][0][0] == [1.0, 0.0, 0.0, 0.0]
    doc = element_to_json(QMatrix.identity(3, Form.POSITIVE))
    assert doc["n"] == 3 and doc["context"] == "sp_n"


def test_provenance_is_ignored_by_reader():
    g = QMatrix.identity(2, Form.SIEGEL)
    doc = json.loads(json.dumps(element_to_json(g, {"kind": "identity"})))
    assert (element_from_json(doc) - g).norm() == 0.0


@pytest.mark.parametrize("doc", [
    [],
    {"n": 1, "context": "sp_n1"},
    {"n": 1, "context": "bogus", "entries": [[[1, 0, 0, 0]]]},
    {"n": 2, "context": "sp_n1", "entries": [[[1, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [1, 0, 0, 0]]]},
    {"n": 1, "context": "sp_n", "entries": [[[1, 0, 0]]]},
    {"n": 1, "context": "sp_n", "entries": "x"},
])
def test_malformed(doc):
    with pytest.raises(MalformedDocument):
        element_from_json(doc)


def test_element_of_report():
    g = QMatrix.identity(2, Form.SIEGEL)
    assert (element_of({"element": element_to_json(g)}) - g).norm() == 0.0
    with pytest.raises(MalformedDocument):
        element_of({"kind": "x"})
