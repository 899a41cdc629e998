import json

import numpy as np
import pytest

from qhi.classify import classify
from qhi.errors import BadRecipe
from qhi.generators import ElementRecipe, random_element, u_vertical
from qhi.io import element_to_json
from qhi.qmatrix import Form, QMatrix, is_in_group
from qhi.quaternion import I

KINDS = ["identity", "compact", "elliptic", "hyperbolic", "vertical", "non-vertical",
         "non-unipotent-2", "non-unipotent-3"]


def _valid(kind, n):
    return not (n == 1 and kind in ("non-vertical", "non-unipotent-3"))


def test_elliptic_recipe():
    g = random_element(ElementRecipe("elliptic", 2, 7)).element
    assert is_in_group(g)[0]
    assert classify(g).kind == "elliptic"


def test_explicit_vertical_is_exact():
    g = random_element(ElementRecipe("vertical", 1, 0, {"s": [0, 1, 0, 0]})).element
    assert (g - u_vertical(I)).norm() == 0.0


def test_explicit_hyperbolic_is_exact():
    g = random_element(ElementRecipe("hyperbolic", 1, 0, {"r": 2, "theta": 0})).element
    assert (g - QMatrix.diag([2, 0.5])).norm() == 0.0
    assert g.form is Form.SIEGEL


@pytest.mark.parametrize("kind", KINDS)
def test_determinism(kind):
    n = 3
    a = random_element(ElementRecipe(kind, n, 42))
    b = random_element(ElementRecipe(kind, n, 42))
    ja = json.dumps(element_to_json(a.element, a.provenance()))
    jb = json.dumps(element_to_json(b.element, b.provenance()))
    assert ja == jb


@pytest.mark.parametrize("kind", KINDS)
def test_generated_members(kind):
    for n in range(1, 6):
        if not _valid(kind, n):
            continue
        for seed in range(5):
            for model in ((None,) if kind == "compact" else (Form.BALL, Form.SIEGEL)):
                gen = random_element(ElementRecipe(kind, n, seed, model=model))
                g = gen.element
                assert is_in_group(g)[1] < 1e-11
                assert g.rows == (n if kind == "compact" else n + 1)
                x = gen.conjugator
                assert (x @ g @ x.inv() - gen.normal_form).norm() < 1e-9


def test_aliases():
    g = random_element(ElementRecipe("parabolic-vertical", 1, 0)).element
    assert classify(g).kind == "parabolic-vertical"


@pytest.mark.parametrize("recipe", [
    ElementRecipe("non-vertical", 1, 0),
    ElementRecipe("hyperbolic", 1, 0, {"r": 0.5}),
    ElementRecipe("vertical", 1, 0, {"s": [1, 1, 0, 0]}),
    ElementRecipe("non-vertical", 2, 0, {"a": [1, 0, 0, 0], "s": [3, 0, 0, 0]}),
    ElementRecipe("elliptic", 0, 0),
    ElementRecipe("nonsense", 2, 0),
    ElementRecipe("compact", 2, 0, model=Form.BALL),
])
def test_bad_recipes(recipe):
    with pytest.raises(BadRecipe):
        random_element(recipe)


def test_provenance_contents():
    gen = random_element(ElementRecipe("hyperbolic", 2, 3))
    prov = gen.provenance()
    assert prov["kind"] == "hyperbolic" and prov["seed"] == 3
    nf = QMatrix.from_entries(prov["normal_form"])
    assert np.allclose(np.abs(np.diag(nf.A))[:2].prod(), 1.0)
