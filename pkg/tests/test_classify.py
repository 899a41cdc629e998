import numpy as np
import pytest

from conftest import conjugate_by
from qhi.classify import classify, conjugacy_invariant, normal_form_parabolic
from qhi.errors import NotInGroup, WrongModel
from qhi.generators import (ElementRecipe, hyperbolic_block, random_element, random_sp_n1,
                            u_non_vertical, u_vertical)
from qhi.qmatrix import Form, QMatrix, direct_sum, is_in_group, transport
from qhi.quaternion import I, Quaternion, similar

E = np.exp


def test_identity():
    for form in (Form.BALL, Form.SIEGEL):
        assert classify(QMatrix.identity(3, form)).kind == "identity"


def test_vertical_normal_form_is_itself():
    g = u_vertical(I)
    c = classify(g)
    assert c.kind == "parabolic-vertical"
    assert (c.normal_form - g).norm() < 1e-15
    assert (c.conjugator - QMatrix.identity(2)).norm() < 1e-15


def test_hyperbolic_parameters():
    c = classify(hyperbolic_block(2.0, np.pi / 4))
    assert c.kind == "hyperbolic"
    assert abs(c.invariants["r"] - 2) < 1e-12
    assert abs(c.invariants["theta"] - np.pi / 4) < 1e-12


def test_non_vertical_normal_form_is_itself():
    g = u_non_vertical(Quaternion(0.5), Quaternion(1.0))
    c = classify(g)
    assert c.kind == "parabolic-non-vertical"
    assert (c.conjugator - QMatrix.identity(3)).norm() < 1e-15


def test_rejects_sp_n_and_non_members():
    with pytest.raises(WrongModel):
        classify(QMatrix.identity(2, Form.POSITIVE))
    with pytest.raises(NotInGroup):
        classify(QMatrix.diag([2, 0.5], Form.BALL))


@pytest.mark.parametrize("kind", ["elliptic", "hyperbolic", "vertical", "non-vertical",
                                  "non-unipotent-2", "non-unipotent-3"])
@pytest.mark.parametrize("model", [Form.BALL, Form.SIEGEL])
def test_normal_form_reconstruction(kind, model):
    for seed in range(8):
        for n in (2, 3):
            g = random_element(ElementRecipe(kind, n, seed, model=model)).element
            c = classify(g)
            assert c.residual < 1e-8
            x = c.conjugator
            assert x.form is g.form
            assert is_in_group(x)[1] < 1e-9
            assert (x @ g @ x.inv() - c.normal_form).norm() < 1e-8


def test_conjugation_invariant_kind(rng):
    kinds = ["elliptic", "hyperbolic", "vertical", "non-vertical", "non-unipotent-2"]
    for trial in range(100):
        kind = kinds[trial % len(kinds)]
        n = 2 + trial % 2
        g = random_element(ElementRecipe(kind, n, trial)).element
        x = random_sp_n1(n, rng, g.form)
        assert classify(conjugate_by(g, x)).kind == classify(g).kind


def test_hyperbolic_reciprocity():
    for seed in range(20):
        c = classify(random_element(ElementRecipe("hyperbolic", 2, seed)).element)
        big, small = c.invariants["null"]
        assert abs(big * np.conj(small) - 1) < 1e-9
        assert abs(big) > 1


def test_parabolic_twisted_vertical_already_normal():
    lam = E(1j * np.pi / 3)
    g = u_vertical(Quaternion(0, 2), lam)
    nf = normal_form_parabolic(g)
    assert abs(nf.lam - lam) < 1e-12
    assert similar(nf.s, Quaternion(0, 2))
    assert nf.a is None and nf.B.rows == 0


def test_parabolic_constraints():
    g = u_non_vertical(Quaternion(0.5, 1.0), Quaternion(1.0))
    nf = normal_form_parabolic(g)
    assert abs(2 * nf.s.w - nf.a.norm2()) < 1e-12
    assert abs(nf.s.w - 0.5) < 1e-12


def test_parabolic_round_trip(rng):
    base = direct_sum(u_vertical(Quaternion(0, 0.7), E(1j)), QMatrix.identity(2)).with_form(Form.SIEGEL)
    for _ in range(10):
        g = conjugate_by(base, random_sp_n1(3, rng, Form.SIEGEL))
        nf = normal_form_parabolic(g)
        assert nf.residual < 1e-8
        assert abs(nf.lam - E(1j)) < 1e-9
        # |s| changes under boosts; its sign along i does not (lam is non-real)
        assert abs(nf.s.w) < 1e-12 and nf.s.x > 0
        assert (nf.B - QMatrix.identity(2)).norm() < 1e-8


def test_vertical_parameter_canonical_positive():
    for seed in range(10):
        nf = normal_form_parabolic(random_element(ElementRecipe("vertical", 2, seed)).element)
        assert nf.s.x > 0 and abs(nf.s.y) + abs(nf.s.z) < 1e-12


def test_normal_form_transported_to_own_model():
    g = transport(u_vertical(I), Form.BALL)
    c = classify(g)
    assert c.model is Form.SIEGEL
    assert c.normal_form.form is Form.BALL
    assert (c.normal_form - transport(u_vertical(I), Form.BALL)).norm() < 1e-12


def test_invariant_distinguishes_negative_class():
    a = conjugacy_invariant(QMatrix.diag([1j, 1, 1], Form.BALL))
    b = conjugacy_invariant(QMatrix.diag([1, 1j, 1], Form.BALL))
    assert not a.matches(b)


def test_invariant_distinguishes_unipotent_degree():
    uv = direct_sum(u_vertical(I), QMatrix.identity(1)).with_form(Form.SIEGEL)
    unv = u_non_vertical(Quaternion(0.5), Quaternion(1.0))
    assert not conjugacy_invariant(uv).matches(conjugacy_invariant(unv))


def test_invariant_stable_under_conjugation(rng):
    for kind in ("elliptic", "hyperbolic", "vertical", "non-vertical", "non-unipotent-2", "non-unipotent-3"):
        g = random_element(ElementRecipe(kind, 2, 99)).element
        ref = conjugacy_invariant(g)
        for _ in range(10):
            assert conjugacy_invariant(conjugate_by(g, random_sp_n1(2, rng, g.form))).matches(ref)


def test_twisted_vertical_sign_is_an_invariant():
    lam = E(1j)
    plus = conjugacy_invariant(u_vertical(Quaternion(0, 1), lam))
    minus = conjugacy_invariant(u_vertical(Quaternion(0, -1), lam))
    assert plus.sign == 1 and minus.sign == -1
    assert not plus.matches(minus)


def test_to_json_is_serialisable():
    import json
    c = classify(u_non_vertical(Quaternion(0.5), Quaternion(1.0)))
    doc = json.loads(json.dumps(c.to_json()))
    assert doc["kind"] == "parabolic-non-vertical"
    assert doc["invariants"]["a"] == [1.0, 0.0, 0.0, 0.0]
