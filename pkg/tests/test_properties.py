"""Randomised invariants over seeded recipes, driven by hypothesis."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qhi.classify import classify, conjugacy_invariant
from qhi.generators import ElementRecipe, random_element, random_sp, random_sp_n1
from qhi.qmatrix import Form, QMatrix, is_in_group
from qhi.reversibility import (four_involution_factorization, projective_reverser,
                               reversal_residual, reverser_spn, reverser_spn1,
                               strong_reversibility, verify_report)
from qhi.spectral import jordan_decompose

KINDS = ["identity", "elliptic", "hyperbolic", "vertical", "non-vertical", "non-unipotent-2",
         "non-unipotent-3"]
DEGREE = {"vertical": 2, "non-unipotent-2": 2, "non-vertical": 3, "non-unipotent-3": 3}

seeds = st.integers(0, 2**32 - 1)
models = st.sampled_from([Form.BALL, Form.SIEGEL])


@st.composite
def elements(draw):
    kind = draw(st.sampled_from(KINDS))
    low = 2 if kind in ("non-vertical", "non-unipotent-3") else 1
    n = draw(st.integers(low, 4))
    return kind, random_element(ElementRecipe(kind, n, draw(seeds), model=draw(models))).element


@settings(max_examples=60, deadline=None)
@given(elements())
def test_every_element_is_reversible(item):
    _, g = item
    h = reverser_spn1(g).reverser
    assert reversal_residual(h, g) < 1e-8
    assert is_in_group(h, g.form)[1] < 1e-9


@settings(max_examples=60, deadline=None)
@given(elements())
def test_projective_reverser_squares_to_plus_minus_identity(item):
    _, g = item
    rep = projective_reverser(g)
    eye = QMatrix.identity(g.rows)
    sign = 1.0 if rep.reverser_square == "+I" else -1.0
    h = rep.reverser
    assert (h @ h - eye.rmul(sign)).norm() < 1e-10
    assert rep.residuals["reversal"] < 1e-8


@settings(max_examples=60, deadline=None)
@given(elements())
def test_witness_soundness(item):
    _, g = item
    rep = strong_reversibility(g)
    v = verify_report(rep)
    assert v.passed
    if rep.strongly_reversible:
        assert v["witness_square"].passed and v["witness_reversal"].passed
    else:
        assert rep.witness is None and rep.theorem_backed


@settings(max_examples=40, deadline=None)
@given(elements(), seeds)
def test_classification_is_conjugation_invariant(item, seed):
    kind, g = item
    x = random_sp_n1(g.rows - 1, np.random.default_rng(seed), g.form)
    h = (x @ g @ x.inv()).with_form(g.form)
    assert classify(h).kind == classify(g).kind
    assert conjugacy_invariant(h).matches(conjugacy_invariant(g))


@settings(max_examples=40, deadline=None)
@given(elements())
def test_jordan_degree_matches_kind(item):
    kind, g = item
    jp = jordan_decompose(g)
    assert jp.degree == DEGREE.get(kind, 1)
    assert jp.commutator_residual < 1e-8 and jp.product_residual < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), seeds)
def test_four_involution_factorization(m, seed):
    g = random_sp(2 * m, np.random.default_rng(seed)).with_form(Form.POSITIVE)
    rep = four_involution_factorization(g)
    assert len(rep.factorization) == 4
    assert max(rep.residuals.values()) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), seeds)
def test_spn_reverser(n, seed):
    g = random_sp(n, np.random.default_rng(seed)).with_form(Form.POSITIVE)
    rep = reverser_spn(g)
    assert rep.reverser_square == "-I"
    assert rep.residuals["reversal"] < 1e-8
