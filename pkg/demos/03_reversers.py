"""
Every element is reversible
===========================

Build reversers h with h g h^-1 = g^-1 in Sp(n) and Sp(n,1), look at their
squares, and re-check the claims with the independent verifier.
"""
import numpy as np

from qhi import ElementRecipe, Form, projective_reverser, random_element, reverser_spn, reverser_spn1
from qhi import verify_report
from qhi.generators import random_sp

rng = np.random.default_rng(3)
g = random_sp(4, rng).with_form(Form.POSITIVE)
rep = reverser_spn(g)
print("Sp(4): h^2 =", rep.reverser_square, " reversal residual", f"{rep.residuals['reversal']:.1e}")

print(f"{'kind':16s} {'h^2':6s} {'projective h^2':15s} reversal")
for kind in ["elliptic", "hyperbolic", "vertical", "non-vertical", "non-unipotent-2", "non-unipotent-3"]:
    g = random_element(ElementRecipe(kind, 3, 5)).element
    rep = reverser_spn1(g)
    proj = projective_reverser(g)
    print(f"{kind:16s} {rep.reverser_square:6s} {proj.reverser_square:15s} {rep.residuals['reversal']:.1e}")
    assert verify_report(rep).passed and verify_report(proj).passed

# a vertical translation in Sp(3,1) has a reverser squaring to neither +I nor -I;
# the projective reverser fixes that, so the image in PSp(n,1) is an involution
