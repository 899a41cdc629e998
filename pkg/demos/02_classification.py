"""
Classifying isometries
======================

Generate one element of each type, conjugated by a random group element,
and recover its type, normal-form parameters and a certified conjugator.
"""
import numpy as np

from qhi import ElementRecipe, classify, conjugacy_invariant, random_element

np.set_printoptions(precision=4, suppress=True)

for kind in ["elliptic", "hyperbolic", "vertical", "non-vertical", "non-unipotent-2", "non-unipotent-3"]:
    gen = random_element(ElementRecipe(kind, n=3, seed=11))
    c = classify(gen.element)
    inv = c.invariants
    print(f"{kind:16s} -> {c.kind:26s} residual {c.residual:.1e}")
    if c.kind == "hyperbolic":
        print(f"    r = {inv['r']:.4f}, theta = {inv['theta']:.4f}")
    elif c.kind == "elliptic":
        print("    negative class", np.round(inv["negative"], 4), " positive", np.round(inv["compact"], 4))
    else:
        print("    lam", np.round(inv["lam"], 4), " s", inv["s"], " a", inv.get("a"))

# the invariant is unchanged by conjugation and separates the two unipotent types
g = random_element(ElementRecipe("vertical", 2, 1)).element
h = random_element(ElementRecipe("non-vertical", 2, 1)).element
print("vertical vs non-vertical invariants match:", conjugacy_invariant(g).matches(conjugacy_invariant(h)))
