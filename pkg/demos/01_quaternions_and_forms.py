"""
Quaternions, the complex adjoint and the two models
====================================================

Quaternion arithmetic, similarity classes, the complex adjoint embedding and
the Cayley transform between the ball and Siegel models.
"""
import numpy as np

from qhi import Form, QMatrix, Quaternion, canonicalize, cayley, complex_adjoint, is_in_group
from qhi import similarity_conjugator, to_ball
from qhi.qmatrix import form_matrix
from qhi.quaternion import I, J

# i and j anticommute; j moves past a complex number by conjugating it
print("ij =", I * J, "  ji =", J * I)
lam = Quaternion(0.3, 0.8)
print("j lam =", J * lam, "  conj(lam) j =", lam.conj() * J)

# every quaternion is similar to a unique a + bi with b >= 0
q = Quaternion(0.5, 0.5, 0.5, 0.5)
print("class of", q, "->", canonicalize(q).rep)

# an explicit unit x with s = x (r i) x^-1
s = Quaternion(0, 3, 4, 0)
r, x = similarity_conjugator(s)
print("r =", r, " residual", (x * Quaternion(0, r) * x.inverse() - s).norm())

# the complex adjoint is multiplicative
rng = np.random.default_rng(0)
P = QMatrix.from_real(rng.normal(size=(3, 3, 4)))
Q = QMatrix.from_real(rng.normal(size=(3, 3, 4)))
print("phi(PQ) - phi(P)phi(Q):", np.linalg.norm(complex_adjoint(P @ Q) - complex_adjoint(P) @ complex_adjoint(Q)))

# Cayley transform: P* J P is the Siegel form
Pc, _ = cayley(3)
print("P* J P - Jhat:", (Pc.star() @ form_matrix(Form.BALL, 3) @ Pc - form_matrix(Form.SIEGEL, 3)).norm())

# diag(2, 1/2) preserves the Siegel form, not the ball form; transport fixes that
d = QMatrix.diag([2, 0.5])
print("Siegel member:", is_in_group(d, Form.SIEGEL)[0], " ball member:", is_in_group(d, Form.BALL)[0])
print("after transport:", is_in_group(to_ball(d.with_form(Form.SIEGEL)))[0])
