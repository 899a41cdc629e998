"""
Strong reversibility and involution products
============================================

Decide whether g is a product of two involutions, print the witness check,
and factor an element of Sp(4) into four involutions.
"""
import numpy as np

from qhi import Form, QMatrix, Quaternion, four_involution_factorization, strong_reversibility
from qhi.generators import hyperbolic_block, random_sp, u_non_vertical, u_vertical

e = np.exp
cases = {
    "diag(i) in Sp(1)": QMatrix.diag([1j], Form.POSITIVE),
    "diag(i, i) in Sp(2)": QMatrix.diag([1j, 1j], Form.POSITIVE),
    "vertical translation": u_vertical(Quaternion(0, 1)),
    "non-vertical translation": u_non_vertical(Quaternion(0.5), Quaternion(1.0)),
    "diag(2, 1/2)": hyperbolic_block(2.0, 0.0),
    "diag(2e^{i pi/4}, e^{i pi/4}/2)": hyperbolic_block(2.0, np.pi / 4),
    "elliptic diag(-1, e^i, e^i)": QMatrix.diag([-1, e(1j), e(1j)], Form.BALL),
}
for name, g in cases.items():
    rep = strong_reversibility(g)
    line = f"{name:32s} {str(rep.strongly_reversible):5s}"
    if rep.witness is not None:
        line += f"  witness^2 - I {rep.residuals['witness_square']:.1e}"
    print(line)
    print("    " + "; ".join(rep.criterion))

g = random_sp(4, np.random.default_rng(2)).with_form(Form.POSITIVE)
rep = four_involution_factorization(g)
print("Sp(4) as four involutions:", {k: f"{v:.1e}" for k, v in rep.residuals.items()})
