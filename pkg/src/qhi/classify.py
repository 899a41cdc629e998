"""Elliptic / hyperbolic / parabolic classification with normal forms.

Normal forms live in a fixed model: elliptic elements are diagonalised in
the ball model, hyperbolic and parabolic ones are brought to block form in
the Siegel model.  :class:`IsometryClass` carries both the model-side data
(used by :mod:`qhi.reversibility`) and the normal form and conjugator
transported back into the element's own model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import left_null_projector
from .errors import IllConditioned, WrongModel
from .qmatrix import Form, QMatrix, default_tol, direct_sum, form_matrix, transport
from .quaternion import Quaternion, canonicalize, similarity_conjugator
from .spectral import (UNIT_BAND, Cluster, SpectralData, _phase_normalise,
                       check_member, diagonalize, form_eigvecs, jordan_decompose,
                       spectral_data)

KINDS = (
    "identity",
    "elliptic",
    "hyperbolic",
    "parabolic-vertical",
    "parabolic-non-vertical",
    "parabolic-non-unipotent-2",
    "parabolic-non-unipotent-3",
)

PARABOLIC = KINDS[3:]

# relative residual a normal form must reach before it is reported
CERTIFY_TOL = 1e-8


@dataclass
class IsometryClass:
    kind: str
    normal_form: QMatrix          # in the element's own model
    conjugator: QMatrix           # conjugator @ g @ conjugator^-1 == normal_form
    model: Form                   # model the normal form was built in
    model_normal_form: QMatrix
    model_conjugator: QMatrix
    residual: float
    invariants: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.invariants.get("degree", 1)

    @property
    def block_size(self) -> int:
        """Size of the noncompact block in the normal form (0 if elliptic)."""
        if self.kind == "hyperbolic":
            return 2
        if self.kind in PARABOLIC:
            return self.degree
        return 0

    @property
    def compact_diagonal(self) -> list[complex]:
        return list(self.invariants.get("compact", []))

    def to_json(self) -> dict:
        inv = {}
        for key, v in self.invariants.items():
            inv[key] = _jsonify(v)
        return {
            "kind": self.kind,
            "model": self.model.value,
            "normal_form": self.normal_form.entries(),
            "conjugator": self.conjugator.entries(),
            "residual": self.residual,
            "invariants": inv,
        }


def _jsonify(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, Quaternion):
        return v.to_list()
    if isinstance(v, (list, tuple)):
        return [_jsonify(t) for t in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


@dataclass(frozen=True)
class ConjugacyInvariant:
    """Data that decides conjugacy (Chen-Greenberg): kind, unipotent degree,
    the negative (or null) class, the sorted remaining classes, and for a
    vertical part with non-real eigenvalue the sign of the translation."""

    kind: str
    degree: int
    negative: complex | None
    classes: tuple
    sign: int | None = None

    def matches(self, other: "ConjugacyInvariant", tol: float = 1e-6) -> bool:
        if (self.kind, self.degree, self.sign) != (other.kind, other.degree, other.sign):
            return False
        if (self.negative is None) != (other.negative is None):
            return False
        if self.negative is not None and abs(self.negative - other.negative) > tol:
            return False
        if len(self.classes) != len(other.classes):
            return False
        return all(abs(a - b) <= tol for a, b in zip(self.classes, other.classes))


@dataclass
class ParabolicNormalForm:
    lam: complex
    s: Quaternion
    a: Quaternion | None
    B: QMatrix
    conjugator: QMatrix
    residual: float


def _canon(z: complex) -> complex:
    return complex(z.real, abs(z.imag))


def _sorted_classes(values) -> tuple:
    vals = [_canon(complex(v)) for v in values]
    return tuple(sorted(vals, key=lambda z: (round(z.real, 9), round(z.imag, 9))))


def _finish(g: QMatrix, kind: str, model: Form, nf: QMatrix, x: QMatrix, invariants: dict) -> IsometryClass:
    nf = nf.with_form(model)
    x = x.with_form(model)
    gm = transport(g, model)
    residual = (x @ gm @ x.inv() - nf).norm()
    if residual > CERTIFY_TOL * max(1.0, gm.norm()):
        raise IllConditioned(
            f"normal form does not certify (residual {residual:.2e}); element is near a type boundary")
    own_nf = transport(nf, g.form)
    own_x = transport(x, g.form)
    return IsometryClass(kind, own_nf, own_x, model, nf, x, residual, invariants)


def classify(g: QMatrix, tol: float | None = None) -> IsometryClass:
    """Classify ``g`` in Sp(n,1) (ball model) or its Siegel conjugate."""
    if g.form is None or not g.form.indefinite:
        raise WrongModel("classification needs an element of Sp(n,1)")
    check_member(g, tol)
    tol = default_tol() if tol is None else tol
    size = g.rows
    eye = QMatrix.identity(size)

    if (g - eye).norm() <= tol * max(1.0, g.norm()):
        return _finish(g, "identity", g.form, QMatrix.identity(size), QMatrix.identity(size),
                       {"degree": 1, "compact": [1.0 + 0j] * size})

    gs = transport(g, Form.SIEGEL)
    data = spectral_data(gs)
    unit = all(abs(abs(c.mean) - 1.0) <= UNIT_BAND for c in data.clusters)

    if not unit:
        if not data.semisimple:
            raise IllConditioned("non-unit eigenvalues with a unipotent part")
        u, d = diagonalize(gs, tol, data)
        lam0 = complex(d.A[0, 0])
        r, theta = abs(lam0), math.atan2(lam0.imag, lam0.real)
        inv = {"degree": 1, "r": r, "theta": theta,
               "null": [lam0, complex(d.A[1, 1])],
               "compact": [complex(v) for v in np.diag(d.A)[2:]]}
        return _finish(g, "hyperbolic", Form.SIEGEL, d, u.inv(), inv)

    if data.semisimple:
        gb = transport(g, Form.BALL)
        u, d = diagonalize(gb, tol)
        diag = [complex(v) for v in np.diag(d.A)]
        inv = {"degree": 1, "negative": diag[0], "compact": diag[1:]}
        return _finish(g, "elliptic", Form.BALL, d, u.inv(), inv)

    return _classify_parabolic(g, gs, data, tol)


def _null_cluster(data: SpectralData) -> Cluster:
    bad = [c for c in data.upper() if c.degree > 1]
    if len(bad) != 1:
        raise IllConditioned(f"expected one non-semisimple class, found {len(bad)}")
    c = bad[0]
    if c.degree not in (2, 3):
        raise IllConditioned(f"unipotent degree {c.degree} is impossible in Sp(n,1)")
    return c


def _top_vector(Nphi: np.ndarray, c: Cluster, power: int) -> QMatrix:
    """Vector in the generalised eigenspace maximising ``||N^power v||``."""
    M = c.basis
    for _ in range(power):
        M = Nphi @ M
    _, _, Vh = np.linalg.svd(M)
    x = c.basis @ Vh[0].conj()
    return _phase_normalise(QMatrix.from_col(x), complex_only=not c.is_real)


def _classify_parabolic(g: QMatrix, gs: QMatrix, data: SpectralData, tol: float) -> IsometryClass:
    size = gs.rows
    F = form_matrix(Form.SIEGEL, size)
    jp = jordan_decompose(gs, tol, data)
    c = _null_cluster(data)
    lam = c.mean
    N = jp.unipotent - QMatrix.identity(size)
    Nphi = N.adjoint()

    def ip(v, w):
        return (v.star() @ F @ w)[0, 0]

    e0 = _top_vector(Nphi, c, c.degree - 1)
    if c.degree == 2:
        w = N @ e0
        q = ip(e0, w)
        if q.norm() <= 1e-9 * max(1.0, e0.norm() * w.norm()):
            raise IllConditioned("vertical direction is degenerate")
        a0 = ip(e0, e0).w
        e0 = e0 + w.rmul(q.inverse() * (-0.5 * a0))
        e1 = w.rmul(-q.inverse())
        s = -q
        s = Quaternion(0.0, s.x, s.y, s.z)
        E = [e0, e1]
        a = None
        if c.is_real:
            _, x = similarity_conjugator(s)
            E = [v.rmul(x) for v in E]
            s = x.inverse() * s * x
            s = Quaternion(0.0, s.norm(), 0.0, 0.0)
        else:
            s = Quaternion(0.0, s.x, 0.0, 0.0)
    else:
        v2 = N @ (N @ e0)
        kappa = -ip(e0, v2).w
        if kappa <= 1e-12 * max(1.0, e0.norm() * v2.norm()):
            raise IllConditioned("non-vertical direction is degenerate")
        a0 = ip(e0, e0).w
        e0 = e0 + v2.rmul(a0 / (2.0 * kappa))
        av = math.sqrt(kappa)
        e1 = v2.rmul(1.0 / kappa)
        s = -ip(e0, N @ e0)
        e2 = (N @ e0 - e1.rmul(s)).rmul(1.0 / av)
        E = [e0, e1, e2]
        im = s.imag
        if c.is_real and im.norm() > 1e-14 * max(1.0, s.norm()):
            _, x = similarity_conjugator(im)
            E = [v.rmul(x) for v in E]
            s = Quaternion(kappa / 2.0, im.norm())
        else:
            s = Quaternion(kappa / 2.0, s.x)
        a = Quaternion(av)

    U = QMatrix.from_columns(E)
    project = left_null_projector(U, F)
    rest: list[tuple[QMatrix, complex]] = []
    for cl in data.upper():
        if cl is c:
            k = len(E) if not cl.is_real else 2 * len(E)
            if cl.dim == k:
                continue
            Z = project(QMatrix.from_col(cl.basis)).col()
            Q, sv, _ = np.linalg.svd(Z, full_matrices=False)
            basis = Q[:, : cl.dim - k]
            sub = Cluster(cl.mean, basis, basis @ basis.conj().T, 1, cl.dim - k)
        else:
            sub = cl
        V, signs = form_eigvecs(sub, F)
        if np.any(signs < 0):
            raise IllConditioned("parabolic element has a non-positive compact class")
        V = _phase_normalise(V, complex_only=not sub.is_real)
        rest.extend((V.column(k), sub.mean) for k in range(V.cols))

    u = QMatrix.from_columns(E + [v for v, _ in rest]).with_form(Form.SIEGEL)
    compact = [mu for _, mu in rest]
    B = QMatrix.diag(compact)
    L = Quaternion.from_pair(lam)
    if c.degree == 2:
        from .generators import u_vertical
        block = u_vertical(s, lam)
    else:
        from .generators import u_non_vertical
        block = u_non_vertical(s, a, lam)
    nf = direct_sum(block, B)

    unipotent = abs(lam - 1.0) <= UNIT_BAND and all(abs(mu - 1.0) <= UNIT_BAND for mu in compact)
    if unipotent:
        kind = "parabolic-vertical" if c.degree == 2 else "parabolic-non-vertical"
    else:
        kind = f"parabolic-non-unipotent-{c.degree}"
    inv = {"degree": c.degree, "lam": lam, "s": s, "compact": compact}
    if a is not None:
        inv["a"] = a
    del L
    return _finish(g, kind, Form.SIEGEL, nf, u.inv(), inv)


def normal_form_parabolic(g: QMatrix, tol: float | None = None, cls: IsometryClass | None = None):
    """Parameters ``(lam, s, a, B)`` of the parabolic normal form
    ``lam u ⊕ B`` together with the conjugator into it.  ``a`` is None for
    vertical types."""
    cls = classify(g, tol) if cls is None else cls
    if cls.kind not in PARABOLIC:
        raise WrongModel(f"element is {cls.kind}, not parabolic")
    inv = cls.invariants
    k = cls.degree
    B = cls.model_normal_form.block(slice(k, None), slice(k, None)).with_form(Form.POSITIVE)
    return ParabolicNormalForm(inv["lam"], inv["s"], inv.get("a"), B, cls.conjugator, cls.residual)


def conjugacy_invariant(g: QMatrix, tol: float | None = None, cls: IsometryClass | None = None) -> ConjugacyInvariant:
    cls = classify(g, tol) if cls is None else cls
    inv = cls.invariants
    if cls.kind == "identity":
        return ConjugacyInvariant("identity", 1, None, ())
    if cls.kind == "elliptic":
        return ConjugacyInvariant("elliptic", 1, _canon(inv["negative"]), _sorted_classes(inv["compact"]))
    if cls.kind == "hyperbolic":
        return ConjugacyInvariant("hyperbolic", 1, None, _sorted_classes(list(inv["null"]) + list(inv["compact"])))
    lam = _canon(inv["lam"])
    k = cls.degree
    positives = [lam] * (k - 1) + list(inv["compact"])
    sign = None
    if k == 2 and abs(inv["lam"].imag) > UNIT_BAND:
        sign = 1 if inv["s"].x > 0 else -1
    return ConjugacyInvariant(cls.kind, k, lam, _sorted_classes(positives), sign)
