"""Reversers, strong-reversibility decisions, involution witnesses and
four-involution factorizations.

Every construction is made on a normal form and pulled back through the
conjugator returned by :func:`qhi.classify.classify` (or by
:func:`qhi.spectral.diagonalize` for Sp(n)), so the identities proved on the
normal form hold for ``g`` up to rounding.  All results are returned as a
:class:`ReversibilityReport` whose residuals can be re-checked with
:func:`verify_report`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._linalg import cluster_values
from .classify import IsometryClass, classify
from .errors import IllConditioned, OddDimension, WrongModel
from .qmatrix import Form, QMatrix, default_tol, direct_sum, is_in_group, transport
from .quaternion import I as QI
from .quaternion import J as QJ
from .quaternion import ONE, Quaternion
from .spectral import UNIT_BAND, check_member, diagonalize

ZERO = Quaternion()

# residual thresholds used when a construction certifies itself
REVERSAL_TOL = 1e-8
SQUARE_TOL = 1e-9

# how close to the real axis a non-real class may sit before a verdict that
# depends on it is refused
REAL_BAND = 1e-7


@dataclass
class ReversibilityReport:
    element: QMatrix
    reverser: QMatrix | None = None
    reverser_square: str | None = None          # "+I", "-I" or "other"
    strongly_reversible: bool | None = None
    criterion: list[str] = field(default_factory=list)
    witness: QMatrix | None = None
    factorization: list[QMatrix] | None = None
    residuals: dict = field(default_factory=dict)
    kind: str | None = None
    projective: bool = False
    theorem_backed: bool = False                 # verdict false rests on a theorem, not a search

    def to_json(self) -> dict:
        out = {
            "element": _element_json(self.element),
            "kind": self.kind,
            "projective": self.projective,
            "reverser": None if self.reverser is None else self.reverser.entries(),
            "reverser_square": self.reverser_square,
            "strongly_reversible": self.strongly_reversible,
            "criterion": list(self.criterion),
            "theorem_backed": self.theorem_backed,
            "witness": None if self.witness is None else self.witness.entries(),
            "factorization": None if self.factorization is None else [f.entries() for f in self.factorization],
            "residuals": {k: float(v) for k, v in self.residuals.items()},
        }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ReversibilityReport":
        g = _element_from_json(data["element"])
        form = g.form

        def mat(key):
            v = data.get(key)
            return None if v is None else QMatrix.from_entries(v, form)

        facs = data.get("factorization")
        return cls(
            element=g,
            reverser=mat("reverser"),
            reverser_square=data.get("reverser_square"),
            strongly_reversible=data.get("strongly_reversible"),
            criterion=list(data.get("criterion") or []),
            witness=mat("witness"),
            factorization=None if facs is None else [QMatrix.from_entries(f, form) for f in facs],
            residuals=dict(data.get("residuals") or {}),
            kind=data.get("kind"),
            projective=bool(data.get("projective", False)),
            theorem_backed=bool(data.get("theorem_backed", False)),
        )


def _element_json(g: QMatrix) -> dict:
    from .io import element_to_json
    return element_to_json(g)


def _element_from_json(d: dict) -> QMatrix:
    from .io import element_from_json
    return element_from_json(d)


# ---------------------------------------------------------------- residuals

def reversal_residual(h: QMatrix, g: QMatrix) -> float:
    """``||h g h^-1 - g^-1||``, inverting without trusting group membership."""
    hinv = h.with_form(None).inv()
    ginv = g.with_form(None).inv()
    return (h @ g @ hinv - ginv).norm()


def square_label(h: QMatrix, tol: float = SQUARE_TOL) -> str:
    h2 = h @ h
    eye = QMatrix.identity(h.rows)
    scale = max(1.0, h.norm() ** 2)
    if (h2 - eye).norm() <= tol * scale:
        return "+I"
    if (h2 + eye).norm() <= tol * scale:
        return "-I"
    return "other"


def _square_residual(h: QMatrix, label: str) -> float:
    eye = QMatrix.identity(h.rows)
    h2 = h @ h
    if label == "+I":
        return (h2 - eye).norm()
    if label == "-I":
        return (h2 + eye).norm()
    return min((h2 - eye).norm(), (h2 + eye).norm())


def _pull_back(h0: QMatrix, cls: IsometryClass, g: QMatrix) -> QMatrix:
    """``x^-1 h0 x`` in the model of the normal form, then into g's model."""
    x = cls.model_conjugator
    h = (x.inv() @ h0.with_form(cls.model) @ x).with_form(cls.model)
    return transport(h, g.form)


def _certify_reverser(report: ReversibilityReport, h: QMatrix, g: QMatrix) -> None:
    report.reverser = h
    report.reverser_square = square_label(h)
    report.residuals["reversal"] = reversal_residual(h, g)
    report.residuals["reverser_membership"] = is_in_group(h, g.form)[1]
    report.residuals["reverser_square"] = _square_residual(h, report.reverser_square)


def _certify_witness(report: ReversibilityReport, w: QMatrix, g: QMatrix) -> None:
    sq = (w @ w - QMatrix.identity(w.rows)).norm()
    rev = reversal_residual(w, g)
    scale = max(1.0, w.norm() ** 2 * g.norm())
    if sq > SQUARE_TOL * scale or rev > REVERSAL_TOL * scale:
        raise IllConditioned(
            f"witness fails to certify (square {sq:.2e}, reversal {rev:.2e}); element is near a criterion boundary")
    report.witness = w
    report.residuals["witness_square"] = sq
    report.residuals["witness_reversal"] = rev
    report.residuals["witness_membership"] = is_in_group(w, g.form)[1]


# ---------------------------------------------------------------- blocks

def _scalar(q: Quaternion, n: int) -> QMatrix:
    return QMatrix.scalar(q, n) if n > 0 else QMatrix.zeros(0, 0)


def _sum(*blocks: QMatrix) -> QMatrix:
    return direct_sum(*[b for b in blocks if b.rows > 0])


def swap_block() -> QMatrix:
    """Involution exchanging two coordinates."""
    return QMatrix.from_entries([[ZERO, ONE], [ONE, ZERO]])


def pair_block() -> QMatrix:
    """``[[0, j], [-j, 0]]``: an involution in Sp(2) sending diag(l, l) to
    diag(conj l, conj l)."""
    return QMatrix.from_entries([[ZERO, QJ], [-QJ, ZERO]])


def h_vertical() -> QMatrix:
    return QMatrix.diag([QJ, QJ])


def h_non_vertical(s: Quaternion, a: Quaternion) -> QMatrix:
    """Involution reversing ``u_NV(s, a)``; ``d`` solves ``s + d a`` real."""
    d = (Quaternion(s.w) - s) * a.inverse()
    return QMatrix.from_entries([
        [ONE, ZERO, ZERO],
        [Quaternion(0.5 * d.norm2()), ONE, d],
        [-d.conj(), ZERO, -ONE],
    ])


def h_non_vertical_twisted(a: Quaternion) -> QMatrix:
    """Reverser of ``lam u_NV(s, a)`` for complex ``lam, s, a``; squares to -I."""
    t = -(a * a.conj().inverse()) * QJ
    return QMatrix.diag([QJ, QJ, t])


def _place(blocks: list[tuple[list[int], QMatrix]], size: int) -> QMatrix:
    """Assemble a matrix from blocks acting on the given index lists."""
    A = np.zeros((size, size), dtype=complex)
    B = np.zeros((size, size), dtype=complex)
    for idx, blk in blocks:
        ix = np.ix_(idx, idx)
        A[ix] = blk.A
        B[ix] = blk.B
    return QMatrix(A, B)


# ---------------------------------------------------------------- Sp(n)

def _require_positive(g: QMatrix) -> None:
    if g.form is not Form.POSITIVE:
        raise WrongModel("expected an element of Sp(n)")


def reverser_spn(g: QMatrix, tol: float | None = None) -> ReversibilityReport:
    """Reverser ``u (jI) u^-1`` for ``g = u d u^-1`` in Sp(n); squares to -I."""
    _require_positive(g)
    u, _ = diagonalize(g, tol)
    h = (u @ QMatrix.scalar(QJ, g.rows) @ u.star()).with_form(Form.POSITIVE)
    report = ReversibilityReport(g, kind="compact")
    _certify_reverser(report, h, g)
    return report


def _classes(values: list[complex]) -> list[list[int]]:
    return cluster_values(np.asarray(values, dtype=complex), 1e-9)


def _is_pm_one(z: complex) -> bool:
    return abs(z.imag) == 0.0 and (abs(z - 1.0) <= UNIT_BAND or abs(z + 1.0) <= UNIT_BAND)


def diagonal_witness(values: list[complex]):
    """Decide strong reversibility of ``diag(values)`` in Sp(n).

    Returns ``(verdict, sigma, trace)`` where ``sigma`` is an involution with
    ``sigma d sigma = d^-1`` when the verdict is true.
    """
    values = [complex(v) for v in values]
    n = len(values)
    trace = []
    blocks: list[tuple[list[int], QMatrix]] = []
    verdict = True
    for grp in _classes(values):
        z = values[grp[0]]
        if _is_pm_one(z):
            blocks.extend(([i], QMatrix.identity(1)) for i in grp)
            continue
        if z.imag == 0.0:
            # real but not +-1 cannot happen on the unit circle
            raise IllConditioned(f"real compact class {z.real:.6g} is not +-1")
        if abs(z.imag) < REAL_BAND:
            raise IllConditioned("compact class is within the tolerance band of +-1")
        if len(grp) % 2:
            verdict = False
            trace.append(f"class {z.real:.6g}{z.imag:+.6g}i has odd multiplicity {len(grp)}")
            continue
        for k in range(0, len(grp), 2):
            blocks.append(([grp[k], grp[k + 1]], pair_block()))
    if verdict:
        trace.append("every class is +-1 or has even multiplicity")
        return True, _place(blocks, n), trace
    return False, None, trace


def is_strongly_reversible_spn(g: QMatrix, tol: float | None = None) -> ReversibilityReport:
    _require_positive(g)
    u, d = diagonalize(g, tol)
    values = [complex(v) for v in np.diag(d.A)]
    verdict, sigma, trace = diagonal_witness(values)
    report = ReversibilityReport(g, kind="compact", strongly_reversible=verdict, criterion=trace)
    if verdict:
        w = (u @ sigma @ u.star()).with_form(Form.POSITIVE)
        _certify_witness(report, w, g)
    else:
        report.theorem_backed = True
    return report


def _split_angles(theta: np.ndarray) -> np.ndarray:
    """Angles ``psi`` of the first factor in ``diag(e^{i theta}) = a1 a2``."""
    m = len(theta) // 2
    S = sum(theta[2 * k - 1] + theta[2 * k] for k in range(1, m))
    psi = np.empty(m)
    psi[0] = 0.5 * (theta[0] - theta[-1] - S)
    for k in range(1, m):
        psi[k] = psi[k - 1] + theta[2 * k - 1] + theta[2 * k]
    return psi


def four_involution_factorization(g: QMatrix, tol: float | None = None) -> ReversibilityReport:
    """Write ``g`` in Sp(2m) as a product of four involutions.

    In the diagonal basis ``d = a1 a2`` where ``a1`` has its entries in
    conjugate pairs on (1,2), (3,4), ... and ``a2`` has conjugate pairs on
    (2,3), (4,5), ... plus equal entries on (1, 2m).  Each ``ai`` is reversed
    by an involution ``si``, so ``ai = (ai si) si`` is a product of two
    involutions.
    """
    _require_positive(g)
    n = g.rows
    if n % 2:
        raise OddDimension(
            f"Sp({n}) has odd dimension; the five-involution construction for odd "
            "dimension (Djokovic-Malzan) is not implemented")
    u, d = diagonalize(g, tol)
    values = np.diag(d.A)
    theta = np.angle(values)
    m = n // 2
    psi = _split_angles(theta)
    a1 = np.empty(n, dtype=complex)
    a1[0::2] = np.exp(1j * psi)
    a1[1::2] = np.exp(-1j * psi)
    a2 = values / a1

    s1 = _place([([2 * k, 2 * k + 1], swap_block()) for k in range(m)], n)
    if m == 1:
        s2 = _place([([0, 1], pair_block())], n)
    else:
        blocks = [([2 * k - 1, 2 * k], swap_block()) for k in range(1, m)]
        blocks.append(([0, n - 1], pair_block()))
        s2 = _place(blocks, n)

    A1, A2 = QMatrix.diag(a1), QMatrix.diag(a2)
    local = [A1 @ s1, s1, A2 @ s2, s2]
    factors = [(u @ f @ u.star()).with_form(Form.POSITIVE) for f in local]

    report = ReversibilityReport(g, kind="compact", factorization=factors,
                                 criterion=["even dimension: four involutions"])
    eye = QMatrix.identity(n)
    prod = eye
    for k, f in enumerate(factors):
        report.residuals[f"factor_{k}_square"] = (f @ f - eye).norm()
        prod = prod @ f
    report.residuals["product"] = (prod - g).norm()
    return report


# ---------------------------------------------------------------- Sp(n,1)

def _model_reverser(cls: IsometryClass, projective: bool = False) -> QMatrix:
    size = cls.model_normal_form.rows
    inv = cls.invariants
    kind = cls.kind
    if kind in ("identity", "elliptic"):
        return QMatrix.scalar(QJ, size)
    if kind == "hyperbolic":
        h1 = QMatrix.from_entries([[ZERO, QJ], [QJ, ZERO]])
        return _sum(h1, _scalar(QJ, size - 2))
    if kind == "parabolic-vertical":
        rest = _scalar(QJ, size - 2) if projective else QMatrix.identity(size - 2)
        return _sum(h_vertical(), rest)
    if kind == "parabolic-non-unipotent-2":
        return _sum(h_vertical(), _scalar(QJ, size - 2))
    if kind == "parabolic-non-vertical":
        return _sum(h_non_vertical(inv["s"], inv["a"]), QMatrix.identity(size - 3))
    if kind == "parabolic-non-unipotent-3":
        return _sum(h_non_vertical_twisted(inv["a"]), _scalar(QJ, size - 3))
    raise WrongModel(f"unknown kind {kind}")


def _require_indefinite(g: QMatrix) -> None:
    if g.form is None or not g.form.indefinite:
        raise WrongModel("expected an element of Sp(n,1) in the ball or Siegel model")


def reverser_spn1(g: QMatrix, tol: float | None = None, cls: IsometryClass | None = None) -> ReversibilityReport:
    """A reverser of ``g`` in Sp(n,1) built on its normal form."""
    _require_indefinite(g)
    cls = classify(g, tol) if cls is None else cls
    h = _pull_back(_model_reverser(cls), cls, g)
    report = ReversibilityReport(g, kind=cls.kind)
    _certify_reverser(report, h, g)
    return report


def projective_reverser(g: QMatrix, tol: float | None = None, cls: IsometryClass | None = None) -> ReversibilityReport:
    """A reverser whose square is +I or -I, so its image in PSp(n,1) is an
    involution."""
    _require_indefinite(g)
    cls = classify(g, tol) if cls is None else cls
    h = _pull_back(_model_reverser(cls, projective=True), cls, g)
    report = ReversibilityReport(g, kind=cls.kind, projective=True,
                                 strongly_reversible=True,
                                 criterion=["every element is a product of two projective involutions"])
    _certify_reverser(report, h, g)
    if report.reverser_square == "other":
        raise IllConditioned("projective reverser does not square to +-I")
    return report


def _real_class(lam: complex, what: str) -> bool:
    if lam.imag == 0.0:
        return True
    if abs(lam.imag) < REAL_BAND:
        raise IllConditioned(f"{what} is within the tolerance band of the real axis")
    return False


def is_strongly_reversible_spn1(g: QMatrix, tol: float | None = None,
                                cls: IsometryClass | None = None) -> ReversibilityReport:
    """Decide strong reversibility in Sp(n,1) and build an involution
    witness when it exists."""
    _require_indefinite(g)
    cls = classify(g, tol) if cls is None else cls
    inv = cls.invariants
    size = cls.model_normal_form.rows
    kind = cls.kind
    trace = [f"kind: {kind}"]
    w0 = None
    verdict = False

    if kind == "identity":
        verdict, w0 = True, QMatrix.identity(size)
        trace.append("identity is an involution product trivially")
    elif kind == "elliptic":
        neg = inv["negative"]
        comp = inv["compact"]
        if not _is_pm_one(neg):
            trace.append("eigenvalue of negative or indefinite type is not +-1")
        else:
            trace.append("eigenvalue of negative type is +-1")
            ok, sigma, sub = diagonal_witness(comp)
            trace += ["compact part: " + t for t in sub]
            if ok:
                verdict, w0 = True, _sum(QMatrix.identity(1), sigma)
    elif kind == "hyperbolic":
        lam = inv["null"][0]
        if not _real_class(lam / abs(lam), "null eigenvalue"):
            trace.append("null eigenvalues are not real")
        else:
            trace.append("null eigenvalues are real")
            ok, sigma, sub = diagonal_witness(inv["compact"])
            trace += ["compact part: " + t for t in sub]
            if ok:
                verdict, w0 = True, _sum(swap_block(), sigma)
    elif kind in ("parabolic-vertical", "parabolic-non-unipotent-2"):
        trace.append("unipotent part has minimal polynomial (x-1)^2: never strongly reversible")
    elif kind == "parabolic-non-vertical":
        verdict = True
        trace.append("non-vertical translation: reversed by an involution")
        w0 = _sum(h_non_vertical(inv["s"], inv["a"]), QMatrix.identity(size - 3))
    elif kind == "parabolic-non-unipotent-3":
        lam = inv["lam"]
        trace.append("unipotent part has minimal polynomial (x-1)^3")
        if not _real_class(lam, "null eigenvalue"):
            trace.append("null eigenvalue is not +-1")
        else:
            trace.append("null eigenvalue is +-1")
            ok, sigma, sub = diagonal_witness(inv["compact"])
            trace += ["compact part: " + t for t in sub]
            if ok:
                verdict = True
                w0 = _sum(h_non_vertical(inv["s"], inv["a"]), sigma)
    else:
        raise WrongModel(f"unknown kind {kind}")

    report = ReversibilityReport(g, kind=kind, strongly_reversible=verdict, criterion=trace)
    if verdict:
        _certify_witness(report, _pull_back(w0, cls, g), g)
    else:
        report.theorem_backed = True
    return report


def reverse(g: QMatrix, tol: float | None = None) -> ReversibilityReport:
    """Reverser for any supported element."""
    if g.form is Form.POSITIVE:
        return reverser_spn(g, tol)
    return reverser_spn1(g, tol)


def strong_reversibility(g: QMatrix, tol: float | None = None) -> ReversibilityReport:
    """Verdict plus witness, with a reverser attached."""
    if g.form is Form.POSITIVE:
        report = is_strongly_reversible_spn(g, tol)
        base = reverser_spn(g, tol)
    else:
        cls = classify(g, tol)
        report = is_strongly_reversible_spn1(g, tol, cls)
        base = reverser_spn1(g, tol, cls)
    _certify_reverser(report, base.reverser, g)
    return report


# ---------------------------------------------------------------- verification

@dataclass
class Clause:
    name: str
    value: float
    threshold: float
    passed: bool

    def to_json(self) -> dict:
        return {"clause": self.name, "value": self.value, "threshold": self.threshold, "passed": self.passed}


@dataclass
class Verification:
    clauses: list[Clause]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def __getitem__(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.clauses]

    def to_json(self) -> dict:
        return {"passed": self.passed, "clauses": [c.to_json() for c in self.clauses]}


def verify_report(report: ReversibilityReport, g: QMatrix | None = None,
                  tol: float | None = None) -> Verification:
    """Recompute every claim of ``report`` from scratch.

    ``tol`` is the membership tolerance; reversal and product clauses get ten
    times that, and every threshold is scaled by the size of the matrices
    involved.  Failures are returned as data, never raised.
    """
    g = report.element if g is None else g
    tol = default_tol() if tol is None else tol
    clauses: list[Clause] = []
    eye = QMatrix.identity(g.rows)
    gsize = max(1.0, g.norm())

    def add(name, value, threshold):
        value = float(value)
        clauses.append(Clause(name, value, threshold, bool(np.isfinite(value) and value <= threshold)))

    def safe(fn):
        try:
            return fn()
        except Exception:
            return math.inf

    try:
        g_ok = is_in_group(g, g.form, tol * gsize ** 2)[1] if g.form is not None else math.inf
    except Exception:
        g_ok = math.inf
    add("element_membership", g_ok, tol * gsize ** 2)

    def mscale(x):
        return max(1.0, x.norm()) ** 2

    h = report.reverser
    if h is not None:
        hs = mscale(h)
        add("reverser_membership", safe(lambda: is_in_group(h, g.form, math.inf)[1]), tol * hs)
        add("reversal", safe(lambda: reversal_residual(h, g)), 10 * tol * hs * gsize)
        if report.reverser_square in ("+I", "-I"):
            sign = 1.0 if report.reverser_square == "+I" else -1.0
            add(f"reverser_square_{report.reverser_square}",
                safe(lambda: (h @ h - eye.rmul(sign)).norm()), tol * hs)
    w = report.witness
    if w is not None:
        ws = mscale(w)
        add("witness_membership", safe(lambda: is_in_group(w, g.form, math.inf)[1]), tol * ws)
        add("witness_square", safe(lambda: (w @ w - eye).norm()), tol * ws)
        add("witness_reversal", safe(lambda: reversal_residual(w, g)), 10 * tol * ws * gsize)
    if report.strongly_reversible and w is None and not report.projective:
        add("witness_present", math.inf, 0.0)
    if report.factorization is not None:
        prod = eye
        fscale = 1.0
        for k, f in enumerate(report.factorization):
            fs = mscale(f)
            fscale *= math.sqrt(fs)
            add(f"factor_{k}_membership", safe(lambda f=f: is_in_group(f, g.form, math.inf)[1]), tol * fs)
            add(f"factor_{k}_square", safe(lambda f=f: (f @ f - eye).norm()), tol * fs)
            prod = prod @ f
        add("product", (prod - g).norm(), 10 * tol * max(fscale, gsize))
    return Verification(clauses)
