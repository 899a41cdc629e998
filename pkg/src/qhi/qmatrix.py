"""Dense matrices over the quaternions.

A quaternionic matrix ``P`` is stored as two complex arrays with
``P = A + B j``.  Products follow from ``j z = conj(z) j`` for complex ``z``::

    (A1 + B1 j)(A2 + B2 j) = (A1 A2 - B1 conj(B2)) + (A1 B2 + B1 conj(A2)) j

which is exactly the block product of the complex adjoint
``phi(P) = [[A, B], [-conj(B), conj(A)]]``.

Column vectors ``v = a + b j`` are identified with complex vectors
``col(v) = [a; -conj(b)]`` in C^{2n}; this identification satisfies
``col(P v) = phi(P) col(v)`` and ``col(v z) = col(v) z`` for complex ``z``,
so right eigenvectors of ``P`` with a complex eigenvalue are ordinary
eigenvectors of ``phi(P)``.
"""
from __future__ import annotations

import enum
import math
import os

import numpy as np

from .errors import DimensionMismatch, NotInImage, SingularMatrix
from .quaternion import Quaternion

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Library-wide tolerance; ``QHI_TOL`` in the environment overrides it."""
    value = os.environ.get("QHI_TOL")
    if value:
        return float(value)
    return DEFAULT_TOL


class Form(enum.Enum):
    """Hermitian form attached to a matrix.

    The value is the tag used in JSON documents.
    """

    POSITIVE = "sp_n"
    BALL = "sp_n1"
    SIEGEL = "sp_n1_hat"

    @property
    def indefinite(self) -> bool:
        return self is not Form.POSITIVE


class QMatrix:
    """Quaternionic matrix ``A + B j`` with an optional Hermitian form."""

    __slots__ = ("A", "B", "form")

    def __init__(self, A, B=None, form: Form | None = None):
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        B = np.zeros_like(A) if B is None else np.atleast_2d(np.asarray(B, dtype=complex))
        if A.shape != B.shape or A.ndim != 2:
            raise DimensionMismatch(f"parts have shapes {A.shape} and {B.shape}")
        self.A = A
        self.B = B
        self.form = form

    # -- construction -------------------------------------------------------
    @classmethod
    def from_entries(cls, entries, form: Form | None = None) -> "QMatrix":
        """From a nested list of ``[w, x, y, z]`` rows (or Quaternion objects)."""
        rows = []
        for row in entries:
            rows.append([e.to_list() if isinstance(e, Quaternion) else list(e) for e in row])
        arr = np.asarray(rows, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise DimensionMismatch("entries must be a rows x cols x 4 array")
        return cls.from_real(arr, form)

    @classmethod
    def from_real(cls, arr, form: Form | None = None) -> "QMatrix":
        arr = np.asarray(arr, dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1], arr[..., 2] + 1j * arr[..., 3], form)

    @classmethod
    def identity(cls, n: int, form: Form | None = None) -> "QMatrix":
        return cls(np.eye(n), None, form)

    @classmethod
    def zeros(cls, rows: int, cols: int, form: Form | None = None) -> "QMatrix":
        return cls(np.zeros((rows, cols)), None, form)

    @classmethod
    def scalar(cls, q: Quaternion, n: int, form: Form | None = None) -> "QMatrix":
        a, b = q.to_pair()
        return cls(a * np.eye(n), b * np.eye(n), form)

    @classmethod
    def diag(cls, values, form: Form | None = None) -> "QMatrix":
        """Diagonal matrix; entries may be numbers or Quaternion objects."""
        a, b = [], []
        for v in values:
            if isinstance(v, Quaternion):
                pa, pb = v.to_pair()
            else:
                pa, pb = complex(v), 0j
            a.append(pa)
            b.append(pb)
        return cls(np.diag(a), np.diag(b), form)

    @classmethod
    def from_columns(cls, cols, form: Form | None = None) -> "QMatrix":
        return cls(np.hstack([c.A for c in cols]), np.hstack([c.B for c in cols]), form)

    @classmethod
    def from_col(cls, X, form: Form | None = None) -> "QMatrix":
        """Inverse of :meth:`col`: complex ``2n x k`` to quaternionic ``n x k``."""
        X = np.asarray(X, dtype=complex)
        if X.ndim == 1:
            X = X[:, None]
        n = X.shape[0] // 2
        return cls(X[:n], -np.conj(X[n:]), form)

    # -- basic accessors ------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    @property
    def rows(self) -> int:
        return self.A.shape[0]

    @property
    def cols(self) -> int:
        return self.A.shape[1]

    def __getitem__(self, idx) -> Quaternion:
        i, k = idx
        return Quaternion.from_pair(self.A[i, k], self.B[i, k])

    def column(self, k) -> "QMatrix":
        if isinstance(k, int):
            k = slice(k, k + 1)
        return QMatrix(self.A[:, k], self.B[:, k], None)

    def block(self, rows, cols) -> "QMatrix":
        return QMatrix(self.A[rows, cols], self.B[rows, cols], None)

    def with_form(self, form: Form | None) -> "QMatrix":
        return QMatrix(self.A, self.B, form)

    def to_real(self) -> np.ndarray:
        return np.stack([self.A.real, self.A.imag, self.B.real, self.B.imag], axis=-1)

    def entries(self) -> list:
        return self.to_real().tolist()

    def copy(self) -> "QMatrix":
        return QMatrix(self.A.copy(), self.B.copy(), self.form)

    # -- algebra --------------------------------------------------------------
    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        A = self.A @ other.A - self.B @ np.conj(other.B)
        B = self.A @ other.B + self.B @ np.conj(other.A)
        return QMatrix(A, B, _join(self.form, other.form))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return QMatrix(self.A + other.A, self.B + other.B, None)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return QMatrix(self.A - other.A, self.B - other.B, None)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.A, -self.B, self.form)

    def rmul(self, q) -> "QMatrix":
        """Right multiplication ``M q`` by a scalar."""
        c, d = _pair(q)
        return QMatrix(self.A * c - self.B * np.conj(d), self.A * d + self.B * np.conj(c), None)

    def lmul(self, q) -> "QMatrix":
        """Left multiplication ``q M`` by a scalar."""
        c, d = _pair(q)
        return QMatrix(c * self.A - d * np.conj(self.B), c * self.B + d * np.conj(self.A), None)

    def star(self) -> "QMatrix":
        """Conjugate transpose."""
        return QMatrix(self.A.conj().T, -self.B.T, self.form)

    def adjoint(self) -> np.ndarray:
        return complex_adjoint(self)

    def col(self) -> np.ndarray:
        """Complex image in C^{2n} of each column (see module docstring)."""
        return np.vstack([self.A, -np.conj(self.B)])

    def norm(self) -> float:
        """Frobenius norm over the 4 real coordinates of every entry."""
        return math.sqrt(float(np.sum(np.abs(self.A) ** 2) + np.sum(np.abs(self.B) ** 2)))

    def inv(self) -> "QMatrix":
        return matinv(self)

    def __repr__(self):
        tag = f", form={self.form.value}" if self.form else ""
        return f"QMatrix(shape={self.shape}{tag})"


def _join(f1, f2):
    if f1 is None:
        return f2
    if f2 is None or f1 is f2:
        return f1
    return None


def _pair(q) -> tuple[complex, complex]:
    if isinstance(q, Quaternion):
        return q.to_pair()
    return complex(q), 0j


def matmul(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b


def matstar(a: QMatrix) -> QMatrix:
    return a.star()


def matinv(a: QMatrix) -> QMatrix:
    """Inverse; uses ``F g* F`` when a form is attached (every form matrix
    here is its own inverse), otherwise the complex adjoint."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"cannot invert a {a.shape} matrix")
    if a.form is not None:
        F = form_matrix(a.form, a.rows)
        return (F @ a.star() @ F).with_form(a.form)
    m = complex_adjoint(a)
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= 1e-14 * max(s[0], 1.0):
        raise SingularMatrix("matrix is singular to working precision")
    return from_complex_adjoint(np.linalg.inv(m), tol=1e-6)


def direct_sum(*blocks: QMatrix) -> QMatrix:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    A = np.zeros((n, m), dtype=complex)
    B = np.zeros((n, m), dtype=complex)
    r = c = 0
    for b in blocks:
        A[r:r + b.rows, c:c + b.cols] = b.A
        B[r:r + b.rows, c:c + b.cols] = b.B
        r += b.rows
        c += b.cols
    return QMatrix(A, B)


def complex_adjoint(p: QMatrix) -> np.ndarray:
    """``phi(A + B j) = [[A, B], [-conj(B), conj(A)]]``."""
    return np.block([[p.A, p.B], [-np.conj(p.B), np.conj(p.A)]])


def beta(n: int) -> np.ndarray:
    """Complex adjoint of ``I_n j``."""
    z, e = np.zeros((n, n)), np.eye(n)
    return np.block([[z, e], [-e, z]]).astype(complex)


def from_complex_adjoint(m, tol: float | None = None) -> QMatrix:
    """Left inverse of :func:`complex_adjoint` on its image.

    Raises :class:`NotInImage` unless ``beta conj(m) beta^-1 = m`` within
    ``tol`` (relative to the size of ``m``).
    """
    tol = default_tol() if tol is None else tol
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise DimensionMismatch(f"expected a square matrix of even size, got {m.shape}")
    n = m.shape[0] // 2
    b = beta(n)
    defect = np.linalg.norm(b @ np.conj(m) @ b.T - m)
    if defect > tol * max(1.0, np.linalg.norm(m)):
        raise NotInImage(f"symmetry defect {defect:.3g} exceeds tolerance")
    A = 0.5 * (m[:n, :n] + np.conj(m[n:, n:]))
    B = 0.5 * (m[:n, n:] - np.conj(m[n:, :n]))
    return QMatrix(A, B)


def form_matrix(form: Form, size: int) -> QMatrix:
    """``I`` for Sp(n), ``J = diag(-1, 1, ..., 1)``, or the Siegel ``J-hat``."""
    F = np.eye(size)
    if form is Form.BALL:
        F[0, 0] = -1.0
    elif form is Form.SIEGEL:
        if size < 2:
            raise DimensionMismatch("Siegel form needs size >= 2")
        F[:2, :2] = [[0.0, -1.0], [-1.0, 0.0]]
    return QMatrix(F)


def form_residual(g: QMatrix, form: Form) -> float:
    if g.rows != g.cols:
        raise DimensionMismatch(f"group elements are square, got {g.shape}")
    F = form_matrix(form, g.rows)
    return (g.star() @ F @ g - F).norm()


def is_in_group(g: QMatrix, form: Form | None = None, tol: float | None = None):
    """Return ``(member, residual)`` with residual ``||g* F g - F||_F``."""
    form = g.form if form is None else form
    if form is None:
        raise ValueError("no Hermitian form given")
    tol = default_tol() if tol is None else tol
    res = form_residual(g, form)
    return res < tol, res


def is_unitary_adjoint(g: QMatrix, tol: float | None = None):
    """Sp(n) membership tested on the complex side: ``phi(g)`` unitary."""
    tol = default_tol() if tol is None else tol
    m = complex_adjoint(g)
    res = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) / math.sqrt(2.0)
    return res < tol, res


def cayley(size: int) -> tuple[QMatrix, QMatrix]:
    """Basis change ``P`` with ``P^T J P = J-hat`` and the Cayley transform
    ``C = P^-1``.  ``g -> P g P^-1`` maps the Siegel group onto Sp(n,1)."""
    if size < 2:
        raise DimensionMismatch("Cayley transform needs size >= 2")
    h = 1.0 / math.sqrt(2.0)
    P = np.eye(size)
    P[:2, :2] = [[h, h], [-h, h]]
    C = np.eye(size)
    C[:2, :2] = [[h, -h], [h, h]]
    return QMatrix(P), QMatrix(C)


def to_ball(g: QMatrix) -> QMatrix:
    """Express a Siegel-model element in the ball model (identity otherwise)."""
    if g.form is not Form.SIEGEL:
        return g
    P, C = cayley(g.rows)
    return (P @ g.with_form(None) @ C).with_form(Form.BALL)


def to_siegel(g: QMatrix) -> QMatrix:
    if g.form is not Form.BALL:
        return g
    P, C = cayley(g.rows)
    return (C @ g.with_form(None) @ P).with_form(Form.SIEGEL)


def transport(g: QMatrix, target: Form) -> QMatrix:
    """Move an element between the ball and Siegel models."""
    if g.form is target:
        return g
    if target is Form.BALL:
        return to_ball(g)
    if target is Form.SIEGEL:
        return to_siegel(g)
    raise ValueError("only the ball and Siegel models are interchangeable")


def inner(v: QMatrix, w: QMatrix, F: QMatrix | None = None) -> Quaternion:
    """Hermitian product ``v* F w`` of two column vectors."""
    m = v.star() @ (w if F is None else F @ w)
    return m[0, 0]


def gram(V: QMatrix, F: QMatrix | None = None) -> QMatrix:
    return V.star() @ (V if F is None else F @ V)


def jmap(X: np.ndarray) -> np.ndarray:
    """Antilinear map on C^{2n} induced by right multiplication by ``j``."""
    n = X.shape[0] // 2
    return np.vstack([np.conj(X[n:]), -np.conj(X[:n])])


def size_for(form: Form, n: int) -> int:
    """Matrix size of Sp(n) or Sp(n,1)."""
    return n if form is Form.POSITIVE else n + 1


def group_n(form: Form, size: int) -> int:
    return size if form is Form.POSITIVE else size - 1
