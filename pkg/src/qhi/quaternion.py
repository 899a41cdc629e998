"""Real quaternions and their similarity classes.

A quaternion is stored as four doubles ``(w, x, y, z)`` standing for
``w + x i + y j + z ij``.  Internally the matrix code uses the split
``q = a + b j`` with complex ``a = w + x i`` and ``b = y + z i``; the helpers
:meth:`Quaternion.to_pair` and :meth:`Quaternion.from_pair` convert between
the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotImaginary, ZeroInput

#: tight tolerance for scalar identities
SCALAR_TOL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_pair(cls, a: complex, b: complex = 0j) -> "Quaternion":
        a, b = complex(a), complex(b)
        return cls(a.real, a.imag, b.real, b.imag)

    @classmethod
    def from_list(cls, v) -> "Quaternion":
        w, x, y, z = (float(t) for t in v)
        return cls(w, x, y, z)

    def to_pair(self) -> tuple[complex, complex]:
        return complex(self.w, self.x), complex(self.y, self.z)

    def to_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        return qmul(self, _coerce(other))

    def __rmul__(self, other):
        return qmul(_coerce(other), self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return qmul(self, _coerce(other).inverse())

    def isclose(self, other, tol: float = SCALAR_TOL) -> bool:
        return (self - _coerce(other)).norm() <= tol

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def _coerce(v) -> Quaternion:
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float)):
        return Quaternion(float(v))
    if isinstance(v, complex):
        return Quaternion(v.real, v.imag)
    raise TypeError(f"cannot interpret {type(v).__name__} as a quaternion")


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
IJ = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product with i^2 = j^2 = -1 and ij = -ji."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


@dataclass(frozen=True)
class SimilarityClass:
    """Conjugation orbit of a quaternion, named by its representative
    ``a + b i`` with ``b >= 0``."""

    rep: complex

    def contains(self, q: Quaternion, tol: float = SCALAR_TOL) -> bool:
        return abs(canonicalize(q).rep - self.rep) <= tol


def canonicalize(q: Quaternion) -> SimilarityClass:
    im = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    return SimilarityClass(complex(q.w, im))


def similar(p: Quaternion, q: Quaternion, tol: float = SCALAR_TOL) -> bool:
    return abs(p.w - q.w) <= tol and abs(p.norm() - q.norm()) <= tol


def similarity_conjugator(s: Quaternion, tol: float = SCALAR_TOL):
    """Return ``(r, x)`` with ``r = |s|`` and a unit ``x`` such that
    ``s = x (r i) x^-1``.  ``s`` must be purely imaginary and nonzero.

    Uses ``q = (r + s1) - s3 j + s2 ij`` for ``s = s1 i + s2 j + s3 ij``.  That
    ``q`` loses precision as ``s`` approaches ``-i``, so for ``s1 < 0`` the
    formula is applied to ``j^-1 s j`` and the result multiplied by ``j``.
    """
    if abs(s.w) > tol * max(1.0, s.norm()):
        raise NotImaginary(f"real part {s.w!r} is not zero")
    s1, s2, s3 = s.x, s.y, s.z
    r = math.sqrt(s1 * s1 + s2 * s2 + s3 * s3)
    if r <= tol:
        raise ZeroInput("cannot conjugate 0 onto the i axis")
    if s1 < 0:
        _, y = similarity_conjugator(J.inverse() * s * J, tol)
        return r, J * y
    q = Quaternion(r + s1, 0.0, -s3, s2)
    return r, q / q.norm()
