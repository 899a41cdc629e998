"""Right-eigenvalue classes, diagonalisation and Jordan decomposition.

All spectral work happens on the complex adjoint ``phi(g)``.  Its
eigenvalues are clustered, each cluster gets an invariant subspace from a
reordered Schur form and a spectral projector, and the quaternionic picture
is read back through :meth:`QMatrix.from_col`.

A cluster is *semisimple* when ``phi(g)`` restricted to it is a scalar, and
has nilpotency degree ``p`` when ``(phi(g) - mu)^p`` vanishes on it relative
to ``||phi(g) - mu||^p``.  Anything else (distinct eigenvalues closer than the
clustering radius, say) raises :class:`IllConditioned`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linalg import cluster_values, qeigh, quaternionic_basis
from .errors import IllConditioned, NotInGroup, NotSemisimple, WrongModel
from .qmatrix import (Form, QMatrix, complex_adjoint, default_tol, form_matrix,
                      form_residual, from_complex_adjoint)

#: eigenvalues of phi(g) closer than this are one cluster
CLUSTER_TOL = 1e-3
#: a cluster is semisimple when ||phi(g) - mu|| on it is below this (relative)
SEMISIMPLE_TOL = 1e-7
#: ||N^p|| <= NILPOTENT_TOL * ||N||^p declares N nilpotent of degree p
NILPOTENT_TOL = 1e-6
#: eigenvalue moduli within this band of 1 are unit
UNIT_BAND = 1e-7
#: Gram eigenvalues below this fraction of the largest count as zero
NULL_TOL = 1e-7

GEOM_TYPES = ("positive", "negative", "null", "indefinite", "not-applicable")


@dataclass(frozen=True)
class EigenClass:
    rep: complex
    multiplicity: int
    geom_type: str
    algebraic_multiplicity: int | None = None

    @property
    def is_real(self) -> bool:
        return self.rep.imag == 0.0

    def to_json(self) -> dict:
        d = {"rep": [self.rep.real, self.rep.imag], "multiplicity": self.multiplicity,
             "type": self.geom_type}
        if self.algebraic_multiplicity is not None:
            d["algebraic_multiplicity"] = self.algebraic_multiplicity
        return d


@dataclass(frozen=True)
class JordanPair:
    semisimple: QMatrix
    unipotent: QMatrix
    degree: int
    commutator_residual: float
    product_residual: float


@dataclass
class Cluster:
    mean: complex
    basis: np.ndarray          # orthonormal basis of the invariant subspace (2N x d)
    projector: np.ndarray      # spectral projector onto it
    degree: int                # nilpotency degree of phi(g) - mean on it
    kernel_dim: int            # dimension of the eigenspace inside it

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_real(self) -> bool:
        return self.mean.imag == 0.0


@dataclass
class SpectralData:
    g: QMatrix
    adjoint: np.ndarray
    clusters: list[Cluster]

    @property
    def size(self) -> int:
        return self.g.rows

    def upper(self) -> list[Cluster]:
        """One cluster per similarity class (the member with Im >= 0),
        ordered by (Re, Im)."""
        out = [c for c in self.clusters if c.mean.imag >= 0.0]
        return sorted(out, key=lambda c: (round(c.mean.real, 12), c.mean.imag))

    @property
    def semisimple(self) -> bool:
        return all(c.degree == 1 for c in self.clusters)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.clusters)


def _invariant_basis(A: np.ndarray, member) -> np.ndarray:
    T, Z, sdim = scipy.linalg.schur(A, output="complex", sort=member)
    return Z[:, :sdim]


def _nilpotency_degree(M: np.ndarray, scale: float) -> int:
    nM = np.linalg.norm(M, 2)
    if nM <= SEMISIMPLE_TOL * scale:
        return 1
    P = M.copy()
    for p in range(2, M.shape[0] + 1):
        P = P @ M
        if np.linalg.norm(P, 2) <= NILPOTENT_TOL * nM ** p:
            return p
    raise IllConditioned("eigenvalue cluster is neither semisimple nor a clean Jordan block")


def check_member(g: QMatrix, tol: float | None = None) -> float:
    """Raise :class:`NotInGroup` unless ``g`` preserves its form.

    The tolerance is scaled by ``max(1, ||g||^2)``, the size of the terms in
    ``g* F g``.
    """
    if g.form is None:
        raise WrongModel("matrix carries no Hermitian form")
    tol = default_tol() if tol is None else tol
    res = form_residual(g, g.form)
    if res > tol * max(1.0, g.norm() ** 2):
        raise NotInGroup(f"form residual {res:.3g} exceeds tolerance")
    return res


def spectral_data(g: QMatrix, cluster_tol: float = CLUSTER_TOL) -> SpectralData:
    A = complex_adjoint(g)
    scale = max(1.0, np.linalg.norm(A, 2))
    ev = np.linalg.eigvals(A)
    groups = cluster_values(ev, cluster_tol)
    means = [complex(np.mean(ev[grp])) for grp in groups]

    # impose conjugation symmetry on the cluster means
    fixed: list[complex | None] = [None] * len(groups)
    for k, grp in enumerate(groups):
        if fixed[k] is not None:
            continue
        target = np.conj(means[k])
        dists = [abs(m - target) for m in means]
        partner = int(np.argmin(dists))
        if dists[partner] > cluster_tol or len(groups[partner]) != len(grp):
            raise IllConditioned("eigenvalues of the complex adjoint do not pair up")
        if partner == k:
            fixed[k] = complex(means[k].real, 0.0)
        else:
            m = means[k] if means[k].imag > 0 else np.conj(means[partner])
            fixed[k] = m if means[k].imag > 0 else np.conj(m)
            fixed[partner] = np.conj(fixed[k])
    centres = np.array(fixed, dtype=complex)

    def nearest(z):
        return int(np.argmin(np.abs(centres - z)))

    clusters = []
    for k, grp in enumerate(groups):
        X = _invariant_basis(A, lambda z, k=k: nearest(z) == k)
        Y = _invariant_basis(A.conj().T, lambda z, k=k: nearest(np.conj(z)) == k)
        if X.shape[1] != len(grp) or Y.shape[1] != len(grp):
            raise IllConditioned("eigenvalue cluster moved during reordering")
        P = X @ np.linalg.solve(Y.conj().T @ X, Y.conj().T)
        M = X.conj().T @ A @ X - centres[k] * np.eye(len(grp))
        p = _nilpotency_degree(M, scale)
        if p == 1:
            kdim = len(grp)
        else:
            sv = np.linalg.svd(M, compute_uv=False)
            kdim = int(np.sum(sv <= NILPOTENT_TOL ** 0.5 * sv[0]))
        clusters.append(Cluster(complex(centres[k]), X, P, p, kdim))
    return SpectralData(g, A, clusters)


def _unit(mu: complex) -> bool:
    return abs(abs(mu) - 1.0) <= UNIT_BAND


def _signature(values: np.ndarray) -> str:
    big = float(np.max(np.abs(values))) if len(values) else 0.0
    if big <= NULL_TOL or float(np.min(np.abs(values))) <= NULL_TOL * big:
        return "null"
    if np.all(values > 0):
        return "positive"
    if np.all(values < 0):
        return "negative"
    return "indefinite"


def form_eigvecs(c: Cluster, F: QMatrix):
    """Eigenvectors of one semisimple cluster, orthonormal for the form ``F``.

    Returns ``(V, signs)``: ``V`` has quaternionic columns with
    ``g v = v mean`` and ``V* F V = diag(signs)``.
    """
    phiF = complex_adjoint(F)
    if not c.is_real:
        X = c.basis
        G = X.conj().T @ phiF @ X
        w, W = np.linalg.eigh(0.5 * (G + G.conj().T))
        if _signature(w) == "null":
            raise IllConditioned("eigenspace is degenerate for the form")
        Xn = X @ W / np.sqrt(np.abs(w))
        return QMatrix.from_col(Xn), np.sign(w)
    V = quaternionic_basis(c.basis)
    d, W = qeigh(V.star() @ F @ V, tol=NULL_TOL)
    if _signature(d) == "null":
        raise IllConditioned("eigenspace is degenerate for the form")
    scale = QMatrix.diag(1.0 / np.sqrt(np.abs(d)))
    return V @ W @ scale, np.sign(d)


def eigen_classes(g: QMatrix, tol: float | None = None, data: SpectralData | None = None):
    """Similarity classes of right eigenvalues with multiplicities and types.

    ``multiplicity`` is the quaternionic dimension of the eigenspace; for a
    non-semisimple class ``algebraic_multiplicity`` is also filled in.
    """
    check_member(g, tol)
    data = spectral_data(g) if data is None else data
    F = form_matrix(g.form, g.rows)
    out = []
    for c in data.upper():
        geo = c.kernel_dim if not c.is_real else c.kernel_dim // 2
        alg = c.dim if not c.is_real else c.dim // 2
        if g.form is Form.POSITIVE:
            gtype = "not-applicable"
        elif c.degree > 1 or not _unit(c.mean):
            gtype = "null"
        else:
            gtype = _class_signature(c, F)
        out.append(EigenClass(c.mean, geo, gtype, alg if c.degree > 1 else None))
    return out


def _class_signature(c: Cluster, F: QMatrix) -> str:
    phiF = complex_adjoint(F)
    if not c.is_real:
        G = c.basis.conj().T @ phiF @ c.basis
        return _signature(np.linalg.eigvalsh(0.5 * (G + G.conj().T)))
    V = quaternionic_basis(c.basis)
    G = (V.star() @ F @ V).adjoint()
    return _signature(np.linalg.eigvalsh(0.5 * (G + G.conj().T)))


def _phase_normalise(V: QMatrix, complex_only: bool) -> QMatrix:
    """Right-multiply each column by a unit so its largest entry is real
    positive (by a complex unit when ``complex_only``)."""
    cols = []
    for k in range(V.cols):
        v = V.column(k)
        mags = np.abs(v.A[:, 0]) ** 2 + np.abs(v.B[:, 0]) ** 2
        i = int(np.argmax(mags))
        a, b = v.A[i, 0], v.B[i, 0]
        if complex_only:
            if abs(a) > 1e-8 * math.sqrt(mags[i]):
                v = v.rmul(np.conj(a) / abs(a))
        else:
            q = v[i, 0]
            v = v.rmul(q.conj() / q.norm())
        cols.append(v)
    return QMatrix.from_columns(cols) if cols else V


def diagonalize(g: QMatrix, tol: float | None = None, data: SpectralData | None = None):
    """Return ``(u, d)`` with ``g = u d u^-1``, ``u`` in the group of ``g`` and
    ``d`` diagonal with entries ``a + b i``, ``b >= 0``.

    Supported: any Sp(n) element, elliptic elements in the ball model (the
    negative-type eigenvalue comes first) and hyperbolic elements in the
    Siegel model (the null pair comes first).
    """
    check_member(g, tol)
    data = spectral_data(g) if data is None else data
    if not data.semisimple:
        raise NotSemisimple("element has a nontrivial unipotent part")
    F = form_matrix(g.form, g.rows)
    units = all(_unit(c.mean) for c in data.clusters)

    if g.form is Form.POSITIVE or (g.form is Form.BALL and units):
        neg, pos = [], []
        for c in data.upper():
            V, signs = form_eigvecs(c, F)
            V = _phase_normalise(V, complex_only=not c.is_real)
            for k in range(V.cols):
                (neg if signs[k] < 0 else pos).append((V.column(k), c.mean))
        expected = 0 if g.form is Form.POSITIVE else 1
        if len(neg) != expected:
            raise IllConditioned(f"found {len(neg)} negative eigenvectors, expected {expected}")
        cols = neg + pos
    elif g.form is Form.SIEGEL and not units:
        cols = _hyperbolic_basis(data, F)
    elif g.form is Form.BALL:
        raise WrongModel("hyperbolic elements diagonalise in the Siegel model; transport first")
    else:
        raise WrongModel("elliptic elements diagonalise in the ball model; transport first")

    u = QMatrix.from_columns([v for v, _ in cols]).with_form(g.form)
    d = QMatrix.diag([mu for _, mu in cols])
    return u, d


def _null_vector(c: Cluster) -> QMatrix:
    if c.is_real:
        return quaternionic_basis(c.basis)
    return QMatrix.from_col(c.basis)


def _hyperbolic_basis(data: SpectralData, F: QMatrix):
    """Columns ``[v0, v1, positives...]`` with ``v0``, ``v1`` the null
    eigenvectors for ``r e^{i t}`` and ``r^-1 e^{i t}``, ``<v0, v1> = -1``."""
    upper = data.upper()
    big = [c for c in upper if abs(c.mean) > 1.0 + UNIT_BAND]
    small = [c for c in upper if abs(c.mean) < 1.0 - UNIT_BAND]
    if len(big) != 1 or len(small) != 1 or big[0].dim != small[0].dim:
        raise IllConditioned("hyperbolic element must have exactly one pair of null classes")
    cb, cs = big[0], small[0]
    if (cb.is_real and cb.dim != 2) or (not cb.is_real and cb.dim != 1):
        raise IllConditioned("null classes of a hyperbolic element are simple")
    v0 = _phase_normalise(_null_vector(cb), complex_only=not cb.is_real)
    v1 = _phase_normalise(_null_vector(cs), complex_only=not cs.is_real)
    q = (v0.star() @ F @ v1)[0, 0]
    if q.norm() <= NULL_TOL:
        raise IllConditioned("null eigenvectors are orthogonal")
    v1 = v1.rmul(-q.inverse())
    cols = [(v0, cb.mean), (v1, cs.mean)]
    for c in upper:
        if c is cb or c is cs:
            continue
        V, signs = form_eigvecs(c, F)
        if np.any(signs < 0):
            raise IllConditioned("hyperbolic element has a non-positive unit class")
        V = _phase_normalise(V, complex_only=not c.is_real)
        cols.extend((V.column(k), c.mean) for k in range(V.cols))
    return cols


def jordan_decompose(g: QMatrix, tol: float | None = None, data: SpectralData | None = None) -> JordanPair:
    """Commuting semisimple and unipotent parts with ``g = g_s g_u``.

    The semisimple part is ``sum(mu_k P_k)`` over the spectral projectors of
    ``phi(g)``, pulled back to a quaternionic matrix; the unipotent part is
    ``g_s^-1 g``.
    """
    check_member(g, tol)
    tol = default_tol() if tol is None else tol
    data = spectral_data(g) if data is None else data
    n = g.rows
    if data.semisimple:
        gs = g.copy()
        gu = QMatrix.identity(n, g.form)
        return JordanPair(gs, gu, 1, 0.0, 0.0)
    S = sum(c.mean * c.projector for c in data.clusters)
    gs = from_complex_adjoint(S, tol=1e-6).with_form(g.form)
    gu = (gs.inv() @ g).with_form(g.form)
    comm = (gs @ gu - gu @ gs).norm()
    prod = (gs @ gu - g).norm()
    N = gu - QMatrix.identity(n)
    scale = max(1.0, N.norm())
    P = N
    degree = 1
    while P.norm() > 1e-6 * scale ** degree and degree <= n:
        P = P @ N
        degree += 1
    if degree != data.degree:
        raise IllConditioned("unipotent part does not match the spectral Jordan structure")
    return JordanPair(gs, gu, degree, comm, prod)
