"""Quaternionic linear-algebra kernels built on the complex adjoint."""
from __future__ import annotations

import numpy as np

from .errors import IllConditioned
from .qmatrix import QMatrix, jmap


def quaternionic_basis(Y: np.ndarray, k: int | None = None) -> QMatrix:
    """Orthonormal quaternionic vectors spanning a j-invariant subspace.

    ``Y`` holds complex columns (images under ``col``) spanning a subspace of
    C^{2n} closed under :func:`jmap`.  Returns ``k = dim/2`` quaternionic
    column vectors, orthonormal for the standard form.
    """
    R = np.array(Y, dtype=complex)
    k = R.shape[1] // 2 if k is None else k
    out = []
    for _ in range(k):
        norms = np.linalg.norm(R, axis=0)
        p = int(np.argmax(norms))
        if norms[p] <= 1e-10:
            raise IllConditioned("subspace is not j-invariant to working precision")
        x = R[:, p] / norms[p]
        jx = jmap(x[:, None])[:, 0]
        R = R - np.outer(x, x.conj() @ R) - np.outer(jx, jx.conj() @ R)
        out.append(x)
    return QMatrix.from_col(np.column_stack(out))


def cluster_values(values, tol: float) -> list[list[int]]:
    """Single-linkage clusters of real numbers or complex points."""
    values = np.asarray(values)
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for k in range(i + 1, n):
            if abs(values[i] - values[k]) < tol:
                parent[find(i)] = find(k)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def qeigh(G: QMatrix, tol: float = 1e-9):
    """Eigen-decomposition of a quaternionic Hermitian matrix.

    Returns real eigenvalues ``d`` (ascending) and ``W`` in Sp(m) with
    ``G = W diag(d) W*``.
    """
    m = G.adjoint()
    m = 0.5 * (m + m.conj().T)
    w, V = np.linalg.eigh(m)
    scale = max(1.0, float(np.max(np.abs(w))))
    values, cols = [], []
    for group in sorted(cluster_values(w, tol * scale), key=lambda g: w[g[0]]):
        if len(group) % 2:
            raise IllConditioned("eigenvalues of a quaternionic Hermitian matrix must pair up")
        basis = quaternionic_basis(V[:, group])
        mean = float(np.mean(w[group]))
        values.extend([mean] * basis.cols)
        cols.append(basis)
    return np.array(values), QMatrix.from_columns(cols)


def gram_schmidt(V: QMatrix) -> QMatrix:
    """Orthonormalise columns for the standard quaternionic form."""
    out = []
    for k in range(V.cols):
        v = V.column(k)
        for u in out:
            v = v - u.rmul((u.star() @ v)[0, 0])
        nv = v.norm()
        if nv <= 1e-12:
            raise IllConditioned("columns are linearly dependent")
        out.append(v.rmul(1.0 / nv))
    return QMatrix.from_columns(out)


def left_null_projector(E: QMatrix, F: QMatrix):
    """Projector onto the ``F``-orthogonal complement of ``span(E)``.

    ``span(E)`` must be nondegenerate for ``F``.
    """
    G = E.star() @ F @ E
    Ginv = G.inv() if G.rows else G

    def project(V: QMatrix) -> QMatrix:
        return V - E @ (Ginv @ (E.star() @ F @ V))

    return project
