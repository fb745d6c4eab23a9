"""Shared helpers: random generators and independent oracles.

The oracles here recompute operations by definition (scalar loops,
index formulas, plain Jacobi eigenvalues) and are deliberately kept
independent of the library's vectorized kernels.
"""

import numpy as np
from hypothesis import settings

from qhosvd import QMatrix, QTensor, Quaternion, qconj, qmul, qsvd

settings.register_profile("ci", deadline=None, derandomize=True)
settings.load_profile("ci")


def rand_qmatrix(rng, m, n):
    return QMatrix.from_components(rng.standard_normal((m, n, 4)))


def rand_qtensor(rng, dims):
    return QTensor.from_components(rng.standard_normal(tuple(dims) + (4,)))


def rand_quaternion(rng):
    return Quaternion(*rng.standard_normal(4))


def rand_unitary(rng, n):
    return qsvd(rand_qmatrix(rng, n, n)).U


def quat_entries(obj):
    """Nested-list scalar view of a QMatrix or QTensor."""
    comp = obj.components

    def build(arr):
        if arr.ndim == 1:
            return Quaternion(*arr)
        return [build(sub) for sub in arr]

    return build(comp)


def mat_from_entries(rows):
    comp = np.array([[[q.w, q.x, q.y, q.z] for q in row] for row in rows])
    return QMatrix.from_components(comp)


def oracle_lmode(U, k, T):
    """Left mode-k product by scalar loops over the definition."""
    dims = list(T.dims)
    J = U.rows
    out_dims = dims.copy()
    out_dims[k - 1] = J
    comp = np.zeros(tuple(out_dims) + (4,))
    Tc = T.components
    Uc = U.components
    for idx in np.ndindex(*out_dims):
        acc = Quaternion()
        for ik in range(dims[k - 1]):
            src = list(idx)
            src[k - 1] = ik
            u = Quaternion(*Uc[idx[k - 1], ik])
            t = Quaternion(*Tc[tuple(src)])
            acc = acc + qmul(u, t)
        comp[idx] = (acc.w, acc.x, acc.y, acc.z)
    return QTensor.from_components(comp)


def oracle_rmode(T, k, V):
    """Right mode-k product by scalar loops; sums over V's row index."""
    dims = list(T.dims)
    J = V.cols
    out_dims = dims.copy()
    out_dims[k - 1] = J
    comp = np.zeros(tuple(out_dims) + (4,))
    Tc = T.components
    Vc = V.components
    for idx in np.ndindex(*out_dims):
        acc = Quaternion()
        for ik in range(dims[k - 1]):
            src = list(idx)
            src[k - 1] = ik
            t = Quaternion(*Tc[tuple(src)])
            v = Quaternion(*Vc[ik, idx[k - 1]])
            acc = acc + qmul(t, v)
        comp[idx] = (acc.w, acc.x, acc.y, acc.z)
    return QTensor.from_components(comp)


def oracle_unfold_left(T, k):
    """Left unfolding straight from the index map: entry (i_1..i_N) lands
    at row i_k, column 1 + sum_{l != k} (i_l - 1) * prod_{m < l, m != k} I_m."""
    dims = T.dims
    N = T.order
    rest = int(np.prod([d for i, d in enumerate(dims) if i != k - 1], dtype=np.int64))
    comp = np.zeros((dims[k - 1], rest, 4))
    Tc = T.components
    for idx in np.ndindex(*dims):
        col = 0
        weight = 1
        for l in range(N):
            if l == k - 1:
                continue
            col += idx[l] * weight
            weight *= dims[l]
        comp[idx[k - 1], col] = Tc[idx]
    return QMatrix.from_components(comp)


def jacobi_eigen_sigma(A, sweeps=60, tol=1e-28):
    """Singular values of a real matrix via cyclic Jacobi on A^T A."""
    S = A.T @ A
    n = S.shape[0]
    for _ in range(sweeps):
        off = np.sum(S ** 2) - np.sum(np.diag(S) ** 2)
        if off <= tol * max(np.sum(np.diag(S) ** 2), 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if S[p, q] == 0.0:
                    continue
                theta = 0.5 * np.arctan2(2 * S[p, q], S[q, q] - S[p, p])
                c, s = np.cos(theta), np.sin(theta)
                G = np.eye(n)
                G[p, p] = c
                G[q, q] = c
                G[p, q] = s
                G[q, p] = -s
                S = G.T @ S @ G
    eig = np.clip(np.diag(S), 0.0, None)
    return np.sqrt(np.sort(eig)[::-1])


def close(q, expected, tol=1e-12):
    return (q - expected).modulus() <= tol if hasattr(q, "modulus") else abs(q - expected) <= tol
