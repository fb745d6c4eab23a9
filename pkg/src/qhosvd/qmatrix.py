"""Dense quaternion matrices: products, adjoints, Kronecker product,
and the quaternion SVD used by every decomposition.

The SVD route goes through the complex adjoint embedding: for
Q = A + B*j (A, B complex) the 2m x 2n complex matrix

    chi(Q) = [[A, B], [-conj(B), conj(A)]]

is an algebra homomorphism (chi(PQ) = chi(P)chi(Q),
chi(P^H) = chi(P)^H), so a complex SVD of chi(Q) carries the singular
values of Q in coincident pairs and its singular vectors encode the
quaternion factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _pairops as po
from .errors import ConvergenceError, DataError, ShapeError
from .quaternion import Quaternion

__all__ = ["QMatrix", "SVDResult", "matmul", "adjoint", "kron",
           "unitarity_defect", "qsvd"]

ADJOINT_KINDS = ("conjugate", "transpose", "hermitian")


class QMatrix:
    """Immutable dense quaternion matrix in complex-pair storage."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a = np.array(a, dtype=np.complex128, order="F")
        b = np.array(b, dtype=np.complex128, order="F")
        if a.ndim != 2 or a.shape != b.shape:
            raise ShapeError("complex pair must be two equal-shape 2-D arrays")
        if min(a.shape) < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {a.shape}")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def _wrap(cls, a, b) -> "QMatrix":
        # fast path for freshly computed arrays we own
        self = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.complex128)
        b = np.ascontiguousarray(b, dtype=np.complex128)
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        return self

    @classmethod
    def from_components(cls, comp) -> "QMatrix":
        """Build from a float array of shape (rows, cols, 4) in (w,x,y,z) order."""
        comp = np.asarray(comp, dtype=np.float64)
        if comp.ndim != 3 or comp.shape[-1] != 4:
            raise ShapeError("expected an array of shape (rows, cols, 4)")
        return cls(*po.pair_from_components(comp))

    @classmethod
    def from_real(cls, arr) -> "QMatrix":
        arr = np.asarray(arr, dtype=np.float64)
        return cls(arr.astype(np.complex128), np.zeros_like(arr, dtype=np.complex128))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        z = np.zeros((rows, cols), dtype=np.complex128)
        return cls._wrap(z, z.copy())

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._wrap(np.eye(n, dtype=np.complex128),
                         np.zeros((n, n), dtype=np.complex128))

    @property
    def shape(self):
        return self.a.shape

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def components(self):
        """Float64 view of shape (rows, cols, 4), order (w, x, y, z)."""
        return po.pair_to_components(self.a, self.b)

    @property
    def real(self):
        return self.a.real.copy()

    def is_real(self, tol: float = 0.0) -> bool:
        return (np.abs(self.a.imag).max(initial=0.0) <= tol
                and np.abs(self.b).max(initial=0.0) <= tol)

    def isfinite(self) -> bool:
        return bool(np.isfinite(self.a).all() and np.isfinite(self.b).all())

    def __getitem__(self, key):
        if (isinstance(key, tuple) and len(key) == 2
                and all(isinstance(i, (int, np.integer)) for i in key)):
            return po.pair_scalar(self.a[key], self.b[key])
        sub_a = self.a[key]
        if sub_a.ndim != 2:
            raise ShapeError("matrix slicing must keep two axes")
        return QMatrix._wrap(sub_a.copy(), self.b[key].copy())

    def __add__(self, other: "QMatrix") -> "QMatrix":
        _check_same_shape(self, other)
        return QMatrix._wrap(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        _check_same_shape(self, other)
        return QMatrix._wrap(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QMatrix":
        return QMatrix._wrap(-self.a, -self.b)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        return matmul(self, other)

    def scale(self, factor: float) -> "QMatrix":
        """Multiply by a real scalar."""
        return QMatrix._wrap(self.a * factor, self.b * factor)

    def conj(self) -> "QMatrix":
        return QMatrix._wrap(*po.pair_conj(self.a, self.b))

    def transpose(self) -> "QMatrix":
        return QMatrix._wrap(self.a.T.copy(), self.b.T.copy())

    def hermitian(self) -> "QMatrix":
        return QMatrix._wrap(np.conj(self.a).T.copy(), (-self.b).T.copy())

    @property
    def H(self) -> "QMatrix":
        return self.hermitian()

    @property
    def T(self) -> "QMatrix":
        return self.transpose()

    def chi(self):
        """Complex adjoint embedding, a 2m x 2n complex matrix."""
        return np.block([[self.a, self.b],
                         [-np.conj(self.b), np.conj(self.a)]])

    def frobenius_norm(self) -> float:
        return po.pair_norm(self.a, self.b)

    def allclose(self, other: "QMatrix", tol: float = 1e-12) -> bool:
        return (self.shape == other.shape
                and (self - other).frobenius_norm() <= tol)

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


def _check_same_shape(a: QMatrix, b: QMatrix):
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


def matmul(A: QMatrix, B: QMatrix) -> QMatrix:
    """Quaternion matrix product, entries sum A(i,k)*B(k,j) left to right."""
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    return QMatrix._wrap(*po.pair_matmul(A.a, A.b, B.a, B.b))


def adjoint(A: QMatrix, kind: str) -> QMatrix:
    """Elementwise conjugate, pure transpose, or conjugate transpose."""
    if kind == "conjugate":
        return A.conj()
    if kind == "transpose":
        return A.transpose()
    if kind == "hermitian":
        return A.hermitian()
    raise ValueError(f"adjoint kind must be one of {ADJOINT_KINDS}, got {kind!r}")


def kron(A: QMatrix, B: QMatrix) -> QMatrix:
    """Kronecker product; block (i,j) is A(i,j)*B with A(i,j) acting from the left."""
    ka = np.kron(A.a, B.a) - np.kron(A.b, np.conj(B.b))
    kb = np.kron(A.a, B.b) + np.kron(A.b, np.conj(B.a))
    return QMatrix._wrap(ka, kb)


def unitarity_defect(A: QMatrix) -> float:
    """||A^H A - I||_F for a square matrix."""
    if A.rows != A.cols:
        raise ShapeError(f"unitarity defect needs a square matrix, got {A.shape}")
    return _colwise_defect(A.a, A.b)


def _colwise_defect(a, b) -> float:
    ga, gb = po.pair_matmul(np.conj(a).T, (-b).T, a, b)
    ga = ga - np.eye(a.shape[1], dtype=np.complex128)
    return float(np.sqrt((np.abs(ga) ** 2 + np.abs(gb) ** 2).sum()))


@dataclass(frozen=True)
class SVDResult:
    """Quaternion SVD factors: U diag(sigma) V^H reconstructs the input.

    U and V carry orthonormal columns (square and unitary unless the
    SVD was computed in compact form); sigma is real, nonnegative and
    nonincreasing.
    """

    U: QMatrix
    sigma: np.ndarray
    V: QMatrix

    def reconstruct(self) -> QMatrix:
        k = self.sigma.size
        Uk = self.U[:, :k]
        Vk = self.V[:, :k]
        return QMatrix._wrap(*po.pair_matmul(
            Uk.a * self.sigma, Uk.b * self.sigma,
            np.conj(Vk.a).T, (-Vk.b).T))


def qsvd(A: QMatrix, compact: bool = False) -> SVDResult:
    """Quaternion singular value decomposition.

    Deterministic: identical input bits give identical output bits.
    Phase convention: in each column of U the entry of largest modulus
    is real and nonnegative; the compensating unit quaternion is
    applied to the paired column of V.

    With compact=True only the leading min(m, n) columns of U and V
    are returned (enough for any truncation, much cheaper for very
    tall or wide inputs).
    """
    if not A.isfinite():
        raise DataError("qsvd input has non-finite entries")
    m, n = A.shape
    k = min(m, n)
    try:
        W, s, Zh = np.linalg.svd(A.chi(), full_matrices=not compact)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"complex SVD backend did not converge: {exc}") from exc
    Z = np.conj(Zh).T
    sigma = np.ascontiguousarray(s[0::2][:k])
    smax = float(s[0]) if s.size else 0.0

    # Equal singular values within the group tolerance share a singular
    # subspace whose complex basis need not respect the quaternion
    # pairing; those groups are re-orthonormalized.  The tolerance is
    # widened once if the first pass leaves a measurable defect.
    defect = None
    for gtol_factor in (1e-12, 1e-8):
        Ua, Ub, Va, Vb = _assemble_factors(A, W, Z, sigma, smax * gtol_factor, compact)
        defect = max(_colwise_defect(Ua, Ub), _colwise_defect(Va, Vb))
        if defect <= 0.5e-10 * max(m, n):
            break
    else:
        raise ConvergenceError(
            "quaternion factor extraction left a non-orthonormal basis",
            residual=defect)

    _phase_normalize(Ua, Ub, Va, Vb, npaired=k)
    return SVDResult(U=QMatrix._wrap(Ua, Ub), sigma=sigma, V=QMatrix._wrap(Va, Vb))


def _qcol(C, idx):
    """Complex column [a; c] of a chi-image -> quaternion column a + (-conj(c))j."""
    half = C.shape[0] // 2
    col = C[:, idx]
    return col[:half].copy(), -np.conj(col[half:])


def _sigma_groups(sigma, gtol):
    """Split 0..k-1 into runs of singular values closer than gtol."""
    groups = []
    start = 0
    for c in range(1, sigma.size):
        if sigma[c - 1] - sigma[c] > gtol:
            groups.append(list(range(start, c)))
            start = c
    if sigma.size:
        groups.append(list(range(start, sigma.size)))
    return groups


def _assemble_factors(A, W, Z, sigma, gtol, compact):
    m, n = A.shape
    k = sigma.size
    mcols = k if compact else m
    ncols = k if compact else n
    Ua = np.zeros((m, mcols), dtype=np.complex128)
    Ub = np.zeros((m, mcols), dtype=np.complex128)
    Va = np.zeros((n, ncols), dtype=np.complex128)
    Vb = np.zeros((n, ncols), dtype=np.complex128)

    for c in range(k):
        Ua[:, c], Ub[:, c] = _qcol(W, 2 * c)
        Va[:, c], Vb[:, c] = _qcol(Z, 2 * c)

    zero_cols = [c for c in range(k) if sigma[c] <= gtol]
    live_groups = [g for g in _sigma_groups(sigma, gtol)
                   if sigma[g[0]] > gtol and len(g) > 1]

    for group in live_groups:
        # candidate complex columns: the group's primary columns, then
        # their pair partners (either member of a pair spans the same
        # quaternion line, so partners only matter when the backend
        # mixed distinct lines into one pair slot)
        cand = [_qcol(Z, 2 * c) for c in group] + [_qcol(Z, 2 * c + 1) for c in group]
        _fill_by_mgs(Va, Vb, group, cand, upto=group[0])
        for c in group:
            ua, ub = po.pair_matmul(A.a, A.b,
                                    Va[:, c:c + 1], Vb[:, c:c + 1])
            nrm = np.sqrt(po.pair_abs2(ua, ub).sum())
            if nrm > 0.0:
                Ua[:, c:c + 1] = ua / nrm
                Ub[:, c:c + 1] = ub / nrm

    # zero singular values and, in full mode, the basis completion
    u_slots = zero_cols + list(range(k, mcols))
    if u_slots:
        cand = ([_qcol(W, 2 * c) for c in zero_cols]
                + [_qcol(W, 2 * c + 1) for c in zero_cols]
                + [_qcol(W, j) for j in range(2 * k, W.shape[1])]
                + _canonical_candidates(m))
        _fill_by_mgs(Ua, Ub, u_slots, cand, upto=None)
    v_slots = zero_cols + list(range(k, ncols))
    if v_slots:
        cand = ([_qcol(Z, 2 * c) for c in zero_cols]
                + [_qcol(Z, 2 * c + 1) for c in zero_cols]
                + [_qcol(Z, j) for j in range(2 * k, Z.shape[1])]
                + _canonical_candidates(n))
        _fill_by_mgs(Va, Vb, v_slots, cand, upto=None)
    return Ua, Ub, Va, Vb


def _canonical_candidates(dim):
    out = []
    for i in range(dim):
        ea = np.zeros(dim, dtype=np.complex128)
        ea[i] = 1.0
        out.append((ea, np.zeros(dim, dtype=np.complex128)))
    return out


def _fill_by_mgs(Fa, Fb, slots, candidates, upto):
    """Fill the given columns by quaternion modified Gram-Schmidt.

    Candidates are consumed first-fit; each accepted column is
    projected (twice, for stability) against every column of F that is
    already final: columns < `upto` plus previously filled slots.
    Raises ConvergenceError if the candidate pool cannot fill a slot.
    """
    if upto is None:
        final = [c for c in range((Fa.shape[1])) if c not in slots]
    else:
        final = [c for c in range(upto) if c not in slots]
    used = [False] * len(candidates)
    for slot in slots:
        placed = False
        for ci, (ca, cb) in enumerate(candidates):
            if used[ci]:
                continue
            va, vb = ca.copy(), cb.copy()
            for _ in range(2):
                for c in final:
                    pa, pb = Fa[:, c], Fb[:, c]
                    # right inner product <p, v> = sum conj(p_i) v_i
                    sa = np.sum(np.conj(pa) * va + pb * np.conj(vb))
                    sb = np.sum(np.conj(pa) * vb - pb * np.conj(va))
                    va = va - (pa * sa - pb * np.conj(sb))
                    vb = vb - (pa * sb + pb * np.conj(sa))
            nrm = np.sqrt(po.pair_abs2(va, vb).sum())
            if nrm >= 1e-3:
                Fa[:, slot] = va / nrm
                Fb[:, slot] = vb / nrm
                used[ci] = True
                final.append(slot)
                placed = True
                break
        if not placed:
            raise ConvergenceError("could not complete an orthonormal quaternion basis")


def _phase_normalize(Ua, Ub, Va, Vb, npaired):
    mods2 = np.abs(Ua) ** 2 + np.abs(Ub) ** 2
    rows = np.argmax(mods2, axis=0)
    for c in range(Ua.shape[1]):
        r = rows[c]
        mod = np.sqrt(mods2[r, c])
        if mod == 0.0:
            continue
        za = np.conj(Ua[r, c]) / mod
        zb = -Ub[r, c] / mod
        _apply_right_unit(Ua, Ub, c, za, zb)
        if c < npaired:
            _apply_right_unit(Va, Vb, c, za, zb)
    # columns of V without a U partner get their own convention
    for c in range(npaired, Va.shape[1]):
        mods2 = np.abs(Va[:, c]) ** 2 + np.abs(Vb[:, c]) ** 2
        r = int(np.argmax(mods2))
        mod = np.sqrt(mods2[r])
        if mod == 0.0:
            continue
        za = np.conj(Va[r, c]) / mod
        zb = -Vb[r, c] / mod
        _apply_right_unit(Va, Vb, c, za, zb)


def _apply_right_unit(Fa, Fb, c, za, zb):
    fa = Fa[:, c].copy()
    fb = Fb[:, c].copy()
    Fa[:, c] = fa * za - fb * np.conj(zb)
    Fb[:, c] = fa * zb + fb * np.conj(za)
