"""Order-N dense quaternion tensors.

Modes are numbered 1..N.  The left mode-k unfolding puts mode-k fibers
into columns: entry (i_1,...,i_N) lands at row i_k, column
1 + sum_{l != k} (i_l - 1) * prod_{m < l, m != k} I_m, i.e. the
remaining indices run in generalized column-major order with i_1
fastest.  The right unfolding is its pure transpose (fibers as rows).

Left and right mode-k products multiply the matrix entry from the left
and from the right respectively; the two are genuinely different
operations because quaternions do not commute.
"""

from __future__ import annotations

import numpy as np

from . import _pairops as po
from .errors import ModeError, ShapeError
from .qmatrix import QMatrix, matmul
from .quaternion import Quaternion

__all__ = ["QTensor", "unfold", "fold", "lmode_product", "rmode_product",
           "inner", "fro_norm", "subtensor"]


class QTensor:
    """Immutable dense quaternion tensor in complex-pair storage."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a = np.array(a, dtype=np.complex128)
        b = np.array(b, dtype=np.complex128)
        if a.shape != b.shape or a.ndim < 1:
            raise ShapeError("complex pair must be two equal-shape arrays of order >= 1")
        if min(a.shape) < 1:
            raise ShapeError(f"tensor dimensions must be positive, got {a.shape}")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("QTensor is immutable")

    @classmethod
    def _wrap(cls, a, b) -> "QTensor":
        self = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.complex128)
        b = np.ascontiguousarray(b, dtype=np.complex128)
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        return self

    @classmethod
    def from_components(cls, comp) -> "QTensor":
        """Build from a float array of shape dims + (4,) in (w,x,y,z) order."""
        comp = np.asarray(comp, dtype=np.float64)
        if comp.ndim < 2 or comp.shape[-1] != 4:
            raise ShapeError("expected an array of shape dims + (4,)")
        return cls(*po.pair_from_components(comp))

    @classmethod
    def from_real(cls, arr) -> "QTensor":
        arr = np.asarray(arr, dtype=np.float64)
        return cls(arr.astype(np.complex128), np.zeros_like(arr, dtype=np.complex128))

    @classmethod
    def zeros(cls, dims) -> "QTensor":
        z = np.zeros(tuple(dims), dtype=np.complex128)
        return cls._wrap(z, z.copy())

    @classmethod
    def from_matrix(cls, M: QMatrix) -> "QTensor":
        return cls._wrap(M.a.copy(), M.b.copy())

    def as_matrix(self) -> QMatrix:
        if self.order != 2:
            raise ShapeError(f"only order-2 tensors convert to matrices, got order {self.order}")
        return QMatrix._wrap(self.a.copy(), self.b.copy())

    @property
    def dims(self):
        return self.a.shape

    @property
    def order(self) -> int:
        return self.a.ndim

    @property
    def size(self) -> int:
        return self.a.size

    @property
    def components(self):
        """Float64 array of shape dims + (4,), order (w, x, y, z)."""
        return po.pair_to_components(self.a, self.b)

    @property
    def is_pure(self) -> bool:
        """True when the real-part component is identically zero."""
        return not np.any(self.a.real)

    def isfinite(self) -> bool:
        return bool(np.isfinite(self.a).all() and np.isfinite(self.b).all())

    def __getitem__(self, key) -> Quaternion:
        if not (isinstance(key, tuple) and len(key) == self.order
                and all(isinstance(i, (int, np.integer)) for i in key)):
            raise TypeError("index a QTensor with one integer per mode")
        return po.pair_scalar(self.a[key], self.b[key])

    def __add__(self, other: "QTensor") -> "QTensor":
        _check_same_dims(self, other)
        return QTensor._wrap(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QTensor") -> "QTensor":
        _check_same_dims(self, other)
        return QTensor._wrap(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QTensor":
        return QTensor._wrap(-self.a, -self.b)

    def scale(self, factor: float) -> "QTensor":
        return QTensor._wrap(self.a * factor, self.b * factor)

    def conj(self) -> "QTensor":
        return QTensor._wrap(*po.pair_conj(self.a, self.b))

    def frobenius_norm(self) -> float:
        return po.pair_norm(self.a, self.b)

    def allclose(self, other: "QTensor", tol: float = 1e-12) -> bool:
        return (self.dims == other.dims
                and (self - other).frobenius_norm() <= tol)

    def __repr__(self) -> str:
        return f"QTensor{tuple(self.dims)}"


def _check_same_dims(x: QTensor, y: QTensor):
    if x.dims != y.dims:
        raise ShapeError(f"dims mismatch: {x.dims} vs {y.dims}")


def _check_mode(T: QTensor, k: int):
    if not 1 <= k <= T.order:
        raise ModeError(f"mode {k} out of range for an order-{T.order} tensor")


def _unfold_left_arr(arr, k):
    return np.reshape(np.moveaxis(arr, k - 1, 0), (arr.shape[k - 1], -1), order="F")


def unfold(T: QTensor, k: int, side: str) -> QMatrix:
    """Mode-k unfolding; side "left" gives I_k x prod(rest), "right" its transpose."""
    _check_mode(T, k)
    ua = _unfold_left_arr(T.a, k)
    ub = _unfold_left_arr(T.b, k)
    if side == "left":
        return QMatrix._wrap(ua.copy(), ub.copy())
    if side == "right":
        return QMatrix._wrap(ua.T.copy(), ub.T.copy())
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def fold(M: QMatrix, k: int, side: str, dims) -> QTensor:
    """Inverse of unfold: exact bit-for-bit round trip."""
    dims = tuple(int(d) for d in dims)
    if not 1 <= k <= len(dims):
        raise ModeError(f"mode {k} out of range for dims {dims}")
    rest = dims[:k - 1] + dims[k:]
    expect = (dims[k - 1], int(np.prod(rest, dtype=np.int64)))
    if side == "right":
        M = M.transpose()
    elif side != "left":
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if M.shape != expect:
        raise ShapeError(
            f"unfolding shape {M.shape} does not match mode {k} of dims {dims}")
    a = np.moveaxis(M.a.reshape((dims[k - 1],) + rest, order="F"), 0, k - 1)
    b = np.moveaxis(M.b.reshape((dims[k - 1],) + rest, order="F"), 0, k - 1)
    return QTensor._wrap(a, b)


def lmode_product(U: QMatrix, k: int, T: QTensor) -> QTensor:
    """Left mode-k product: entries sum U(j, i_k) * T(..., i_k, ...)."""
    _check_mode(T, k)
    if U.cols != T.dims[k - 1]:
        raise ShapeError(
            f"left mode-{k} product needs {T.dims[k - 1]} columns, got {U.shape}")
    Y = matmul(U, unfold(T, k, "left"))
    dims = list(T.dims)
    dims[k - 1] = U.rows
    return fold(Y, k, "left", dims)


def rmode_product(T: QTensor, k: int, V: QMatrix) -> QTensor:
    """Right mode-k product: entries sum T(..., i_k, ...) * V(i_k, j)."""
    _check_mode(T, k)
    if V.rows != T.dims[k - 1]:
        raise ShapeError(
            f"right mode-{k} product needs {T.dims[k - 1]} rows, got {V.shape}")
    Y = matmul(unfold(T, k, "right"), V)
    dims = list(T.dims)
    dims[k - 1] = V.cols
    return fold(Y, k, "right", dims)


def inner(A: QTensor, B: QTensor, side: str) -> Quaternion:
    """Left inner product sums a*conj(b); right sums conj(a)*b."""
    _check_same_dims(A, B)
    if side == "left":
        pa, pb = po.pair_mul(A.a, A.b, *po.pair_conj(B.a, B.b))
    elif side == "right":
        pa, pb = po.pair_mul(*po.pair_conj(A.a, A.b), B.a, B.b)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return po.pair_scalar(pa.sum(), pb.sum())


def fro_norm(T: QTensor) -> float:
    return T.frobenius_norm()


def subtensor(T: QTensor, k: int, alpha: int) -> QTensor:
    """Order-(N-1) slice fixing index alpha (1-based) at mode k."""
    _check_mode(T, k)
    if T.order < 2:
        raise ShapeError("subtensor needs an order >= 2 tensor")
    if not 1 <= alpha <= T.dims[k - 1]:
        raise ModeError(
            f"index {alpha} out of range 1..{T.dims[k - 1]} at mode {k}")
    a = np.take(T.a, alpha - 1, axis=k - 1)
    b = np.take(T.b, alpha - 1, axis=k - 1)
    return QTensor._wrap(a, b)
