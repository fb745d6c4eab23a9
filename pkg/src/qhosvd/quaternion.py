"""Scalar quaternion arithmetic.

A quaternion is stored as four doubles (w, x, y, z) meaning
``w + x*i + y*j + z*k`` with the usual multiplication table

    i*i = j*j = k*k = -1,   i*j = -j*i = k,
    j*k = -k*j = i,         k*i = -i*k = j.

Values are immutable plain data and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DataError

__all__ = ["Quaternion", "qmul", "qconj", "qmodulus", "qinv"]


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other: "Quaternion") -> "Quaternion":
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other) -> "Quaternion":
        return _coerce(other).__sub__(self)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other) -> "Quaternion":
        return qmul(self, _coerce(other))

    def __rmul__(self, other) -> "Quaternion":
        return qmul(_coerce(other), self)

    def conjugate(self) -> "Quaternion":
        return qconj(self)

    def modulus(self) -> float:
        return qmodulus(self)

    def inverse(self) -> "Quaternion":
        return qinv(self)

    @property
    def real(self) -> float:
        return self.w

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return qmodulus(self - _coerce(other)) <= tol

    def __repr__(self) -> str:
        return (f"Quaternion({self.w:g}, {self.x:g}, "
                f"{self.y:g}, {self.z:g})")


def _coerce(value) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value))
    raise TypeError(f"cannot treat {type(value).__name__} as a quaternion")


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p*q.  Not commutative in general."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def qconj(q: Quaternion) -> Quaternion:
    """Quaternion conjugate: flips the sign of the imaginary parts."""
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def qmodulus(q: Quaternion) -> float:
    """Modulus sqrt(w^2 + x^2 + y^2 + z^2)."""
    return math.sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z)


def qinv(q: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(q)/|q|^2.

    Raises DataError on the zero quaternion, which has no inverse.
    """
    n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z
    if n2 == 0.0:
        raise DataError("the zero quaternion has no inverse")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)
