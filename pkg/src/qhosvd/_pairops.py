"""Internal kernels for quaternion arrays in complex-pair form.

An array of quaternions q = w + x*i + y*j + z*k is carried as the pair
(a, b) of complex128 arrays with a = w + x*1j and b = y + z*1j, i.e.
q = a + b*j.  All identities below follow from j*z = conj(z)*j for
complex z and j*j = -1.
"""

from __future__ import annotations

import numpy as np

from .quaternion import Quaternion


def pair_mul(a1, b1, a2, b2):
    """Elementwise Hamilton product (a1 + b1 j)(a2 + b2 j)."""
    return (a1 * a2 - b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2))


def pair_conj(a, b):
    return (np.conj(a), -b)


def pair_abs2(a, b):
    """Elementwise squared modulus, as a real array."""
    return (a.real * a.real + a.imag * a.imag
            + b.real * b.real + b.imag * b.imag)


def pair_matmul(a1, b1, a2, b2):
    """Quaternion matrix product in pair form."""
    return (a1 @ a2 - b1 @ np.conj(b2), a1 @ b2 + b1 @ np.conj(a2))


def pair_norm(a, b) -> float:
    return float(np.sqrt(pair_abs2(a, b).sum()))


def pair_from_components(comp):
    """comp[..., 4] in (w, x, y, z) order -> (a, b)."""
    comp = np.asarray(comp, dtype=np.float64)
    a = comp[..., 0] + 1j * comp[..., 1]
    b = comp[..., 2] + 1j * comp[..., 3]
    return a, b


def pair_to_components(a, b):
    """(a, b) -> float64 array of shape a.shape + (4,)."""
    out = np.empty(a.shape + (4,), dtype=np.float64)
    out[..., 0] = a.real
    out[..., 1] = a.imag
    out[..., 2] = b.real
    out[..., 3] = b.imag
    return out


def scalar_pair(q: Quaternion):
    return (complex(q.w, q.x), complex(q.y, q.z))


def pair_scalar(sa, sb) -> Quaternion:
    sa = complex(sa)
    sb = complex(sb)
    return Quaternion(sa.real, sa.imag, sb.real, sb.imag)
