"""Quaternion linear algebra and two-sided higher-order SVD.

Dense quaternion scalars, matrices, and order-N tensors with left/right
unfoldings and mode products; exact and truncated two-sided, left, and
right higher-order SVDs with tail-energy error bounds; bit-exact tensor
serialization and color-frame ingestion; a property-verification suite;
and a CLI (decompose, verify, compress, info).
"""

from .decompose import (ErrorReport, ModeSpectrum, PhaseTimer, TruncationSpec,
                        TSDecomposition, error_report, l_qhosvd, r_qhosvd,
                        reconstruct, tail_energy, ts_qhosvd)
from .errors import (BadMagicError, ConvergenceError, DataError, ModeError,
                     QhosvdError, RankSpecError, ShapeError, TensorFormatError,
                     TruncatedPayloadError)
from .media import (frames_to_tensor, read_frames, read_ppm, read_tensor,
                    tensor_to_frames, write_frames, write_ppm, write_tensor)
from .qmatrix import (QMatrix, SVDResult, adjoint, kron, matmul, qsvd,
                      unitarity_defect)
from .qtensor import (QTensor, fold, fro_norm, inner, lmode_product,
                      rmode_product, subtensor, unfold)
from .quaternion import Quaternion, qconj, qinv, qmodulus, qmul
from .verify import (PropertyReport, check_ordering, check_orthogonality,
                     check_weak_orthogonality, reference_tensor,
                     residual_tensors, run_paper_examples, run_random_battery)

__version__ = "0.1.0"

__all__ = [
    "Quaternion", "qmul", "qconj", "qmodulus", "qinv",
    "QMatrix", "SVDResult", "matmul", "adjoint", "kron", "qsvd",
    "unitarity_defect",
    "QTensor", "unfold", "fold", "lmode_product", "rmode_product", "inner",
    "fro_norm", "subtensor",
    "TruncationSpec", "ModeSpectrum", "TSDecomposition", "ErrorReport",
    "PhaseTimer", "ts_qhosvd", "l_qhosvd", "r_qhosvd", "reconstruct",
    "tail_energy", "error_report",
    "PropertyReport", "check_ordering", "check_orthogonality",
    "check_weak_orthogonality", "residual_tensors", "reference_tensor",
    "run_paper_examples", "run_random_battery",
    "write_tensor", "read_tensor", "frames_to_tensor", "tensor_to_frames",
    "read_ppm", "write_ppm", "read_frames", "write_frames",
    "QhosvdError", "ShapeError", "ModeError", "DataError", "RankSpecError",
    "ConvergenceError", "TensorFormatError", "BadMagicError",
    "TruncatedPayloadError",
]
