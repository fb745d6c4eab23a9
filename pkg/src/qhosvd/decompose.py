"""Two-sided, left, and right quaternion higher-order SVD.

All three variants process one mode at a time against the *current*
tensor (sequential style).  The two-sided variant handles two modes per
round: with m = N // 2, round k (running m, m-1, ..., 1) takes the left
singular vectors of the left mode-k unfolding and the right singular
vectors of the right mode-(N-k+1) unfolding of the same current tensor,
then updates it from both sides.  For odd N, mode m+1 is processed
first as a standalone right-side step.

Reconstruction applies factors in the inverse order; the order among
left products and among right products is normative because quaternion
mode products at different modes do not commute, while interleaving a
left with a right product is always safe.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import RankSpecError, ShapeError
from .qmatrix import QMatrix, SVDResult, qsvd
from .qtensor import QTensor, fold, fro_norm, lmode_product, rmode_product, unfold

__all__ = ["TruncationSpec", "ModeSpectrum", "TSDecomposition", "ErrorReport",
           "ts_qhosvd", "l_qhosvd", "r_qhosvd", "reconstruct", "tail_energy",
           "error_report", "PhaseTimer"]


class PhaseTimer:
    """Accumulates wall-clock seconds per named phase."""

    def __init__(self):
        self.seconds = {}

    def add(self, phase: str, dt: float):
        self.seconds[phase] = self.seconds.get(phase, 0.0) + dt

    def timed(self, phase: str, fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        self.add(phase, time.perf_counter() - t0)
        return out


def _timed(timer, phase, fn, *args, **kwargs):
    if timer is None:
        return fn(*args, **kwargs)
    return timer.timed(phase, fn, *args, **kwargs)


@dataclass(frozen=True)
class TruncationSpec:
    """Per-mode target ranks, or per-mode ratios resolved to ranks.

    Exactly one of `ranks` and `ratios` must be given.  Ratios r in
    (0, 1] resolve to clamp(round(r * I_k), 1, I_k).
    """

    ranks: tuple | None = None
    ratios: tuple | None = None

    def __post_init__(self):
        if (self.ranks is None) == (self.ratios is None):
            raise RankSpecError("give exactly one of ranks or ratios")
        if self.ranks is not None:
            object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
            for k, r in enumerate(self.ranks, start=1):
                if r < 1:
                    raise RankSpecError(f"rank {r} at mode {k} must be >= 1")
        else:
            object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
            for k, r in enumerate(self.ratios, start=1):
                if not 0.0 < r <= 1.0:
                    raise RankSpecError(
                        f"ratio {r} at mode {k} must be in (0, 1]")

    def resolve(self, dims) -> tuple:
        dims = tuple(int(d) for d in dims)
        values = self.ranks if self.ranks is not None else self.ratios
        if len(values) != len(dims):
            raise RankSpecError(
                f"spec has {len(values)} modes but the tensor has {len(dims)}")
        if self.ranks is not None:
            for k, (r, d) in enumerate(zip(self.ranks, dims), start=1):
                if r > d:
                    raise RankSpecError(
                        f"rank {r} at mode {k} exceeds the dimension {d}")
            return self.ranks
        return tuple(
            min(max(int(np.floor(r * d + 0.5)), 1), d)
            for r, d in zip(self.ratios, dims))


@dataclass(frozen=True)
class ModeSpectrum:
    """Full singular spectrum of the unfolding processed at one mode's round."""

    mode: int
    side: str
    sigma: np.ndarray


@dataclass
class TSDecomposition:
    """Core tensor, factors, and per-mode spectra for any variant.

    `left_factors` covers modes 1..len(left_factors); `right_factors`
    covers the last len(right_factors) modes.
    """

    variant: str
    core: QTensor
    left_factors: list = field(default_factory=list)
    right_factors: list = field(default_factory=list)
    spectra: list = field(default_factory=list)
    original_dims: tuple = ()
    ranks: tuple = ()

    @property
    def order(self) -> int:
        return len(self.original_dims)

    @property
    def is_truncated(self) -> bool:
        return tuple(self.ranks) != tuple(self.original_dims)

    def left_factor(self, mode: int) -> QMatrix:
        if not 1 <= mode <= len(self.left_factors):
            raise ShapeError(f"no left factor at mode {mode}")
        return self.left_factors[mode - 1]

    def right_factor(self, mode: int) -> QMatrix:
        first = self.order - len(self.right_factors) + 1
        if not first <= mode <= self.order:
            raise ShapeError(f"no right factor at mode {mode}")
        return self.right_factors[mode - first]

    def spectrum(self, mode: int) -> ModeSpectrum:
        return self.spectra[mode - 1]


@dataclass(frozen=True)
class ErrorReport:
    """Reconstruction error against the tail-energy bound."""

    abs_error: float
    rel_error: float
    sq_error: float
    tail_bound: float
    per_mode_tails: list

    def within_bound(self, slack: float = 1e-8) -> bool:
        # allow the roundoff floor of the measured error itself
        norm = self.abs_error / self.rel_error if self.rel_error > 0 else 0.0
        return self.sq_error <= self.tail_bound * (1.0 + slack) + (1e-10 * norm) ** 2


def _resolve_ranks(dims, spec):
    if spec is None:
        return tuple(int(d) for d in dims)
    return spec.resolve(dims)


def round_svd(M: QMatrix, needed: int) -> SVDResult:
    """SVD of an unfolding, compact whenever the leading block suffices."""
    return qsvd(M, compact=needed <= min(M.shape))


def _pair_svd(ML, needL, MR, needR, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fL = pool.submit(round_svd, ML, needL)
            fR = pool.submit(round_svd, MR, needR)
            return fL.result(), fR.result()
    return round_svd(ML, needL), round_svd(MR, needR)


def ts_qhosvd(T: QTensor, spec: TruncationSpec | None = None,
              threads: int = 1, timer: PhaseTimer | None = None) -> TSDecomposition:
    """Two-sided decomposition: factors from both sides, two modes per round.

    Without a spec the decomposition is exact.  Each round's two SVDs
    read the same immutable current tensor and may run concurrently
    (threads > 1); results do not depend on scheduling.
    """
    dims = T.dims
    N = T.order
    m = N // 2
    ranks = _resolve_ranks(dims, spec)
    spectra = [None] * N
    left = {}
    right = {}
    cur = T

    if N % 2 == 1:
        q = m + 1
        res = _timed(timer, "svd", lambda: round_svd(unfold(cur, q, "right"), ranks[q - 1]))
        V = res.V[:, :ranks[q - 1]]
        spectra[q - 1] = ModeSpectrum(q, "right", res.sigma)
        right[q] = V
        cur = _timed(timer, "product", rmode_product, cur, q, V)

    for k in range(m, 0, -1):
        q = N - k + 1
        ML = unfold(cur, k, "left")
        MR = unfold(cur, q, "right")
        t0 = time.perf_counter()
        resL, resR = _pair_svd(ML, ranks[k - 1], MR, ranks[q - 1], threads)
        if timer is not None:
            timer.add("svd", time.perf_counter() - t0)
        U = resL.U[:, :ranks[k - 1]]
        V = resR.V[:, :ranks[q - 1]]
        spectra[k - 1] = ModeSpectrum(k, "left", resL.sigma)
        spectra[q - 1] = ModeSpectrum(q, "right", resR.sigma)
        left[k] = U
        right[q] = V
        cur = _timed(timer, "product", lambda: rmode_product(
            lmode_product(U.hermitian(), k, cur), q, V))

    return TSDecomposition(
        variant="ts", core=cur,
        left_factors=[left[k] for k in range(1, m + 1)],
        right_factors=[right[q] for q in range(m + 1, N + 1)],
        spectra=spectra, original_dims=tuple(dims), ranks=ranks)


def l_qhosvd(T: QTensor, spec: TruncationSpec | None = None,
             timer: PhaseTimer | None = None) -> TSDecomposition:
    """Left-sided decomposition: one left factor per round, modes N..1."""
    dims = T.dims
    N = T.order
    ranks = _resolve_ranks(dims, spec)
    spectra = [None] * N
    factors = {}
    cur = T
    for k in range(N, 0, -1):
        res = _timed(timer, "svd", lambda: round_svd(unfold(cur, k, "left"), ranks[k - 1]))
        U = res.U[:, :ranks[k - 1]]
        spectra[k - 1] = ModeSpectrum(k, "left", res.sigma)
        factors[k] = U
        cur = _timed(timer, "product", lmode_product, U.hermitian(), k, cur)
    return TSDecomposition(
        variant="l", core=cur,
        left_factors=[factors[k] for k in range(1, N + 1)],
        right_factors=[],
        spectra=spectra, original_dims=tuple(dims), ranks=ranks)


def r_qhosvd(T: QTensor, spec: TruncationSpec | None = None,
             timer: PhaseTimer | None = None) -> TSDecomposition:
    """Right-sided decomposition: one right factor per round, modes 1..N."""
    dims = T.dims
    N = T.order
    ranks = _resolve_ranks(dims, spec)
    spectra = [None] * N
    factors = {}
    cur = T
    for k in range(1, N + 1):
        res = _timed(timer, "svd", lambda: round_svd(unfold(cur, k, "right"), ranks[k - 1]))
        V = res.V[:, :ranks[k - 1]]
        spectra[k - 1] = ModeSpectrum(k, "right", res.sigma)
        factors[k] = V
        cur = _timed(timer, "product", rmode_product, cur, k, V)
    return TSDecomposition(
        variant="r", core=cur,
        left_factors=[],
        right_factors=[factors[k] for k in range(1, N + 1)],
        spectra=spectra, original_dims=tuple(dims), ranks=ranks)


def reconstruct(D: TSDecomposition, timer: PhaseTimer | None = None) -> QTensor:
    """Apply factors in the normative inverse order.

    TS: rounds k = 1..m in increasing k, each applying the left factor
    at mode k and the adjoint right factor at mode N-k+1 (for odd N the
    standalone mode-(m+1) right factor comes last).  L: left factors at
    modes 1..N in increasing order.  R: adjoint right factors at modes
    N..1 in decreasing order.
    """
    N = D.order
    X = D.core
    if D.variant == "ts":
        m = len(D.left_factors)
        for k in range(1, m + 1):
            X = _timed(timer, "product", lmode_product, D.left_factor(k), k, X)
            q = N - k + 1
            X = _timed(timer, "product", rmode_product, X, q,
                       D.right_factor(q).hermitian())
        if N % 2 == 1:
            q = m + 1
            X = _timed(timer, "product", rmode_product, X, q,
                       D.right_factor(q).hermitian())
    elif D.variant == "l":
        for k in range(1, N + 1):
            X = _timed(timer, "product", lmode_product, D.left_factor(k), k, X)
    elif D.variant == "r":
        for k in range(N, 0, -1):
            X = _timed(timer, "product", rmode_product, X, k,
                       D.right_factor(k).hermitian())
    else:
        raise ValueError(f"unknown variant {D.variant!r}")
    if X.dims != D.original_dims:
        raise ShapeError(
            f"reconstruction produced {X.dims}, expected {D.original_dims}")
    return X


def tail_energy(D: TSDecomposition, spec: TruncationSpec | None = None) -> float:
    """Sum of squared discarded singular values across all modes."""
    return sum(t for _, t in per_mode_tails(D, spec))


def per_mode_tails(D: TSDecomposition, spec: TruncationSpec | None = None):
    ranks = D.ranks if spec is None else spec.resolve(D.original_dims)
    out = []
    for k in range(1, D.order + 1):
        sp = D.spectrum(k)
        if sp is None:
            raise RankSpecError(f"decomposition carries no spectrum for mode {k}")
        discarded = sp.sigma[ranks[k - 1]:]
        out.append((k, float(np.sum(discarded ** 2))))
    return out


def error_report(T: QTensor, D: TSDecomposition,
                 spec: TruncationSpec | None = None) -> ErrorReport:
    """Measured reconstruction error next to the tail-energy bound."""
    if T.dims != D.original_dims:
        raise ShapeError(
            f"tensor dims {T.dims} do not match the decomposition {D.original_dims}")
    That = reconstruct(D)
    abs_error = fro_norm(T - That)
    norm = fro_norm(T)
    rel_error = abs_error / norm if norm > 0 else (0.0 if abs_error == 0 else np.inf)
    tails = per_mode_tails(D, spec)
    report = ErrorReport(
        abs_error=abs_error,
        rel_error=rel_error,
        sq_error=abs_error ** 2,
        tail_bound=float(sum(t for _, t in tails)),
        per_mode_tails=tails)
    if report.sq_error > report.tail_bound * (1 + 1e-8) + (1e-10 * norm) ** 2:
        import warnings
        warnings.warn(
            f"squared error {report.sq_error:.6g} exceeds the tail bound "
            f"{report.tail_bound:.6g}", RuntimeWarning, stacklevel=2)
    return report
