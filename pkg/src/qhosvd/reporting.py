"""Figure rendering for decomposition reports.

Figures are written next to the delimited output of the CLI report
path: per-mode singular spectra, and measured error against the
tail-energy bound.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_spectra_figure", "save_error_figure"]


def save_spectra_figure(decomposition, path) -> None:
    """Semilog plot of every mode's singular spectrum, truncation marked."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for k in range(1, decomposition.order + 1):
        sp = decomposition.spectrum(k)
        idx = np.arange(1, sp.sigma.size + 1)
        ax.semilogy(idx, np.maximum(sp.sigma, 1e-300), marker="o", ms=3.5,
                    label=f"mode {k} ({sp.side})")
        rank = decomposition.ranks[k - 1]
        if rank < sp.sigma.size:
            ax.axvline(rank + 0.5, color="0.82", lw=0.8, zorder=0)
    ax.set_xlabel("singular value index")
    ax.set_ylabel("singular value")
    ax.set_title(f"{decomposition.variant.upper()} spectra, "
                 f"dims {'x'.join(map(str, decomposition.original_dims))}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_error_figure(report, path) -> None:
    """Measured squared error vs the tail bound, with per-mode tails."""
    modes = [m for m, _ in report.per_mode_tails]
    tails = [t for _, t in report.per_mode_tails]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.6))
    ax1.bar(["measured", "bound"], [report.sq_error, report.tail_bound],
            color=["#4878d0", "#ee854a"])
    ax1.set_ylabel("squared Frobenius error")
    ax1.set_title(f"relative error {report.rel_error:.4g}")
    ax2.bar([str(m) for m in modes], tails, color="#6acc64")
    ax2.set_xlabel("mode")
    ax2.set_title("discarded tail energy per mode")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
