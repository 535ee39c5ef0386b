"""Headless matplotlib figures written as SVG."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import numpy.typing as npt  # noqa: E402

logger = logging.getLogger(__name__)

_FIGSIZE = (6.4, 3.8)


def render_decay_plot(t: npt.ArrayLike, xi: npt.ArrayLike, envelope: npt.ArrayLike, path: Path) -> Path:
    """Ξ(a_t) and its envelope on a log axis.

    Raises:
        ValueError: If the three arrays differ in length.
    """
    t_arr = np.asarray(t, dtype=float)
    xi_arr = np.asarray(xi, dtype=float)
    env_arr = np.asarray(envelope, dtype=float)
    if not t_arr.shape == xi_arr.shape == env_arr.shape:
        raise ValueError(f"shape mismatch: t{t_arr.shape}, xi{xi_arr.shape}, envelope{env_arr.shape}")
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    try:
        ax.semilogy(t_arr, xi_arr, label="Ξ(a_t)")
        ax.semilogy(t_arr, env_arr, linestyle="--", label="envelope")
        ax.set_xlabel("t")
        ax.set_ylabel("value")
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg")
    finally:
        plt.close(fig)
    logger.debug("Rendered decay plot", extra={"path": str(path), "samples": int(t_arr.size)})
    return path


def render_ratio_plot(sequences: Mapping[str, Mapping[str, Sequence[float]]], path: Path) -> Path:
    """One line per (statement, sequence) pair against its index.

    Statements without sequences are skipped; an empty mapping still
    produces a figure with a note so downstream links never dangle.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    try:
        drawn = 0
        for statement, named in sorted(sequences.items()):
            for name, values in sorted(named.items()):
                data = np.asarray(values, dtype=float)
                if data.size == 0:
                    continue
                ax.plot(np.arange(1, data.size + 1), data, marker="o", markersize=3, label=f"{statement}:{name}")
                drawn += 1
        if drawn:
            ax.set_xlabel("index")
            ax.set_ylabel("ratio")
            ax.legend(fontsize="x-small")
        else:
            ax.text(0.5, 0.5, "no sequences", ha="center", va="center", transform=ax.transAxes)
        fig.tight_layout()
        fig.savefig(path, format="svg")
    finally:
        plt.close(fig)
    logger.debug("Rendered ratio plot", extra={"path": str(path), "lines": drawn})
    return path


__all__ = ["render_decay_plot", "render_ratio_plot"]
