"""Figure rendering for report artifacts.

Pure file output on the Agg backend; every function writes one PNG next to
the delimited series the CLI emits, and returns the path.  Figures are
diagnostic, not styled for publication.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

from .models import forward  # noqa: E402


def roc_points(scores_pos, scores_neg) -> tuple[np.ndarray, np.ndarray]:
    """ROC series: (fpr, tpr) from (0,0) to (1,1), one step per unique score."""
    pos = np.asarray(scores_pos, dtype=float).ravel()
    neg = np.asarray(scores_neg, dtype=float).ravel()
    thresholds = np.unique(np.concatenate([pos, neg]))[::-1]
    tpr = np.mean(pos[:, None] >= thresholds[None, :], axis=0)
    fpr = np.mean(neg[:, None] >= thresholds[None, :], axis=0)
    return np.concatenate([[0.0], fpr, [1.0]]), np.concatenate([[0.0], tpr, [1.0]])


def _finish(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def roc_figure(fpr, tpr, auc: float, path) -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(fpr, tpr, drawstyle="steps-post")
    ax.plot([0, 1], [0, 1], ls=":", color="gray")
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_title(f"ROC (AUC = {auc:.4f})")
    return _finish(fig, path)


def sigma_curve_figure(gammas, sigmas, sigma_limit: float, path) -> Path:
    gammas = np.asarray(gammas, dtype=float)
    sigmas = np.asarray(sigmas, dtype=float)
    positive = gammas > 0
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.semilogx(gammas[positive], sigmas[positive], marker=".")
    ax.axhline(sigma_limit, ls="--", color="tab:red", label="limit")
    ax.set_xlabel("gamma")
    ax.set_ylabel("alignment sigma(gamma)")
    ax.legend()
    return _finish(fig, path)


def trace_figure(objective, loss_train, loss_univ, path) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.plot(objective, label="objective")
    ax.plot(loss_train, label="train loss sum", alpha=0.7)
    if np.any(np.asarray(loss_univ) != 0.0):
        ax.plot(loss_univ, label="universum loss sum", alpha=0.7)
    ax.set_xlabel("iteration")
    ax.set_yscale("log")
    ax.legend()
    return _finish(fig, path)


def boundary_grid(model, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Scores of a 2-D model over the grid (len(ys) x len(xs))."""
    gx, gy = np.meshgrid(xs, ys)
    points = np.column_stack([gx.ravel(), gy.ravel()])
    scores, _ = forward(model, points)
    return scores.reshape(gy.shape)


def boundary_figure(model, threshold: float, train_x, test, univ_x, path,
                    resolution: int = 200) -> Path:
    """Decision boundary over a 2-D scene with the data scattered on top."""
    blocks = [train_x, test.x] + ([univ_x] if univ_x is not None else [])
    stacked = np.vstack(blocks)
    lo = stacked.min(axis=0) - 1.0
    hi = stacked.max(axis=0) + 1.0
    xs = np.linspace(lo[0], hi[0], resolution)
    ys = np.linspace(lo[1], hi[1], resolution)
    grid = boundary_grid(model, xs, ys)

    fig, ax = plt.subplots(figsize=(5.5, 5.0))
    ax.contourf(xs, ys, grid >= threshold, levels=[-0.5, 0.5, 1.5],
                colors=["#f2f2f2", "#d3e8d3"])
    ax.contour(xs, ys, grid, levels=[threshold], colors="k")
    pos = test.y > 0
    ax.scatter(test.x[pos, 0], test.x[pos, 1], s=4, alpha=0.3, label="test +")
    ax.scatter(test.x[~pos, 0], test.x[~pos, 1], s=4, alpha=0.3, label="test -")
    if univ_x is not None:
        ax.scatter(univ_x[:, 0], univ_x[:, 1], s=4, alpha=0.3, label="contradictions")
    ax.scatter(train_x[:, 0], train_x[:, 1], s=25, marker="x", color="k", label="train")
    ax.legend(markerscale=2, fontsize=8)
    return _finish(fig, path)


def sweep_figure(labels, means, stds, path) -> Path:
    fig, ax = plt.subplots(figsize=(max(5.0, 0.6 * len(labels)), 4.0))
    xs = np.arange(len(labels))
    ax.errorbar(xs, means, yerr=stds, fmt="o", capsize=3)
    ax.set_xticks(xs)
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=7)
    ax.set_ylabel("AUC")
    return _finish(fig, path)
