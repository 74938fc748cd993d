"""Score-based model assessment.

Gathers the metrics the rest of the package reports: ranking quality (AUC by
the Mann-Whitney rank statistic, ties at half credit), accuracy of the fixed
decision rule score >= 1, per-sample margin slacks max(0, 1 - score), and the
train/universum alignment diagnostic computed both on raw inputs and on the
model's penultimate-layer features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexity import FeatureBatch, sigma_inf
from .datasets import Dataset, LabeledTestSet, UniversumSet
from .models import Model, decide, forward


class EvaluationError(ValueError):
    """Metric undefined for the given inputs."""


@dataclass(frozen=True)
class EvalReport:
    """Metrics for one model on one labeled test set.

    xi holds margin slacks for the training set when one was supplied to
    ``evaluate``, otherwise for the test positives.  The alignment fields stay
    None unless both a universum and a training set were supplied.
    """

    auc: float
    accuracy: float
    tp_rate: float
    tn_rate: float
    xi: np.ndarray
    sigma_inf_raw: float | None = None
    sigma_inf_features: float | None = None

    def __post_init__(self):
        for name in ("auc", "accuracy", "tp_rate", "tn_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise EvaluationError(f"{name} must lie in [0, 1], got {value!r}")
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=np.float64).ravel())


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties averaged (midrank convention)."""
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts + 1
    return ((starts + ends) / 2.0)[inverse]


def auc_roc(scores_pos, scores_neg) -> float:
    """Probability a random positive outscores a random negative, ties half.

    Computed from midranks, which reproduces the pairwise count
    sum(pos > neg) + 0.5 * sum(pos == neg) exactly: both numerators are the
    same half-integer.
    """
    pos = np.asarray(scores_pos, dtype=np.float64).ravel()
    neg = np.asarray(scores_neg, dtype=np.float64).ravel()
    if pos.size == 0 or neg.size == 0:
        raise EvaluationError("AUC undefined: both score sets must be non-empty")
    if not (np.isfinite(pos).all() and np.isfinite(neg).all()):
        raise EvaluationError("AUC undefined: scores must be finite")
    ranks = _average_ranks(np.concatenate([pos, neg]))
    wins = ranks[: pos.size].sum() - pos.size * (pos.size + 1) / 2.0
    return float(wins / (pos.size * neg.size))


def margin_slacks(model: Model, data: Dataset) -> np.ndarray:
    """Per-row hinge violations max(0, 1 - score)."""
    scores, _ = forward(model, data.x)
    return np.maximum(0.0, 1.0 - scores)


def correlation_diagnostic(model: Model, data: Dataset,
                           univ: UniversumSet) -> tuple[float, float]:
    """Train/universum alignment on raw inputs and on penultimate features.

    Under the identity feature map the two values coincide.  Degenerate
    all-zero inputs raise the alignment module's error.
    """
    raw = sigma_inf(FeatureBatch(z=data.x, u=univ.x))
    _, z_feat = forward(model, data.x)
    _, u_feat = forward(model, univ.x)
    features = sigma_inf(FeatureBatch(z=z_feat, u=u_feat))
    return raw, features


def evaluate(model: Model, test: LabeledTestSet, univ: UniversumSet | None = None,
             train: Dataset | None = None, threshold: float = 1.0) -> EvalReport:
    """Full report: AUC, fixed-rule accuracy, class rates, slacks, alignment."""
    scores, _ = forward(model, test.x)
    positive = test.y > 0
    auc = auc_roc(scores[positive], scores[~positive])
    predicted = decide(scores, threshold)
    accuracy = float(np.mean(predicted == test.y))
    tp_rate = float(np.mean(predicted[positive] == 1.0))
    tn_rate = float(np.mean(predicted[~positive] == -1.0))
    xi_source = train if train is not None else Dataset(test.x[positive])
    xi = margin_slacks(model, xi_source)
    raw = features = None
    if univ is not None and train is not None:
        raw, features = correlation_diagnostic(model, train, univ)
    return EvalReport(auc=auc, accuracy=accuracy, tp_rate=tp_rate, tn_rate=tn_rate,
                      xi=xi, sigma_inf_raw=raw, sigma_inf_features=features)
