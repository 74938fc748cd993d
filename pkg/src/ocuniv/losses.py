"""Loss terms as score-level functions with subgradients.

Every function takes a vector of scores f(x_i) and returns ``(loss, subgrad)``
where loss is the *sum* over scores (batch averaging is the trainer's job) and
subgrad holds d(loss)/d(score_i). Subgradients at hinge kinks are fixed to 0,
the flat side, so optimization is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _scores(s):
    s = np.asarray(s, dtype=np.float64).ravel()
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    return s


def hinge_train_loss(scores) -> tuple[float, np.ndarray]:
    """One-class hinge: sum of [1 - s]_+ with subgradient -1 where s < 1."""
    s = _scores(scores)
    loss = float(np.sum(np.maximum(0.0, 1.0 - s)))
    grad = np.where(s < 1.0, -1.0, 0.0)
    return loss, grad


def _sigmoid(z):
    # stable logistic: never exponentiates a positive argument
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def softplus_train_loss(scores) -> tuple[float, np.ndarray]:
    """Smooth dominating surrogate of the one-class hinge: sum of log(1 + exp(1 - s)).

    Evaluated as max(z, 0) + log1p(exp(-|z|)) with z = 1 - s, which never
    overflows. The gradient is -1/(1 + exp(s - 1)).
    """
    s = _scores(scores)
    z = 1.0 - s
    loss = float(np.sum(np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))))
    grad = -_sigmoid(z)
    return loss, grad


@dataclass(frozen=True)
class UniversumMargins:
    """Insensitive-zone width delta and the induced two-hinge offsets."""

    delta: float
    epsilon1: float = field(init=False)
    epsilon2: float = field(init=False)

    def __post_init__(self):
        if not np.isfinite(self.delta) or self.delta < 0:
            raise ValueError(f"delta must be finite and >= 0, got {self.delta}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "epsilon1", 1.0 - self.delta)
        object.__setattr__(self, "epsilon2", -1.0 - self.delta)


def universum_loss(scores, margins: UniversumMargins) -> tuple[float, np.ndarray]:
    """Insensitive contradiction loss: sum of [|1 - s| - delta]_+.

    Zero exactly when the score sits within delta of the decision boundary
    value 1, i.e. the sample stays maximally contradicted.
    """
    s = _scores(scores)
    excess = np.abs(1.0 - s) - margins.delta
    loss = float(np.sum(np.maximum(0.0, excess)))
    grad = np.where(excess > 0.0, np.sign(s - 1.0), 0.0)
    return loss, grad


def universum_loss_two_hinge(scores, margins: UniversumMargins) -> tuple[float, np.ndarray]:
    """Two-hinge decomposition of universum_loss: [eps1 - s]_+ + [eps2 + s]_+.

    Kept as an independent computation route; value and subgradient agree with
    universum_loss everywhere (off kink boundaries for the subgradient).
    """
    s = _scores(scores)
    lower = np.maximum(0.0, margins.epsilon1 - s)
    upper = np.maximum(0.0, margins.epsilon2 + s)
    loss = float(np.sum(lower) + np.sum(upper))
    grad = np.where(s < margins.epsilon1, -1.0, 0.0) + np.where(s > -margins.epsilon2, 1.0, 0.0)
    return loss, grad


def binary_cost_sensitive_loss(
    scores_pos, scores_neg, c_pos: float, c_neg: float
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Cost-weighted binary hinge: c_pos*sum [1 - s]_+ over positives
    plus c_neg*sum [1 + s]_+ over negatives."""
    if c_pos <= 0 or c_neg <= 0:
        raise ValueError("c_pos and c_neg must be positive")
    sp = _scores(scores_pos)
    sn = _scores(scores_neg)
    loss = float(c_pos * np.sum(np.maximum(0.0, 1.0 - sp))
                 + c_neg * np.sum(np.maximum(0.0, 1.0 + sn)))
    grad_pos = np.where(sp < 1.0, -c_pos, 0.0)
    grad_neg = np.where(sn > -1.0, c_neg, 0.0)
    return loss, (grad_pos, grad_neg)
