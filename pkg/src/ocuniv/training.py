"""Objective assembly and minibatch first-order training.

The minimized objective is the sample-averaged form of the regularized sums:

    lam*||W||_F^2 + (1/n)*sum_i train_loss(f(x_i)) + (C_U/C)*(1/n)*sum_j univ_loss(f(x*_j))

with lam = 1/(2C). Every term here is the unnormalized objective
``1/2||W||^2 + C*sum train + C_U*sum univ`` divided by C*n, so minimizers
coincide with the unnormalized form for fixed data while gradient magnitudes
stay learning-rate friendly. The binary baseline averages the cost-sensitive
hinge over the pooled sample: lam*||W||_F^2 + (c_pos*sum_pos + c_neg*sum_neg)/(n_pos+n_neg),
with the cost ratio c_pos/c_neg fixed to n_neg/n_pos (class-size balance) and
decisions thresholded at 0.

Batch scaling: each step samples batch_train training rows and batch_univ
universum rows uniformly with replacement and rescales each partial sum by
(population/batch) so the minibatch gradient is an unbiased estimate of the
full objective's gradient. A batch size >= its population switches that term
to deterministic full-batch mode (every row exactly once).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .datasets import Dataset, UniversumSet
from .losses import (
    UniversumMargins,
    hinge_train_loss,
    softplus_train_loss,
    universum_loss_two_hinge,
)
from .models import FeatureMapSpec, Model, ParamGrads, backward, forward, frobenius_sq, init_model


class TrainError(RuntimeError):
    """Optimization aborted: invalid hyperparameters, NaN, or divergence."""


@dataclass(frozen=True)
class OptimizerSpec:
    kind: str = "sgd"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.kind not in ("sgd", "adam"):
            raise TrainError(f"unknown optimizer kind {self.kind!r}")
        if self.learning_rate < 0:
            raise TrainError(f"learning rate must be >= 0, got {self.learning_rate}")


@dataclass(frozen=True)
class Hyperparams:
    """Trade-off constants and optimization settings.

    Supply c or lam (= 1/(2c)); supplying one determines the other, supplying
    both demands consistency.
    """

    c: float = None
    c_u: float = 0.0
    delta: float = 0.0
    lam: float = None
    train_loss: str = "hinge"
    optimizer: OptimizerSpec = field(default_factory=OptimizerSpec)
    iterations: int = 1000
    batch_train: int = 256
    batch_univ: int = None
    seed: int = 0

    def __post_init__(self):
        if self.c is None and self.lam is None:
            raise TrainError("supply c or lam")
        if self.c is None:
            object.__setattr__(self, "c", 1.0 / (2.0 * self.lam))
        if self.lam is None:
            object.__setattr__(self, "lam", 1.0 / (2.0 * self.c))
        if self.c <= 0 or self.lam <= 0:
            raise TrainError(f"c and lam must be positive, got c={self.c}, lam={self.lam}")
        if abs(self.lam - 1.0 / (2.0 * self.c)) > 1e-12 * max(1.0, self.lam):
            raise TrainError(f"inconsistent c={self.c} and lam={self.lam}, need lam = 1/(2c)")
        if self.c_u < 0 or self.delta < 0:
            raise TrainError("c_u and delta must be >= 0")
        if self.train_loss not in ("hinge", "softplus"):
            raise TrainError(f"unknown train loss {self.train_loss!r}")
        if self.iterations < 1 or self.batch_train < 1:
            raise TrainError("iterations and batch_train must be positive")
        if self.batch_univ is None:
            object.__setattr__(self, "batch_univ", self.batch_train)
        if self.batch_univ < 1:
            raise TrainError("batch_univ must be positive")


@dataclass
class TrainTrace:
    """Per-iteration full-objective diagnostics plus the final model.

    loss_train and loss_univ hold raw unweighted loss sums: the train-term sum
    and the universum-term sum. The binary baseline stores its positive-class
    sum in loss_train and its negative-class sum in loss_univ.
    """

    objective: np.ndarray
    loss_train: np.ndarray
    loss_univ: np.ndarray
    regularizer: np.ndarray
    model: Model
    seed: int
    hp: Hyperparams
    initial_objective: float


def _train_term(scores, kind):
    if kind == "hinge":
        return hinge_train_loss(scores)
    return softplus_train_loss(scores)


def _zero_grads(model):
    return ParamGrads([np.zeros_like(h) for h in model.hidden_weights],
                      np.zeros_like(model.w))


def _assemble(model, hp, parts):
    """Value and gradients of lam*frob + sum of weight*loss(part).

    parts: (x, weight, term) with term in {train, univ, neg}; ``neg`` is the
    reflected train loss [1 + s]_+ (or its softplus) used by the baseline.
    Returns (value, grads, raw_sums) with raw_sums keyed like the terms.
    """
    value = hp.lam * frobenius_sq(model)
    grads = _zero_grads(model)
    raw = {"train": 0.0, "univ": 0.0, "neg": 0.0}
    margins = UniversumMargins(hp.delta)
    for x, weight, term in parts:
        scores, _ = forward(model, x)
        if term == "train":
            loss, sgrad = _train_term(scores, hp.train_loss)
        elif term == "univ":
            loss, sgrad = universum_loss_two_hinge(scores, margins)
        elif term == "neg":
            loss, sgrad = _train_term(-np.asarray(scores), hp.train_loss)
            sgrad = -sgrad
        else:
            raise TrainError(f"unknown objective term {term!r}")
        raw[term] += loss
        value += weight * loss
        part_grads = backward(model, x, weight * sgrad)
        for acc, pg in zip(grads.params(), part_grads.params()):
            acc += pg
    for acc, p in zip(grads.params(), model.params()):
        acc += 2.0 * hp.lam * p
    return value, grads, raw


def _doc_parts(data, univ, hp):
    n = data.n
    parts = [(data.x, 1.0 / n, "train")]
    if hp.c_u > 0:
        if univ is None:
            raise TrainError("c_u > 0 requires a universum set")
        if univ.d != data.d:
            raise TrainError(f"universum dim {univ.d} != data dim {data.d}")
        parts.append((univ.x, hp.c_u / (hp.c * n), "univ"))
    return parts


def _binary_parts(data_pos, data_neg, hp):
    n, m = data_pos.n, data_neg.m
    if data_neg.d != data_pos.d:
        raise TrainError(f"negative-class dim {data_neg.d} != positive-class dim {data_pos.d}")
    c_pos, c_neg = m / n, 1.0
    total = n + m
    return [(data_pos.x, c_pos / total, "train"), (data_neg.x, c_neg / total, "neg")]


def objective_doc(model: Model, data: Dataset, hp: Hyperparams) -> float:
    """lam*frobenius_sq + mean one-class train loss; independent of c_u and delta."""
    value, _, _ = _assemble(model, hp, [(data.x, 1.0 / data.n, "train")])
    return value


def objective_doc3(model: Model, data: Dataset, univ: UniversumSet, hp: Hyperparams) -> float:
    """objective_doc plus the universum term (c_u/c)*(1/n)*sum universum loss."""
    value, _, _ = _assemble(model, hp, _doc_parts(data, univ, hp))
    return value


def objective_binary_baseline(model: Model, data_pos: Dataset, data_neg: UniversumSet,
                              hp: Hyperparams) -> float:
    """lam*frobenius_sq + pooled-average cost-sensitive loss, costs m/n : 1."""
    value, _, _ = _assemble(model, hp, _binary_parts(data_pos, data_neg, hp))
    return value


def objective_gradients(model: Model, hp: Hyperparams, data: Dataset = None,
                        univ: UniversumSet = None, data_neg: UniversumSet = None,
                        objective: str = "doc"):
    """Full-batch (value, ParamGrads) of a named objective; used by gradient checks."""
    if objective == "doc":
        parts = [(data.x, 1.0 / data.n, "train")]
    elif objective == "doc3":
        parts = _doc_parts(data, univ, hp)
    elif objective == "binary":
        parts = _binary_parts(data, data_neg, hp)
    else:
        raise TrainError(f"unknown objective {objective!r}")
    value, grads, _ = _assemble(model, hp, parts)
    return value, grads


class _Sgd:
    def __init__(self, spec, params):
        self.lr = spec.learning_rate

    def step(self, params, grads):
        for p, g in zip(params, grads):
            p -= self.lr * g


class _Adam:
    def __init__(self, spec, params):
        self.spec = spec
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, params, grads):
        s = self.spec
        self.t += 1
        for k, (p, g) in enumerate(zip(params, grads)):
            self.m[k] = s.beta1 * self.m[k] + (1.0 - s.beta1) * g
            self.v[k] = s.beta2 * self.v[k] + (1.0 - s.beta2) * g * g
            m_hat = self.m[k] / (1.0 - s.beta1 ** self.t)
            v_hat = self.v[k] / (1.0 - s.beta2 ** self.t)
            p -= s.learning_rate * m_hat / (np.sqrt(v_hat) + s.epsilon)


def _make_optimizer(spec, params):
    return _Adam(spec, params) if spec.kind == "adam" else _Sgd(spec, params)


def _batch(rng, x, size):
    # full-batch mode when the batch covers the population
    if size >= x.shape[0]:
        return x
    return x[rng.integers(0, x.shape[0], size=size)]


def _run(full_parts, batch_parts, hp, spec, input_dim):
    """Shared loop: full_parts for trace values, batch_parts(rng) for steps."""
    model = init_model(spec, input_dim)
    optimizer = _make_optimizer(hp.optimizer, model.params())
    rng = np.random.default_rng(hp.seed)

    initial, _, _ = _assemble(model, hp, full_parts)
    if not np.isfinite(initial):
        raise TrainError("objective non-finite at initialization")
    guard = 1e6 * initial if initial > 0 else 1e6

    objective = np.empty(hp.iterations)
    loss_train = np.empty(hp.iterations)
    loss_univ = np.empty(hp.iterations)
    regularizer = np.empty(hp.iterations)
    for it in range(hp.iterations):
        _, grads, _ = _assemble(model, hp, batch_parts(rng))
        optimizer.step(model.params(), grads.params())

        value, _, raw = _assemble(model, hp, full_parts)
        if not np.isfinite(value):
            raise TrainError(f"objective became non-finite at iteration {it}")
        if value > guard:
            raise TrainError(f"objective diverged at iteration {it}: {value:.3e}")
        objective[it] = value
        loss_train[it] = raw["train"]
        loss_univ[it] = raw["univ"] + raw["neg"]
        regularizer[it] = hp.lam * frobenius_sq(model)
    return TrainTrace(objective, loss_train, loss_univ, regularizer,
                      model, hp.seed, hp, initial)


def train(data: Dataset, univ: UniversumSet | None, hp: Hyperparams,
          spec: FeatureMapSpec) -> TrainTrace:
    """Minimize the one-class objective (universum term active iff c_u > 0).

    Deterministic for fixed (seed, hp, spec, data). Aborts on NaN or on the
    objective exceeding 1e6x its initial value.
    """
    full_parts = _doc_parts(data, univ, hp)
    n = data.n
    m = univ.m if (univ is not None and hp.c_u > 0) else 0

    def batch_parts(rng):
        parts = [(_batch(rng, data.x, hp.batch_train),
                  1.0 / min(hp.batch_train, n), "train")]
        if m:
            b = min(hp.batch_univ, m)
            parts.append((_batch(rng, univ.x, hp.batch_univ),
                          hp.c_u / (hp.c * n) * (m / b), "univ"))
        return parts

    return _run(full_parts, batch_parts, hp, spec, data.d)


def train_binary_baseline(data_pos: Dataset, data_neg: UniversumSet, hp: Hyperparams,
                          spec: FeatureMapSpec) -> TrainTrace:
    """Minimize the pooled cost-sensitive baseline; decision threshold is 0."""
    full_parts = _binary_parts(data_pos, data_neg, hp)
    n, m = data_pos.n, data_neg.m
    total = n + m
    c_pos = m / n

    def batch_parts(rng):
        bp = min(hp.batch_train, n)
        bn = min(hp.batch_univ, m)
        return [
            (_batch(rng, data_pos.x, hp.batch_train), c_pos / total * (n / bp), "train"),
            (_batch(rng, data_neg.x, hp.batch_univ), 1.0 / total * (m / bn), "neg"),
        ]

    return _run(full_parts, batch_parts, hp, spec, data_pos.d)
