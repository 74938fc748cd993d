"""Feature maps and the score function f(x) = w'phi(x).

Two feature maps: identity (linear model, phi(x) = x) and a small
fully-connected net with leaky-ReLU activations. No bias terms anywhere; the
functional margin is carried by the fixed offset 1 inside the losses.
The decision rule is h(x) = +1 iff f(x) >= threshold (default 1, boundary
inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ModelError(ValueError):
    """Invalid specs, shape mismatches, or malformed model files."""


@dataclass(frozen=True)
class FeatureMapSpec:
    """Architecture description: identity or mlp with given hidden widths."""

    kind: str
    layer_widths: tuple = ()
    leaky_slope: float = 0.01
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "layer_widths", tuple(int(w) for w in self.layer_widths))
        if self.kind == "identity":
            if self.layer_widths:
                raise ModelError("identity feature map takes no layer widths")
        elif self.kind == "mlp":
            if not self.layer_widths:
                raise ModelError("mlp needs at least one hidden layer width")
            if any(w < 1 for w in self.layer_widths):
                raise ModelError(f"layer widths must be positive, got {self.layer_widths}")
        else:
            raise ModelError(f"unknown feature map kind {self.kind!r}")
        if not 0.0 < self.leaky_slope < 1.0:
            raise ModelError(f"leaky slope must be in (0,1), got {self.leaky_slope}")


@dataclass
class Model:
    """Parameters: one weight matrix per hidden layer plus the final vector w.

    Mutable by design — a trainer owns one copy and updates it in place;
    forward/backward never write.
    """

    spec: FeatureMapSpec
    input_dim: int
    hidden_weights: list = field(default_factory=list)
    w: np.ndarray = None

    def __post_init__(self):
        if self.input_dim < 1:
            raise ModelError(f"input_dim must be positive, got {self.input_dim}")
        self.hidden_weights = [np.asarray(h, dtype=np.float64) for h in self.hidden_weights]
        self.w = np.asarray(self.w, dtype=np.float64).ravel()
        dims = [self.input_dim, *self.spec.layer_widths]
        if len(self.hidden_weights) != len(self.spec.layer_widths):
            raise ModelError("one hidden weight matrix required per layer width")
        for k, h in enumerate(self.hidden_weights):
            if h.shape != (dims[k], dims[k + 1]):
                raise ModelError(
                    f"hidden layer {k} has shape {h.shape}, expected {(dims[k], dims[k + 1])}"
                )
        if self.w.shape[0] != dims[-1]:
            raise ModelError(f"w has length {self.w.shape[0]}, expected {dims[-1]}")
        for arr in [*self.hidden_weights, self.w]:
            if not np.all(np.isfinite(arr)):
                raise ModelError("model parameters must be finite")

    @property
    def feature_dim(self) -> int:
        return self.w.shape[0]

    def copy(self) -> "Model":
        return Model(self.spec, self.input_dim,
                     [h.copy() for h in self.hidden_weights], self.w.copy())

    def params(self) -> list:
        """All parameter arrays, hidden layers first, w last."""
        return [*self.hidden_weights, self.w]


def init_model(spec: FeatureMapSpec, input_dim: int) -> Model:
    """Seeded init: each layer (and w) uniform in +-sqrt(6/(fan_in+fan_out))."""
    rng = np.random.default_rng(spec.seed)
    dims = [input_dim, *spec.layer_widths]
    hidden = []
    for k in range(len(spec.layer_widths)):
        bound = np.sqrt(6.0 / (dims[k] + dims[k + 1]))
        hidden.append(rng.uniform(-bound, bound, size=(dims[k], dims[k + 1])))
    bound = np.sqrt(6.0 / (dims[-1] + 1))
    w = rng.uniform(-bound, bound, size=dims[-1])
    return Model(spec, input_dim, hidden, w)


def _leaky(a, slope):
    return np.where(a > 0.0, a, slope * a)


def _leaky_grad(a, slope):
    return np.where(a > 0.0, 1.0, slope)


def forward(model: Model, x):
    """Score(s) and penultimate features for a single vector or a batch matrix.

    Returns (score, features): floats/1-d for vector input, 1-d/2-d for batch
    input. Features equal the input itself under the identity map.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    batch = x.reshape(1, -1) if single else x
    if batch.ndim != 2 or batch.shape[1] != model.input_dim:
        raise ModelError(f"input has shape {x.shape}, expected trailing dim {model.input_dim}")
    h = batch
    for weight in model.hidden_weights:
        h = _leaky(h @ weight, model.spec.leaky_slope)
    scores = h @ model.w
    if single:
        return float(scores[0]), h[0]
    return scores, h


@dataclass
class ParamGrads:
    """Gradient arrays matching Model.params() layout."""

    hidden: list
    w: np.ndarray

    def params(self) -> list:
        return [*self.hidden, self.w]


def backward(model: Model, x_batch, score_grads) -> ParamGrads:
    """Exact gradient of sum_i g_i * f(x_i) wrt every parameter array."""
    x_batch = np.asarray(x_batch, dtype=np.float64)
    if x_batch.ndim == 1:
        x_batch = x_batch.reshape(1, -1)
    g = np.asarray(score_grads, dtype=np.float64).ravel()
    if g.shape[0] != x_batch.shape[0]:
        raise ModelError(f"{g.shape[0]} score grads for {x_batch.shape[0]} rows")
    if x_batch.shape[1] != model.input_dim:
        raise ModelError(f"batch has {x_batch.shape[1]} columns, expected {model.input_dim}")

    slope = model.spec.leaky_slope
    pres = []
    h = x_batch
    acts = [h]
    for weight in model.hidden_weights:
        pre = h @ weight
        pres.append(pre)
        h = _leaky(pre, slope)
        acts.append(h)

    w_grad = acts[-1].T @ g
    upstream = np.outer(g, model.w)
    hidden_grads = [None] * len(model.hidden_weights)
    for k in range(len(model.hidden_weights) - 1, -1, -1):
        dpre = upstream * _leaky_grad(pres[k], slope)
        hidden_grads[k] = acts[k].T @ dpre
        if k > 0:
            upstream = dpre @ model.hidden_weights[k].T
    return ParamGrads(hidden_grads, w_grad)


def decide(score, threshold: float = 1.0):
    """Label +1 iff score >= threshold (boundary inclusive), else -1."""
    score = np.asarray(score, dtype=np.float64)
    labels = np.where(score >= threshold, 1.0, -1.0)
    if labels.ndim == 0:
        return float(labels)
    return labels


def frobenius_sq(model: Model) -> float:
    """Sum of squares of every parameter, final w included."""
    return float(sum(np.sum(arr * arr) for arr in model.params()))


def save_model(model: Model, path) -> None:
    """Flat key-value text with row-major weight arrays; exact float round-trip."""
    lines = [
        f"kind = {model.spec.kind}",
        f"input_dim = {model.input_dim}",
        "layer_widths = " + ",".join(str(w) for w in model.spec.layer_widths),
        f"leaky_slope = {model.spec.leaky_slope!r}",
        f"seed = {model.spec.seed}",
    ]
    for k, h in enumerate(model.hidden_weights):
        lines.append(f"hidden_{k} = " + ",".join(repr(float(v)) for v in h.ravel()))
    lines.append("w = " + ",".join(repr(float(v)) for v in model.w))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> Model:
    fields = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ModelError(f"{path}: malformed line {line!r}")
            key, _, value = line.partition("=")
            fields[key.strip()] = value.strip()
    try:
        widths = tuple(int(v) for v in fields["layer_widths"].split(",") if v)
        spec = FeatureMapSpec(fields["kind"], widths,
                              float(fields["leaky_slope"]), int(fields["seed"]))
        input_dim = int(fields["input_dim"])
        dims = [input_dim, *widths]
        hidden = []
        for k in range(len(widths)):
            flat = np.array([float(v) for v in fields[f"hidden_{k}"].split(",")])
            hidden.append(flat.reshape(dims[k], dims[k + 1]))
        w = np.array([float(v) for v in fields["w"].split(",")])
    except KeyError as exc:
        raise ModelError(f"{path}: missing field {exc}") from exc
    except ValueError as exc:
        raise ModelError(f"{path}: {exc}") from exc
    return Model(spec, input_dim, hidden, w)
