"""The simple ANN: stacked bias-free linear layers around one ReLU layer,
a single output node, and a threshold classifier.  Includes a small
full-batch gradient-descent trainer and JSON persistence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .encoding import FuzzifierSpec, MintermVector


class ModelFormatError(ValueError):
    pass


class TrainingDivergedError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimpleAnn:
    """Bias-free network: pre_layers feed 2^n minterm inputs into the ReLU
    layer, post_layers map the ReLU outputs to the single output node."""

    pre_layers: tuple[np.ndarray, ...]
    post_layers: tuple[np.ndarray, ...]
    threshold: float

    def __post_init__(self):
        pre = tuple(np.asarray(w, dtype=float) for w in self.pre_layers)
        post = tuple(np.asarray(w, dtype=float) for w in self.post_layers)
        object.__setattr__(self, "pre_layers", pre)
        object.__setattr__(self, "post_layers", post)
        if not pre or not post:
            raise ModelFormatError("need at least one layer before and after ReLU")
        chain = list(pre) + list(post)
        for a, b in zip(chain, chain[1:]):
            if b.shape[1] != a.shape[0]:
                raise ModelFormatError(
                    f"layer shapes do not chain: {a.shape} then {b.shape}"
                )
        if post[-1].shape[0] != 1:
            raise ModelFormatError("final layer must have exactly one output row")
        if not all(np.isfinite(w).all() for w in chain):
            raise ModelFormatError("weights must be finite")
        if not math.isfinite(self.threshold):
            raise ModelFormatError("threshold must be finite")

    @property
    def input_size(self) -> int:
        return self.pre_layers[0].shape[1]

    @property
    def relu_count(self) -> int:
        return self.pre_layers[-1].shape[0]


@dataclass(frozen=True)
class ReluStatus:
    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("status bits must be 0 or 1")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 2000
    seed: int = 0
    init_scale: float = 0.5

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning rate must be non-negative")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")


def _pre_activations(ann: SimpleAnn, mt: np.ndarray) -> np.ndarray:
    h = mt
    for w in ann.pre_layers:
        h = w @ h
    return h


def _as_input(ann: SimpleAnn, mt) -> np.ndarray:
    x = mt.as_array() if isinstance(mt, MintermVector) else np.asarray(mt, dtype=float)
    if x.shape[0] != ann.input_size:
        raise ValueError(
            f"input length {x.shape[0]} does not match network input size "
            f"{ann.input_size}"
        )
    return x


def forward(ann: SimpleAnn, mt) -> float:
    """Output score w_post . ReLU(w_pre . mt)."""
    h = np.maximum(_pre_activations(ann, _as_input(ann, mt)), 0.0)
    for w in ann.post_layers:
        h = w @ h
    return float(h[0])


def classify(ann: SimpleAnn, mt) -> int:
    """1 iff the output score strictly exceeds the threshold."""
    return 1 if forward(ann, mt) > ann.threshold else 0


def relu_status(ann: SimpleAnn, mt) -> ReluStatus:
    """Active (1) iff a ReLU node's pre-activation is >= 0; zero counts
    as active so that cell assignment is deterministic on boundaries."""
    pre = _pre_activations(ann, _as_input(ann, mt))
    return ReluStatus(tuple(int(z >= 0.0) for z in pre))


def _batch_forward(pre_w, post_w, X):
    h = X
    for w in pre_w:
        h = h @ w.T
    h = np.maximum(h, 0.0)
    for w in post_w:
        h = h @ w.T
    return h[:, 0]


def choose_threshold(outputs: np.ndarray, labels: np.ndarray) -> tuple[float, float]:
    """Threshold maximizing accuracy of `o > tau`, as the midpoint of the
    best split of the sorted outputs.  Returns (tau, accuracy)."""
    order = np.argsort(outputs, kind="stable")
    o = outputs[order]
    y = labels[order]
    total_pos = int(y.sum())
    n = len(y)
    # candidate i: everything after position i classified 1
    best_tau = o[0] - 1.0
    best_acc = total_pos / n
    ones_seen = 0
    for i in range(n):
        ones_seen += y[i]
        if i + 1 < n and o[i] == o[i + 1]:
            continue
        correct = (i + 1 - ones_seen) + (total_pos - ones_seen)
        acc = correct / n
        if acc > best_acc:
            best_acc = acc
            best_tau = (o[i] + o[i + 1]) / 2.0 if i + 1 < n else o[i] + 1.0
    return float(best_tau), float(best_acc)


def train(
    samples: list[tuple[MintermVector, int]],
    arch: list[int],
    cfg: TrainConfig = TrainConfig(),
    relu_after: int = 1,
) -> tuple[SimpleAnn, float]:
    """Full-batch gradient descent on MSE.  `arch` lists layer sizes from
    input to output (last must be 1); the ReLU sits after the
    `relu_after`-th weight matrix.  Returns (ann, training accuracy)."""
    if not samples:
        raise ValueError("no training samples")
    labels = np.array([y for _, y in samples], dtype=float)
    if len(set(labels)) < 2:
        raise ValueError("need at least one sample of each class")
    X = np.array([mt.as_array() for mt, _ in samples])
    if arch[0] != X.shape[1] or arch[-1] != 1:
        raise ValueError("arch must run from input size 2^n to a single output")
    if not 1 <= relu_after < len(arch) - 1:
        raise ValueError("relu_after out of range")

    rng = np.random.default_rng(cfg.seed)
    weights = [
        rng.normal(0.0, cfg.init_scale, size=(arch[i + 1], arch[i]))
        for i in range(len(arch) - 1)
    ]
    pre_n = relu_after

    for _ in range(cfg.epochs):
        # forward with cached activations
        acts = [X]
        h = X
        for w in weights[:pre_n]:
            h = h @ w.T
            acts.append(h)
        mask = h > 0
        h = np.maximum(h, 0.0)
        acts.append(h)
        for w in weights[pre_n:]:
            h = h @ w.T
            acts.append(h)
        out = h[:, 0]
        loss = float(np.mean((out - labels) ** 2))
        if not math.isfinite(loss):
            raise TrainingDivergedError(
                "training diverged (non-finite loss); lower the learning rate"
            )
        grad = (2.0 / len(labels)) * (out - labels)[:, None]
        # backward through post layers
        grads = [None] * len(weights)
        d = grad
        for i in range(len(weights) - 1, pre_n - 1, -1):
            grads[i] = d.T @ acts[i + 1]
            d = d @ weights[i]
        d = d * mask
        for i in range(pre_n - 1, -1, -1):
            grads[i] = d.T @ acts[i]
            if i > 0:
                d = d @ weights[i]
        for i, g in enumerate(grads):
            weights[i] = weights[i] - cfg.learning_rate * g

    outputs = _batch_forward(weights[:pre_n], weights[pre_n:], X)
    tau, acc = choose_threshold(outputs, labels)
    ann = SimpleAnn(tuple(weights[:pre_n]), tuple(weights[pre_n:]), tau)
    return ann, acc


def save_model(path, ann: SimpleAnn, fuzzifier: FuzzifierSpec | None = None) -> None:
    doc = {
        "input_size": ann.input_size,
        "relu_count": ann.relu_count,
        "pre_layers": [w.tolist() for w in ann.pre_layers],
        "post_layers": [w.tolist() for w in ann.post_layers],
        "threshold": ann.threshold,
        "fuzzifier": fuzzifier.to_dict() if fuzzifier else None,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, allow_nan=False)


def load_model(path) -> tuple[SimpleAnn, FuzzifierSpec | None]:
    with open(path) as fh:
        try:
            doc = json.load(fh, parse_constant=_reject_nonfinite)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"malformed model file: {exc}") from exc
    for field_name in ("input_size", "relu_count", "pre_layers", "post_layers",
                       "threshold"):
        if field_name not in doc:
            raise ModelFormatError(f"model file missing field {field_name!r}")
    if "biases" in doc or "bias" in doc:
        raise ModelFormatError("model format is bias-free; bias fields rejected")
    try:
        pre = tuple(np.array(w, dtype=float) for w in doc["pre_layers"])
        post = tuple(np.array(w, dtype=float) for w in doc["post_layers"])
    except ValueError as exc:
        raise ModelFormatError(f"ragged weight matrix: {exc}") from exc
    ann = SimpleAnn(pre, post, float(doc["threshold"]))
    if ann.input_size != doc["input_size"] or ann.relu_count != doc["relu_count"]:
        raise ModelFormatError("declared sizes do not match matrix shapes")
    fz = doc.get("fuzzifier")
    return ann, FuzzifierSpec.from_dict(fz) if fz else None


def _reject_nonfinite(token):
    raise ModelFormatError(f"non-finite number {token!r} in model file")
