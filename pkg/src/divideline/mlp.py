"""Small feed-forward regression network trained by full-batch gradient descent."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import errors
from .linear_svm import Standardizer
from .rng import INIT_STREAM, rng_for

ACTIVATIONS = ("relu", "tanh")


@dataclass(frozen=True)
class NetworkArch:
    hidden_sizes: tuple[int, ...] = (10,)
    activation: str = "relu"

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        if any(h < 1 for h in self.hidden_sizes):
            raise errors.ConfigInvalid(f"hidden sizes must be >= 1, got {self.hidden_sizes}")
        if self.activation not in ACTIVATIONS:
            raise errors.ConfigInvalid(f"activation must be one of {ACTIVATIONS}")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (2, *self.hidden_sizes, 1)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 2000
    seed: int = 0
    l2: float = 1e-4
    target_loss: float = 1e-6

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise errors.ConfigInvalid("learning_rate must be positive")
        if self.epochs < 1:
            raise errors.ConfigInvalid("epochs must be >= 1")
        if self.l2 < 0:
            raise errors.ConfigInvalid("l2 must be non-negative")


@dataclass(eq=False)
class Network:
    """Weights are ``(fan_out, fan_in)`` matrices; the last layer is linear with one output."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    arch: NetworkArch = field(default_factory=NetworkArch)
    input_standardizer: Standardizer = field(default_factory=Standardizer.identity)
    output_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        self.weights = [np.asarray(w, dtype=float) for w in self.weights]
        self.biases = [np.asarray(b, dtype=float).reshape(-1) for b in self.biases]
        sizes = self.arch.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(self.weights):
            raise ValueError("layer count does not match architecture")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[k + 1], sizes[k]) or b.shape != (sizes[k + 1],):
                raise ValueError(f"layer {k} has shape {w.shape}/{b.shape}, expected {(sizes[k + 1], sizes[k])}")

    def params(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def with_params(self, params) -> Network:
        return Network(list(params[0::2]), list(params[1::2]), self.arch, self.input_standardizer, self.output_range)

    def copy(self) -> Network:
        return self.with_params([p.copy() for p in self.params()])

    def flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params()])

    def from_flat(self, v) -> Network:
        out, k = [], 0
        for p in self.params():
            out.append(np.asarray(v[k : k + p.size], dtype=float).reshape(p.shape))
            k += p.size
        return self.with_params(out)

    def to_dict(self) -> dict:
        return {
            "arch": {"hidden_sizes": list(self.arch.hidden_sizes), "activation": self.arch.activation},
            "input_standardizer": self.input_standardizer.to_dict(),
            "output_range": list(self.output_range),
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
        }

    @classmethod
    def from_dict(cls, d) -> Network:
        arch = NetworkArch(tuple(d["arch"]["hidden_sizes"]), d["arch"]["activation"])
        return cls(
            d["weights"], d["biases"], arch, Standardizer.from_dict(d["input_standardizer"]), tuple(d["output_range"])
        )


def init_network(
    arch: NetworkArch,
    seed: int,
    standardizer: Standardizer | None = None,
    output_range: tuple[float, float] = (0.0, 1.0),
    stream: tuple[int, ...] = (),
) -> Network:
    """Gaussian weights with variance ``1 / fan_in``; zero biases."""
    rng = rng_for(seed, INIT_STREAM, *stream)
    sizes = arch.layer_sizes
    weights = [rng.standard_normal((sizes[k + 1], sizes[k])) / math.sqrt(sizes[k]) for k in range(len(sizes) - 1)]
    biases = [np.zeros(sizes[k + 1]) for k in range(len(sizes) - 1)]
    return Network(weights, biases, arch, standardizer or Standardizer.identity(), output_range)


def _act(name, a):
    return np.maximum(a, 0.0) if name == "relu" else np.tanh(a)


def predict(net: Network, coords) -> np.ndarray:
    """Raw (unclamped) outputs for an ``(n, 2)`` array of ``(lon, lat)``."""
    h = net.input_standardizer.transform(np.asarray(coords, dtype=float).reshape(-1, 2))
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        h = h @ w.T + b
        if k < last:
            h = _act(net.arch.activation, h)
    return h[:, 0]


def forward(net: Network, p) -> float:
    return float(predict(net, [[p.lon, p.lat]])[0])


def _as_arrays(batch):
    if isinstance(batch, tuple) and len(batch) == 2 and isinstance(batch[0], np.ndarray):
        coords, targets = batch
    else:
        batch = list(batch)
        coords = [(p.lon, p.lat) for p, _ in batch]
        targets = [t for _, t in batch]
    return np.asarray(coords, dtype=float).reshape(-1, 2), np.asarray(targets, dtype=float).reshape(-1)


def loss(net: Network, batch, l2: float = 0.0) -> float:
    """Mean squared error plus ``l2`` times the sum of squared weights (biases excluded)."""
    coords, targets = _as_arrays(batch)
    r = predict(net, coords) - targets
    return float(np.mean(r * r) + l2 * sum(np.sum(w * w) for w in net.weights))


def _loss_and_grad(net: Network, z: np.ndarray, targets: np.ndarray, l2: float):
    return _backprop(net.params(), net.arch.activation == "relu", z, targets, l2)


def _backprop(params, relu: bool, z: np.ndarray, targets: np.ndarray, l2: float):
    """Loss and gradient for a flat ``[W0, b0, W1, b1, ...]`` list on standardised inputs."""
    weights = params[0::2]
    biases = params[1::2]
    last = len(weights) - 1
    hs, pre = [z], []
    h = z
    for k in range(last):
        a = h @ weights[k].T + biases[k]
        pre.append(a)
        h = np.maximum(a, 0.0) if relu else np.tanh(a)
        hs.append(h)
    r = (h @ weights[last][0] + biases[last][0]) - targets
    n = len(targets)
    penalty = math.fsum(float(np.vdot(w, w)) for w in weights)
    value = float(r @ r) / n + l2 * penalty
    delta = ((2.0 / n) * r)[:, None]
    grads = [None] * (2 * len(weights))
    for k in range(last, -1, -1):
        grads[2 * k] = delta.T @ hs[k] + (2.0 * l2) * weights[k]
        grads[2 * k + 1] = delta.sum(axis=0)
        if k > 0:
            back = delta @ weights[k]
            delta = back * (pre[k - 1] > 0) if relu else back * (1.0 - hs[k] * hs[k])
    return value, grads


def gradient(net: Network, batch, l2: float = 0.0) -> list[np.ndarray]:
    """Exact gradient of :func:`loss`, ordered like :meth:`Network.params`."""
    coords, targets = _as_arrays(batch)
    if len(targets) == 0:
        raise ValueError("empty batch")
    return _loss_and_grad(net, net.input_standardizer.transform(coords), targets, l2)[1]


@dataclass
class TrainResult:
    network: Network
    initial_loss: float
    final_loss: float
    epochs_run: int


def fit(net: Network, data, cfg: TrainConfig = TrainConfig()) -> TrainResult:
    """Full-batch gradient descent for ``cfg.epochs`` or until the loss drops below ``cfg.target_loss``.

    The returned network is the lowest-loss iterate seen, so its loss never
    exceeds the starting loss.
    """
    coords, targets = _as_arrays(data)
    if len(targets) == 0:
        raise ValueError("no training data")
    if not np.all(np.isfinite(targets)):
        raise ValueError("targets must be finite")
    z = net.input_standardizer.transform(coords)
    lr = cfg.learning_rate
    relu = net.arch.activation == "relu"
    cur = [p.copy() for p in net.params()]
    best_loss, best = math.inf, cur
    initial = None
    epoch = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while True:
            value, grads = _backprop(cur, relu, z, targets, cfg.l2)
            if not math.isfinite(value):
                raise errors.DivergenceDetected(f"loss became non-finite at epoch {epoch} (learning_rate={lr})")
            if initial is None:
                initial = value
            if value < best_loss:
                best_loss, best = value, cur
            if epoch >= cfg.epochs or value < cfg.target_loss:
                break
            # out-of-place update so ``best`` can hold a reference instead of a copy
            cur = [p - lr * g for p, g in zip(cur, grads)]
            epoch += 1
    return TrainResult(net.with_params(best), initial, best_loss, epoch)


def train(net: Network, data, cfg: TrainConfig = TrainConfig()) -> Network:
    return fit(net, data, cfg).network


def classify_accuracy(net: Network, test) -> float:
    """Accuracy of thresholding outputs at 0.5 (ties go to class 1) against 0/1 labels."""
    coords, labels = _as_arrays(test)
    if len(labels) == 0:
        raise errors.TestSetEmpty("no test points")
    pred = (predict(net, coords) >= 0.5).astype(float)
    return float(np.count_nonzero(pred == labels)) / len(labels)
