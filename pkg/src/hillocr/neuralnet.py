"""Two-layer logistic network (35 -> H -> 26) trained by full-batch descent.

Two trainers are provided. ``momentum`` is plain gradient descent with
momentum. ``adaptive`` additionally grows the learning rate after every
improving epoch and, when an epoch worsens the error by more than
``max_perf_inc``, throws the step away, shrinks the rate and clears the
momentum memory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

N_INPUTS = 35
N_CLASSES = 26
DEFAULT_HIDDEN = 24


class TrainingDiverged(RuntimeError):
    pass


class ModelFormatError(ValueError):
    pass


def sigmoid(z):
    # tanh form never overflows, unlike 1 / (1 + exp(-z)).
    return 0.5 * (1.0 + np.tanh(0.5 * z))


@dataclass
class Mlp:
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    @property
    def hidden(self) -> int:
        return self.W1.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.W1.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.W2.shape[0]

    def params(self) -> tuple[np.ndarray, ...]:
        return (self.W1, self.b1, self.W2, self.b2)

    def copy(self) -> "Mlp":
        return Mlp(*(p.copy() for p in self.params()))

    def combine(self, other: "Mlp", a: float = 1.0, b: float = 1.0) -> "Mlp":
        """Element-wise ``a*self + b*other``; also used on gradient structures."""
        return Mlp(*(a * p + b * q for p, q in zip(self.params(), other.params())))

    def is_finite(self) -> bool:
        return all(np.isfinite(p).all() for p in self.params())


@dataclass
class Dataset:
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.inputs = np.atleast_2d(np.asarray(self.inputs, dtype=np.float64))
        self.targets = np.atleast_2d(np.asarray(self.targets, dtype=np.float64))
        if len(self.inputs) != len(self.targets):
            raise ValueError(f"{len(self.inputs)} inputs but {len(self.targets)} targets")

    def __len__(self):
        return len(self.inputs)


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.01
    momentum: float = 0.9
    lr_inc: float = 1.05
    lr_dec: float = 0.7
    max_perf_inc: float = 1.04
    goal: float = 0.1
    max_epochs: int = 1000
    seed: int = 0
    trainer: str = "adaptive"

    def __post_init__(self):
        if self.goal <= 0:
            raise ValueError("goal must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if min(self.lr, self.lr_inc, self.lr_dec, self.max_perf_inc) <= 0:
            raise ValueError("rates and factors must be positive")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must lie in [0, 1)")
        if self.trainer not in ("adaptive", "momentum"):
            raise ValueError(f"unknown trainer {self.trainer!r}")


@dataclass
class TrainResult:
    net: Mlp
    history: list[float] = field(default_factory=list)
    epochs: int = 0
    goal_met: bool = False

    @property
    def final_mse(self) -> float:
        return self.history[-1]


def init_mlp(hidden: int = DEFAULT_HIDDEN, seed: int = 0, n_inputs: int = N_INPUTS,
             n_outputs: int = N_CLASSES) -> Mlp:
    """Uniform weights in [-0.5, 0.5], zero biases."""
    if hidden < 1:
        raise ValueError(f"hidden size must be >= 1, got {hidden}")
    rng = np.random.default_rng(seed)
    return Mlp(
        rng.uniform(-0.5, 0.5, (hidden, n_inputs)),
        np.zeros(hidden),
        rng.uniform(-0.5, 0.5, (n_outputs, hidden)),
        np.zeros(n_outputs),
    )


def forward(net: Mlp, x) -> tuple[np.ndarray, np.ndarray]:
    """Hidden and output activations; ``x`` is one vector or a batch of rows."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != net.n_inputs:
        raise ValueError(f"expected {net.n_inputs} inputs, got {x.shape[-1]}")
    h = sigmoid(x @ net.W1.T + net.b1)
    y = sigmoid(h @ net.W2.T + net.b2)
    return h, y


def mse(outputs, targets) -> float:
    outputs = np.asarray(outputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if outputs.shape != targets.shape:
        raise ValueError(f"shape mismatch {outputs.shape} vs {targets.shape}")
    if outputs.size == 0:
        raise ValueError("empty dataset")
    return float(np.mean((outputs - targets) ** 2))


def loss(net: Mlp, data: Dataset) -> float:
    return mse(forward(net, data.inputs)[1], data.targets)


def grad_backprop(net: Mlp, data: Dataset) -> Mlp:
    """Exact gradient of the batch MSE, returned in the shape of an :class:`Mlp`."""
    if len(data) == 0:
        raise ValueError("empty dataset")
    X, T = data.inputs, data.targets
    h, y = forward(net, X)
    dy = 2.0 * (y - T) / T.size
    dz2 = dy * y * (1.0 - y)
    dz1 = (dz2 @ net.W2) * h * (1.0 - h)
    return Mlp(dz1.T @ X, dz1.sum(axis=0), dz2.T @ h, dz2.sum(axis=0))


def train(net: Mlp, data: Dataset, cfg: TrainConfig = TrainConfig()) -> TrainResult:
    """Full-batch training until ``cfg.goal`` or ``cfg.max_epochs``.

    ``history[0]`` is the starting error and ``history[k]`` the error of the
    kept weights after epoch ``k``. The input network is not modified.
    """
    net = net.copy()
    adaptive = cfg.trainer == "adaptive"
    lr = cfg.lr
    perf = loss(net, data)
    history = [perf]
    if perf <= cfg.goal:
        return TrainResult(net, history, 0, True)
    zero = net.combine(net, 0.0, 0.0)
    step = zero
    epoch = 0
    while epoch < cfg.max_epochs:
        epoch += 1
        g = grad_backprop(net, data)
        delta = step.combine(g, cfg.momentum, -lr)
        candidate = net.combine(delta)
        new_perf = loss(candidate, data)
        if not (math.isfinite(new_perf) and candidate.is_finite()):
            raise TrainingDiverged(f"non-finite error at epoch {epoch} (lr={lr:g})")
        if adaptive and new_perf > perf * cfg.max_perf_inc:
            lr *= cfg.lr_dec
            step = zero
        else:
            if adaptive and new_perf < perf:
                lr *= cfg.lr_inc
            net, step, perf = candidate, delta, new_perf
        history.append(perf)
        if perf <= cfg.goal:
            return TrainResult(net, history, epoch, True)
    return TrainResult(net, history, epoch, False)


def classify(net: Mlp, x) -> int:
    """Index of the largest output; ``np.argmax`` already picks the lowest on ties."""
    return int(np.argmax(forward(net, x)[1]))


def format_model(net: Mlp) -> str:
    def row(v):
        return " ".join(repr(float(a)) for a in v)

    lines = [f"mlp {net.n_inputs} {net.hidden} {net.n_outputs}"]
    lines += [row(r) for r in net.W1]
    lines.append(row(net.b1))
    lines += [row(r) for r in net.W2]
    lines.append(row(net.b2))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> Mlp:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "mlp" or len(lines[0]) != 4:
        raise ModelFormatError("missing 'mlp <in> <hidden> <out>' header")
    try:
        n_in, hid, n_out = (int(t) for t in lines[0][1:])
    except ValueError:
        raise ModelFormatError("non-integer dimension in header") from None
    if n_in != N_INPUTS or n_out != N_CLASSES or hid < 1:
        raise ModelFormatError(f"unsupported dimensions {n_in}x{hid}x{n_out}")
    expected = hid + 1 + n_out + 1
    if len(lines) - 1 != expected:
        raise ModelFormatError(f"expected {expected} data lines, found {len(lines) - 1}")
    widths = [n_in] * hid + [hid] + [hid] * n_out + [n_out]
    rows = []
    for i, (toks, w) in enumerate(zip(lines[1:], widths), start=2):
        if len(toks) != w:
            raise ModelFormatError(f"line {i}: expected {w} values, found {len(toks)}")
        try:
            rows.append([float(t) for t in toks])
        except ValueError:
            raise ModelFormatError(f"line {i}: non-numeric value") from None
    net = Mlp(
        np.array(rows[:hid]),
        np.array(rows[hid]),
        np.array(rows[hid + 1:hid + 1 + n_out]),
        np.array(rows[-1]),
    )
    if not net.is_finite():
        raise ModelFormatError("model contains non-finite weights")
    return net


def save_model(net: Mlp, path) -> None:
    Path(path).write_text(format_model(net))


def load_model(path) -> Mlp:
    return parse_model(Path(path).read_text())
