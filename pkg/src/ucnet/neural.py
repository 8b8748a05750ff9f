"""Minimal dense/LSTM machinery with hand-written gradients.

Everything computes in float64 on plain numpy arrays. Model parameters are
exposed as ordered ``name -> array`` dicts so the Adam optimizer and the
finite-difference gradient checker treat every architecture uniformly. A
"network" is any object with three methods::

    parameters()                      -> live dict of named arrays
    loss(inputs, true_class)          -> float
    loss_and_gradients(inputs, true_class) -> (float, dict of named arrays)

The gradient checker perturbs the live parameter arrays in place, so
``parameters()`` must return the arrays the forward pass actually reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

ACTIVATIONS = ("sigmoid", "relu", "softmax", "identity")


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def relu(x):
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def softmax(logits):
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _apply_activation(name: str, z):
    if name == "sigmoid":
        return sigmoid(z)
    if name == "relu":
        return relu(z)
    if name == "softmax":
        return softmax(z)
    if name == "identity":
        return z
    raise ValueError(f"unknown activation {name!r}")


def cross_entropy(probabilities, true_class: int) -> float:
    """Negative log-likelihood of the true class, floored at 1e-12."""
    p = np.asarray(probabilities, dtype=np.float64)
    if not 0 <= true_class < p.shape[-1]:
        raise IndexError(f"true_class {true_class} out of range for {p.shape[-1]} classes")
    return float(-math.log(max(float(p[true_class]), 1e-12)))


def glorot_uniform(rng: np.random.Generator, out_dim: int, in_dim: int,
                   shape: tuple[int, ...] | None = None) -> np.ndarray:
    bound = math.sqrt(6.0 / (in_dim + out_dim))
    return rng.uniform(-bound, bound, size=shape or (out_dim, in_dim))


@dataclass
class DenseLayer:
    weights: np.ndarray  # (out_dim, in_dim)
    bias: np.ndarray     # (out_dim,)
    activation: str

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError("dense layer shapes are inconsistent")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("dense layer parameters must be finite")

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


def init_dense(rng: np.random.Generator, out_dim: int, in_dim: int,
               activation: str) -> DenseLayer:
    return DenseLayer(glorot_uniform(rng, out_dim, in_dim),
                      np.zeros(out_dim), activation)


def dense_preactivation(layer: DenseLayer, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != layer.in_dim:
        raise ValueError(
            f"dense layer expects input of size {layer.in_dim}, got {x.shape[-1]}")
    return x @ layer.weights.T + layer.bias


def dense_forward(layer: DenseLayer, x: np.ndarray) -> np.ndarray:
    """activation(W x + b); works on a single vector or a batch of rows."""
    return _apply_activation(layer.activation, dense_preactivation(layer, x))


@dataclass
class LSTMCell:
    """Single LSTM cell with gate matrices stacked as (input, forget, candidate, output)."""

    wx: np.ndarray    # (4 * hidden_dim, input_dim)
    wh: np.ndarray    # (4 * hidden_dim, hidden_dim)
    bias: np.ndarray  # (4 * hidden_dim,)

    def __post_init__(self) -> None:
        self.wx = np.asarray(self.wx, dtype=np.float64)
        self.wh = np.asarray(self.wh, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        hidden = self.wh.shape[1]
        if self.wx.shape[0] != 4 * hidden or self.wh.shape[0] != 4 * hidden \
                or self.bias.shape != (4 * hidden,):
            raise ValueError("LSTM cell shapes are inconsistent")
        for arr in (self.wx, self.wh, self.bias):
            if not np.all(np.isfinite(arr)):
                raise ValueError("LSTM parameters must be finite")

    @property
    def input_dim(self) -> int:
        return self.wx.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.wh.shape[1]


def init_lstm(rng: np.random.Generator, input_dim: int,
              hidden_dim: int) -> LSTMCell:
    """Glorot-uniform gate matrices, zero biases, forget-gate bias 1."""
    wx = glorot_uniform(rng, hidden_dim, input_dim, (4 * hidden_dim, input_dim))
    wh = glorot_uniform(rng, hidden_dim, hidden_dim, (4 * hidden_dim, hidden_dim))
    bias = np.zeros(4 * hidden_dim)
    bias[hidden_dim:2 * hidden_dim] = 1.0
    return LSTMCell(wx, wh, bias)


def lstm_forward_batch(cell: LSTMCell, xs: np.ndarray,
                       lengths: np.ndarray) -> tuple[np.ndarray, list]:
    """Run ``n`` padded sequences through the recurrence at once.

    xs has shape (n, t_max, input_dim) and lengths gives each row's true
    length; rows are masked out after their last step so the final hidden
    state equals the one a per-sequence loop would produce. Returns the
    (n, hidden_dim) final states and the cache the backward pass needs.
    """
    xs = np.asarray(xs, dtype=np.float64)
    lengths = np.asarray(lengths, dtype=np.int64)
    if xs.ndim != 3 or xs.shape[2] != cell.input_dim:
        raise ValueError(
            f"LSTM expects (n, t, {cell.input_dim}) inputs, got shape {xs.shape}")
    n, t_max = xs.shape[0], xs.shape[1]
    hidden = cell.hidden_dim
    h = np.zeros((n, hidden))
    c = np.zeros((n, hidden))
    cache = []
    for t in range(t_max):
        x_t = xs[:, t, :]
        mask = (t < lengths).astype(np.float64)[:, None]
        z = x_t @ cell.wx.T + h @ cell.wh.T + cell.bias
        gi = sigmoid(z[:, :hidden])
        gf = sigmoid(z[:, hidden:2 * hidden])
        gg = np.tanh(z[:, 2 * hidden:3 * hidden])
        go = sigmoid(z[:, 3 * hidden:])
        c_cand = gf * c + gi * gg
        tanh_c = np.tanh(c_cand)
        h_cand = go * tanh_c
        c_new = mask * c_cand + (1.0 - mask) * c
        h_new = mask * h_cand + (1.0 - mask) * h
        cache.append((x_t, h, c, gi, gf, gg, go, tanh_c, mask))
        h, c = h_new, c_new
    return h, cache


def lstm_backward_batch(cell: LSTMCell, cache: list,
                        dh_final: np.ndarray) -> dict[str, np.ndarray]:
    """Backpropagation through time; returns gradients for wx, wh and bias."""
    hidden = cell.hidden_dim
    dwx = np.zeros_like(cell.wx)
    dwh = np.zeros_like(cell.wh)
    dbias = np.zeros_like(cell.bias)
    dh = np.asarray(dh_final, dtype=np.float64).copy()
    dc = np.zeros_like(dh)
    for x_t, h_prev, c_prev, gi, gf, gg, go, tanh_c, mask in reversed(cache):
        dh_cand = mask * dh
        dc_cand = mask * dc + dh_cand * go * (1.0 - tanh_c ** 2)
        do = dh_cand * tanh_c
        df = dc_cand * c_prev
        di = dc_cand * gg
        dg = dc_cand * gi
        dz = np.concatenate([
            di * gi * (1.0 - gi),
            df * gf * (1.0 - gf),
            dg * (1.0 - gg ** 2),
            do * go * (1.0 - go),
        ], axis=1)
        dwx += dz.T @ x_t
        dwh += dz.T @ h_prev
        dbias += dz.sum(axis=0)
        dh = dz @ cell.wh + (1.0 - mask) * dh
        dc = dc_cand * gf + (1.0 - mask) * dc
    return {"wx": dwx, "wh": dwh, "bias": dbias}


def lstm_sequence(cell: LSTMCell, inputs) -> np.ndarray:
    """Final hidden state of one sequence; the empty sequence maps to zeros."""
    if len(inputs) == 0:
        return np.zeros(cell.hidden_dim)
    xs = np.asarray(inputs, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != cell.input_dim:
        raise ValueError(
            f"LSTM expects vectors of length {cell.input_dim}, "
            f"got shape {xs.shape}")
    h, _ = lstm_forward_batch(cell, xs[None, :, :], np.array([xs.shape[0]]))
    return h[0]


class Mlp:
    """Dense stack used by the title scorer and by small test networks.

    The loss convention depends on the final activation: softmax pairs with
    cross-entropy over the class probabilities, a 1-unit sigmoid with
    Bernoulli cross-entropy, and identity reads the raw output at the true
    class (linear in the parameters, handy for checker calibration).
    """

    def __init__(self, layers: Sequence[DenseLayer]):
        if not layers:
            raise ValueError("Mlp needs at least one layer")
        self.layers = list(layers)

    @classmethod
    def init(cls, rng: np.random.Generator, dims: Sequence[int],
             activations: Sequence[str]) -> "Mlp":
        if len(activations) != len(dims) - 1:
            raise ValueError("one activation per layer required")
        layers = [init_dense(rng, dims[i + 1], dims[i], act)
                  for i, act in enumerate(activations)]
        return cls(layers)

    def parameters(self) -> dict[str, np.ndarray]:
        params: dict[str, np.ndarray] = {}
        for i, layer in enumerate(self.layers):
            params[f"layer{i}.weights"] = layer.weights
            params[f"layer{i}.bias"] = layer.bias
        return params

    def forward(self, x: np.ndarray) -> np.ndarray:
        out = np.asarray(x, dtype=np.float64)
        for layer in self.layers:
            out = dense_forward(layer, out)
        return out

    def _forward_cached(self, x):
        inputs, zs = [], []
        out = np.asarray(x, dtype=np.float64)
        for layer in self.layers:
            inputs.append(out)
            z = dense_preactivation(layer, out)
            zs.append(z)
            out = _apply_activation(layer.activation, z)
        return out, inputs, zs

    def _sample_loss(self, probs: np.ndarray, true_class: int) -> float:
        final = self.layers[-1].activation
        if final == "softmax":
            return cross_entropy(probs, true_class)
        if final == "sigmoid" and self.layers[-1].out_dim == 1:
            p = float(probs[0]) if true_class == 1 else 1.0 - float(probs[0])
            return float(-math.log(max(p, 1e-12)))
        if final == "identity":
            return float(probs[true_class])
        raise ValueError(
            f"no loss convention for final activation {final!r}")

    def loss(self, x, true_class: int) -> float:
        return self._sample_loss(self.forward(x), true_class)

    def loss_and_gradients(self, x, true_class: int):
        out, inputs, zs = self._forward_cached(x)
        loss = self._sample_loss(out, true_class)
        final = self.layers[-1].activation
        if final == "softmax":
            delta = out.copy()
            delta[true_class] -= 1.0
        elif final == "sigmoid":
            target = 1.0 if true_class == 1 else 0.0
            delta = out - target  # d(bernoulli ce)/dz through the sigmoid
        else:  # identity: d(out[true])/dz
            delta = np.zeros_like(out)
            delta[true_class] = 1.0
        grads = self._backward_from_delta(delta, inputs, zs)
        return loss, grads

    def _backward_from_delta(self, delta, inputs, zs):
        grads: dict[str, np.ndarray] = {}
        for i in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[i]
            if i < len(self.layers) - 1:
                z = zs[i]
                if layer.activation == "relu":
                    delta = delta * (z > 0)
                elif layer.activation == "sigmoid":
                    s = sigmoid(z)
                    delta = delta * s * (1.0 - s)
                elif layer.activation == "identity":
                    pass
                else:
                    raise ValueError(
                        f"{layer.activation!r} is only supported as the final layer")
            if delta.ndim == 1:
                grads[f"layer{i}.weights"] = np.outer(delta, inputs[i])
                grads[f"layer{i}.bias"] = delta.copy()
            else:
                grads[f"layer{i}.weights"] = delta.T @ inputs[i]
                grads[f"layer{i}.bias"] = delta.sum(axis=0)
            delta = delta @ layer.weights
        return grads

    def batch_loss_and_gradients(self, xs: np.ndarray, ys: np.ndarray):
        """Mean cross-entropy over a batch; softmax final layer only."""
        if self.layers[-1].activation != "softmax":
            raise ValueError("batch training expects a softmax output layer")
        out, inputs, zs = self._forward_cached(xs)
        n = out.shape[0]
        picked = np.clip(out[np.arange(n), ys], 1e-12, None)
        loss = float(-np.log(picked).mean())
        delta = out.copy()
        delta[np.arange(n), ys] -= 1.0
        delta /= n
        grads = self._backward_from_delta(delta, inputs, zs)
        return loss, grads


def backward(network, inputs, true_class: int) -> dict[str, np.ndarray]:
    """Analytic gradients of the network's loss for one example."""
    return network.loss_and_gradients(inputs, true_class)[1]


@dataclass
class AdamState:
    """Adam accumulators; ``m``/``v`` mirror the parameter dict shapes."""

    learning_rate: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: Mapping[str, np.ndarray],
                   learning_rate: float = 1e-4, beta1: float = 0.9,
                   beta2: float = 0.999, epsilon: float = 1e-8) -> "AdamState":
        return cls(learning_rate=learning_rate, beta1=beta1, beta2=beta2,
                   epsilon=epsilon, t=0,
                   m={k: np.zeros_like(p) for k, p in params.items()},
                   v={k: np.zeros_like(p) for k, p in params.items()})


def adam_step(params: Mapping[str, np.ndarray],
              grads: Mapping[str, np.ndarray],
              state: AdamState) -> tuple[dict[str, np.ndarray], AdamState]:
    """One bias-corrected Adam update. Pure: returns fresh arrays and state."""
    if set(params) != set(grads):
        raise ValueError("parameter and gradient names differ")
    t = state.t + 1
    new_params: dict[str, np.ndarray] = {}
    new_m: dict[str, np.ndarray] = {}
    new_v: dict[str, np.ndarray] = {}
    for key, p in params.items():
        g = np.asarray(grads[key], dtype=np.float64)
        if g.shape != p.shape:
            raise ValueError(f"gradient shape mismatch for {key!r}")
        m = state.beta1 * state.m[key] + (1.0 - state.beta1) * g
        v = state.beta2 * state.v[key] + (1.0 - state.beta2) * g * g
        m_hat = m / (1.0 - state.beta1 ** t)
        v_hat = v / (1.0 - state.beta2 ** t)
        new_params[key] = p - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
        new_m[key] = m
        new_v[key] = v
    new_state = AdamState(learning_rate=state.learning_rate, beta1=state.beta1,
                          beta2=state.beta2, epsilon=state.epsilon, t=t,
                          m=new_m, v=new_v)
    return new_params, new_state


def gradient_check(network, inputs, true_class: int, h: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients.

    Perturbs every parameter entry in place by +-h, so only use on networks
    small enough to afford 2 forward passes per parameter.
    """
    loss0, analytic = network.loss_and_gradients(inputs, true_class)
    if not math.isfinite(loss0):
        raise ValueError("loss is not finite")
    worst = 0.0
    for name, array in network.parameters().items():
        grad = np.asarray(analytic[name], dtype=np.float64).reshape(-1)
        flat = array.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            plus = network.loss(inputs, true_class)
            flat[i] = original - h
            minus = network.loss(inputs, true_class)
            flat[i] = original
            if not (math.isfinite(plus) and math.isfinite(minus)):
                raise ValueError("loss is not finite during perturbation")
            numeric = (plus - minus) / (2.0 * h)
            err = abs(numeric - grad[i]) / max(abs(numeric), abs(grad[i]), 1e-8)
            worst = max(worst, err)
    return worst
