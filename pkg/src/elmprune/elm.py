"""Single-hidden-layer Extreme Learning Machine.

A hidden layer ``(W, b, g)`` is drawn once from U[-1, 1] and frozen; only
the output weights ``beta`` are fitted, as the minimal-norm least-squares
solution of ``H @ beta = y`` where ``H = g(W @ X + b).T``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import DEFAULT_RCOND, as_matrix, as_vector, min_norm_lsq


class ActivationKind(str, Enum):
    SIGMOID = "sigmoid"
    TANH = "tanh"
    RELU = "relu"


def _sigmoid(z):
    # split by sign to avoid overflow in exp
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _relu(z):
    return np.maximum(z, 0.0)


_ACTIVATIONS = {
    ActivationKind.SIGMOID: _sigmoid,
    ActivationKind.TANH: np.tanh,
    ActivationKind.RELU: _relu,
}


def activation_fn(kind):
    return _ACTIVATIONS[ActivationKind(kind)]


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class HiddenLayer:
    """Random projection ``W`` (M x D), bias ``b`` (M,) and activation."""

    W: np.ndarray
    b: np.ndarray
    activation: ActivationKind = ActivationKind.TANH

    def __post_init__(self):
        W = as_matrix(self.W, "W")
        b = as_vector(self.b, "b")
        if W.shape[0] != b.shape[0]:
            raise ValueError(f"W has {W.shape[0]} rows but b has length {b.shape[0]}")
        if np.any(np.abs(W) > 1.0) or np.any(np.abs(b) > 1.0):
            raise ValueError("hidden weights and biases must lie in [-1, 1]")
        object.__setattr__(self, "W", _frozen(W))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "activation", ActivationKind(self.activation))

    @property
    def n_hidden(self):
        return self.W.shape[0]

    @property
    def n_inputs(self):
        return self.W.shape[1]

    def select(self, nodes):
        """Layer restricted to the given hidden nodes, in the given order."""
        nodes = np.asarray(nodes, dtype=np.intp)
        return HiddenLayer(self.W[nodes], self.b[nodes], self.activation)


@dataclass(frozen=True)
class ElmModel:
    hidden: HiddenLayer
    beta: np.ndarray

    def __post_init__(self):
        beta = as_vector(self.beta, "beta")
        if beta.shape[0] != self.hidden.n_hidden:
            raise ValueError(f"beta has length {beta.shape[0]} but the layer has {self.hidden.n_hidden} nodes")
        object.__setattr__(self, "beta", _frozen(beta))

    @property
    def size(self):
        return self.hidden.n_hidden

    def select(self, nodes):
        """Sub-network keeping only ``nodes``; the kept weights are not re-solved."""
        nodes = np.asarray(nodes, dtype=np.intp)
        return ElmModel(self.hidden.select(nodes), self.beta[nodes])


def init_hidden(M, D, activation=ActivationKind.TANH, seed=0):
    """Draw ``W`` then ``b`` i.i.d. from U[-1, 1] with a seeded PCG64 generator."""
    if M < 1 or D < 1:
        raise ValueError(f"need M >= 1 and D >= 1, got M={M}, D={D}")
    rng = np.random.default_rng(seed)
    W = rng.uniform(-1.0, 1.0, (M, D))
    b = rng.uniform(-1.0, 1.0, M)
    return HiddenLayer(W, b, activation)


def hidden_output(layer, X):
    """``H = g(W @ X + b).T`` with shape (N, M)."""
    X = as_matrix(X, "X")
    if X.shape[0] != layer.n_inputs:
        raise ValueError(f"X has {X.shape[0]} features but the layer expects {layer.n_inputs}")
    Z = layer.W @ X + layer.b[:, None]
    return activation_fn(layer.activation)(Z).T


def train(layer, data, rcond=DEFAULT_RCOND):
    H = hidden_output(layer, data.X)
    return ElmModel(layer, min_norm_lsq(H, data.y, rcond))


def train_elm(data, M, seed=0, activation=ActivationKind.TANH, rcond=DEFAULT_RCOND):
    """Draw a hidden layer of ``M`` nodes and fit it on ``data``."""
    return train(init_hidden(M, data.n_features, activation, seed), data, rcond)


def predict_scores(model, X):
    """Raw outputs ``z_n = beta . g(W x_n + b)``."""
    return hidden_output(model.hidden, X) @ model.beta


def labels_from_scores(z):
    """Sign decision with ``sign(0) = +1``."""
    return np.where(np.asarray(z) >= 0.0, 1.0, -1.0)


def predict_labels(model, X):
    return labels_from_scores(predict_scores(model, X))


def append_fake_neuron(H, seed=0):
    """Append one U[-1, 1] column to ``H``, unrelated to any label.

    Used to see how much output weight the least-squares solve gives to a
    node that observes nothing.
    """
    H = as_matrix(H, "H")
    rng = np.random.default_rng(seed)
    col = rng.uniform(-1.0, 1.0, H.shape[0])
    return np.concatenate([H, col[:, None]], axis=1)
