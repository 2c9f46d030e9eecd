"""Pure-numpy kernels: the fallback twin of the compiled extension.

Every function here has an identical signature in ``_ckernels``; the ops
layer never cares which backend it got. All inputs are float64 arrays,
2-d kernels expect C-contiguous (n, d) arrays, and every output is a
freshly allocated array.
"""

import numpy as np


# ---------------------------------------------------------------------------
# elementwise
# ---------------------------------------------------------------------------


def sigmoid_fwd(x):
    # piecewise form avoids exp overflow for large |x|
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def sigmoid_bwd(y, gy):
    return gy * y * (1.0 - y)


def tanh_fwd(x):
    return np.tanh(x)


def tanh_bwd(y, gy):
    return gy * (1.0 - y * y)


def relu_fwd(x):
    return np.maximum(x, 0.0)


def relu_bwd(y, gy):
    return gy * (y > 0.0)


# ---------------------------------------------------------------------------
# row-wise (n, d)
# ---------------------------------------------------------------------------


def softmax_fwd(x):
    shifted = x - x.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_bwd(y, gy):
    dot = (y * gy).sum(axis=1, keepdims=True)
    return y * (gy - dot)


def log_softmax_fwd(x):
    shifted = x - x.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return shifted - lse


def log_softmax_bwd(y, gy):
    return gy - np.exp(y) * gy.sum(axis=1, keepdims=True)


def l2norm_fwd(x):
    norms = np.sqrt((x * x).sum(axis=1))
    return x / norms[:, None], norms


def l2norm_bwd(y, norms, gy):
    dot = (y * gy).sum(axis=1, keepdims=True)
    return (gy - y * dot) / norms[:, None]


# ---------------------------------------------------------------------------
# fused LSTM gate math
# ---------------------------------------------------------------------------


def lstm_gates_fwd(z, c_prev):
    """Gate nonlinearities + state update for one LSTM step.

    z (n, 4h) holds preactivations in [input, forget, output, candidate]
    order; returns (hc, acts, tanh_c) where hc (n, 2h) is [h | c], acts
    (n, 4h) the activated gates and tanh_c (n, h) the cached tanh(c).
    """
    n, four_h = z.shape
    h = four_h // 4
    i = sigmoid_fwd(z[:, :h])
    f = sigmoid_fwd(z[:, h : 2 * h])
    o = sigmoid_fwd(z[:, 2 * h : 3 * h])
    g = np.tanh(z[:, 3 * h :])
    c = f * c_prev + i * g
    tanh_c = np.tanh(c)
    hc = np.empty((n, 2 * h))
    hc[:, :h] = o * tanh_c
    hc[:, h:] = c
    acts = np.concatenate([i, f, o, g], axis=1)
    return hc, acts, tanh_c


def lstm_gates_bwd(acts, tanh_c, c_prev, g_hc):
    """Adjoint of lstm_gates_fwd; returns (dz, dc_prev)."""
    n, four_h = acts.shape
    h = four_h // 4
    i = acts[:, :h]
    f = acts[:, h : 2 * h]
    o = acts[:, 2 * h : 3 * h]
    g = acts[:, 3 * h :]
    dh = g_hc[:, :h]
    dc = g_hc[:, h:] + dh * o * (1.0 - tanh_c * tanh_c)
    dz = np.empty((n, four_h))
    dz[:, :h] = dc * g * i * (1.0 - i)
    dz[:, h : 2 * h] = dc * c_prev * f * (1.0 - f)
    dz[:, 2 * h : 3 * h] = dh * tanh_c * o * (1.0 - o)
    dz[:, 3 * h :] = dc * i * (1.0 - g * g)
    dc_prev = dc * f
    return dz, dc_prev
