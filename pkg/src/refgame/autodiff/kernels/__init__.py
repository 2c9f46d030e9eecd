"""Kernel backend selection.

Two interchangeable implementations exist: ``_ckernels`` (Cython) and
``_pure`` (numpy). The compiled one is picked at import when available;
``REFGAME_KERNELS=python`` or ``compiled`` in the environment forces a
choice, and :func:`set_backend` switches at runtime (used by the parity
tests and the benchmark).
"""

import os

from . import _pure

_backends = {"python": _pure}
try:
    from . import _ckernels

    _backends["compiled"] = _ckernels
except ImportError:
    pass


def _initial_backend() -> str:
    forced = os.environ.get("REFGAME_KERNELS", "").strip().lower()
    if forced in ("python", "py", "pure"):
        return "python"
    if forced in ("compiled", "c", "cython"):
        if "compiled" not in _backends:
            raise ImportError(
                "REFGAME_KERNELS=compiled but the extension is not built; "
                "reinstall with `pip install -e . --no-build-isolation`"
            )
        return "compiled"
    return "compiled" if "compiled" in _backends else "python"


_active_name = _initial_backend()
_impl = _backends[_active_name]


def available_backends() -> list[str]:
    return sorted(_backends)


def backend_name() -> str:
    return _active_name


def set_backend(name: str) -> None:
    global _active_name, _impl
    if name not in _backends:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _active_name = name
    _impl = _backends[name]


def sigmoid_fwd(x):
    return _impl.sigmoid_fwd(x)


def sigmoid_bwd(y, gy):
    return _impl.sigmoid_bwd(y, gy)


def tanh_fwd(x):
    return _impl.tanh_fwd(x)


def tanh_bwd(y, gy):
    return _impl.tanh_bwd(y, gy)


def relu_fwd(x):
    return _impl.relu_fwd(x)


def relu_bwd(y, gy):
    return _impl.relu_bwd(y, gy)


def softmax_fwd(x):
    return _impl.softmax_fwd(x)


def softmax_bwd(y, gy):
    return _impl.softmax_bwd(y, gy)


def log_softmax_fwd(x):
    return _impl.log_softmax_fwd(x)


def log_softmax_bwd(y, gy):
    return _impl.log_softmax_bwd(y, gy)


def l2norm_fwd(x):
    return _impl.l2norm_fwd(x)


def l2norm_bwd(y, norms, gy):
    return _impl.l2norm_bwd(y, norms, gy)


def lstm_gates_fwd(z, c_prev):
    return _impl.lstm_gates_fwd(z, c_prev)


def lstm_gates_bwd(acts, tanh_c, c_prev, g_hc):
    return _impl.lstm_gates_bwd(acts, tanh_c, c_prev, g_hc)
