"""Define-by-run reverse-mode tape over dense float64 numpy arrays.

A Node wraps an immutable value array plus the closure that maps its
output gradient to contributions on its parents. Graphs are rebuilt per
mini-batch; nothing is mutated in place after creation except the lazily
allocated ``grad`` buffers, which accumulate additively.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np


class ShapeError(ValueError):
    """Raised when operands do not conform; names the op and shapes."""

    def __init__(self, op: str, *shapes, detail: str = ""):
        self.op = op
        self.shapes = shapes
        msg = f"{op}: incompatible shapes {' vs '.join(str(tuple(s)) for s in shapes)}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


_grad_enabled = True


@contextmanager
def no_grad():
    """Build constant nodes only (no backward closures) inside the block."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


def grad_enabled() -> bool:
    return _grad_enabled


class Node:
    __slots__ = ("value", "grad", "parents", "requires_grad", "_backward")

    def __init__(self, value, parents=(), backward=None, requires_grad=None):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad = None
        if requires_grad is None:
            requires_grad = any(p.requires_grad for p in parents)
        if parents and not (_grad_enabled and requires_grad):
            parents, backward, requires_grad = (), None, False
        self.parents = parents
        self.requires_grad = requires_grad
        self._backward = backward

    @property
    def shape(self):
        return self.value.shape

    def item(self) -> float:
        return float(self.value)

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self):
        return f"Node(shape={self.value.shape}, requires_grad={self.requires_grad})"


def as_node(x) -> Node:
    """Wrap a plain array/scalar as a constant node; pass nodes through."""
    if isinstance(x, Node):
        return x
    return Node(np.asarray(x, dtype=np.float64), requires_grad=False)


def constant(x) -> Node:
    return Node(np.asarray(x, dtype=np.float64), requires_grad=False)


def accumulate(node: Node, g: np.ndarray) -> None:
    """Add a gradient contribution onto ``node`` (zero-init on first use)."""
    if not node.requires_grad:
        return
    if node.grad is None:
        node.grad = np.zeros_like(node.value)
    node.grad += g


def topo_order(root: Node) -> list[Node]:
    """Iterative post-order over the subgraph that requires grad."""
    order: list[Node] = []
    visited: set[int] = set()
    stack: list[tuple[Node, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited or not node.requires_grad:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if id(p) not in visited and p.requires_grad:
                stack.append((p, False))
    return order


def backward(root: Node) -> None:
    """Populate ``grad`` on every reachable node with d(root)/d(node).

    The root must hold a single element. Repeated calls without zeroing
    accumulate, matching the additive contract.
    """
    if root.value.size != 1:
        raise ShapeError("backward", root.value.shape, detail="root must be scalar")
    if not root.requires_grad:
        return
    accumulate(root, np.ones_like(root.value))
    for node in reversed(topo_order(root)):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)


class ParamStore:
    """Ordered name -> parameter Node map with deterministic iteration."""

    def __init__(self):
        self._params: dict[str, Node] = {}

    def add(self, name: str, value: np.ndarray, requires_grad: bool = True) -> Node:
        if name in self._params:
            raise ValueError(f"duplicate parameter name {name!r}")
        node = Node(np.array(value, dtype=np.float64), requires_grad=requires_grad)
        self._params[name] = node
        return node

    def __getitem__(self, name: str) -> Node:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self):
        return iter(self._params)

    def __len__(self):
        return len(self._params)

    def names(self) -> list[str]:
        return list(self._params)

    def items(self):
        return self._params.items()

    def num_params(self) -> int:
        return sum(p.value.size for p in self._params.values())

    def zero_grad(self) -> None:
        for p in self._params.values():
            p.grad = None

    def freeze(self) -> None:
        for p in self._params.values():
            p.requires_grad = False

    def state_bytes(self) -> bytes:
        """Concatenated raw parameter bytes; used by frozen-ness checks."""
        return b"".join(p.value.tobytes() for p in self._params.values())
