"""
Dense float64 tensors with reverse-mode automatic differentiation.

Every operation on a tensor that requires a gradient records its parents and
a backward closure. ``Tensor.backward`` walks that graph once in reverse
topological order; only leaves keep ``grad`` and they accumulate across calls
until ``zero_grad``.
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ContractError, ShapeError

Array = NDArray[np.float64]
BackwardFn = Callable[[Array], Sequence[Array | None]]

_grad_state = threading.local()


def is_grad_enabled() -> bool:
    """Whether new operations record a graph on this thread."""
    return getattr(_grad_state, "enabled", True)


@contextmanager
def no_grad() -> Iterator[None]:
    """
    Disable graph recording inside the block (evaluation paths).

    Examples:
        >>> w = Tensor([1.0], requires_grad=True)
        >>> with no_grad():
        ...     y = w * 2.0
        >>> y.requires_grad
        False
    """
    previous = is_grad_enabled()
    _grad_state.enabled = False
    try:
        yield
    finally:
        _grad_state.enabled = previous


def _as_array(data: ArrayLike) -> Array:
    return np.array(data, dtype=np.float64)


def unbroadcast(grad: Array, shape: tuple[int, ...]) -> Array:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    squeeze = tuple(i for i, dim in enumerate(shape) if dim == 1 and grad.shape[i] != 1)
    if squeeze:
        grad = grad.sum(axis=squeeze, keepdims=True)
    return grad.reshape(shape)


class Tensor:
    """
    N-dimensional float64 array node in an autodiff graph.

    Examples:
        >>> x = Tensor(3.0, requires_grad=True)
        >>> (x * x).backward()
        >>> float(x.grad)
        6.0
    """

    __slots__ = ("data", "requires_grad", "grad", "name", "_parents", "_backward")

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        *,
        name: str | None = None,
        _parents: tuple[Tensor, ...] = (),
        _backward: BackwardFn | None = None,
    ) -> None:
        """Wrap ``data`` as a float64 array (always copied)."""
        self.data: Array = _as_array(data)
        self.requires_grad = requires_grad
        self.grad: Array | None = None
        self.name = name
        self._parents = _parents
        self._backward = _backward

    # ------------------------------------------------------------------
    # Introspection
    # ------------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, ...]:
        """Dimensions of the underlying array."""
        return self.data.shape

    @property
    def ndim(self) -> int:
        """Number of dimensions."""
        return self.data.ndim

    @property
    def size(self) -> int:
        """Total number of elements."""
        return self.data.size

    @property
    def is_leaf(self) -> bool:
        """True for tensors not produced by a recorded operation."""
        return self._backward is None

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

    def __len__(self) -> int:
        return len(self.data)

    def item(self) -> float:
        """The single value of a one-element tensor."""
        if self.data.size != 1:
            raise ShapeError(f"item() needs exactly one element, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> Array:
        """A copy of the values."""
        return self.data.copy()

    def detach(self) -> Tensor:
        """Same values, cut from the graph."""
        return Tensor(self.data)

    def zero_grad(self) -> None:
        """Drop the accumulated gradient."""
        self.grad = None

    # ------------------------------------------------------------------
    # Graph construction
    # ------------------------------------------------------------------
    @staticmethod
    def from_op(data: Array, parents: tuple[Tensor, ...], backward: BackwardFn) -> Tensor:
        """
        Result of an operation on ``parents``.

        The backward closure receives the output gradient and returns one
        gradient (or None) per parent, already shaped like that parent.
        """
        out = Tensor.__new__(Tensor)
        out.data = np.asarray(data, dtype=np.float64)
        out.grad = None
        out.name = None
        if is_grad_enabled() and any(p.requires_grad for p in parents):
            out.requires_grad = True
            out._parents = parents
            out._backward = backward
        else:
            out.requires_grad = False
            out._parents = ()
            out._backward = None
        return out

    def _topological_order(self) -> list[Tensor]:
        order: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
        return order

    def backward(self) -> None:
        """
        Accumulate d(self)/d(leaf) into every leaf that requires a gradient.

        Raises:
            ContractError: If ``self`` is not a scalar
        """
        if self.data.size != 1:
            raise ContractError(f"backward() needs a scalar loss, got shape {self.shape}")
        if not self.requires_grad:
            return
        pending: dict[int, Array] = {id(self): np.ones_like(self.data)}
        for node in reversed(self._topological_order()):
            grad = pending.pop(id(node), None)
            if grad is None:
                continue
            if node._backward is None:
                node.grad = grad.copy() if node.grad is None else node.grad + grad
                continue
            for parent, parent_grad in zip(node._parents, node._backward(grad), strict=True):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                pending[key] = pending[key] + parent_grad if key in pending else parent_grad

    # ------------------------------------------------------------------
    # Elementwise arithmetic (numpy broadcasting)
    # ------------------------------------------------------------------
    def __add__(self, other: Tensor | ArrayLike) -> Tensor:
        other = ensure_tensor(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor.from_op(
            self.data + other.data,
            (self, other),
            lambda g: (unbroadcast(g, a_shape), unbroadcast(g, b_shape)),
        )

    __radd__ = __add__

    def __neg__(self) -> Tensor:
        return Tensor.from_op(-self.data, (self,), lambda g: (-g,))

    def __sub__(self, other: Tensor | ArrayLike) -> Tensor:
        other = ensure_tensor(other)
        a_shape, b_shape = self.shape, other.shape
        return Tensor.from_op(
            self.data - other.data,
            (self, other),
            lambda g: (unbroadcast(g, a_shape), unbroadcast(-g, b_shape)),
        )

    def __rsub__(self, other: Tensor | ArrayLike) -> Tensor:
        return ensure_tensor(other) - self

    def __mul__(self, other: Tensor | ArrayLike) -> Tensor:
        other = ensure_tensor(other)
        a, b = self.data, other.data
        return Tensor.from_op(
            a * b,
            (self, other),
            lambda g: (unbroadcast(g * b, a.shape), unbroadcast(g * a, b.shape)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Tensor | ArrayLike) -> Tensor:
        other = ensure_tensor(other)
        a, b = self.data, other.data
        return Tensor.from_op(
            a / b,
            (self, other),
            lambda g: (unbroadcast(g / b, a.shape), unbroadcast(-g * a / (b * b), b.shape)),
        )

    def __rtruediv__(self, other: Tensor | ArrayLike) -> Tensor:
        return ensure_tensor(other) / self

    def __pow__(self, exponent: float) -> Tensor:
        if isinstance(exponent, Tensor):
            raise TypeError("only constant exponents are supported")
        a = self.data
        p = float(exponent)
        return Tensor.from_op(a**p, (self,), lambda g: (g * p * a ** (p - 1.0),))

    def __matmul__(self, other: Tensor | ArrayLike) -> Tensor:
        from .functional import matmul

        return matmul(self, ensure_tensor(other))

    # ------------------------------------------------------------------
    # Unary functions
    # ------------------------------------------------------------------
    def exp(self) -> Tensor:
        """Elementwise exponential."""
        out = np.exp(self.data)
        return Tensor.from_op(out, (self,), lambda g: (g * out,))

    def log(self) -> Tensor:
        """Elementwise natural logarithm."""
        a = self.data
        return Tensor.from_op(np.log(a), (self,), lambda g: (g / a,))

    def sqrt(self) -> Tensor:
        """Elementwise square root."""
        out = np.sqrt(self.data)
        return Tensor.from_op(out, (self,), lambda g: (g * 0.5 / out,))

    def tanh(self) -> Tensor:
        """Elementwise hyperbolic tangent."""
        out = np.tanh(self.data)
        return Tensor.from_op(out, (self,), lambda g: (g * (1.0 - out * out),))

    def sigmoid(self) -> Tensor:
        """Logistic function, evaluated as 0.5 * (1 + tanh(x / 2)) for stability."""
        out = 0.5 * (1.0 + np.tanh(0.5 * self.data))
        return Tensor.from_op(out, (self,), lambda g: (g * out * (1.0 - out),))

    # ------------------------------------------------------------------
    # Reductions
    # ------------------------------------------------------------------
    def sum(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
        """Sum over ``axis`` (all axes by default)."""
        shape = self.shape

        def backward(g: Array) -> tuple[Array]:
            if axis is not None and not keepdims:
                g = np.expand_dims(g, axis)
            return (np.broadcast_to(g, shape).copy(),)

        return Tensor.from_op(self.data.sum(axis=axis, keepdims=keepdims), (self,), backward)

    def mean(self, axis: int | tuple[int, ...] | None = None, keepdims: bool = False) -> Tensor:
        """Arithmetic mean over ``axis`` (all axes by default)."""
        if axis is None:
            count = self.size
        else:
            axes = (axis,) if isinstance(axis, int) else axis
            count = int(np.prod([self.shape[a] for a in axes]))
        return self.sum(axis=axis, keepdims=keepdims) * (1.0 / count)

    # ------------------------------------------------------------------
    # Shape manipulation
    # ------------------------------------------------------------------
    def reshape(self, *shape: int) -> Tensor:
        """View with a new shape (same number of elements)."""
        target = shape[0] if len(shape) == 1 and isinstance(shape[0], tuple) else shape
        original = self.shape
        try:
            out = self.data.reshape(target)
        except ValueError as exc:
            raise ShapeError(f"cannot reshape {original} into {target}") from exc
        return Tensor.from_op(out, (self,), lambda g: (g.reshape(original),))

    def transpose(self, *axes: int) -> Tensor:
        """Permute axes (reverse them when none are given)."""
        order = axes or tuple(reversed(range(self.ndim)))
        inverse = tuple(np.argsort(order))
        return Tensor.from_op(
            np.transpose(self.data, order), (self,), lambda g: (np.transpose(g, inverse),)
        )

    def swapaxes(self, a: int, b: int) -> Tensor:
        """Exchange two axes."""
        return Tensor.from_op(np.swapaxes(self.data, a, b), (self,), lambda g: (np.swapaxes(g, a, b),))

    @property
    def T(self) -> Tensor:
        """Transpose of the last two axes."""
        return self.swapaxes(-1, -2)

    def __getitem__(self, index: Any) -> Tensor:
        shape = self.shape

        def backward(g: Array) -> tuple[Array]:
            full = np.zeros(shape)
            if _is_basic_index(index):
                full[index] += g
            else:
                np.add.at(full, index, g)
            return (full,)

        return Tensor.from_op(self.data[index], (self,), backward)


def _is_basic_index(index: Any) -> bool:
    """Slices, integers, Ellipsis and None never select an element twice."""
    parts = index if isinstance(index, tuple) else (index,)
    return all(isinstance(p, (slice, int, type(None))) or p is Ellipsis for p in parts)


def ensure_tensor(value: Tensor | ArrayLike) -> Tensor:
    """Pass tensors through, wrap anything else as a constant."""
    return value if isinstance(value, Tensor) else Tensor(value)


def parameter(data: ArrayLike, name: str | None = None) -> Tensor:
    """A trainable leaf tensor."""
    return Tensor(data, requires_grad=True, name=name)
