"""Tests for Tensor and reverse-mode differentiation."""

import numpy as np
import pytest

from atomkit.autodiff import Tensor, no_grad, parameter
from atomkit.core import ContractError


def test_gradient_accumulates_across_backward_calls() -> None:
    """Test leaf gradients add up until zero_grad."""
    x = Tensor([1.0, 2.0], requires_grad=True)
    (x * 3.0).sum().backward()
    (x * 3.0).sum().backward()
    assert x.grad is not None
    assert x.grad.tolist() == [6.0, 6.0]

    x.zero_grad()
    assert x.grad is None


def test_shared_subexpression() -> None:
    """Test a node used twice receives both gradient contributions."""
    x = Tensor(2.0, requires_grad=True)
    y = x * x
    (y + y).backward()
    assert float(x.grad) == 8.0


def test_broadcast_gradients_are_unbroadcast() -> None:
    """Test gradients of broadcast operands keep the operand shape."""
    a = Tensor(np.ones((3, 4)), requires_grad=True)
    b = Tensor(np.ones(4), requires_grad=True)
    (a * b).sum().backward()
    assert b.grad is not None
    assert b.grad.shape == (4,)
    assert b.grad.tolist() == [3.0, 3.0, 3.0, 3.0]


def test_backward_needs_scalar() -> None:
    """Test backward on a non-scalar raises ContractError."""
    x = Tensor([1.0, 2.0], requires_grad=True)
    with pytest.raises(ContractError):
        (x * 2.0).backward()


def test_no_grad_records_nothing() -> None:
    """Test operations inside no_grad do not build a graph."""
    w = parameter([1.0, 2.0], name="w")
    with no_grad():
        y = (w * w).sum()
    assert not y.requires_grad
    assert y.is_leaf


def test_indexing_and_reshape_gradients() -> None:
    """Test slicing and reshaping route gradients back to the right entries."""
    x = Tensor(np.arange(6.0), requires_grad=True)
    x.reshape(2, 3)[1, :].sum().backward()
    assert x.grad is not None
    assert x.grad.tolist() == [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]


def test_detach_cuts_the_graph() -> None:
    """Test detached tensors do not propagate gradients."""
    x = Tensor(3.0, requires_grad=True)
    y = x.detach() * x
    y.backward()
    assert float(x.grad) == 3.0
