#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Tensor and Tape: dense 64-bit arrays with reverse-mode differentiation

Operations record themselves on the calling thread's active Tape when any
input requires a gradient. Outside a `with Tape():` block nothing is
recorded, which is how inference runs.
"""

from typing import (
    Optional, List, Sequence, Callable, Dict, Tuple, Union, Any, Iterator,
  )

import threading

import numpy as np

from ..exceptions import ShapeError
from ..internal_types import FloatArray

MAX_AXES = 3

BackwardFn = Callable[[FloatArray], Sequence[Optional[FloatArray]]]

class Tensor:
  data: FloatArray
  grad: Optional[FloatArray]
  requires_grad: bool
  node_id: Optional[int]
  name: Optional[str]

  def __init__(self, data: Any, requires_grad: bool=False, name: Optional[str]=None):
    arr = np.asarray(data, dtype=np.float64, order='C')
    if arr.ndim > MAX_AXES:
      raise ShapeError(f"Tensor supports at most {MAX_AXES} axes, got shape {arr.shape}")
    self.data = arr
    self.grad = None
    self.requires_grad = requires_grad
    self.node_id = None
    self.name = name

  @property
  def shape(self) -> Tuple[int, ...]:
    return self.data.shape

  @property
  def ndim(self) -> int:
    return self.data.ndim

  def item(self) -> float:
    if self.data.size != 1:
      raise ShapeError(f"item() requires a single-element tensor, got shape {self.shape}")
    return float(self.data.reshape(()))

  def numpy(self) -> FloatArray:
    return self.data

  def zero_grad(self) -> None:
    self.grad = None

  def __repr__(self) -> str:
    label = f" name={self.name!r}" if self.name is not None else ''
    return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"

  def __add__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import add
    return add(self, other)

  def __radd__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import add
    return add(other, self)

  def __sub__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import sub
    return sub(self, other)

  def __rsub__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import sub
    return sub(other, self)

  def __mul__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import mul
    return mul(self, other)

  def __rmul__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import mul
    return mul(other, self)

  def __truediv__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import div
    return div(self, other)

  def __neg__(self) -> 'Tensor':
    from .ops import neg
    return neg(self)

  def __matmul__(self, other: 'TensorLike') -> 'Tensor':
    from .ops import matmul
    return matmul(self, other)

  def __getitem__(self, key: Any) -> 'Tensor':
    from .ops import slice_
    return slice_(self, key)

  @property
  def T(self) -> 'Tensor':
    from .ops import transpose
    return transpose(self)

TensorLike = Union[Tensor, FloatArray, float, int]

def as_tensor(x: TensorLike) -> Tensor:
  if isinstance(x, Tensor):
    return x
  return Tensor(x)

def parameter(data: Any, name: Optional[str]=None) -> Tensor:
  """A leaf tensor that receives gradients."""
  return Tensor(data, requires_grad=True, name=name)

class _Node:
  __slots__ = ('out', 'inputs', 'backward')
  out: Tensor
  inputs: Tuple[Tensor, ...]
  backward: BackwardFn

  def __init__(self, out: Tensor, inputs: Tuple[Tensor, ...], backward: BackwardFn):
    self.out = out
    self.inputs = inputs
    self.backward = backward

class _TapeStack(threading.local):
  def __init__(self):
    super().__init__()
    self.stack: List['Tape'] = []

_tapes = _TapeStack()

class Tape:
  """Ordered record of differentiable operations, in execution (topological) order."""
  nodes: List[_Node]

  def __init__(self):
    self.nodes = []

  def __enter__(self) -> 'Tape':
    _tapes.stack.append(self)
    return self

  def __exit__(self, exc_type, exc, tb) -> None:
    popped = _tapes.stack.pop()
    assert popped is self

  def __len__(self) -> int:
    return len(self.nodes)

  def record(self, out: Tensor, inputs: Sequence[Tensor], backward: BackwardFn) -> None:
    out.node_id = len(self.nodes)
    self.nodes.append(_Node(out, tuple(inputs), backward))

  def leaves(self) -> Iterator[Tensor]:
    """Distinct gradient-requiring inputs that were not produced by a recorded operation."""
    seen = set()
    produced = set(id(node.out) for node in self.nodes)
    for node in self.nodes:
      for t in node.inputs:
        if t.requires_grad and id(t) not in produced and id(t) not in seen:
          seen.add(id(t))
          yield t

def current_tape() -> Optional[Tape]:
  stack = _tapes.stack
  return stack[-1] if len(stack) > 0 else None

def make_result(data: FloatArray, inputs: Sequence[Tensor], backward: BackwardFn) -> Tensor:
  """Wraps an op's output and records it on the active tape when a gradient is needed."""
  requires_grad = any(t.requires_grad for t in inputs)
  out = Tensor(data, requires_grad=requires_grad)
  if requires_grad:
    tape = current_tape()
    if tape is not None:
      tape.record(out, inputs, backward)
  return out

def backward(tape: Tape, loss: Tensor) -> Dict[Tensor, FloatArray]:
  """Reverse-mode pass from a scalar loss.

  Populates `.grad` on every leaf reachable from the loss and returns the
  leaf-to-gradient mapping. Leaves on the tape that the loss does not depend
  on get a zero gradient.
  """
  if loss.data.size != 1:
    raise ShapeError(f"backward() requires a scalar loss, got shape {loss.shape}")
  if loss.node_id is None or loss.node_id >= len(tape.nodes) or tape.nodes[loss.node_id].out is not loss:
    raise ShapeError("Loss tensor was not recorded on this tape")
  grads: Dict[int, FloatArray] = {id(loss): np.ones_like(loss.data)}
  for node in reversed(tape.nodes[:loss.node_id + 1]):
    g = grads.pop(id(node.out), None)
    if g is None:
      continue
    input_grads = node.backward(g)
    for inp, ig in zip(node.inputs, input_grads):
      if ig is None or not inp.requires_grad:
        continue
      key = id(inp)
      prev = grads.get(key)
      grads[key] = ig if prev is None else prev + ig
  result: Dict[Tensor, FloatArray] = {}
  for leaf in tape.leaves():
    g = grads.get(id(leaf))
    if g is None:
      g = np.zeros_like(leaf.data)
    leaf.grad = g
    result[leaf] = g
  return result
