#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Differentiable forward primitives

Every function accepts Tensors or plain arrays/scalars (treated as constants)
and returns a Tensor. Binary elementwise ops broadcast like numpy; their
gradients are summed back to each input's shape.
"""

from typing import Optional, Sequence, Tuple, Any, Union

import numpy as np

from ..exceptions import ShapeError
from ..internal_types import FloatArray, BoolArray
from .tensor import Tensor, TensorLike, as_tensor, make_result

MASK_FILL = -1e30
"""Additive logit applied to masked (invalid) softmax entries"""

MaskLike = Union[BoolArray, np.ndarray, Sequence[Any]]

def _unbroadcast(g: FloatArray, shape: Tuple[int, ...]) -> FloatArray:
  """Sums a broadcast gradient back down to `shape`."""
  if g.shape == shape:
    return g
  extra = g.ndim - len(shape)
  if extra > 0:
    g = g.sum(axis=tuple(range(extra)))
  axes = tuple(i for i, n in enumerate(shape) if n == 1 and g.shape[i] != 1)
  if len(axes) > 0:
    g = g.sum(axis=axes, keepdims=True)
  return g.reshape(shape)

def _broadcast_shape(a: Tensor, b: Tensor, op: str) -> Tuple[int, ...]:
  try:
    return np.broadcast_shapes(a.shape, b.shape)
  except ValueError as e:
    raise ShapeError(f"{op}: incompatible shapes {a.shape} and {b.shape}") from e

def _as_mask(mask: MaskLike, shape: Tuple[int, ...], op: str) -> BoolArray:
  m = np.asarray(mask, dtype=bool)
  try:
    return np.broadcast_to(m, shape)
  except ValueError as e:
    raise ShapeError(f"{op}: mask shape {m.shape} does not broadcast to {shape}") from e

# ---------------------------------------------------------------- elementwise

def add(a: TensorLike, b: TensorLike) -> Tensor:
  ta, tb = as_tensor(a), as_tensor(b)
  _broadcast_shape(ta, tb, 'add')
  def _backward(g: FloatArray):
    return _unbroadcast(g, ta.shape), _unbroadcast(g, tb.shape)
  return make_result(ta.data + tb.data, (ta, tb), _backward)

def sub(a: TensorLike, b: TensorLike) -> Tensor:
  ta, tb = as_tensor(a), as_tensor(b)
  _broadcast_shape(ta, tb, 'sub')
  def _backward(g: FloatArray):
    return _unbroadcast(g, ta.shape), _unbroadcast(-g, tb.shape)
  return make_result(ta.data - tb.data, (ta, tb), _backward)

def mul(a: TensorLike, b: TensorLike) -> Tensor:
  ta, tb = as_tensor(a), as_tensor(b)
  _broadcast_shape(ta, tb, 'mul')
  def _backward(g: FloatArray):
    return _unbroadcast(g * tb.data, ta.shape), _unbroadcast(g * ta.data, tb.shape)
  return make_result(ta.data * tb.data, (ta, tb), _backward)

def div(a: TensorLike, b: TensorLike) -> Tensor:
  ta, tb = as_tensor(a), as_tensor(b)
  _broadcast_shape(ta, tb, 'div')
  out = ta.data / tb.data
  def _backward(g: FloatArray):
    return _unbroadcast(g / tb.data, ta.shape), _unbroadcast(-g * out / tb.data, tb.shape)
  return make_result(out, (ta, tb), _backward)

def scale(a: TensorLike, c: float) -> Tensor:
  ta = as_tensor(a)
  c = float(c)
  def _backward(g: FloatArray):
    return (g * c,)
  return make_result(ta.data * c, (ta,), _backward)

def neg(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  def _backward(g: FloatArray):
    return (-g,)
  return make_result(-ta.data, (ta,), _backward)

def sigmoid(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  x = ta.data
  # split by sign so exp never overflows
  e = np.exp(-np.abs(x))
  out = np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
  def _backward(g: FloatArray):
    return (g * out * (1.0 - out),)
  return make_result(out, (ta,), _backward)

def tanh(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  out = np.tanh(ta.data)
  def _backward(g: FloatArray):
    return (g * (1.0 - out * out),)
  return make_result(out, (ta,), _backward)

def exp(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  out = np.exp(ta.data)
  def _backward(g: FloatArray):
    return (g * out,)
  return make_result(out, (ta,), _backward)

def log(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  def _backward(g: FloatArray):
    return (g / ta.data,)
  return make_result(np.log(ta.data), (ta,), _backward)

def sqrt(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  out = np.sqrt(ta.data)
  def _backward(g: FloatArray):
    return (g * 0.5 / out,)
  return make_result(out, (ta,), _backward)

def abs_(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  def _backward(g: FloatArray):
    return (g * np.sign(ta.data),)
  return make_result(np.abs(ta.data), (ta,), _backward)

def relu(a: TensorLike) -> Tensor:
  ta = as_tensor(a)
  positive = ta.data > 0
  def _backward(g: FloatArray):
    return (g * positive,)
  return make_result(np.where(positive, ta.data, 0.0), (ta,), _backward)

# ---------------------------------------------------------------- structural

def matmul(a: TensorLike, b: TensorLike) -> Tensor:
  ta, tb = as_tensor(a), as_tensor(b)
  if ta.ndim < 2 or tb.ndim < 2:
    raise ShapeError(f"matmul requires at least 2 axes, got {ta.shape} and {tb.shape}")
  if ta.shape[-1] != tb.shape[-2]:
    raise ShapeError(f"matmul: inner dimensions differ: {ta.shape} @ {tb.shape}")
  try:
    out = np.matmul(ta.data, tb.data)
  except ValueError as e:
    raise ShapeError(f"matmul: incompatible batch shapes {ta.shape} @ {tb.shape}") from e
  def _backward(g: FloatArray):
    ga = np.matmul(g, np.swapaxes(tb.data, -1, -2))
    gb = np.matmul(np.swapaxes(ta.data, -1, -2), g)
    return _unbroadcast(ga, ta.shape), _unbroadcast(gb, tb.shape)
  return make_result(out, (ta, tb), _backward)

def transpose(a: TensorLike) -> Tensor:
  """Swaps the last two axes."""
  ta = as_tensor(a)
  if ta.ndim < 2:
    raise ShapeError(f"transpose requires at least 2 axes, got {ta.shape}")
  def _backward(g: FloatArray):
    return (np.swapaxes(g, -1, -2),)
  return make_result(np.swapaxes(ta.data, -1, -2), (ta,), _backward)

def reshape(a: TensorLike, shape: Tuple[int, ...]) -> Tensor:
  ta = as_tensor(a)
  try:
    out = ta.data.reshape(shape)
  except ValueError as e:
    raise ShapeError(f"reshape: cannot reshape {ta.shape} to {shape}") from e
  def _backward(g: FloatArray):
    return (g.reshape(ta.shape),)
  return make_result(out, (ta,), _backward)

def concat(tensors: Sequence[TensorLike], axis: int=0) -> Tensor:
  ts = [as_tensor(t) for t in tensors]
  if len(ts) == 0:
    raise ShapeError("concat requires at least one tensor")
  try:
    out = np.concatenate([t.data for t in ts], axis=axis)
  except ValueError as e:
    raise ShapeError(f"concat: incompatible shapes {[t.shape for t in ts]} along axis {axis}") from e
  bounds = np.cumsum([t.shape[axis] for t in ts])[:-1]
  def _backward(g: FloatArray):
    return tuple(np.split(g, bounds, axis=axis))
  return make_result(out, ts, _backward)

def slice_(a: TensorLike, key: Any) -> Tensor:
  ta = as_tensor(a)
  try:
    out = ta.data[key]
  except IndexError as e:
    raise ShapeError(f"slice: {e}") from e
  def _backward(g: FloatArray):
    full = np.zeros_like(ta.data)
    np.add.at(full, key, g)
    return (full,)
  return make_result(np.array(out, dtype=np.float64), (ta,), _backward)

def sum_(a: TensorLike, axis: Optional[int]=None, keepdims: bool=False) -> Tensor:
  ta = as_tensor(a)
  out = ta.data.sum(axis=axis, keepdims=keepdims)
  def _backward(g: FloatArray):
    if axis is not None and not keepdims:
      g = np.expand_dims(g, axis)
    return (np.broadcast_to(g, ta.shape).copy(),)
  return make_result(np.asarray(out), (ta,), _backward)

# ---------------------------------------------------------------- attention helpers

def row_softmax(x: TensorLike, mask: Optional[MaskLike]=None) -> Tensor:
  """Softmax over the last axis.

  `mask` marks valid entries (broadcastable to x). Invalid entries get an
  additive MASK_FILL logit and an output of exactly 0; a row with no valid
  entry is all zeros.
  """
  tx = as_tensor(x)
  logits = tx.data
  valid: Optional[BoolArray] = None
  if mask is not None:
    valid = _as_mask(mask, tx.shape, 'row_softmax')
    logits = np.where(valid, logits, logits + MASK_FILL)
  shifted = logits - logits.max(axis=-1, keepdims=True)
  e = np.exp(shifted)
  if valid is not None:
    e = np.where(valid, e, 0.0)
  denom = e.sum(axis=-1, keepdims=True)
  out = np.divide(e, denom, out=np.zeros_like(e), where=denom > 0)
  def _backward(g: FloatArray):
    return (out * (g - (g * out).sum(axis=-1, keepdims=True)),)
  return make_result(out, (tx,), _backward)

def row_log_softmax(x: TensorLike, mask: Optional[MaskLike]=None) -> Tensor:
  """Log-softmax over the last axis. Invalid entries output exactly 0 and
     receive no gradient."""
  tx = as_tensor(x)
  valid = np.ones(tx.shape, dtype=bool) if mask is None else _as_mask(mask, tx.shape, 'row_log_softmax')
  if not np.all(valid.any(axis=-1)):
    raise ShapeError("row_log_softmax: every row needs at least one valid entry")
  logits = np.where(valid, tx.data, -np.inf)
  m = logits.max(axis=-1, keepdims=True)
  lse = m + np.log(np.where(valid, np.exp(logits - m), 0.0).sum(axis=-1, keepdims=True))
  out = np.where(valid, tx.data - lse, 0.0)
  probs = np.where(valid, np.exp(out), 0.0)
  def _backward(g: FloatArray):
    gv = np.where(valid, g, 0.0)
    return (np.where(valid, gv - probs * gv.sum(axis=-1, keepdims=True), 0.0),)
  return make_result(out, (tx,), _backward)

def layer_norm(x: TensorLike, gain: TensorLike, bias: TensorLike, eps: float=1e-12) -> Tensor:
  """Normalizes the last (feature) axis to zero mean / unit variance, then applies gain and bias."""
  tx, tg, tb = as_tensor(x), as_tensor(gain), as_tensor(bias)
  width = tx.shape[-1] if tx.ndim > 0 else 0
  if width == 0:
    raise ShapeError("layer_norm on feature width 0")
  if tg.shape != (width,) or tb.shape != (width,):
    raise ShapeError(f"layer_norm: gain/bias must have shape ({width},), got {tg.shape} and {tb.shape}")
  mu = tx.data.mean(axis=-1, keepdims=True)
  centered = tx.data - mu
  var = (centered * centered).mean(axis=-1, keepdims=True)
  inv_std = 1.0 / np.sqrt(var + eps)
  xhat = centered * inv_std
  out = xhat * tg.data + tb.data
  lead = tuple(range(tx.ndim - 1))
  def _backward(g: FloatArray):
    dxhat = g * tg.data
    dx = inv_std * (
        dxhat
        - dxhat.mean(axis=-1, keepdims=True)
        - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
      )
    return dx, (g * xhat).sum(axis=lead), g.sum(axis=lead)
  return make_result(out, (tx, tg, tb), _backward)

# ---------------------------------------------------------------- pooling

def mean_over_valid(x: TensorLike, mask: MaskLike, axis: int=-1) -> Tensor:
  """Mean along `axis` over entries where mask (broadcastable to x) is true."""
  tx = as_tensor(x)
  valid = _as_mask(mask, tx.shape, 'mean_over_valid')
  count = valid.sum(axis=axis, keepdims=True).astype(np.float64)
  if np.any(count == 0):
    raise ShapeError("mean_over_valid: no valid entries to average")
  out = np.where(valid, tx.data, 0.0).sum(axis=axis, keepdims=True) / count
  def _backward(g: FloatArray):
    g = np.expand_dims(g, axis)
    return (np.where(valid, g / count, 0.0),)
  return make_result(np.squeeze(out, axis=axis), (tx,), _backward)

def topk_indices(values: FloatArray, k: int, valid: Optional[BoolArray]=None) -> np.ndarray:
  """Indices of the k largest valid entries along the last axis; ties go to the earliest index."""
  keyed = np.where(valid, values, -np.inf) if valid is not None else values
  order = np.argsort(-keyed, axis=-1, kind='stable')
  return order[..., :k]

def topk_mean(x: TensorLike, k: int, mask: Optional[MaskLike]=None) -> Tensor:
  """Mean of the k largest valid entries along the last axis."""
  tx = as_tensor(x)
  if tx.ndim == 0:
    raise ShapeError("topk_mean requires at least one axis")
  valid = np.ones(tx.shape, dtype=bool) if mask is None else _as_mask(mask, tx.shape, 'topk_mean')
  n_valid = int(valid.sum(axis=-1).min()) if valid.size > 0 else 0
  if k < 1 or k > n_valid:
    raise ShapeError(f"topk_mean: k={k} out of range [1, {n_valid}]")
  idx = topk_indices(tx.data, k, valid)
  picked = np.take_along_axis(tx.data, idx, axis=-1)
  out = picked.mean(axis=-1)
  def _backward(g: FloatArray):
    full = np.zeros_like(tx.data)
    np.put_along_axis(full, idx, np.expand_dims(g, -1) / k, axis=-1)
    return (full,)
  return make_result(out, (tx,), _backward)

def max_over_valid(x: TensorLike, mask: Optional[MaskLike]=None) -> Tensor:
  """Largest valid entry along the last axis (earliest index on ties)."""
  return topk_mean(x, 1, mask)
