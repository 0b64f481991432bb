#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Weak-supervision losses: MIL pooling with binary cross-entropy, and a
supervised contrastive loss over pooled episode representations"""

from typing import Sequence, Union

import numpy as np

from ..exceptions import ShapeError
from ..internal_types import BoolArray
from ..numerics import Tensor, TensorLike, as_tensor, ops

MIL_SEGMENT = 32
NORM_EPS = 1e-12

def mil_k(num_valid: int) -> int:
  """Top-k size for anomalous episodes: max(1, floor(T / 32))."""
  return max(1, num_valid // MIL_SEGMENT)

def mil_pool(logits: TensorLike, mask: Union[BoolArray, Sequence[bool], None], video_label: Union[bool, int]) -> Tensor:
  """Pools one episode's step logits to a single video score.

  Normal episodes (label 0) take the maximum valid logit; anomalous ones
  (label 1) the mean of the k largest, k = mil_k(valid steps). Ties go to
  the earliest step.
  """
  s = as_tensor(logits)
  if s.ndim != 1:
    raise ShapeError(f"mil_pool expects a 1-D logit sequence, got shape {s.shape}")
  valid = np.ones(s.shape, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
  n_valid = int(valid.sum())
  if n_valid == 0:
    raise ShapeError("mil_pool: episode has no valid steps")
  if bool(video_label):
    return ops.topk_mean(s, mil_k(n_valid), valid)
  return ops.max_over_valid(s, valid)

def bce_loss(s_pool: TensorLike, video_label: Union[float, int, bool]) -> Tensor:
  """Binary cross-entropy on a logit: max(s, 0) - s*y + log(1 + exp(-|s|))."""
  s = as_tensor(s_pool)
  y = float(video_label)
  return ops.add(ops.sub(ops.relu(s), ops.scale(s, y)), ops.log(ops.add(ops.exp(ops.neg(ops.abs_(s))), 1.0)))

def global_features(z_sem: Tensor, mask: BoolArray) -> Tensor:
  """(B, d) unit-norm episode representations: z_sem averaged over valid steps."""
  if z_sem.ndim != 3 or z_sem.shape[:2] != mask.shape:
    raise ShapeError(f"global_features: z_sem {z_sem.shape} does not match mask {mask.shape}")
  pooled = ops.mean_over_valid(z_sem, np.asarray(mask, dtype=bool)[:, :, None], axis=1)
  norm = ops.sqrt(ops.add(ops.sum_(ops.mul(pooled, pooled), axis=-1, keepdims=True), NORM_EPS))
  return ops.div(pooled, norm)

def contrastive_loss(z: Tensor, labels: Sequence[Union[int, bool, float]], temperature: float) -> Tensor:
  """Supervised contrastive loss over a batch of unit-norm representations.

  Anchor i's loss is the mean, over same-label partners p, of
  -log softmax_{a != i}(z_i . z_a / temperature)[p]. Anchors without a partner are
  skipped; the result is the mean over contributing anchors, or 0 if none.
  """
  if z.ndim != 2:
    raise ShapeError(f"contrastive_loss expects (B, d) representations, got {z.shape}")
  B = z.shape[0]
  if B < 2:
    raise ShapeError(f"contrastive_loss needs at least 2 episodes, got {B}")
  y = np.asarray(labels).astype(np.int64).reshape(-1)
  if y.shape[0] != B:
    raise ShapeError(f"contrastive_loss: {y.shape[0]} labels for {B} episodes")
  if not temperature > 0:
    raise ShapeError(f"contrastive temperature must be positive, got {temperature}")
  others = ~np.eye(B, dtype=bool)
  positives = (y[:, None] == y[None, :]) & others
  n_pos = positives.sum(axis=1)
  contributing = n_pos > 0
  n_contrib = int(contributing.sum())
  if n_contrib == 0:
    return Tensor(0.0)
  sim = ops.scale(ops.matmul(z, ops.transpose(z)), 1.0 / temperature)
  logp = ops.row_log_softmax(sim, others)
  weights = np.where(positives, 1.0, 0.0) / np.maximum(n_pos, 1)[:, None] / n_contrib
  return ops.neg(ops.sum_(ops.mul(logp, weights)))

def batch_bce(logits: Tensor, mask: BoolArray, labels: Sequence[Union[int, bool, float]]) -> Tensor:
  """Mean over the batch of bce_loss(mil_pool(episode logits))."""
  B = logits.shape[0]
  if B == 0:
    raise ShapeError("batch_bce on an empty batch")
  total: Tensor = Tensor(0.0)
  for b in range(B):
    total = ops.add(total, bce_loss(mil_pool(ops.slice_(logits, b), mask[b], labels[b]), labels[b]))
  return ops.scale(total, 1.0 / B)
