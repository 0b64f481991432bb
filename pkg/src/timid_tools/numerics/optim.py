#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Adam parameter updater with bias-corrected moment estimates"""

from typing import Dict, Mapping, Optional
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ShapeError
from ..internal_types import FloatArray
from .tensor import Tensor

@dataclass
class AdamState:
  step: int = 0
  m: Dict[str, FloatArray] = field(default_factory=dict)
  v: Dict[str, FloatArray] = field(default_factory=dict)

def adam_step(
      params: Mapping[str, Tensor],
      grads: Mapping[str, Optional[FloatArray]],
      state: AdamState,
      lr: float=1e-3,
      beta1: float=0.9,
      beta2: float=0.999,
      eps: float=1e-8,
    ) -> AdamState:
  """Applies one Adam update to params in place and returns the advanced state.

  Parameters whose gradient is missing (None or absent) are left untouched,
  moments included.
  """
  state.step += 1
  bc1 = 1.0 - beta1 ** state.step
  bc2 = 1.0 - beta2 ** state.step
  for name, p in params.items():
    g = grads.get(name)
    if g is None:
      continue
    if g.shape != p.shape:
      raise ShapeError(f"Gradient for {name!r} has shape {g.shape}, parameter has {p.shape}")
    m = state.m.get(name)
    v = state.v.get(name)
    if m is None or v is None:
      m = np.zeros_like(p.data)
      v = np.zeros_like(p.data)
    elif m.shape != p.shape or v.shape != p.shape:
      raise ShapeError(f"Optimizer state for {name!r} has shape {m.shape}, parameter has {p.shape}")
    # 0-d parameters stay ndarrays
    m = np.asarray(beta1 * m + (1.0 - beta1) * g)
    v = np.asarray(beta2 * v + (1.0 - beta2) * (g * g))
    state.m[name] = m
    state.v[name] = v
    p.data = np.asarray(p.data - lr * (m / bc1) / (np.sqrt(v / bc2) + eps))
  return state
