#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""The mistake detector's forward pass

Shapes: B episodes, T steps (padded), D feature width, d model width, L
prompt tokens. Inputs are a (B, T, D) feature batch and a (B, T) validity
mask; a single (T, D) episode is treated as a batch of one.
"""

from typing import Dict, Optional, Tuple, Union
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ShapeError
from ..internal_types import FloatArray, BoolArray
from ..numerics import (
    Tensor, as_tensor, ops,
  )
from .params import ModelParams
from .prompts import PromptEmbedding

def positional_encoding(T: int, d: int) -> FloatArray:
  """Sinusoidal encoding: PE[t, 2i] = sin(t / 10000^(2i/d)), PE[t, 2i+1] = cos(same)."""
  pe = np.zeros((T, d), dtype=np.float64)
  t = np.arange(T, dtype=np.float64)[:, None]
  two_i = np.arange(0, d, 2, dtype=np.float64)
  angle = t / np.power(10000.0, two_i / d)
  pe[:, 0::2] = np.sin(angle)
  pe[:, 1::2] = np.cos(angle[:, :d // 2])
  return pe

def squared_offsets(T: int) -> FloatArray:
  idx = np.arange(T, dtype=np.float64)
  return (idx[:, None] - idx[None, :]) ** 2

def attention_prior(gamma: Tensor, beta: Tensor, T: int) -> Tensor:
  """G[i, j] = exp(-|gamma * (i - j)^2 + beta|)"""
  return ops.exp(ops.neg(ops.abs_(ops.add(ops.mul(gamma, squared_offsets(T)), beta))))

def causal_mask(T: int) -> BoolArray:
  return np.tril(np.ones((T, T), dtype=bool))

@dataclass
class ForwardTrace:
  logits: Tensor
  """(B, T) per-step logits; padded steps are meaningless"""
  z_time: Tensor
  z_sem: Tensor
  mask: BoolArray
  attention: Dict[str, FloatArray] = field(default_factory=dict)
  """Inspection copies: 'prior' (T, T), 'global' and 'local' (B, T, T), 'semantic' (B, T, L)"""

  @property
  def batch_size(self) -> int:
    return int(self.mask.shape[0])

  def step_logits(self, b: int=0) -> FloatArray:
    return self.logits.data[b][self.mask[b]]

  def step_probabilities(self, b: int=0) -> FloatArray:
    """Per valid step sigmoid(logit) of episode b."""
    return ops.sigmoid(self.step_logits(b)).numpy()

def _batched(features: Union[Tensor, FloatArray], mask: Optional[np.ndarray]) -> Tuple[Tensor, BoolArray]:
  x = as_tensor(features)
  if x.ndim == 2:
    x = ops.reshape(x, (1,) + x.shape)
    if mask is not None:
      mask = np.asarray(mask, dtype=bool).reshape(1, -1)
  if x.ndim != 3:
    raise ShapeError(f"features must have shape (T, D) or (B, T, D), got {x.shape}")
  B, T, _ = x.shape
  if T < 1:
    raise ShapeError("features need at least one step")
  m = np.ones((B, T), dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
  if m.shape != (B, T):
    raise ShapeError(f"mask shape {m.shape} does not match features {x.shape}")
  return x, m

def project_input(x: Tensor, params: ModelParams) -> Tensor:
  if x.shape[-1] != params.config.feature_dim:
    raise ShapeError(f"Feature width {x.shape[-1]} does not match the model's {params.config.feature_dim}")
  T = x.shape[1]
  return ops.add(ops.matmul(x, params['w_in']), positional_encoding(T, params.config.d_model))

def temporal_context(
      x_proj: Tensor,
      mask: BoolArray,
      params: ModelParams,
      use_local: bool=True,
      attention: Optional[Dict[str, FloatArray]]=None,
    ) -> Tensor:
  """Prior-biased dual-stream self-attention with sigmoid-gated fusion.

  The global stream attends to every valid step; the local stream only to
  valid steps j <= i. Rows of padded steps are zero.
  """
  if x_proj.ndim != 3 or x_proj.shape[:2] != mask.shape:
    raise ShapeError(f"temporal_context: x_proj {x_proj.shape} does not match mask {mask.shape}")
  d = x_proj.shape[-1]
  T = x_proj.shape[1]
  q = ops.matmul(x_proj, params['w_qt'])
  k = ops.matmul(x_proj, params['w_kt'])
  v = ops.matmul(x_proj, params['w_vt'])
  prior = attention_prior(params['gamma'], params['beta'], T)
  e = ops.add(ops.scale(ops.matmul(q, ops.transpose(k)), 1.0 / np.sqrt(d)), prior)
  key_valid = mask[:, None, :]
  row_valid = mask[:, :, None].astype(np.float64)
  w_global = ops.row_softmax(e, key_valid)
  c_global = ops.matmul(w_global, v)
  if attention is not None:
    attention['prior'] = prior.data.copy()
    attention['global'] = w_global.data.copy()
  if not use_local:
    return ops.mul(c_global, row_valid)
  w_local = ops.row_softmax(e, key_valid & causal_mask(T)[None, :, :])
  c_local = ops.matmul(w_local, v)
  if attention is not None:
    attention['local'] = w_local.data.copy()
  gate = ops.sigmoid(params['alpha'])
  fused = ops.add(ops.mul(gate, c_global), ops.mul(ops.sub(1.0, gate), c_local))
  return ops.mul(fused, row_valid)

def semantic_alignment(
      z_time: Tensor,
      z_task: Union[Tensor, FloatArray],
      params: ModelParams,
      use_text: bool=True,
      attention: Optional[Dict[str, FloatArray]]=None,
    ) -> Tensor:
  """Cross-attention from steps (queries) to prompt tokens (keys, values),
     then LayerNorm(context + Q). Without text the context term is dropped."""
  text = as_tensor(z_task)
  d = z_time.shape[-1]
  if text.ndim != 2 or text.shape[0] < 1:
    raise ShapeError(f"Prompt matrix must have shape (L, d) with L >= 1, got {text.shape}")
  if text.shape[1] != d:
    raise ShapeError(f"Prompt width {text.shape[1]} does not match model width {d}")
  q = ops.matmul(z_time, params['w_q'])
  if not use_text:
    return ops.layer_norm(q, params['ln_gain'], params['ln_bias'])
  k = ops.matmul(text, params['w_k'])
  v = ops.matmul(text, params['w_v'])
  w = ops.row_softmax(ops.scale(ops.matmul(q, ops.transpose(k)), 1.0 / np.sqrt(d)))
  if attention is not None:
    attention['semantic'] = w.data.copy()
  context = ops.matmul(w, v)
  return ops.layer_norm(ops.add(context, q), params['ln_gain'], params['ln_bias'])

def classify(z_sem: Tensor, params: ModelParams) -> Tensor:
  """One logit per step: z_sem[t] . w_o + b_o, shape (B, T)."""
  out = ops.matmul(z_sem, params['w_o'])
  return ops.add(ops.reshape(out, out.shape[:-1]), params['b_o'])

def forward(
      features: Union[Tensor, FloatArray],
      prompts: Union[PromptEmbedding, FloatArray],
      params: ModelParams,
      mask: Optional[np.ndarray]=None,
      keep_attention: bool=False,
    ) -> ForwardTrace:
  """Runs the detector on a feature batch. Records on the active Tape, if any."""
  x, m = _batched(features, mask)
  z_task = prompts.matrix if isinstance(prompts, PromptEmbedding) else prompts
  variant = params.config.variant
  attention: Optional[Dict[str, FloatArray]] = {} if keep_attention else None
  x_proj = project_input(x, params)
  row_valid = m[:, :, None].astype(np.float64)
  if variant == 'semantic_only':
    z_time = ops.mul(x_proj, row_valid)
  else:
    z_time = temporal_context(x_proj, m, params, use_local=(variant != 'global_only'), attention=attention)
  z_sem = semantic_alignment(z_time, z_task, params, use_text=(variant != 'temporal_only'), attention=attention)
  z_sem = ops.mul(z_sem, row_valid)
  logits = classify(z_sem, params)
  return ForwardTrace(logits=logits, z_time=z_time, z_sem=z_sem, mask=m, attention=attention or {})
