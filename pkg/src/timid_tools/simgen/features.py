#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Deterministic stand-in for a pretrained video backbone.

Each step's scene state is mapped through a fixed pseudo-random affine map and
a tanh. Proposition values are never fed in directly: a detector has to infer
vicinity from geometry.
"""

from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ShapeError
from ..internal_types import FloatArray
from ..ltl import PropositionState
from .arena import Arena

DEFAULT_FEATURE_DIM = 64
DEFAULT_FEATURE_NOISE_SIGMA = 0.05
DISPLACEMENT_SCALE = 10.0
DISTANCE_CAP = 3.0

def raw_state(positions: FloatArray, arena: Arena) -> FloatArray:
  """Per-step scene state, shape (T, 7 * robots):

  centred robot coordinates, per-robot displacement since the previous step
  (zero at step 0, scaled up), and each robot's distance to the lion, ball and
  depot in units of the vicinity diameter (capped).
  """
  if positions.ndim != 3 or positions.shape[-1] != 2:
    raise ShapeError(f"positions must have shape (T, robots, 2), got {positions.shape}")
  T, R, _ = positions.shape
  coords = (positions - 0.5).reshape(T, 2 * R)
  disp = np.zeros_like(positions)
  disp[1:] = positions[1:] - positions[:-1]
  disp = (disp * DISPLACEMENT_SCALE).reshape(T, 2 * R)
  sites = np.asarray([arena.lion_pos, arena.ball_pos, arena.depot_pos], dtype=np.float64)
  dists = np.linalg.norm(positions[:, :, None, :] - sites[None, None, :, :], axis=-1)
  dists = np.minimum(dists / (2.0 * arena.vicinity_radius), DISTANCE_CAP).reshape(T, 3 * R)
  return np.concatenate([coords, disp, dists], axis=1)

def encoder_map(input_dim: int, feature_dim: int, encoder_seed: int) -> Tuple[FloatArray, FloatArray]:
  """The fixed affine map (W: input_dim x feature_dim, b: feature_dim) for a seed."""
  if input_dim < 1 or feature_dim < 1:
    raise ShapeError(f"Encoder dimensions must be positive, got {input_dim} -> {feature_dim}")
  rng = np.random.default_rng(encoder_seed)
  w = rng.normal(0.0, 1.0 / np.sqrt(input_dim), size=(input_dim, feature_dim))
  b = rng.normal(0.0, 0.1, size=(feature_dim,))
  return w, b

def encode_state(
      state: FloatArray,
      feature_dim: int=DEFAULT_FEATURE_DIM,
      encoder_seed: int=0,
      feature_noise_sigma: float=DEFAULT_FEATURE_NOISE_SIGMA,
      noise_seed: Optional[int]=None,
    ) -> FloatArray:
  """tanh(state @ W + b) plus Gaussian noise, for a (T, input_dim) state matrix."""
  if state.ndim != 2:
    raise ShapeError(f"state must be a (T, input_dim) matrix, got shape {state.shape}")
  w, b = encoder_map(state.shape[1], feature_dim, encoder_seed)
  features = np.tanh(state @ w + b)
  if feature_noise_sigma > 0:
    rng = np.random.default_rng(noise_seed)
    features = features + rng.normal(0.0, feature_noise_sigma, size=features.shape)
  return features

def encode_features(
      positions: FloatArray,
      prop_trace: Sequence[PropositionState],
      arena: Arena,
      feature_dim: int=DEFAULT_FEATURE_DIM,
      encoder_seed: int=0,
      feature_noise_sigma: float=DEFAULT_FEATURE_NOISE_SIGMA,
      noise_seed: Optional[int]=None,
    ) -> FloatArray:
  """Maps an episode's positions to its (T, feature_dim) feature matrix.

  Raises:
      ShapeError: the proposition trace and positions disagree on T, or a dimension is invalid.
  """
  if len(prop_trace) != positions.shape[0]:
    raise ShapeError(f"Proposition trace has {len(prop_trace)} steps but positions have {positions.shape[0]}")
  return encode_state(raw_state(positions, arena), feature_dim, encoder_seed, feature_noise_sigma, noise_seed)
