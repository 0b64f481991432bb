#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Model configuration, the parameter registry, and checkpoint files

A checkpoint file is one JSON header line (sorted keys, UTF-8) terminated by
a newline, followed by every array of the header's "arrays" list as
little-endian float64 values, in that order. Adam moment estimates are
stored as extra arrays named "adam_m/<param>" and "adam_v/<param>" so that
training can resume exactly.
"""

from typing import Dict, List, Optional, Tuple, Iterator, Mapping, cast
from dataclasses import dataclass, field

import json
import logging

import numpy as np

from ..exceptions import ConfigError, DatasetError, ShapeError
from ..internal_types import FloatArray, JsonableDict
from ..numerics import Tensor, parameter, AdamState
from ..timid_config import dataclass_to_jsonable, dataclass_from_mapping, require_positive, require_in
from ..util import derive_seed, write_bytes_atomic

logger = logging.getLogger(__name__)

VARIANTS = ('full', 'temporal_only', 'semantic_only', 'global_only')

PARAM_NAMES: Tuple[str, ...] = (
    'w_in',
    'w_qt', 'w_kt', 'w_vt',
    'gamma', 'beta', 'alpha',
    'w_q', 'w_k', 'w_v',
    'ln_gain', 'ln_bias',
    'w_o', 'b_o',
  )

CHECKPOINT_FORMAT = 'timid-checkpoint'
CHECKPOINT_VERSION = 1
BLOB_DTYPE = np.dtype('<f8')

INITIAL_GAMMA = 0.1
INITIAL_BETA = 0.0
INITIAL_ALPHA = 0.0

@dataclass(frozen=True)
class ModelConfig:
  feature_dim: int = 64
  d_model: int = 32
  variant: str = 'full'
  seed: int = 0
  """Parameter initialization seed"""
  prompt_seed: int = 0
  """Token embedding seed"""

  def validate(self) -> None:
    require_positive('feature_dim', self.feature_dim)
    require_positive('d_model', self.d_model)
    require_in('variant', self.variant, VARIANTS)

  def to_jsonable(self) -> JsonableDict:
    return dataclass_to_jsonable(self)

  def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
    D, d = self.feature_dim, self.d_model
    return {
        'w_in': (D, d),
        'w_qt': (d, d),
        'w_kt': (d, d),
        'w_vt': (d, d),
        'gamma': (),
        'beta': (),
        'alpha': (),
        'w_q': (d, d),
        'w_k': (d, d),
        'w_v': (d, d),
        'ln_gain': (d,),
        'ln_bias': (d,),
        'w_o': (d, 1),
        'b_o': (),
      }

class ModelParams:
  """Named model parameters, in the fixed PARAM_NAMES order."""
  config: ModelConfig
  _tensors: Dict[str, Tensor]

  def __init__(self, config: ModelConfig, arrays: Mapping[str, FloatArray]):
    self.config = config
    shapes = config.param_shapes()
    missing = [n for n in PARAM_NAMES if n not in arrays]
    if len(missing) > 0:
      raise ShapeError(f"Missing model parameters: {missing}")
    self._tensors = {}
    for name in PARAM_NAMES:
      data = np.array(arrays[name], dtype=np.float64)
      if data.shape != shapes[name]:
        raise ShapeError(f"Parameter {name!r} has shape {data.shape}, expected {shapes[name]}")
      self._tensors[name] = parameter(data, name=name)

  def __getitem__(self, name: str) -> Tensor:
    return self._tensors[name]

  def __iter__(self) -> Iterator[str]:
    return iter(PARAM_NAMES)

  def __len__(self) -> int:
    return len(PARAM_NAMES)

  def items(self) -> List[Tuple[str, Tensor]]:
    return [(n, self._tensors[n]) for n in PARAM_NAMES]

  def tensors(self) -> Dict[str, Tensor]:
    return dict(self._tensors)

  def arrays(self) -> Dict[str, FloatArray]:
    return {n: self._tensors[n].data for n in PARAM_NAMES}

  def num_parameters(self) -> int:
    return int(sum(t.data.size for t in self._tensors.values()))

  def is_finite(self) -> bool:
    return all(bool(np.all(np.isfinite(t.data))) for t in self._tensors.values())

  def copy(self) -> 'ModelParams':
    return ModelParams(self.config, {n: a.copy() for n, a in self.arrays().items()})

def init_params(config: ModelConfig) -> ModelParams:
  """Fresh parameters: weight matrices uniform in +/- 1/sqrt(fan_in), prior and
     gate scalars at their fixed starting values, identity layer norm, zero bias."""
  config.validate()
  arrays: Dict[str, FloatArray] = {}
  for name, shape in config.param_shapes().items():
    if name in ('gamma', 'beta', 'alpha', 'b_o'):
      value = {'gamma': INITIAL_GAMMA, 'beta': INITIAL_BETA, 'alpha': INITIAL_ALPHA, 'b_o': 0.0}[name]
      arrays[name] = np.full(shape, value, dtype=np.float64)
    elif name == 'ln_gain':
      arrays[name] = np.ones(shape, dtype=np.float64)
    elif name == 'ln_bias':
      arrays[name] = np.zeros(shape, dtype=np.float64)
    else:
      bound = 1.0 / np.sqrt(shape[0])
      rng = np.random.default_rng(derive_seed(config.seed, 'init', name))
      arrays[name] = rng.uniform(-bound, bound, size=shape)
  return ModelParams(config, arrays)

@dataclass
class Checkpoint:
  params: ModelParams
  task_prompt: str
  mistake_prompt: str
  epochs_completed: int = 0
  optimizer: Optional[AdamState] = None
  metadata: JsonableDict = field(default_factory=dict)
  """Free-form provenance (train config, dataset hash); stored in the header"""

  @property
  def config(self) -> ModelConfig:
    return self.params.config

  def _arrays(self) -> List[Tuple[str, FloatArray]]:
    result = [(n, a) for n, a in self.params.arrays().items()]
    if self.optimizer is not None:
      for prefix, moments in (('adam_m/', self.optimizer.m), ('adam_v/', self.optimizer.v)):
        for n in PARAM_NAMES:
          if n in moments:
            result.append((prefix + n, moments[n]))
    return result

  def to_bytes(self) -> bytes:
    arrays = self._arrays()
    header: JsonableDict = {
        'format': CHECKPOINT_FORMAT,
        'version': CHECKPOINT_VERSION,
        'model': self.config.to_jsonable(),
        'prompts': {'task_prompt': self.task_prompt, 'mistake_prompt': self.mistake_prompt},
        'epochs_completed': self.epochs_completed,
        'adam_step': None if self.optimizer is None else self.optimizer.step,
        'metadata': self.metadata,
        'arrays': [{'name': n, 'shape': list(a.shape)} for n, a in arrays],
      }
    head = json.dumps(header, sort_keys=True, separators=(',', ':'), allow_nan=False).encode('utf-8') + b'\n'
    blob = b''.join(np.ascontiguousarray(a, dtype=BLOB_DTYPE).tobytes() for _, a in arrays)
    return head + blob

  def save(self, path: str) -> None:
    if not self.params.is_finite():
      raise ShapeError("Refusing to save a checkpoint with non-finite parameters")
    write_bytes_atomic(path, self.to_bytes())
    logger.info("Wrote checkpoint %s (%d parameters)", path, self.params.num_parameters())

def checkpoint_from_bytes(data: bytes, source: str='<bytes>') -> Checkpoint:
  newline = data.find(b'\n')
  if newline < 0:
    raise DatasetError(f"Checkpoint {source} has no header line")
  try:
    header = json.loads(data[:newline].decode('utf-8'))
  except (UnicodeDecodeError, json.JSONDecodeError) as e:
    raise DatasetError(f"Checkpoint {source} has a malformed header: {e}") from e
  if not isinstance(header, dict) or header.get('format') != CHECKPOINT_FORMAT:
    raise DatasetError(f"{source} is not a timid checkpoint")
  if header.get('version') != CHECKPOINT_VERSION:
    raise DatasetError(f"Checkpoint {source} has unsupported version {header.get('version')}")
  try:
    config = dataclass_from_mapping(ModelConfig, cast(Dict, header.get('model', {})), 'model')
    config.validate()
  except ConfigError as e:
    raise DatasetError(f"Checkpoint {source} has an invalid model config: {e}") from e
  blob = np.frombuffer(data[newline + 1:], dtype=BLOB_DTYPE)
  arrays: Dict[str, FloatArray] = {}
  offset = 0
  for entry in header.get('arrays', []):
    shape = tuple(int(x) for x in entry['shape'])
    size = int(np.prod(shape)) if len(shape) > 0 else 1
    if offset + size > blob.size:
      raise DatasetError(f"Checkpoint {source} is truncated")
    arrays[str(entry['name'])] = blob[offset:offset + size].astype(np.float64).reshape(shape)
    offset += size
  if offset != blob.size:
    raise DatasetError(f"Checkpoint {source} has {blob.size - offset} trailing values")
  try:
    params = ModelParams(config, {n: arrays[n] for n in PARAM_NAMES if n in arrays})
  except ShapeError as e:
    raise DatasetError(f"Checkpoint {source}: {e}") from e
  optimizer: Optional[AdamState] = None
  if header.get('adam_step') is not None:
    optimizer = AdamState(
        step=int(header['adam_step']),
        m={n[len('adam_m/'):]: a for n, a in arrays.items() if n.startswith('adam_m/')},
        v={n[len('adam_v/'):]: a for n, a in arrays.items() if n.startswith('adam_v/')},
      )
  prompts = header.get('prompts') or {}
  return Checkpoint(
      params=params,
      task_prompt=str(prompts.get('task_prompt', '')),
      mistake_prompt=str(prompts.get('mistake_prompt', '')),
      epochs_completed=int(header.get('epochs_completed', 0)),
      optimizer=optimizer,
      metadata=cast(JsonableDict, header.get('metadata', {})),
    )

def load_checkpoint(path: str) -> Checkpoint:
  try:
    with open(path, 'rb') as f:
      data = f.read()
  except OSError as e:
    raise DatasetError(f"Cannot read checkpoint {path}: {e}") from e
  return checkpoint_from_bytes(data, path)
