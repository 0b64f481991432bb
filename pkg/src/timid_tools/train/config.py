#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Training hyperparameters"""

from dataclasses import dataclass

from ..exceptions import ConfigError
from ..internal_types import JsonableDict
from ..timid_config import dataclass_to_jsonable, require_positive

@dataclass(frozen=True)
class TrainConfig:
  learning_rate: float = 1e-3
  batch_size: int = 16
  epochs: int = 50
  temperature: float = 0.1
  contrastive_weight: float = 1.0
  seed: int = 0
  checkpoint_every: int = 0
  """Write an intermediate checkpoint every N epochs; 0 writes only the final one"""
  beta1: float = 0.9
  beta2: float = 0.999
  eps: float = 1e-8

  def validate(self) -> None:
    require_positive('learning_rate', self.learning_rate)
    require_positive('batch_size', self.batch_size)
    require_positive('epochs', self.epochs)
    require_positive('temperature', self.temperature)
    require_positive('eps', self.eps)
    if self.contrastive_weight < 0:
      raise ConfigError(f"contrastive_weight must be non-negative, got {self.contrastive_weight}")
    if self.checkpoint_every < 0:
      raise ConfigError(f"checkpoint_every must be non-negative, got {self.checkpoint_every}")
    for name in ('beta1', 'beta2'):
      value = getattr(self, name)
      if not 0.0 <= value < 1.0:
        raise ConfigError(f"{name} must be in [0, 1), got {value}")

  def to_jsonable(self) -> JsonableDict:
    return dataclass_to_jsonable(self)
