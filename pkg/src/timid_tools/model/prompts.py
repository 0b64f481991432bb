#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Prompt tokenization and deterministic token embeddings"""

from typing import List, Tuple
from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigError
from ..internal_types import FloatArray
from ..util import derive_seed

def tokenize_prompt(text: str) -> List[str]:
  return text.lower().split()

def token_vector(token: str, d: int, seed: int) -> FloatArray:
  """A unit vector that depends only on (token, d, seed)."""
  rng = np.random.default_rng(derive_seed(seed, 'token', token))
  v = rng.standard_normal(d)
  n = float(np.linalg.norm(v))
  while n == 0.0:
    v = rng.standard_normal(d)
    n = float(np.linalg.norm(v))
  return v / n

@dataclass(frozen=True)
class PromptEmbedding:
  task_prompt: str
  mistake_prompt: str
  tokens: Tuple[str, ...]
  matrix: FloatArray
  """(L_p, d) token rows: the task prompt's tokens followed by the mistake prompt's"""
  seed: int

  @property
  def num_tokens(self) -> int:
    return len(self.tokens)

  @property
  def d(self) -> int:
    return int(self.matrix.shape[1])

def embed_prompts(task_prompt: str, mistake_prompt: str, d: int, seed: int=0) -> PromptEmbedding:
  """Embeds the concatenated task and mistake prompts, one row per token position."""
  if d < 1:
    raise ConfigError(f"Embedding width must be positive, got {d}")
  task_tokens = tokenize_prompt(task_prompt)
  mistake_tokens = tokenize_prompt(mistake_prompt)
  if len(task_tokens) == 0 or len(mistake_tokens) == 0:
    raise ConfigError(f"Prompts must be non-empty, got {task_prompt!r} and {mistake_prompt!r}")
  tokens = task_tokens + mistake_tokens
  matrix = np.stack([token_vector(tok, d, seed) for tok in tokens])
  return PromptEmbedding(
      task_prompt=task_prompt,
      mistake_prompt=mistake_prompt,
      tokens=tuple(tokens),
      matrix=matrix,
      seed=seed,
    )
