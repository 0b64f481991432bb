#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Per-step mistake probabilities for episodes and dataset splits"""

from typing import Dict, List, Optional, Tuple, Mapping, cast
from dataclasses import dataclass

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..exceptions import DatasetError
from ..internal_types import FloatArray, JsonableDict
from ..model import ModelParams, PromptEmbedding, forward
from ..simgen import Dataset, EpisodeData
from ..util import derive_seed, load_json_file

logger = logging.getLogger(__name__)

CHANCE_NOISE = 1e-6

@dataclass(frozen=True)
class EpisodeScores:
  episode_id: str
  probabilities: Tuple[float, ...]
  step_labels: Tuple[bool, ...]

  @property
  def num_steps(self) -> int:
    return len(self.probabilities)

  @property
  def video_label(self) -> bool:
    return any(self.step_labels)

  def to_jsonable(self) -> JsonableDict:
    return {
        'episode_id': self.episode_id,
        'num_steps': self.num_steps,
        'video_label': self.video_label,
        'probabilities': [float(p) for p in self.probabilities],
        'step_labels': [bool(x) for x in self.step_labels],
      }

  @classmethod
  def from_jsonable(cls, data: Mapping) -> 'EpisodeScores':
    try:
      result = cls(
          episode_id=str(data['episode_id']),
          probabilities=tuple(float(p) for p in data['probabilities']),
          step_labels=tuple(bool(x) for x in data['step_labels']),
        )
    except (KeyError, TypeError, ValueError) as e:
      raise DatasetError(f"Malformed score record: {e}") from e
    if len(result.probabilities) != len(result.step_labels):
      raise DatasetError(
          f"Score record {result.episode_id} has {len(result.probabilities)} scores for {len(result.step_labels)} labels")
    return result

def score_features(params: ModelParams, prompts: PromptEmbedding, features: FloatArray) -> FloatArray:
  """Sigmoid of every step logit of one (T, D) episode. No pooling."""
  if features.ndim != 2 or features.shape[1] != params.config.feature_dim:
    raise DatasetError(
        f"Feature matrix {features.shape} does not match the model's feature width {params.config.feature_dim}")
  return forward(features, prompts, params).step_probabilities(0)

def check_compatible(params: ModelParams, prompts: PromptEmbedding, dataset: Dataset) -> None:
  if dataset.feature_dim != params.config.feature_dim:
    raise DatasetError(
        f"Dataset feature width {dataset.feature_dim} does not match checkpoint feature width {params.config.feature_dim}")
  if prompts.d != params.config.d_model:
    raise DatasetError(f"Prompt width {prompts.d} does not match model width {params.config.d_model}")

def score_dataset(
      params: ModelParams,
      prompts: PromptEmbedding,
      dataset: Dataset,
      split: Optional[str]='test',
      workers: int=1,
    ) -> List[EpisodeScores]:
  """Scores every episode of a split. Parameters are only read, so episodes may run in parallel."""
  check_compatible(params, prompts, dataset)
  def _one(ep: EpisodeData) -> EpisodeScores:
    probs = score_features(params, prompts, ep.features)
    return EpisodeScores(ep.episode_id, tuple(float(p) for p in probs), ep.step_labels)
  episodes = list(dataset.episodes(split))
  if workers > 1:
    with ThreadPoolExecutor(max_workers=workers) as pool:
      result = list(pool.map(_one, episodes))
  else:
    result = [_one(ep) for ep in episodes]
  logger.info("Scored %d episodes", len(result))
  return result

def chance_scores(dataset: Dataset, split: Optional[str]='test', seed: int=0) -> List[EpisodeScores]:
  """Constant 0.5 scores with tiny seeded noise to break ties."""
  result = []
  for ep in dataset.episodes(split):
    rng = np.random.default_rng(derive_seed(seed, 'chance', ep.episode_id))
    probs = 0.5 + CHANCE_NOISE * rng.standard_normal(ep.num_steps)
    result.append(EpisodeScores(ep.episode_id, tuple(float(p) for p in probs), ep.step_labels))
  return result

def scores_from_file(path: str, dataset: Dataset, split: Optional[str]='test') -> List[EpisodeScores]:
  """Pairs externally computed scores with ground truth.

  The file is a JSON object mapping episode id to a list of per-step scores.
  """
  try:
    data = load_json_file(path)
  except (OSError, ValueError) as e:
    raise DatasetError(f"Cannot read scores file {path}: {e}") from e
  if not isinstance(data, dict):
    raise DatasetError(f"Scores file {path} must hold a JSON object of episode id -> scores")
  given = cast(Dict[str, List[float]], data)
  result = []
  for ep in dataset.episodes(split):
    if ep.episode_id not in given:
      raise DatasetError(f"Scores file {path} has no scores for episode {ep.episode_id}")
    probs = tuple(float(p) for p in given[ep.episode_id])
    if len(probs) != ep.num_steps:
      raise DatasetError(f"Scores file {path}: episode {ep.episode_id} has {len(probs)} scores, expected {ep.num_steps}")
    result.append(EpisodeScores(ep.episode_id, probs, ep.step_labels))
  return result
