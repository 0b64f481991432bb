#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Score reports: micro-averaged metrics over a split plus per-episode score records

Output directory layout::

    metrics.json          AP, AR, F1, point metrics, counts and provenance
    scores/<id>.json      one score record per episode (input to `timid plot`)
"""

from typing import Dict, List, Optional, Sequence, cast
from dataclasses import dataclass, field

import os
import logging

import numpy as np

from ..exceptions import DatasetError
from ..internal_types import JsonableDict
from ..util import write_json_file, load_json_file
from .metrics import average_precision, average_recall, f1_from_ap_ar, point_metrics
from .scoring import EpisodeScores

logger = logging.getLogger(__name__)

METRICS_FILE = 'metrics.json'
SCORES_DIR = 'scores'
DEFAULT_THRESHOLD = 0.5

@dataclass
class ScoreReport:
  episodes: List[EpisodeScores]
  ap: float
  ar: float
  f1: float
  threshold: float
  precision_at_threshold: float
  recall_at_threshold: float
  num_steps: int
  num_positive_steps: int
  provenance: JsonableDict = field(default_factory=dict)

  @property
  def num_episodes(self) -> int:
    return len(self.episodes)

  def metrics_jsonable(self) -> JsonableDict:
    return {
        'ap': self.ap,
        'ar': self.ar,
        'f1': self.f1,
        'threshold': self.threshold,
        'precision_at_threshold': self.precision_at_threshold,
        'recall_at_threshold': self.recall_at_threshold,
        'counts': {
            'episodes': self.num_episodes,
            'steps': self.num_steps,
            'positive_steps': self.num_positive_steps,
          },
        'provenance': self.provenance,
      }

def build_report(
      episodes: Sequence[EpisodeScores],
      threshold: float=DEFAULT_THRESHOLD,
      provenance: Optional[JsonableDict]=None,
    ) -> ScoreReport:
  """Concatenates every episode's steps and computes frame-level metrics.

  AP and AR are rounded to two decimals first; F1 is the harmonic mean of the
  rounded values, so a reader can recompute it from the report.
  """
  ordered = sorted(episodes, key=lambda e: e.episode_id)
  if len(ordered) == 0:
    raise DatasetError("No episodes to report on")
  scores = np.concatenate([np.asarray(e.probabilities, dtype=np.float64) for e in ordered])
  labels = np.concatenate([np.asarray(e.step_labels, dtype=bool) for e in ordered])
  ap = round(average_precision(scores, labels), 2)
  ar = round(average_recall(scores, labels), 2)
  precision, recall = point_metrics(scores, labels, threshold)
  return ScoreReport(
      episodes=list(ordered),
      ap=ap,
      ar=ar,
      f1=round(f1_from_ap_ar(ap, ar), 2),
      threshold=threshold,
      precision_at_threshold=round(precision, 2),
      recall_at_threshold=round(recall, 2),
      num_steps=int(scores.size),
      num_positive_steps=int(labels.sum()),
      provenance=dict(provenance or {}),
    )

def write_report(report: ScoreReport, out_dir: str) -> str:
  """Writes metrics.json and the per-episode score records; returns the metrics path."""
  metrics_path = os.path.join(out_dir, METRICS_FILE)
  try:
    for e in report.episodes:
      write_json_file(score_record_path(out_dir, e.episode_id), e.to_jsonable())
    write_json_file(metrics_path, report.metrics_jsonable())
  except OSError as e:
    raise DatasetError(f"Failed writing report to {out_dir}: {e}") from e
  logger.info("Wrote metrics for %d episodes to %s", report.num_episodes, metrics_path)
  return metrics_path

def score_record_path(out_dir: str, episode_id: str) -> str:
  return os.path.join(out_dir, SCORES_DIR, f"{episode_id}.json")

def load_metrics(path: str) -> JsonableDict:
  if os.path.isdir(path):
    path = os.path.join(path, METRICS_FILE)
  try:
    return cast(JsonableDict, load_json_file(path))
  except (OSError, ValueError) as e:
    raise DatasetError(f"Cannot read metrics file {path}: {e}") from e

def load_score_record(path: str) -> EpisodeScores:
  try:
    data = load_json_file(path)
  except (OSError, ValueError) as e:
    raise DatasetError(f"Cannot read score record {path}: {e}") from e
  if not isinstance(data, dict):
    raise DatasetError(f"Score record {path} is not a JSON object")
  return EpisodeScores.from_jsonable(cast(Dict, data))
