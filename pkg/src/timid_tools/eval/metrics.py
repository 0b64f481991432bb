#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Frame-level ranking metrics, reported as percentages

Both AP and AR are computed over the distinct score thresholds of the
ranking: at threshold s every step scoring >= s is predicted positive, so
tied steps enter together. AR is the mean recall over those thresholds.
"""

from typing import Sequence, Tuple, Union

import numpy as np
from sklearn.metrics import average_precision_score, precision_score, recall_score

from ..exceptions import MetricError
from ..internal_types import FloatArray

ArrayLike = Union[FloatArray, Sequence[float]]

def _checked(scores: ArrayLike, labels: Union[ArrayLike, Sequence[bool]]) -> Tuple[FloatArray, np.ndarray]:
  s = np.asarray(scores, dtype=np.float64).reshape(-1)
  y = np.asarray(labels).astype(bool).reshape(-1)
  if s.shape != y.shape:
    raise MetricError(f"{s.size} scores for {y.size} labels")
  if s.size == 0:
    raise MetricError("No steps to evaluate")
  if not np.all(np.isfinite(s)):
    raise MetricError("Scores must be finite")
  if not y.any():
    raise MetricError("Metric is undefined without positive labels")
  return s, y

def threshold_counts(scores: ArrayLike, labels: Union[ArrayLike, Sequence[bool]]) -> Tuple[np.ndarray, np.ndarray]:
  """Cumulative (true positives, false positives) at each distinct threshold, highest first."""
  s, y = _checked(scores, labels)
  order = np.lexsort((y, -s))  # descending score; negatives first within a tie
  s_sorted = s[order]
  tp = np.cumsum(y[order])
  fp = np.cumsum(~y[order])
  last_of_group = np.r_[s_sorted[1:] != s_sorted[:-1], True]
  return tp[last_of_group], fp[last_of_group]

def average_precision(scores: ArrayLike, labels: Union[ArrayLike, Sequence[bool]]) -> float:
  """Sum over thresholds of (R_n - R_{n-1}) * P_n, in percent."""
  s, y = _checked(scores, labels)
  return 100.0 * float(average_precision_score(y.astype(np.int64), s))

def average_recall(scores: ArrayLike, labels: Union[ArrayLike, Sequence[bool]]) -> float:
  """Mean recall over the distinct score thresholds, in percent."""
  tp, _ = threshold_counts(scores, labels)
  return 100.0 * float(np.mean(tp / tp[-1]))

def f1_from_ap_ar(ap: float, ar: float) -> float:
  if ap + ar <= 0:
    return 0.0
  return 2.0 * ap * ar / (ap + ar)

def point_metrics(scores: ArrayLike, labels: Union[ArrayLike, Sequence[bool]], threshold: float=0.5) -> Tuple[float, float]:
  """(precision, recall) in percent when steps scoring >= threshold are predicted mistakes."""
  s, y = _checked(scores, labels)
  predicted = (s >= threshold).astype(np.int64)
  truth = y.astype(np.int64)
  return (
      100.0 * float(precision_score(truth, predicted, zero_division=0)),
      100.0 * float(recall_score(truth, predicted, zero_division=0)),
    )
