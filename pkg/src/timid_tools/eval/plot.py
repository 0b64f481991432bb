#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Score-versus-step SVG plots with ground-truth mistake bands"""

from typing import List, Optional, Sequence, Tuple

import io
import logging

import matplotlib
matplotlib.use("Agg")
from matplotlib.figure import Figure  # pylint: disable=wrong-import-position

from ..exceptions import DatasetError
from ..util import write_bytes_atomic
from .scoring import EpisodeScores

logger = logging.getLogger(__name__)

SVG_HASH_SALT = 'timid'
PREDICTION_COLOR = 'tab:green'
MISTAKE_COLOR = 'tab:red'

def mistake_spans(step_labels: Sequence[bool]) -> List[Tuple[int, int]]:
  """Maximal runs of mistake steps as half-open [start, end) index pairs."""
  spans: List[Tuple[int, int]] = []
  start: Optional[int] = None
  for t, flag in enumerate(step_labels):
    if flag and start is None:
      start = t
    elif not flag and start is not None:
      spans.append((start, t))
      start = None
  if start is not None:
    spans.append((start, len(step_labels)))
  return spans

def score_figure(record: EpisodeScores, title: Optional[str]=None) -> Figure:
  if len(record.probabilities) != len(record.step_labels):
    raise DatasetError(
        f"Episode {record.episode_id}: {len(record.probabilities)} scores for {len(record.step_labels)} labels")
  fig = Figure(figsize=(8.0, 3.0))
  ax = fig.add_subplot(1, 1, 1)
  for start, end in mistake_spans(record.step_labels):
    ax.axvspan(start - 0.5, end - 0.5, color=MISTAKE_COLOR, alpha=0.25, linewidth=0)
  steps = list(range(record.num_steps))
  ax.plot(steps, list(record.probabilities), color=PREDICTION_COLOR, linewidth=1.5, label='predicted')
  ax.set_xlim(-0.5, max(record.num_steps - 0.5, 0.5))
  ax.set_ylim(0.0, 1.0)
  ax.set_xlabel('step')
  ax.set_ylabel('mistake probability')
  ax.set_title(title if title is not None else record.episode_id)
  fig.tight_layout()
  return fig

def render_svg(fig: Figure) -> bytes:
  buf = io.BytesIO()
  with matplotlib.rc_context({'svg.hashsalt': SVG_HASH_SALT, 'svg.fonttype': 'path'}):
    fig.savefig(buf, format='svg', metadata={'Date': None})
  return buf.getvalue()

def plot_scores(record: EpisodeScores, out_path: str, title: Optional[str]=None) -> str:
  """Writes the score plot of one episode as a self-contained SVG file."""
  write_bytes_atomic(out_path, render_svg(score_figure(record, title)))
  logger.info("Wrote plot %s", out_path)
  return out_path
