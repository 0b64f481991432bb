#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""
Package timid_tools.eval scores episodes and measures frame-level detection quality.
"""

from .metrics import average_precision, average_recall, f1_from_ap_ar, point_metrics, threshold_counts
from .scoring import (
    EpisodeScores, score_features, score_dataset, chance_scores, scores_from_file,
    check_compatible, CHANCE_NOISE,
  )
from .report import (
    ScoreReport, build_report, write_report, load_metrics, load_score_record,
    score_record_path, METRICS_FILE, SCORES_DIR, DEFAULT_THRESHOLD,
  )
from .plot import mistake_spans, score_figure, render_svg, plot_scores
