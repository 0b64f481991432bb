#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

import json
import os

import numpy as np
import pytest

from timid_tools.exceptions import MetricError, DatasetError
from timid_tools.model import ModelConfig, init_params, embed_prompts
from timid_tools.eval import (
    average_precision, average_recall, f1_from_ap_ar, point_metrics, threshold_counts,
    EpisodeScores, score_features, score_dataset, chance_scores, scores_from_file,
    build_report, write_report, load_metrics, load_score_record, score_record_path,
    mistake_spans, score_figure, render_svg, plot_scores,
  )

def sweep(scores, labels):
  """(precision, recall) at every distinct threshold, highest first, by direct enumeration."""
  s = np.asarray(scores, dtype=np.float64)
  y = np.asarray(labels, dtype=bool)
  result = []
  for thr in sorted(set(s.tolist()), reverse=True):
    predicted = s >= thr
    tp = int((predicted & y).sum())
    result.append((tp / int(predicted.sum()), tp / int(y.sum())))
  return result

def oracle_ap(scores, labels) -> float:
  total = 0.0
  prev_recall = 0.0
  for precision, recall in sweep(scores, labels):
    total += (recall - prev_recall) * precision
    prev_recall = recall
  return 100.0 * total

def oracle_ar(scores, labels) -> float:
  return 100.0 * float(np.mean([recall for _, recall in sweep(scores, labels)]))

def test_perfect_and_inverted_rankings():
  labels = [True, True, False, False, False]
  assert average_precision([0.9, 0.8, 0.3, 0.2, 0.1], labels) == pytest.approx(100.0)
  inverted = [1.0 - 0.1 * i for i in range(10)]
  assert average_precision(inverted, [False] * 9 + [True]) == pytest.approx(10.0)

def test_metrics_match_threshold_sweep():
  rng = np.random.default_rng(0)
  for _ in range(100):
    n = int(rng.integers(1, 201))
    # coarse scores so ties are common
    scores = np.round(rng.uniform(0.0, 1.0, n), int(rng.integers(1, 4)))
    labels = rng.random(n) < rng.uniform(0.05, 0.6)
    labels[int(rng.integers(0, n))] = True
    assert abs(average_precision(scores, labels) - oracle_ap(scores, labels)) < 1e-9
    assert abs(average_recall(scores, labels) - oracle_ar(scores, labels)) < 1e-9

def test_average_recall_examples():
  assert average_recall([0.3], [True]) == pytest.approx(100.0)
  # positives on top: recall 1/2, 1, 1, 1 over four distinct thresholds
  assert average_recall([0.9, 0.8, 0.2, 0.1], [True, True, False, False]) == pytest.approx(87.5)
  scores = np.asarray([0.1, 0.7, 0.4, 0.9, 0.2])
  labels = [False, True, True, False, False]
  assert average_recall(scores, labels) == pytest.approx(average_recall(np.exp(3.0 * scores), labels))

def test_threshold_counts_group_ties():
  tp, fp = threshold_counts([0.5, 0.5, 0.2], [True, False, True])
  assert tp.tolist() == [1, 2]
  assert fp.tolist() == [1, 1]

def test_metric_errors():
  with pytest.raises(MetricError):
    average_precision([0.1, 0.2], [False, False])
  with pytest.raises(MetricError):
    average_recall([], [])
  with pytest.raises(MetricError):
    average_precision([0.1, 0.2], [True])
  with pytest.raises(MetricError):
    average_recall([np.nan, 0.2], [True, False])

def test_f1():
  assert f1_from_ap_ar(58.21, 29.8) == pytest.approx(39.42, abs=0.01)
  assert f1_from_ap_ar(76.83, 35.89) == pytest.approx(49.1, abs=0.2)
  assert f1_from_ap_ar(42.0, 42.0) == pytest.approx(42.0)
  assert f1_from_ap_ar(0.0, 0.0) == 0.0

def test_point_metrics():
  precision, recall = point_metrics([0.9, 0.6, 0.4, 0.7], [True, False, True, False], 0.5)
  assert precision == pytest.approx(100.0 / 3.0)
  assert recall == pytest.approx(50.0)
  assert point_metrics([0.1, 0.2], [True, False], 0.5) == (0.0, 0.0)

def records():
  return [
      EpisodeScores('b', (0.9, 0.8, 0.1), (True, True, False)),
      EpisodeScores('a', (0.2, 0.3), (False, False)),
    ]

def test_report_is_order_independent_and_consistent():
  report = build_report(records(), provenance={'checkpoint': 'abc'})
  again = build_report(list(reversed(records())), provenance={'checkpoint': 'abc'})
  assert report.metrics_jsonable() == again.metrics_jsonable()
  assert [e.episode_id for e in report.episodes] == ['a', 'b']
  assert report.ap == 100.0
  assert report.f1 == round(f1_from_ap_ar(report.ap, report.ar), 2)
  assert report.num_steps == 5 and report.num_positive_steps == 2
  with pytest.raises(DatasetError):
    build_report([])

def test_write_and_reload_report(tmp_path):
  report = build_report(records(), provenance={'checkpoint': 'abc'})
  out = str(tmp_path / 'report')
  path = write_report(report, out)
  metrics = load_metrics(out)
  assert metrics == load_metrics(path)
  assert metrics['ap'] == report.ap and metrics['ar'] == report.ar and metrics['f1'] == report.f1
  assert metrics['counts']['episodes'] == 2
  assert metrics['provenance'] == {'checkpoint': 'abc'}
  assert len(os.listdir(os.path.join(out, 'scores'))) == 2
  assert load_score_record(score_record_path(out, 'b')) == records()[0]
  with pytest.raises(DatasetError):
    load_metrics(str(tmp_path / 'nowhere'))

def test_zero_weight_model_scores_one_half():
  params = init_params(ModelConfig(feature_dim=5, d_model=4))
  params['w_o'].data = np.zeros((4, 1))
  probs = score_features(params, embed_prompts('lion', 'ball', d=4), np.random.default_rng(0).standard_normal((7, 5)))
  assert probs.shape == (7,)
  assert np.all(probs == 0.5)
  with pytest.raises(DatasetError):
    score_features(params, embed_prompts('lion', 'ball', d=4), np.ones((7, 6)))

def test_score_dataset(small_dataset):
  params = init_params(ModelConfig(feature_dim=small_dataset.feature_dim, d_model=8, seed=2))
  prompts = embed_prompts(small_dataset.manifest.task_prompt, small_dataset.manifest.mistake_prompt, d=8)
  serial = score_dataset(params, prompts, small_dataset, 'test')
  parallel = score_dataset(params, prompts, small_dataset, 'test', workers=3)
  assert serial == parallel
  assert len(serial) == len(small_dataset.records('test'))
  for scores in serial:
    assert all(0.0 < p < 1.0 for p in scores.probabilities)
    assert scores.num_steps == small_dataset.record(scores.episode_id).num_steps
  wrong = init_params(ModelConfig(feature_dim=small_dataset.feature_dim + 1, d_model=8))
  with pytest.raises(DatasetError):
    score_dataset(wrong, prompts, small_dataset)

def test_chance_scores_are_seeded(small_dataset):
  a = chance_scores(small_dataset, 'test', seed=1)
  assert a == chance_scores(small_dataset, 'test', seed=1)
  assert a != chance_scores(small_dataset, 'test', seed=2)
  assert all(abs(p - 0.5) < 1e-4 for e in a for p in e.probabilities)

def test_scores_from_file(tmp_path, small_dataset):
  oracle = {ep.episode_id: [1.0 if x else 0.0 for x in ep.step_labels] for ep in small_dataset.episodes('test')}
  path = tmp_path / 'scores.json'
  path.write_text(json.dumps(oracle), encoding='utf-8')
  report = build_report(scores_from_file(str(path), small_dataset, 'test'))
  assert report.ap == 100.0
  first = sorted(oracle)[0]
  oracle[first] = oracle[first][:-1]
  path.write_text(json.dumps(oracle), encoding='utf-8')
  with pytest.raises(DatasetError):
    scores_from_file(str(path), small_dataset, 'test')
  path.write_text('[1, 2]', encoding='utf-8')
  with pytest.raises(DatasetError):
    scores_from_file(str(path), small_dataset, 'test')

def test_mistake_spans():
  assert mistake_spans([False, True, True, False, True]) == [(1, 3), (4, 5)]
  assert mistake_spans([False, False]) == []

def test_score_figure():
  record = EpisodeScores('ep', (0.1, 0.2, 0.8, 0.9, 0.3), (False, False, True, True, False))
  ax = score_figure(record).axes[0]
  assert len(ax.lines) == 1
  assert len(ax.lines[0].get_xdata()) == 5
  assert len(ax.patches) == 1
  assert ax.get_xlabel() == 'step'
  clean = EpisodeScores('ep', (0.1, 0.2), (False, False))
  assert len(score_figure(clean).axes[0].patches) == 0

def test_plot_is_deterministic(tmp_path):
  record = EpisodeScores('ep', (0.1, 0.2, 0.8, 0.9, 0.3), (False, False, True, True, False))
  a = plot_scores(record, str(tmp_path / 'a.svg'))
  b = plot_scores(record, str(tmp_path / 'b.svg'))
  data = open(a, 'rb').read()
  assert data == open(b, 'rb').read()
  assert data.lstrip().startswith(b'<?xml')
  assert render_svg(score_figure(record)) == data
