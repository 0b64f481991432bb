#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Desk-scale learning runs. Deselected by default; run with `pytest -m slow`."""

import pytest

from timid_tools.eval import build_report, score_dataset, chance_scores
from timid_tools.model import ModelConfig, init_params, embed_prompts
from timid_tools.simgen import GeneratorConfig, generate_dataset, load_dataset, Dataset
from timid_tools.train import TrainConfig, train_loop

pytestmark = pytest.mark.slow

def benchmark_dataset(tmp_path_factory, task: str) -> Dataset:
  out = str(tmp_path_factory.mktemp(f"bench-{task}"))
  generate_dataset(GeneratorConfig(task=task, seed=1), out, workers=4)
  return load_dataset(out)

def trained_f1(dataset: Dataset, tmp_path, variant: str='full') -> float:
  config = ModelConfig(feature_dim=dataset.feature_dim, variant=variant)
  params = init_params(config)
  prompts = embed_prompts(dataset.manifest.task_prompt, dataset.manifest.mistake_prompt, config.d_model)
  train_loop(dataset, params, prompts, TrainConfig(), str(tmp_path / f"{variant}.bin"))
  return build_report(score_dataset(params, prompts, dataset, 'test', workers=4)).f1

def chance_f1(dataset: Dataset) -> float:
  return build_report(chance_scores(dataset, 'test', seed=0)).f1

def test_mutex_learning(tmp_path_factory, tmp_path):
  dataset = benchmark_dataset(tmp_path_factory, 'mutex')
  summary = dataset.manifest.summary()
  assert summary['test'] == {'normal': 25, 'anomalous': 25}
  f1 = trained_f1(dataset, tmp_path)
  assert f1 >= 60.0
  assert f1 >= chance_f1(dataset) + 25.0

def test_ordering_learning(tmp_path_factory, tmp_path):
  dataset = benchmark_dataset(tmp_path_factory, 'ordering')
  f1 = trained_f1(dataset, tmp_path)
  assert f1 >= chance_f1(dataset) + 20.0
  assert f1 > trained_f1(dataset, tmp_path, variant='global_only')
