#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Shared fixtures"""

from typing import Callable, Iterator, List

import itertools

import numpy as np
import pytest

from timid_tools.ltl import LtlFormula, Atom, Not, And, Or, Globally, Until, TRUE, FALSE
from timid_tools.model import ModelConfig, ModelParams, PromptEmbedding, init_params, embed_prompts
from timid_tools.simgen import GeneratorConfig, Dataset, generate_dataset, load_dataset

ATOMS = ('Lion', 'Ball')

SMALL_FEATURE_DIM = 16

def random_formula(rng: np.random.Generator, max_depth: int) -> LtlFormula:
  """A random formula over Lion/Ball with depth <= max_depth."""
  if max_depth <= 1:
    pick = int(rng.integers(0, 6))
    if pick == 4:
      return TRUE
    if pick == 5:
      return FALSE
    return Atom(ATOMS[pick % 2])
  kind = int(rng.integers(0, 6))
  if kind == 0:
    return Atom(ATOMS[int(rng.integers(0, 2))])
  if kind == 1:
    return Not(random_formula(rng, max_depth - 1))
  if kind == 2:
    return Globally(random_formula(rng, max_depth - 1))
  left = random_formula(rng, max_depth - 1)
  right = random_formula(rng, max_depth - 1)
  if kind == 3:
    return And(left, right)
  if kind == 4:
    return Or(left, right)
  return Until(left, right)

def all_traces(max_len: int) -> Iterator[List[dict]]:
  """Every trace over Lion/Ball of length 1..max_len."""
  states = [{'Lion': l, 'Ball': b} for l, b in itertools.product((False, True), repeat=2)]
  for n in range(1, max_len + 1):
    for combo in itertools.product(states, repeat=n):
      yield list(combo)

@pytest.fixture
def formula_factory() -> Callable[[int, int], List[LtlFormula]]:
  def _make(count: int, seed: int, max_depth: int=4) -> List[LtlFormula]:
    rng = np.random.default_rng(seed)
    return [random_formula(rng, max_depth) for _ in range(count)]
  return _make

def small_generator_config(**overrides) -> GeneratorConfig:
  values = dict(n_normal=8, n_anomalous=8, feature_dim=SMALL_FEATURE_DIM, seed=5)
  values.update(overrides)
  return GeneratorConfig(**values)

@pytest.fixture(scope='session')
def small_dataset_dir(tmp_path_factory) -> str:
  out_dir = str(tmp_path_factory.mktemp('mutex-small'))
  generate_dataset(small_generator_config(), out_dir)
  return out_dir

@pytest.fixture(scope='session')
def small_dataset(small_dataset_dir: str) -> Dataset:
  return load_dataset(small_dataset_dir)

@pytest.fixture(scope='session')
def ordering_dataset_dir(tmp_path_factory) -> str:
  out_dir = str(tmp_path_factory.mktemp('ordering-small'))
  generate_dataset(small_generator_config(task='ordering', seed=7), out_dir)
  return out_dir

@pytest.fixture
def tiny_model() -> ModelParams:
  """T=6, D=8, d=8 sized parameters with non-default prior and gate values."""
  params = init_params(ModelConfig(feature_dim=8, d_model=8, seed=3))
  params['gamma'].data = np.asarray(0.3)
  params['beta'].data = np.asarray(-0.25)
  params['alpha'].data = np.asarray(0.4)
  rng = np.random.default_rng(11)
  params['ln_gain'].data = 1.0 + 0.1 * rng.standard_normal(8)
  params['ln_bias'].data = 0.1 * rng.standard_normal(8)
  params['b_o'].data = np.asarray(0.05)
  return params

@pytest.fixture
def tiny_prompts() -> PromptEmbedding:
  """Three tokens, matching the tiny model's width."""
  return embed_prompts('robot lion', 'ball', d=8, seed=0)
