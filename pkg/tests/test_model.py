#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

import numpy as np
import pytest

from timid_tools.exceptions import ConfigError, ShapeError, DatasetError
from timid_tools.numerics import Tensor, Tape, backward, ops, AdamState
from timid_tools.model import (
    ModelConfig, ModelParams, Checkpoint, init_params, load_checkpoint, checkpoint_from_bytes,
    embed_prompts, token_vector, forward, positional_encoding, temporal_context,
    semantic_alignment, classify, attention_prior, causal_mask, project_input, PARAM_NAMES,
  )
from timid_tools.simgen import Task

def with_values(params: ModelParams, **values) -> ModelParams:
  result = params.copy()
  for name, value in values.items():
    result[name].data = np.asarray(value, dtype=np.float64)
  return result

def test_mutex_prompts_have_thirteen_rows():
  emb = embed_prompts(Task.MUTEX.task_prompt, Task.MUTEX.mistake_prompt, d=32)
  assert emb.num_tokens == 13
  assert emb.matrix.shape == (13, 32)
  assert np.allclose(np.linalg.norm(emb.matrix, axis=1), 1.0)
  # 'robot' appears in both prompts and embeds identically
  assert np.array_equal(emb.matrix[0], emb.matrix[7])
  assert emb.tokens[1] == 'not'

def test_token_vectors_are_deterministic():
  assert np.array_equal(token_vector('lion', 16, 0), token_vector('lion', 16, 0))
  assert not np.array_equal(token_vector('lion', 16, 0), token_vector('lion', 16, 1))
  assert not np.array_equal(token_vector('lion', 16, 0), token_vector('ball', 16, 0))

def test_prompt_errors():
  with pytest.raises(ConfigError):
    embed_prompts('', 'ball', d=8)
  with pytest.raises(ConfigError):
    embed_prompts('lion', 'ball', d=0)

def test_positional_encoding():
  pe = positional_encoding(5, 6)
  assert pe.shape == (5, 6)
  assert np.array_equal(pe[0], [0.0, 1.0, 0.0, 1.0, 0.0, 1.0])
  assert pe[1, 0] == pytest.approx(np.sin(1.0))
  assert pe[3, 3] == pytest.approx(np.cos(3.0 / 10000.0 ** (2.0 / 6.0)))
  assert positional_encoding(4, 5).shape == (4, 5)

def test_positional_rows_are_distinct():
  pe = positional_encoding(512, 64)
  sq = np.sum(pe * pe, axis=1)
  gaps = sq[:, None] + sq[None, :] - 2.0 * (pe @ pe.T)
  np.fill_diagonal(gaps, np.inf)
  assert gaps.min() > 1e-6

def test_attention_prior():
  flat = attention_prior(Tensor(0.0), Tensor(0.0), 4).numpy()
  assert np.all(flat == 1.0)
  prior = attention_prior(Tensor(0.5), Tensor(-0.25), 5).numpy()
  assert np.allclose(prior, prior.T)
  assert prior[0, 0] == pytest.approx(np.exp(-0.25))
  assert prior[0, 2] == pytest.approx(np.exp(-1.75))
  assert causal_mask(3).tolist() == [[True, False, False], [True, True, False], [True, True, True]]

def test_init_params():
  config = ModelConfig(feature_dim=12, d_model=6, seed=4)
  a = init_params(config)
  b = init_params(config)
  c = init_params(ModelConfig(feature_dim=12, d_model=6, seed=5))
  for name in PARAM_NAMES:
    assert np.array_equal(a[name].data, b[name].data)
  assert not np.array_equal(a['w_in'].data, c['w_in'].data)
  assert a['gamma'].item() == 0.1
  assert a['beta'].item() == 0.0
  assert a['alpha'].item() == 0.0
  assert np.all(np.abs(a['w_in'].data) <= 1.0 / np.sqrt(12))
  assert np.all(a['ln_gain'].data == 1.0)
  assert a.num_parameters() == 12 * 6 + 6 * 6 * 6 + 4 + 2 * 6 + 6
  with pytest.raises(ConfigError):
    ModelConfig(variant='bogus').validate()
  with pytest.raises(ShapeError):
    ModelParams(config, {**a.arrays(), 'w_o': np.zeros((6, 2))})

def test_temporal_reduces_to_values_for_single_step(tiny_model):
  params = with_values(tiny_model, gamma=0.0, beta=0.0)
  x = Tensor(np.random.default_rng(0).standard_normal((1, 1, 8)))
  out = temporal_context(x, np.ones((1, 1), dtype=bool), params).numpy()
  assert np.allclose(out, x.numpy() @ params['w_vt'].data)

def test_attention_rows_are_convex(tiny_model):
  x = np.random.default_rng(1).standard_normal((2, 6, 8))
  mask = np.ones((2, 6), dtype=bool)
  mask[1, 4:] = False
  trace = forward(x, embed_prompts('robot lion', 'ball', d=8), tiny_model, mask=mask, keep_attention=True)
  for key in ('global', 'local'):
    w = trace.attention[key]
    assert np.all(w >= 0.0)
    assert np.allclose(w[0].sum(axis=-1), 1.0)
    assert np.allclose(w[1, :4].sum(axis=-1), 1.0)
    assert np.all(w[1, :, 4:] == 0.0)
  assert np.all(np.triu(trace.attention['local'][0], k=1) == 0.0)
  assert np.allclose(trace.attention['semantic'].sum(axis=-1), 1.0)
  assert trace.attention['prior'].shape == (6, 6)

def test_local_stream_is_causal(tiny_model, tiny_prompts):
  rng = np.random.default_rng(2)
  x = rng.standard_normal((6, 8))
  y = x.copy()
  y[5] += rng.standard_normal(8)
  a = forward(x, tiny_prompts, tiny_model, keep_attention=True)
  b = forward(y, tiny_prompts, tiny_model, keep_attention=True)
  assert np.array_equal(a.attention['local'][0, :5], b.attention['local'][0, :5])
  assert not np.allclose(a.attention['global'][0, :5], b.attention['global'][0, :5])

def test_semantic_alignment_with_one_token(tiny_model):
  rng = np.random.default_rng(3)
  z_time = Tensor(rng.standard_normal((1, 4, 8)))
  token = rng.standard_normal((1, 8))
  out = semantic_alignment(z_time, token, tiny_model).numpy()
  q = z_time.numpy() @ tiny_model['w_q'].data
  expected = ops.layer_norm(q + token @ tiny_model['w_v'].data, tiny_model['ln_gain'], tiny_model['ln_bias']).numpy()
  assert np.allclose(out, expected)

def test_semantic_alignment_ignores_token_order(tiny_model, tiny_prompts):
  z_time = Tensor(np.random.default_rng(4).standard_normal((2, 5, 8)))
  rows = tiny_prompts.matrix
  a = semantic_alignment(z_time, rows, tiny_model).numpy()
  b = semantic_alignment(z_time, rows[::-1].copy(), tiny_model).numpy()
  assert np.allclose(a, b, atol=1e-12)

def test_semantic_alignment_shape_errors(tiny_model):
  z_time = Tensor(np.ones((1, 3, 8)))
  with pytest.raises(ShapeError):
    semantic_alignment(z_time, np.ones((2, 4)), tiny_model)
  with pytest.raises(ShapeError):
    semantic_alignment(z_time, np.ones((0, 8)), tiny_model)

def test_classify(tiny_model):
  z = Tensor(np.random.default_rng(5).standard_normal((3, 4, 8)))
  logits = classify(z, tiny_model).numpy()
  assert logits.shape == (3, 4)
  assert logits[1, 2] == pytest.approx(float(z.numpy()[1, 2] @ tiny_model['w_o'].data[:, 0]) + 0.05)

def test_forward_shapes_and_errors(tiny_model, tiny_prompts):
  x = np.random.default_rng(6).standard_normal((6, 8))
  trace = forward(x, tiny_prompts, tiny_model)
  assert trace.logits.shape == (1, 6)
  probs = trace.step_probabilities()
  assert probs.shape == (6,)
  assert np.all((probs > 0.0) & (probs < 1.0))
  with pytest.raises(ShapeError):
    forward(np.ones((6, 5)), tiny_prompts, tiny_model)
  with pytest.raises(ShapeError):
    forward(np.ones((2, 6, 8)), tiny_prompts, tiny_model, mask=np.ones((2, 5), dtype=bool))
  with pytest.raises(ShapeError):
    project_input(Tensor(np.ones((1, 3, 7))), tiny_model)

def test_padding_does_not_change_valid_steps(tiny_model, tiny_prompts):
  rng = np.random.default_rng(7)
  short = rng.standard_normal((4, 8))
  long = rng.standard_normal((7, 8))
  batch = np.zeros((2, 7, 8))
  batch[0, :4] = short
  batch[1] = long
  mask = np.zeros((2, 7), dtype=bool)
  mask[0, :4] = True
  mask[1] = True
  batched = forward(batch, tiny_prompts, tiny_model, mask=mask)
  alone = forward(short, tiny_prompts, tiny_model)
  assert np.allclose(batched.step_logits(0), alone.step_logits(0), rtol=0, atol=1e-12)
  # garbage in the padded rows must not leak into valid ones
  batch[0, 4:] = 1e3
  noisy = forward(batch, tiny_prompts, tiny_model, mask=mask)
  assert np.array_equal(noisy.step_logits(0), batched.step_logits(0))
  assert np.all(noisy.z_sem.numpy()[0, 4:] == 0.0)

@pytest.mark.parametrize('variant', ['full', 'temporal_only', 'semantic_only', 'global_only'])
def test_gradients_match_finite_differences(tiny_model, tiny_prompts, variant):
  params = ModelParams(
      ModelConfig(feature_dim=8, d_model=8, seed=3, variant=variant), tiny_model.arrays())
  rng = np.random.default_rng(8)
  x = rng.standard_normal((6, 8))
  weights = rng.standard_normal((1, 6))

  def loss_value() -> float:
    return float((forward(x, tiny_prompts, params).logits.numpy() * weights).sum())

  with Tape() as tape:
    loss = ops.sum_(ops.mul(forward(x, tiny_prompts, params).logits, weights))
  backward(tape, loss)
  h = 1e-6
  for name, p in params.items():
    numeric = np.zeros_like(p.data)
    flat = p.data.reshape(-1)
    for i in range(flat.size):
      orig = flat[i]
      flat[i] = orig + h
      hi = loss_value()
      flat[i] = orig - h
      lo = loss_value()
      flat[i] = orig
      numeric.reshape(-1)[i] = (hi - lo) / (2.0 * h)
    analytic = p.grad if p.grad is not None else np.zeros_like(p.data)
    scale = max(np.linalg.norm(numeric), np.linalg.norm(analytic), 1e-8)
    assert np.linalg.norm(analytic - numeric) / scale < 1e-4, name

def test_variants_drop_their_stage(tiny_model, tiny_prompts):
  x = np.random.default_rng(9).standard_normal((6, 8))
  def run(variant: str, **values):
    params = with_values(ModelParams(ModelConfig(feature_dim=8, d_model=8, variant=variant), tiny_model.arrays()), **values)
    return forward(x, tiny_prompts, params, keep_attention=True)
  assert set(run('full').attention) == {'prior', 'global', 'local', 'semantic'}
  assert 'local' not in run('global_only').attention
  assert 'semantic' not in run('temporal_only').attention
  assert 'global' not in run('semantic_only').attention
  assert np.array_equal(run('global_only').logits.numpy(), run('global_only', alpha=3.0).logits.numpy())
  assert np.array_equal(run('temporal_only').logits.numpy(), run('temporal_only', w_k=np.zeros((8, 8))).logits.numpy())
  assert np.array_equal(run('semantic_only').logits.numpy(), run('semantic_only', gamma=2.0).logits.numpy())
  assert not np.array_equal(run('full').logits.numpy(), run('full', alpha=3.0).logits.numpy())

def test_inference_does_not_record():
  params = init_params(ModelConfig(feature_dim=4, d_model=4))
  prompts = embed_prompts('lion', 'ball', d=4)
  trace = forward(np.ones((3, 4)), prompts, params)
  assert trace.logits.node_id is None

def test_checkpoint_round_trip(tmp_path, tiny_model):
  state = AdamState(step=3, m={'w_in': np.full((8, 8), 0.5)}, v={'w_in': np.full((8, 8), 0.25)})
  ckpt = Checkpoint(
      params=tiny_model,
      task_prompt='robot lion',
      mistake_prompt='ball',
      epochs_completed=7,
      optimizer=state,
      metadata={'train': {'lr': 0.001}},
    )
  path = str(tmp_path / 'model.bin')
  ckpt.save(path)
  loaded = load_checkpoint(path)
  assert loaded.config == tiny_model.config
  for name in PARAM_NAMES:
    assert np.array_equal(loaded.params[name].data, tiny_model[name].data)
  assert loaded.epochs_completed == 7
  assert loaded.task_prompt == 'robot lion'
  assert loaded.metadata == {'train': {'lr': 0.001}}
  assert loaded.optimizer is not None and loaded.optimizer.step == 3
  assert np.array_equal(loaded.optimizer.v['w_in'], state.v['w_in'])
  assert loaded.to_bytes() == ckpt.to_bytes()

def test_checkpoint_errors(tmp_path, tiny_model):
  data = Checkpoint(params=tiny_model, task_prompt='a', mistake_prompt='b').to_bytes()
  with pytest.raises(DatasetError):
    checkpoint_from_bytes(data[:-8])
  with pytest.raises(DatasetError):
    checkpoint_from_bytes(b'not a checkpoint')
  with pytest.raises(DatasetError):
    checkpoint_from_bytes(b'{"format": "other"}\n')
  with pytest.raises(DatasetError):
    load_checkpoint(str(tmp_path / 'missing.bin'))
  bad = with_values(tiny_model, gamma=np.nan)
  with pytest.raises(ShapeError):
    Checkpoint(params=bad, task_prompt='a', mistake_prompt='b').save(str(tmp_path / 'bad.bin'))

def _streams(params: ModelParams, x: np.ndarray):
  x_proj = project_input(Tensor(x[None]), params)
  mask = np.ones((1, x.shape[0]), dtype=bool)
  attention = {}
  z_time = temporal_context(x_proj, mask, params, attention=attention).numpy()[0]
  v = x_proj.numpy()[0] @ params['w_vt'].data
  return z_time, attention['global'][0] @ v, attention['local'][0] @ v, attention

def test_balanced_gate_averages_the_streams(tiny_model):
  x = np.random.default_rng(12).standard_normal((6, 8))
  z_time, c_global, c_local, _ = _streams(with_values(tiny_model, alpha=0.0), x)
  assert np.allclose(z_time, 0.5 * c_global + 0.5 * c_local, rtol=0, atol=1e-12)

@pytest.mark.parametrize('alpha', [-4.0, -0.3, 0.0, 1.5, 6.0])
def test_fusion_is_convex(tiny_model, alpha):
  x = np.random.default_rng(13).standard_normal((6, 8))
  z_time, c_global, c_local, _ = _streams(with_values(tiny_model, alpha=alpha), x)
  g = 1.0 / (1.0 + np.exp(-alpha))
  assert np.allclose(z_time, g * c_global + (1.0 - g) * c_local, rtol=0, atol=1e-12)
  lo = np.minimum(c_global, c_local) - 1e-12
  hi = np.maximum(c_global, c_local) + 1e-12
  assert np.all((z_time >= lo) & (z_time <= hi))

def test_constant_shift_of_scores_leaves_attention_unchanged(tiny_model):
  # with gamma = 0 the prior is the constant exp(-|beta|), so beta only shifts every score
  x = np.random.default_rng(14).standard_normal((6, 8))
  _, _, _, base = _streams(with_values(tiny_model, gamma=0.0, beta=0.0), x)
  _, _, _, shifted = _streams(with_values(tiny_model, gamma=0.0, beta=-0.7), x)
  assert np.all(base['prior'] == 1.0)
  for key in ('global', 'local'):
    assert np.allclose(base[key], shifted[key], rtol=0, atol=1e-12)

def test_logits_depend_on_the_prompts(tiny_model):
  x = np.random.default_rng(15).standard_normal((6, 8))
  mutex = embed_prompts(Task.MUTEX.task_prompt, Task.MUTEX.mistake_prompt, d=8)
  ordering = embed_prompts(Task.ORDERING.task_prompt, Task.ORDERING.mistake_prompt, d=8)
  a = forward(x, mutex, tiny_model).logits.numpy()
  b = forward(x, ordering, tiny_model).logits.numpy()
  assert np.max(np.abs(a - b)) > 1e-6

def test_scalar_parameters_keep_their_shape(tmp_path, tiny_model):
  for name in ('gamma', 'beta', 'alpha', 'b_o'):
    assert init_params(ModelConfig(feature_dim=8, d_model=8))[name].shape == ()
    assert tiny_model.copy()[name].shape == ()
  rebuilt = ModelParams(tiny_model.config, tiny_model.arrays())
  assert rebuilt['gamma'].item() == pytest.approx(0.3)
  path = str(tmp_path / 'scalars.bin')
  Checkpoint(params=tiny_model, task_prompt='robot lion', mistake_prompt='ball').save(path)
  assert load_checkpoint(path).params['alpha'].shape == ()

def test_step_probabilities_are_the_sigmoid_of_logits(tiny_model, tiny_prompts):
  x = np.random.default_rng(16).standard_normal((5, 8))
  trace = forward(x, tiny_prompts, tiny_model)
  assert np.allclose(trace.step_probabilities(), 1.0 / (1.0 + np.exp(-trace.step_logits())), rtol=0, atol=1e-15)
  with np.errstate(over='raise'):
    assert np.all(forward(x, tiny_prompts, with_values(tiny_model, b_o=-900.0)).step_probabilities() >= 0.0)
    assert np.all(forward(x, tiny_prompts, with_values(tiny_model, b_o=900.0)).step_probabilities() == 1.0)
