#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Mini-batch training with Adam, a JSON Lines loss log and checkpoints"""

from typing import List, Optional, Sequence, Dict, Union, IO
from dataclasses import dataclass, field

import os
import sys
import json
import math
import logging

import numpy as np
from tqdm import tqdm

from ..exceptions import DatasetError, NonFiniteLossError, ShapeError
from ..internal_types import FloatArray, BoolArray, JsonableDict
from ..numerics import Tensor, Tape, backward, adam_step, AdamState, ops
from ..model import ModelParams, PromptEmbedding, Checkpoint, ForwardTrace, forward
from ..simgen import Dataset, EpisodeData
from ..util import derive_seed
from .config import TrainConfig
from .losses import batch_bce, contrastive_loss, global_features

logger = logging.getLogger(__name__)

@dataclass
class Batch:
  features: FloatArray
  """(B, T_max, D), zero-padded"""
  mask: BoolArray
  """(B, T_max); true on each episode's real steps"""
  labels: FloatArray
  episode_ids: List[str]

  @property
  def size(self) -> int:
    return len(self.episode_ids)

def make_batch(episodes: Sequence[EpisodeData]) -> Batch:
  if len(episodes) == 0:
    raise ShapeError("Cannot build an empty batch")
  D = episodes[0].features.shape[1]
  T_max = max(e.features.shape[0] for e in episodes)
  features = np.zeros((len(episodes), T_max, D), dtype=np.float64)
  mask = np.zeros((len(episodes), T_max), dtype=bool)
  for b, e in enumerate(episodes):
    T = e.features.shape[0]
    if e.features.shape[1] != D:
      raise ShapeError(f"Episode {e.episode_id} has feature width {e.features.shape[1]}, expected {D}")
    features[b, :T] = e.features
    mask[b, :T] = True
  labels = np.asarray([1.0 if e.video_label else 0.0 for e in episodes])
  return Batch(features=features, mask=mask, labels=labels, episode_ids=[e.episode_id for e in episodes])

@dataclass
class BatchLoss:
  bce: Tensor
  contrastive: Tensor
  total: Tensor

  def values(self) -> Dict[str, float]:
    return {'l_bce': self.bce.item(), 'l_con': self.contrastive.item(), 'l_total': self.total.item()}

def batch_loss(
      params: ModelParams,
      prompts: PromptEmbedding,
      batch: Batch,
      config: TrainConfig,
    ) -> BatchLoss:
  """L = mean BCE over the batch + contrastive_weight * L_con."""
  trace: ForwardTrace = forward(batch.features, prompts, params, batch.mask)
  l_bce = batch_bce(trace.logits, batch.mask, batch.labels)
  if batch.size >= 2:
    l_con = contrastive_loss(global_features(trace.z_sem, batch.mask), batch.labels, config.temperature)
  else:
    l_con = Tensor(0.0)
  if config.contrastive_weight == 0.0:
    total = l_bce
  else:
    total = ops.add(l_bce, ops.scale(l_con, config.contrastive_weight))
  return BatchLoss(bce=l_bce, contrastive=l_con, total=total)

def epoch_batches(n: int, batch_size: int, seed: int, epoch: int) -> List[List[int]]:
  order = np.random.default_rng(derive_seed(seed, 'epoch', epoch)).permutation(n)
  return [[int(i) for i in order[s:s + batch_size]] for s in range(0, n, batch_size)]

def progress_disabled(stream: Optional[IO[str]]=None) -> bool:
  """The progress bar only draws on a terminal, and only when INFO logging is on."""
  stream = sys.stderr if stream is None else stream
  is_tty = hasattr(stream, 'isatty') and stream.isatty()
  return not (is_tty and logger.isEnabledFor(logging.INFO))

def periodic_checkpoint_path(path: str, epoch: int) -> str:
  stem, ext = os.path.splitext(path)
  return f"{stem}.epoch{epoch:04d}{ext}"

@dataclass
class TrainResult:
  params: ModelParams
  optimizer: AdamState
  epochs_completed: int
  final_loss: Optional[float]
  checkpoint_path: str
  loss_records: List[JsonableDict] = field(default_factory=list)

def train_loop(
      dataset: Union[Dataset, Sequence[EpisodeData]],
      params: ModelParams,
      prompts: PromptEmbedding,
      config: TrainConfig,
      checkpoint_path: str,
      loss_log_path: Optional[str]=None,
      optimizer: Optional[AdamState]=None,
      start_epoch: int=0,
      metadata: Optional[JsonableDict]=None,
    ) -> TrainResult:
  """Trains params in place on the training split and writes checkpoints.

  Epoch e's shuffle derives from (seed, e) only, so a run resumed from a
  checkpoint at epoch e continues exactly as an uninterrupted run would.
  """
  config.validate()
  episodes = list(dataset.episodes('train')) if isinstance(dataset, Dataset) else list(dataset)
  if len(episodes) == 0:
    raise DatasetError("Training split is empty")
  if optimizer is None:
    optimizer = AdamState()
  tensors = params.tensors()
  meta: JsonableDict = dict(metadata or {})
  meta['train'] = config.to_jsonable()

  def _checkpoint(epochs_done: int) -> Checkpoint:
    return Checkpoint(
        params=params,
        task_prompt=prompts.task_prompt,
        mistake_prompt=prompts.mistake_prompt,
        epochs_completed=epochs_done,
        optimizer=optimizer,
        metadata=meta,
      )

  log_file = None
  if loss_log_path is not None:
    os.makedirs(os.path.dirname(os.path.abspath(loss_log_path)), exist_ok=True)
    log_file = open(loss_log_path, 'a' if start_epoch > 0 else 'w', encoding='utf-8')
  records: List[JsonableDict] = []
  final_loss: Optional[float] = None
  n_batches = math.ceil(len(episodes) / config.batch_size)
  progress = tqdm(
      total=max(0, config.epochs - start_epoch) * n_batches,
      desc='train',
      unit='batch',
      disable=progress_disabled(),
    )
  try:
    for epoch in range(start_epoch, config.epochs):
      for b_idx, indices in enumerate(epoch_batches(len(episodes), config.batch_size, config.seed, epoch)):
        batch = make_batch([episodes[i] for i in indices])
        with Tape() as tape:
          loss = batch_loss(params, prompts, batch, config)
        values = loss.values()
        for term, value in values.items():
          if not math.isfinite(value):
            raise NonFiniteLossError(f"Non-finite {term}={value} at epoch {epoch}, batch {b_idx} ({batch.episode_ids})")
        grads = backward(tape, loss.total)
        adam_step(
            tensors, {name: grads.get(t) for name, t in tensors.items()}, optimizer,
            lr=config.learning_rate, beta1=config.beta1, beta2=config.beta2, eps=config.eps,
          )
        record: JsonableDict = {'epoch': epoch, 'batch': b_idx}
        record.update(values)
        records.append(record)
        if log_file is not None:
          log_file.write(json.dumps(record, sort_keys=True) + '\n')
          log_file.flush()
        final_loss = values['l_total']
        progress.update(1)
        progress.set_postfix(loss=f"{final_loss:.4f}")
      logger.debug("Epoch %d done, last batch loss %s", epoch, final_loss)
      if config.checkpoint_every > 0 and (epoch + 1) % config.checkpoint_every == 0 and epoch + 1 < config.epochs:
        _checkpoint(epoch + 1).save(periodic_checkpoint_path(checkpoint_path, epoch + 1))
  finally:
    progress.close()
    if log_file is not None:
      log_file.close()
  epochs_done = max(start_epoch, config.epochs)
  _checkpoint(epochs_done).save(checkpoint_path)
  return TrainResult(
      params=params,
      optimizer=optimizer,
      epochs_completed=epochs_done,
      final_loss=final_loss,
      checkpoint_path=checkpoint_path,
      loss_records=records,
    )
