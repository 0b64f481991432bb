#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""`timid train`: fit the mistake detector on a dataset's training split"""

from typing import Optional, Sequence, Dict, Any

import os
import argparse
import logging

# do not use relative imports
from timid_tools.command.common import add_common_args, load_file_config, run_command
from timid_tools.exceptions import ConfigError, DatasetError
from timid_tools.internal_types import JsonableDict
from timid_tools.model import ModelConfig, VARIANTS, init_params, load_checkpoint, embed_prompts
from timid_tools.simgen import load_dataset, MANIFEST_FILE
from timid_tools.timid_config import build_config
from timid_tools.train import TrainConfig, train_loop
from timid_tools.util import get_file_hash_hex, hash_jsonable

logger = logging.getLogger(__name__)

CHECKPOINT_FILE = 'checkpoint.bin'
LOSS_LOG_FILE = 'loss_log.jsonl'

def train_overrides(args: argparse.Namespace) -> Dict[str, Any]:
  return {
      'learning_rate': args.lr,
      'batch_size': args.batch,
      'epochs': args.epochs,
      'temperature': args.temperature,
      'contrastive_weight': args.contrastive_weight,
      'seed': args.seed,
      'checkpoint_every': args.checkpoint_every,
    }

def model_overrides(args: argparse.Namespace) -> Dict[str, Any]:
  return {
      'd_model': args.d_model,
      'feature_dim': args.feature_dim,
      'variant': args.variant,
      'seed': args.seed,
    }

def cmd_train(args: argparse.Namespace) -> int:
  file_config = load_file_config(args)
  train_config = build_config(TrainConfig, file_config, 'train', train_overrides(args))
  dataset = load_dataset(args.data)
  manifest_hash = get_file_hash_hex(os.path.join(args.data, MANIFEST_FILE))
  out_dir: str = args.out
  checkpoint_path = os.path.join(out_dir, CHECKPOINT_FILE)

  if args.checkpoint is not None:
    checkpoint = load_checkpoint(args.checkpoint)
    params = checkpoint.params
    requested = model_overrides(args)
    for key in ('d_model', 'variant'):
      if requested[key] is not None and requested[key] != getattr(params.config, key):
        raise ConfigError(
            f"--{key.replace('_', '-')} {requested[key]} conflicts with checkpoint value {getattr(params.config, key)}")
    optimizer = checkpoint.optimizer
    start_epoch = checkpoint.epochs_completed
    task_prompt, mistake_prompt = checkpoint.task_prompt, checkpoint.mistake_prompt
    logger.info("Resuming from %s at epoch %d", args.checkpoint, start_epoch)
  else:
    overrides = model_overrides(args)
    if overrides['feature_dim'] is None:
      overrides['feature_dim'] = dataset.feature_dim
    model_config = build_config(ModelConfig, file_config, 'model', overrides)
    params = init_params(model_config)
    optimizer = None
    start_epoch = 0
    task_prompt, mistake_prompt = dataset.manifest.task_prompt, dataset.manifest.mistake_prompt

  if params.config.feature_dim != dataset.feature_dim:
    raise DatasetError(
        f"Model feature width {params.config.feature_dim} does not match dataset feature width {dataset.feature_dim}")
  prompts = embed_prompts(task_prompt, mistake_prompt, params.config.d_model, params.config.prompt_seed)
  metadata: JsonableDict = {
      'dataset_manifest_sha256': manifest_hash,
      'generator_config_sha256': hash_jsonable(dataset.manifest.generator),
      'task': dataset.manifest.task,
    }
  result = train_loop(
      dataset, params, prompts, train_config,
      checkpoint_path=checkpoint_path,
      loss_log_path=os.path.join(out_dir, LOSS_LOG_FILE),
      optimizer=optimizer,
      start_epoch=start_epoch,
      metadata=metadata,
    )
  final = 'n/a' if result.final_loss is None else f"{result.final_loss:.6f}"
  print(f"Trained {result.epochs_completed} epochs, final batch loss {final}")
  print(f"Checkpoint: {result.checkpoint_path}")
  return 0

def main(argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
  parser = argparse.ArgumentParser(prog=prog, description='Train the mistake detector from video-level labels.')
  parser.add_argument('--data', required=True, help='Dataset directory written by `timid gen`.')
  parser.add_argument('--out', required=True,
                      help=f'Run directory; receives {CHECKPOINT_FILE} and {LOSS_LOG_FILE}.')
  parser.add_argument('--checkpoint', default=None, help='Resume training from this checkpoint.')
  parser.add_argument('--epochs', type=int, default=None, help='Total epochs (default: 50).')
  parser.add_argument('--lr', type=float, default=None, help='Adam learning rate (default: 1e-3).')
  parser.add_argument('--batch', type=int, default=None, help='Episodes per batch (default: 16).')
  parser.add_argument('--temperature', type=float, default=None, help='Contrastive temperature (default: 0.1).')
  parser.add_argument('--contrastive-weight', type=float, default=None,
                      help='Weight of the contrastive term (default: 1.0).')
  parser.add_argument('--checkpoint-every', type=int, default=None,
                      help='Also write a checkpoint every N epochs (default: only at the end).')
  parser.add_argument('--d-model', type=int, default=None, help='Model width d (default: 32).')
  parser.add_argument('--feature-dim', type=int, default=None,
                      help="Expected feature width D (default: the dataset's).")
  parser.add_argument('--variant', choices=list(VARIANTS), default=None,
                      help='Model variant for ablations (default: full).')
  parser.add_argument('--seed', type=int, default=None, help='Seed for initialization and shuffling (default: 0).')
  add_common_args(parser)
  return run_command(parser, argv, cmd_train)

if __name__ == "__main__":
  main()
