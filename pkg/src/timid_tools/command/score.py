#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""`timid score`: per-step mistake probabilities for a single episode"""

from typing import Optional, Sequence

import os
import argparse

import numpy as np

# do not use relative imports
from timid_tools.command.common import add_common_args, run_command
from timid_tools.eval import EpisodeScores, score_features
from timid_tools.exceptions import ConfigError, DatasetError
from timid_tools.model import load_checkpoint, embed_prompts
from timid_tools.simgen import load_dataset, FEATURE_DTYPE
from timid_tools.util import write_json_file

def cmd_score(args: argparse.Namespace) -> int:
  checkpoint = load_checkpoint(args.checkpoint)
  params = checkpoint.params
  prompts = embed_prompts(
      checkpoint.task_prompt, checkpoint.mistake_prompt, params.config.d_model, params.config.prompt_seed)
  if (args.features is None) == (args.episode is None):
    raise ConfigError("Give exactly one of --episode (with --data) or --features")
  if args.episode is not None:
    if args.data is None:
      raise ConfigError("--episode requires --data")
    dataset = load_dataset(args.data)
    episode = dataset.load_episode(dataset.record(args.episode))
    episode_id = episode.episode_id
    features = episode.features
    step_labels = episode.step_labels
  else:
    raw = np.fromfile(args.features, dtype=FEATURE_DTYPE)
    D = params.config.feature_dim
    if raw.size == 0 or raw.size % D != 0:
      raise DatasetError(f"{args.features} holds {raw.size} values, not a whole number of {D}-wide steps")
    features = raw.astype(np.float64).reshape(-1, D)
    episode_id = os.path.splitext(os.path.basename(args.features))[0]
    step_labels = tuple(False for _ in range(features.shape[0]))
  probs = score_features(params, prompts, features)
  record = EpisodeScores(episode_id, tuple(float(p) for p in probs), tuple(step_labels))
  write_json_file(args.out, record.to_jsonable())
  print(f"Scored {record.num_steps} steps of {episode_id}; max probability {max(record.probabilities):.4f}")
  print(f"Score record: {args.out}")
  return 0

def main(argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
  parser = argparse.ArgumentParser(prog=prog, description='Score one episode step by step.')
  parser.add_argument('--checkpoint', required=True, help='Trained checkpoint.')
  parser.add_argument('--data', default=None, help='Dataset directory holding the episode.')
  parser.add_argument('--episode', default=None, help='Episode id within --data.')
  parser.add_argument('--features', default=None,
                      help='Raw little-endian float32 feature file (T x D); ground truth is then unknown.')
  parser.add_argument('--out', required=True, help='Output score record (JSON).')
  add_common_args(parser, with_config=False)
  return run_command(parser, argv, cmd_score)

if __name__ == "__main__":
  main()
