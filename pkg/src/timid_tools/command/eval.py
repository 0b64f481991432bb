#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""`timid eval`: score a dataset split and write frame-level metrics"""

from typing import Optional, Sequence, List

import os
import argparse

# do not use relative imports
from timid_tools.command.common import add_common_args, run_command
from timid_tools.eval import (
    EpisodeScores, score_dataset, chance_scores, scores_from_file, build_report, write_report,
    DEFAULT_THRESHOLD,
  )
from timid_tools.exceptions import ConfigError
from timid_tools.internal_types import JsonableDict
from timid_tools.model import load_checkpoint, embed_prompts
from timid_tools.simgen import load_dataset, MANIFEST_FILE, SPLITS
from timid_tools.util import get_file_hash_hex, hash_jsonable

def cmd_eval(args: argparse.Namespace) -> int:
  dataset = load_dataset(args.data)
  split: str = args.split
  provenance: JsonableDict = {
      'dataset_manifest_sha256': get_file_hash_hex(os.path.join(args.data, MANIFEST_FILE)),
      'generator_config_sha256': hash_jsonable(dataset.manifest.generator),
      'split': split,
    }
  sources = [s for s in (args.checkpoint, args.scores_file, args.baseline) if s is not None]
  if len(sources) != 1:
    raise ConfigError("Exactly one of --checkpoint, --scores-file or --baseline is required")
  episodes: List[EpisodeScores]
  if args.scores_file is not None:
    episodes = scores_from_file(args.scores_file, dataset, split)
    provenance['scores_file_sha256'] = get_file_hash_hex(args.scores_file)
  elif args.baseline is not None:
    episodes = chance_scores(dataset, split, seed=args.seed)
    provenance['baseline'] = args.baseline
    provenance['baseline_seed'] = args.seed
  else:
    checkpoint = load_checkpoint(args.checkpoint)
    params = checkpoint.params
    prompts = embed_prompts(
        checkpoint.task_prompt, checkpoint.mistake_prompt, params.config.d_model, params.config.prompt_seed)
    episodes = score_dataset(params, prompts, dataset, split, workers=args.workers)
    provenance['checkpoint_sha256'] = get_file_hash_hex(args.checkpoint)
    provenance['model_config_sha256'] = hash_jsonable(params.config.to_jsonable())
    train_config = checkpoint.metadata.get('train')
    if train_config is not None:
      provenance['train_config_sha256'] = hash_jsonable(train_config)
  report = build_report(episodes, threshold=args.threshold, provenance=provenance)
  metrics_path = write_report(report, args.out)
  print(f"AP={report.ap:.2f} AR={report.ar:.2f} F1={report.f1:.2f} "
        f"({report.num_episodes} episodes, {report.num_steps} steps, {report.num_positive_steps} mistake steps)")
  print(f"Metrics: {metrics_path}")
  return 0

def main(argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
  parser = argparse.ArgumentParser(prog=prog, description='Evaluate frame-level mistake scores on a dataset split.')
  parser.add_argument('--data', required=True, help='Dataset directory written by `timid gen`.')
  parser.add_argument('--out', required=True, help='Report directory (metrics.json and scores/).')
  parser.add_argument('--checkpoint', default=None, help='Score with this trained checkpoint.')
  parser.add_argument('--scores-file', default=None,
                      help='Evaluate precomputed scores: a JSON object of episode id -> per-step scores.')
  parser.add_argument('--baseline', choices=['chance'], default=None,
                      help='Evaluate a reference scorer instead of a model.')
  parser.add_argument('--split', choices=list(SPLITS), default='test', help='Dataset split (default: test).')
  parser.add_argument('--threshold', type=float, default=DEFAULT_THRESHOLD,
                      help='Decision threshold for the point precision/recall (default: 0.5).')
  parser.add_argument('--seed', type=int, default=0, help='Seed of the chance baseline noise.')
  parser.add_argument('--workers', type=int, default=1, help='Scoring threads.')
  add_common_args(parser, with_config=False)
  return run_command(parser, argv, cmd_eval)

if __name__ == "__main__":
  main()
