#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""`timid gen`: generate a labelled multi-robot episode dataset"""

from typing import Optional, Sequence, List, Dict, Any

import argparse

# do not use relative imports
from timid_tools.command.common import add_common_args, load_file_config, run_command
from timid_tools.simgen import GeneratorConfig, generate_dataset, NUM_LAYOUTS
from timid_tools.timid_config import build_config

def generator_overrides(args: argparse.Namespace) -> Dict[str, Any]:
  layouts: Optional[List[int]] = args.layout
  mistakes: Optional[List[str]] = args.mistake
  return {
      'task': args.task,
      'n_normal': args.normal,
      'n_anomalous': args.anomalous,
      'layouts': None if layouts is None else tuple(layouts),
      'mistakes': None if mistakes is None else tuple(mistakes),
      'num_robots': args.num_robots,
      'seed': args.seed,
      'feature_dim': args.feature_dim,
      'test_fraction': args.test_fraction,
    }

def cmd_gen(args: argparse.Namespace) -> int:
  config = build_config(GeneratorConfig, load_file_config(args), 'gen', generator_overrides(args))
  out_dir: str = args.out
  manifest = generate_dataset(config, out_dir, workers=args.workers)
  summary = manifest.summary()
  print(f"Wrote {len(manifest.episodes)} {manifest.task} episodes to {out_dir}")
  for split in ('train', 'test'):
    print(f"  {split}: {summary[split]['normal']} normal, {summary[split]['anomalous']} anomalous")
  return 0

def main(argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
  parser = argparse.ArgumentParser(prog=prog, description='Generate a labelled multi-robot episode dataset.')
  parser.add_argument('--task', choices=['mutex', 'ordering'], default=None,
                      help='Task whose LTL rule labels the episodes (default: mutex).')
  parser.add_argument('--normal', type=int, default=None, help='Number of compliant episodes (default: 125).')
  parser.add_argument('--anomalous', type=int, default=None, help='Number of violating episodes (default: 125).')
  parser.add_argument('--layout', type=int, action='append', choices=list(range(NUM_LAYOUTS)), default=None,
                      help='Arena layout to use; repeat for several (default: all).')
  parser.add_argument('--mistake', action='append', default=None,
                      help="Mistake kind for violating episodes; repeat for several (default: the task's kinds).")
  parser.add_argument('--num-robots', type=int, default=None, help='Robots per episode (default: 3).')
  parser.add_argument('--feature-dim', type=int, default=None, help='Feature width D (default: 64).')
  parser.add_argument('--test-fraction', type=float, default=None, help='Held-out fraction per label (default: 0.2).')
  parser.add_argument('--seed', type=int, default=None, help='Dataset seed (default: 1).')
  parser.add_argument('--workers', type=int, default=1, help='Generator threads; does not change the output.')
  parser.add_argument('--out', required=True, help='Output dataset directory.')
  add_common_args(parser)
  return run_command(parser, argv, cmd_gen)

if __name__ == "__main__":
  main()
