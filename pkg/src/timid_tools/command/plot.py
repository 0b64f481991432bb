#!/usr/bin/env python3
#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""`timid plot`: SVG plot of an episode's score curve against ground truth"""

from typing import Optional, Sequence, Dict, cast

import argparse

# do not use relative imports
from timid_tools.command.common import add_common_args, run_command
from timid_tools.eval import EpisodeScores, load_score_record, plot_scores
from timid_tools.exceptions import DatasetError
from timid_tools.util import load_json_file

def cmd_plot(args: argparse.Namespace) -> int:
  record = load_score_record(args.record)
  if args.labels is not None:
    try:
      labels = cast(Dict, load_json_file(args.labels))
      step_labels = tuple(bool(x) for x in labels['step_labels'])
    except (OSError, ValueError, KeyError, TypeError) as e:
      raise DatasetError(f"Cannot read step labels from {args.labels}: {e}") from e
    if len(step_labels) != record.num_steps:
      raise DatasetError(
          f"{args.labels} has {len(step_labels)} step labels but the score record has {record.num_steps} steps")
    record = EpisodeScores(record.episode_id, record.probabilities, step_labels)
  plot_scores(record, args.out, title=args.title)
  print(f"Plot: {args.out}")
  return 0

def main(argv: Optional[Sequence[str]]=None, prog: Optional[str]=None) -> int:
  parser = argparse.ArgumentParser(prog=prog, description='Plot predicted mistake probability against ground truth.')
  parser.add_argument('record', help='Score record written by `timid eval` or `timid score`.')
  parser.add_argument('--labels', default=None,
                      help="Ground-truth labels file (a dataset's labels/<id>.json); default: the record's own.")
  parser.add_argument('--title', default=None, help='Plot title (default: the episode id).')
  parser.add_argument('--out', required=True, help='Output SVG file.')
  add_common_args(parser, with_config=False)
  return run_command(parser, argv, cmd_plot)

if __name__ == "__main__":
  main()
