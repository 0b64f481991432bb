#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Argument and error plumbing shared by the subcommands"""

from typing import Callable, Optional, Sequence

import sys
import argparse
import logging

from ..exceptions import TimidError
from ..internal_types import JsonableDict
from ..timid_config import load_config_file
from ..util import configure_logging

logger = logging.getLogger(__name__)

def add_common_args(parser: argparse.ArgumentParser, with_config: bool=True) -> None:
  if with_config:
    parser.add_argument('--config', default=None,
                        help='YAML, TOML or JSON config file with gen/train/model sections. Flags override it.')
  parser.add_argument('--verbose', '-v', action='store_true', default=False,
                      help='Log progress at INFO level (otherwise $TIMID_LOG or warning).')

def load_file_config(args: argparse.Namespace) -> Optional[JsonableDict]:
  config_file: Optional[str] = getattr(args, 'config', None)
  if config_file is None:
    return None
  return load_config_file(config_file)

def run_command(
      parser: argparse.ArgumentParser,
      argv: Optional[Sequence[str]],
      handler: Callable[[argparse.Namespace], int],
    ) -> int:
  """Parses arguments, configures logging and runs handler.

  TimidError is reported as a one-line message with exit code 1; any other
  exception propagates.
  """
  args = parser.parse_args(argv)
  try:
    configure_logging('info' if args.verbose else None)
    return handler(args)
  except TimidError as e:
    logger.debug("Command failed", exc_info=True)
    print(f"{parser.prog}: error: {e}", file=sys.stderr)
    return 1
