# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Miscellaneous utility functions"""

from typing import Optional, Union

import json
import hashlib
import logging
import os
import sys

import colorama

from .exceptions import ConfigError
from .internal_types import Jsonable

try:
  from yaml import CSafeLoader as YamlLoader
except ImportError:
  from yaml import SafeLoader as YamlLoader  #type: ignore[misc]

def canonical_json(data: Jsonable, indent: Optional[int]=2) -> str:
  """Serializes JSON data with sorted keys and a trailing newline, so that
     equal data always produces identical bytes."""
  text = json.dumps(data, indent=indent, sort_keys=True, allow_nan=False)
  if not text.endswith('\n'):
    text += '\n'
  return text

def hash_jsonable(data: Jsonable) -> str:
  """Returns the SHA256 hash of the canonical JSON serialization of data as a hex string"""
  return hashlib.sha256(canonical_json(data, indent=None).encode('utf-8')).hexdigest()

def derive_seed(seed: int, *parts: Union[str, int]) -> int:
  """Derives an independent 63-bit RNG seed from a base seed and a path of
     identifiers (e.g., an episode id). The same inputs always give the
     same seed, on any platform."""
  h = hashlib.sha256(str(int(seed)).encode('utf-8'))
  for part in parts:
    h.update(b'\x00')
    h.update(str(part).encode('utf-8'))
  return int.from_bytes(h.digest()[:8], 'little') & 0x7fffffffffffffff

def atomic_mv(source: str, dest: str) -> None:
  """
  Equivalent to the linux "mv" commandline.  Atomic within same volume, and overwrites the destination.

  Args:
      source (str): Source file.
      dest (str): Destination file. Will be overwritten if it exists.
  """
  source = os.path.expanduser(source)
  dest = os.path.expanduser(dest)
  os.replace(source, dest)

def write_bytes_atomic(filename: str, data: bytes) -> None:
  """Writes a file via a temporary sibling and a rename, so readers never see a partial file."""
  dirname = os.path.dirname(os.path.abspath(filename))
  os.makedirs(dirname, exist_ok=True)
  tmp_file = filename + '.tmp'
  with open(tmp_file, 'wb') as f:
    f.write(data)
  atomic_mv(tmp_file, filename)

def write_text_atomic(filename: str, text: str) -> None:
  write_bytes_atomic(filename, text.encode('utf-8'))

def write_json_file(filename: str, data: Jsonable) -> None:
  write_text_atomic(filename, canonical_json(data))

def file_contents(filename: str) -> str:
  """Returns the contents of a text file as a string."""
  with open(filename, encoding='utf-8') as f:
    result = f.read()
  return result

def load_json_file(filename: str) -> Jsonable:
  return json.loads(file_contents(filename))

def get_file_hash_hex(filename: str) -> str:
  """Returns the SHA256 hash of a file as a hex string"""
  h = hashlib.sha256()
  with open(filename, 'rb') as f:
    while True:
      data = f.read(1024*128)
      if len(data) == 0:
        break
      h.update(data)
  return h.hexdigest()

def files_are_identical(filename1: str, filename2: str) -> bool:
  """Returns True if two files have identical contents"""
  return get_file_hash_hex(filename1) == get_file_hash_hex(filename2)

_level_colors = {
    logging.DEBUG: colorama.Fore.CYAN,
    logging.INFO: colorama.Fore.GREEN,
    logging.WARNING: colorama.Fore.YELLOW,
    logging.ERROR: colorama.Fore.RED,
    logging.CRITICAL: colorama.Fore.RED + colorama.Style.BRIGHT,
  }

class ColorLevelFormatter(logging.Formatter):
  """Log formatter that colors the level name when writing to a terminal."""
  use_color: bool

  def __init__(self, use_color: bool):
    super().__init__('%(levelname)s %(name)s: %(message)s')
    self.use_color = use_color

  def format(self, record: logging.LogRecord) -> str:
    text = super().format(record)
    if self.use_color:
      color = _level_colors.get(record.levelno, '')
      text = color + record.levelname + colorama.Style.RESET_ALL + text[len(record.levelname):]
    return text

LOG_ENV_VAR = 'TIMID_LOG'

_log_level_names = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warning': logging.WARNING,
    'error': logging.ERROR,
  }

def resolve_log_level(level: Optional[str]=None) -> int:
  """Resolves a log level name from the argument, else $TIMID_LOG, else 'warning'."""
  if level is None:
    level = os.environ.get(LOG_ENV_VAR)
  if level is None or level == '':
    return logging.WARNING
  result = _log_level_names.get(level.strip().lower())
  if result is None:
    raise ConfigError(f"Invalid log level {level!r}; expected one of {sorted(_log_level_names)}")
  return result

def configure_logging(level: Optional[str]=None) -> int:
  """Installs a colored stderr handler on the package logger. Safe to call repeatedly.

  Returns:
      int: The effective logging level.
  """
  resolved = resolve_log_level(level)
  pkg_logger = logging.getLogger('timid_tools')
  for handler in list(pkg_logger.handlers):
    if getattr(handler, '_timid_handler', False):
      pkg_logger.removeHandler(handler)
  handler = logging.StreamHandler(sys.stderr)
  use_color = hasattr(sys.stderr, 'isatty') and sys.stderr.isatty()
  if use_color:
    colorama.just_fix_windows_console()
  handler.setFormatter(ColorLevelFormatter(use_color=use_color))
  setattr(handler, '_timid_handler', True)
  pkg_logger.addHandler(handler)
  pkg_logger.setLevel(resolved)
  return resolved
