#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Exceptions defined by this package"""

from typing import Optional

class TimidError(Exception):
  """Base class for all error exceptions defined by this package."""
  #pass

class LtlSyntaxError(TimidError):
  """A specification string could not be parsed.

  Attributes:
      position: 0-based character offset of the offending token, or None
                if the error is not tied to a location.
      text:     The full specification string being parsed.
  """
  position: Optional[int]
  text: str

  def __init__(self, message: str, text: str='', position: Optional[int]=None):
    if position is not None:
      message = f"{message} at position {position}"
      if text != '':
        message += f": {text!r}"
    super().__init__(message)
    self.position = position
    self.text = text

class UnknownOperatorError(LtlSyntaxError):
  pass

class UnknownAtomError(TimidError, KeyError):
  def __str__(self):
    return str(self.args[0]) if len(self.args) > 0 else 'unknown atom'

class ShapeError(TimidError, ValueError):
  pass

class ScheduleError(TimidError):
  pass

class ConfigError(TimidError):
  pass

class DatasetError(TimidError):
  pass

class NonFiniteLossError(TimidError):
  pass

class MetricError(TimidError, ValueError):
  pass

class EmptyTraceError(TimidError, ValueError):
  pass
