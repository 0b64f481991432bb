#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""The two benchmark tasks, their LTL specifications and prompts, and the mistake kinds
the generator can inject."""

from typing import Tuple, Union
from enum import Enum

from ..exceptions import ConfigError, ScheduleError
from ..ltl import LtlFormula, parse_ltl

class Task(Enum):
  MUTEX = 'mutex'
  ORDERING = 'ordering'

  @property
  def formula_text(self) -> str:
    return _formula_text[self]

  @property
  def formula(self) -> LtlFormula:
    return parse_ltl(self.formula_text)

  @property
  def task_prompt(self) -> str:
    return _prompts[self][0]

  @property
  def mistake_prompt(self) -> str:
    return _prompts[self][1]

  @property
  def mistakes(self) -> Tuple['MistakeKind', ...]:
    """Mistake kinds that violate this task."""
    return _compatible[self]

  @property
  def default_mistakes(self) -> Tuple['MistakeKind', ...]:
    return _default_mistakes[self]

class MistakeKind(Enum):
  NONE = 'none'
  MUTEX_OVERLAP = 'mutex_overlap'
  LION_FIRST = 'lion_first'
  SKIP_BALL = 'skip_ball'

_formula_text = {
    Task.MUTEX: 'G !(Lion & Ball)',
    Task.ORDERING: '!Lion U Ball',
  }

_prompts = {
    Task.MUTEX: ('robot NOT IN lion AND green ball', 'robot IN lion AND green ball'),
    Task.ORDERING: ('robot NOT IN lion UNTIL in green ball', 'robot IN lion BEFORE green ball'),
  }

_compatible = {
    Task.MUTEX: (MistakeKind.MUTEX_OVERLAP,),
    Task.ORDERING: (MistakeKind.LION_FIRST, MistakeKind.SKIP_BALL),
  }

_default_mistakes = {
    Task.MUTEX: (MistakeKind.MUTEX_OVERLAP,),
    Task.ORDERING: (MistakeKind.LION_FIRST, MistakeKind.SKIP_BALL),
  }

def parse_task(value: Union[str, Task]) -> Task:
  if isinstance(value, Task):
    return value
  try:
    return Task(str(value).strip().lower())
  except ValueError:
    raise ConfigError(f"Unknown task {value!r}; expected one of {[t.value for t in Task]}") from None

def parse_mistake(value: Union[str, MistakeKind, None]) -> MistakeKind:
  if value is None:
    return MistakeKind.NONE
  if isinstance(value, MistakeKind):
    return value
  try:
    return MistakeKind(str(value).strip().lower())
  except ValueError:
    raise ConfigError(f"Unknown mistake kind {value!r}; expected one of {[m.value for m in MistakeKind]}") from None

def check_mistake_compatible(task: Task, mistake: MistakeKind) -> None:
  if mistake is not MistakeKind.NONE and mistake not in task.mistakes:
    raise ScheduleError(
        f"Mistake {mistake.value!r} is incompatible with task {task.value!r}; "
        f"expected one of {[m.value for m in task.mistakes]}"
      )
