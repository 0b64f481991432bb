#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Step-level mistake labels for each task"""

from typing import List, Sequence, Union

from ..ltl import PropositionState
from .arena import LION, BALL
from .tasks import Task, parse_task

def label_steps(task: Union[str, Task], prop_trace: Sequence[PropositionState]) -> List[bool]:
  """Marks the steps at which the execution is making the task's mistake.

  Mutex: both the lion and the ball are occupied.
  Ordering: the lion is occupied before the ball has ever been reached. If the
  ball is never reached and the lion never visited, the final step is marked,
  since the ordering obligation was never discharged.
  """
  task = parse_task(task)
  if task is Task.MUTEX:
    return [bool(s[LION]) and bool(s[BALL]) for s in prop_trace]
  labels: List[bool] = []
  ball_seen = False
  lion_seen = False
  for s in prop_trace:
    ball_seen = ball_seen or bool(s[BALL])
    lion = bool(s[LION])
    lion_seen = lion_seen or lion
    labels.append(lion and not ball_seen)
  if len(labels) > 0 and not ball_seen and not lion_seen:
    labels[-1] = True
  return labels

def video_label(step_labels: Sequence[bool]) -> bool:
  return any(step_labels)
