#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Waypoint scheduling for compliant and mistake-injected episodes

Time is planned in slots. A leg departing in slot s moves its robot in a
straight line from wherever it is to the leg's target, arriving at the end of
slot s; the robot then waits there until its next leg departs. The simulator
turns slots into steps (`steps_per_leg` steps per slot).
"""

from typing import List, Optional, Tuple, Union
from dataclasses import dataclass

import math
import logging

import numpy as np

from ..exceptions import ScheduleError
from ..internal_types import Point
from .arena import Arena, get_arena, distance, segment_point_distance
from .tasks import Task, MistakeKind, parse_task, parse_mistake, check_mistake_compatible

logger = logging.getLogger(__name__)

DEFAULT_MAX_SLOTS = 24
START_JITTER = 0.04
DECOY_CLEARANCE = 2.0  # in vicinity radii

@dataclass(frozen=True)
class Leg:
  target: Point
  depart_slot: int
  site: str
  """'lion', 'ball', 'home' or 'decoy'"""

@dataclass(frozen=True)
class RobotPlan:
  robot: int
  role: str
  """'actor', 'partner' or 'decoy'"""
  start: Point
  legs: Tuple[Leg, ...]

  @property
  def last_slot(self) -> int:
    return self.legs[-1].depart_slot if len(self.legs) > 0 else -1

@dataclass(frozen=True)
class EpisodePlan:
  task: Task
  layout: int
  mistake: MistakeKind
  num_slots: int
  robots: Tuple[RobotPlan, ...]

  @property
  def num_robots(self) -> int:
    return len(self.robots)

  def robots_with_role(self, role: str) -> List[RobotPlan]:
    return [r for r in self.robots if r.role == role]

class _RobotBuilder:
  robot: int
  role: str
  start: Point
  legs: List[Leg]

  def __init__(self, robot: int, role: str, start: Point):
    self.robot = robot
    self.role = role
    self.start = start
    self.legs = []

  @property
  def position(self) -> Point:
    return self.legs[-1].target if len(self.legs) > 0 else self.start

  @property
  def free_slot(self) -> int:
    """Earliest slot in which this robot may depart again."""
    return self.legs[-1].depart_slot + 1 if len(self.legs) > 0 else 0

  def go(self, target: Point, site: str, slot: int) -> int:
    """Adds a leg departing at `slot`; returns the slot in which it arrives."""
    assert slot >= self.free_slot, "legs must depart in increasing slots"
    self.legs.append(Leg(target=target, depart_slot=slot, site=site))
    return slot

  def build(self) -> RobotPlan:
    return RobotPlan(robot=self.robot, role=self.role, start=self.start, legs=tuple(self.legs))

def _dwell(rng: np.random.Generator, low: int=1, high: int=2) -> int:
  return int(rng.integers(low, high + 1))

def _start_position(arena: Arena, rng: np.random.Generator) -> Point:
  angle = rng.uniform(0.0, 2.0 * math.pi)
  radius = rng.uniform(0.0, START_JITTER)
  x, y = arena.depot_pos
  return (
      float(min(1.0, max(0.0, x + radius * math.cos(angle)))),
      float(min(1.0, max(0.0, y + radius * math.sin(angle)))),
    )

def _visit(b: _RobotBuilder, arena: Arena, site: str, slot: int, dwell: int) -> int:
  """Sends a robot to a site; returns the slot in which it departs again."""
  b.go(arena.site(site), site, slot)
  return slot + 1 + dwell

def _decoy_ok(arena: Arena, frm: Point, to: Point) -> bool:
  clearance = DECOY_CLEARANCE * arena.vicinity_radius
  for site in (arena.lion_pos, arena.ball_pos):
    if distance(to, site) <= clearance or segment_point_distance(site, frm, to) <= clearance:
      return False
  return True

def _add_decoy_moves(b: _RobotBuilder, arena: Arena, rng: np.random.Generator, horizon: int) -> None:
  """Task-irrelevant wandering that never comes near the lion or the ball."""
  n_moves = int(rng.integers(1, 4))
  slot = int(rng.integers(0, 3))
  for _ in range(n_moves):
    if slot >= horizon:
      break
    for _attempt in range(100):
      cand = (float(rng.uniform(0.05, 0.95)), float(rng.uniform(0.05, 0.95)))
      if _decoy_ok(arena, b.position, cand) and _decoy_ok(arena, cand, b.start):
        b.go(cand, 'decoy', slot)
        slot += 1 + _dwell(rng, 0, 2)
        break
  if len(b.legs) > 0:
    # every decoy waypoint has a clear straight line home
    b.go(b.start, 'home', max(slot, b.free_slot))

def _plan_mutex(actor: _RobotBuilder, partner: _RobotBuilder, arena: Arena, mistake: MistakeKind,
                rng: np.random.Generator, lead: int) -> None:
  first, second = ('lion', 'ball') if rng.random() < 0.5 else ('ball', 'lion')
  if mistake is MistakeKind.MUTEX_OVERLAP:
    a_slot = lead
    b_slot = lead + int(rng.integers(-1, 2)) if lead > 0 else lead + int(rng.integers(0, 2))
    a_leave = _visit(actor, arena, first, a_slot, _dwell(rng, 2, 3))
    b_leave = _visit(partner, arena, second, b_slot, _dwell(rng, 2, 3))
    actor.go(actor.start, 'home', a_leave)
    partner.go(partner.start, 'home', b_leave)
    return
  if rng.random() < 0.5:
    # one robot visits both sites in turn
    leave = _visit(actor, arena, first, lead, _dwell(rng))
    leave = _visit(actor, arena, second, leave, _dwell(rng))
    actor.go(actor.start, 'home', leave)
  else:
    leave = _visit(actor, arena, first, lead, _dwell(rng))
    actor.go(actor.start, 'home', leave)
    # the partner sets off only once the actor has cleared the first site
    start = leave + 1 + int(rng.integers(0, 2))
    leave2 = _visit(partner, arena, second, start, _dwell(rng))
    partner.go(partner.start, 'home', leave2)

def _plan_ordering(actor: _RobotBuilder, partner: _RobotBuilder, arena: Arena, mistake: MistakeKind,
                   rng: np.random.Generator, lead: int) -> None:
  if mistake is MistakeKind.NONE:
    if rng.random() < 0.5:
      leave = _visit(actor, arena, 'ball', lead, _dwell(rng))
      leave = _visit(actor, arena, 'lion', leave, _dwell(rng))
      actor.go(actor.start, 'home', leave)
    else:
      leave = _visit(actor, arena, 'ball', lead, _dwell(rng))
      actor.go(actor.start, 'home', leave)
      # ball already reached at the end of slot `lead`
      start = lead + 1 + int(rng.integers(0, 2))
      leave2 = _visit(partner, arena, 'lion', start, _dwell(rng))
      partner.go(partner.start, 'home', leave2)
    return
  if mistake is MistakeKind.LION_FIRST:
    leave = _visit(actor, arena, 'lion', lead, _dwell(rng))
    if rng.random() < 0.5:
      leave = _visit(actor, arena, 'ball', leave, _dwell(rng))
      actor.go(actor.start, 'home', leave)
    else:
      actor.go(actor.start, 'home', leave)
      start = leave + int(rng.integers(0, 2))
      leave2 = _visit(partner, arena, 'ball', start, _dwell(rng))
      partner.go(partner.start, 'home', leave2)
    return
  if mistake is MistakeKind.SKIP_BALL:
    leave = _visit(actor, arena, 'lion', lead, _dwell(rng))
    actor.go(actor.start, 'home', leave)
    return
  raise ScheduleError(f"Mistake {mistake.value!r} cannot be planned for the ordering task")

def plan_episode(
      task: Union[str, Task],
      layout: Union[int, Arena],
      num_robots: int,
      mistake: Union[str, MistakeKind, None],
      rng_seed: int,
      max_slots: int=DEFAULT_MAX_SLOTS,
    ) -> EpisodePlan:
  """Builds a per-robot waypoint schedule.

  Compliant plans satisfy the task; mistake plans force the named violation.
  Which robot acts, which partners it, and which wander as decoys is drawn
  at random per episode.

  Raises:
      ScheduleError: fewer than 2 robots, a mistake incompatible with the task,
                     or a schedule that does not fit in `max_slots`.
  """
  task = parse_task(task)
  mistake = parse_mistake(mistake)
  check_mistake_compatible(task, mistake)
  if num_robots < 2:
    raise ScheduleError(f"At least 2 robots are required, got {num_robots}")
  arena = layout if isinstance(layout, Arena) else get_arena(layout)
  rng = np.random.default_rng(rng_seed)

  order = rng.permutation(num_robots)
  builders: List[Optional[_RobotBuilder]] = [None] * num_robots
  roles = ['actor', 'partner'] + ['decoy'] * (num_robots - 2)
  for role, robot in zip(roles, order):
    builders[int(robot)] = _RobotBuilder(int(robot), role, _start_position(arena, rng))
  by_role = {b.role: b for b in builders if b is not None and b.role != 'decoy'}
  actor = by_role['actor']
  partner = by_role['partner']

  lead = int(rng.integers(0, 3))
  if task is Task.MUTEX:
    _plan_mutex(actor, partner, arena, mistake, rng, lead)
  else:
    _plan_ordering(actor, partner, arena, mistake, rng, lead)

  horizon = max(actor.free_slot, partner.free_slot)
  for b in builders:
    assert b is not None
    if b.role == 'decoy':
      _add_decoy_moves(b, arena, rng, horizon)

  last = max(b.free_slot for b in builders if b is not None)
  num_slots = last + int(rng.integers(1, 3))
  if num_slots > max_slots:
    raise ScheduleError(f"Schedule needs {num_slots} slots but the window is only {max_slots}")
  plan = EpisodePlan(
      task=task,
      layout=arena.layout,
      mistake=mistake,
      num_slots=num_slots,
      robots=tuple(b.build() for b in builders if b is not None),
    )
  logger.debug("Planned %s/%s episode with %d slots", task.value, mistake.value, num_slots)
  return plan
