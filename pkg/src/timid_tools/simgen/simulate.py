#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Kinematic execution of an episode plan: straight-line legs at bounded speed
plus Gaussian position jitter, followed by proposition extraction."""

from typing import List, Dict
from dataclasses import dataclass

import numpy as np

from ..internal_types import FloatArray
from .arena import Arena
from .planner import EpisodePlan, RobotPlan

DEFAULT_STEPS_PER_LEG = 4
DEFAULT_NOISE_SIGMA = 0.01

@dataclass(frozen=True)
class SimulationResult:
  positions: FloatArray
  """(T, robots, 2) robot coordinates per step"""
  prop_trace: List[Dict[str, bool]]

  @property
  def num_steps(self) -> int:
    return int(self.positions.shape[0])

def _robot_path(robot: RobotPlan, num_slots: int, steps_per_leg: int) -> FloatArray:
  path = np.empty((num_slots * steps_per_leg, 2), dtype=np.float64)
  legs = {leg.depart_slot: leg for leg in robot.legs}
  cur = np.asarray(robot.start, dtype=np.float64)
  phases = np.arange(1, steps_per_leg + 1, dtype=np.float64) / steps_per_leg
  for slot in range(num_slots):
    rows = slice(slot * steps_per_leg, (slot + 1) * steps_per_leg)
    leg = legs.get(slot)
    if leg is None:
      path[rows] = cur
    else:
      target = np.asarray(leg.target, dtype=np.float64)
      path[rows] = cur + phases[:, None] * (target - cur)
      # land exactly on the waypoint at the arrival step
      path[(slot + 1) * steps_per_leg - 1] = target
      cur = target
  return path

def simulate(
      plan: EpisodePlan,
      arena: Arena,
      steps_per_leg: int=DEFAULT_STEPS_PER_LEG,
      noise_sigma: float=DEFAULT_NOISE_SIGMA,
      rng_seed: int=0,
    ) -> SimulationResult:
  """Runs a plan; the same (plan, arena, parameters, seed) always gives bit-identical output.

  Each leg lasts `steps_per_leg` steps, so speed never exceeds the diagonal of
  the workspace per leg. Positions are clamped to the unit square.
  """
  if steps_per_leg < 1:
    raise ValueError(f"steps_per_leg must be at least 1, got {steps_per_leg}")
  rng = np.random.default_rng(rng_seed)
  ideal = np.stack([_robot_path(r, plan.num_slots, steps_per_leg) for r in plan.robots], axis=1)
  if noise_sigma > 0:
    jitter = rng.normal(0.0, noise_sigma, size=ideal.shape)
    positions = np.clip(ideal + jitter, 0.0, 1.0)
  else:
    positions = np.clip(ideal, 0.0, 1.0)
  return SimulationResult(positions=positions, prop_trace=arena.proposition_trace(positions))
