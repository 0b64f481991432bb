#
# Copyright (c) 2026 The timid-tools authors
#
# MIT License - See LICENSE file accompanying this package.
#

"""Arena layouts: object sites in the unit-square workspace and the vicinity rule
that turns robot positions into proposition truth values."""

from typing import Dict, Tuple, Sequence
from dataclasses import dataclass

import math

import numpy as np

from ..exceptions import ConfigError
from ..internal_types import Point, FloatArray

LION = 'Lion'
BALL = 'Ball'
PROPOSITIONS: Tuple[str, ...] = (LION, BALL)

DEFAULT_VICINITY_RADIUS = 0.12

def distance(a: Point, b: Point) -> float:
  return math.hypot(a[0] - b[0], a[1] - b[1])

def segment_point_distance(p: Point, a: Point, b: Point) -> float:
  """Shortest distance from point p to the segment a-b."""
  ax, ay = a
  bx, by = b
  dx, dy = bx - ax, by - ay
  length2 = dx * dx + dy * dy
  if length2 == 0.0:
    return distance(p, a)
  u = ((p[0] - ax) * dx + (p[1] - ay) * dy) / length2
  u = min(1.0, max(0.0, u))
  return distance(p, (ax + u * dx, ay + u * dy))

@dataclass(frozen=True)
class Arena:
  lion_pos: Point
  ball_pos: Point
  depot_pos: Point
  vicinity_radius: float = DEFAULT_VICINITY_RADIUS
  layout: int = 0

  def __post_init__(self):
    self.validate()

  def validate(self) -> None:
    if not self.vicinity_radius > 0:
      raise ConfigError(f"vicinity_radius must be positive, got {self.vicinity_radius}")
    for name, pos in self.sites.items():
      if not (0.0 <= pos[0] <= 1.0 and 0.0 <= pos[1] <= 1.0):
        raise ConfigError(f"Site {name} at {pos} lies outside the unit square")
    names = list(self.sites)
    for i, a in enumerate(names):
      for b in names[i+1:]:
        if distance(self.sites[a], self.sites[b]) <= 2.0 * self.vicinity_radius:
          raise ConfigError(
              f"Sites {a} and {b} are closer than twice the vicinity radius {self.vicinity_radius}"
            )

  @property
  def sites(self) -> Dict[str, Point]:
    return {'lion': self.lion_pos, 'ball': self.ball_pos, 'depot': self.depot_pos}

  def site(self, name: str) -> Point:
    try:
      return self.sites[name]
    except KeyError:
      raise ConfigError(f"Unknown site {name!r}") from None

  def near(self, pos: Point, site: Point) -> bool:
    return distance(pos, site) <= self.vicinity_radius

  def propositions_at(self, robot_positions: Sequence[Point]) -> Dict[str, bool]:
    """Lion (resp. Ball) holds iff some robot is within the vicinity radius of the lion (resp. ball)."""
    return {
        LION: any(self.near(p, self.lion_pos) for p in robot_positions),
        BALL: any(self.near(p, self.ball_pos) for p in robot_positions),
      }

  def proposition_trace(self, positions: FloatArray) -> list:
    """Applies the vicinity rule to a (T, robots, 2) position array."""
    lion = np.asarray(self.lion_pos)
    ball = np.asarray(self.ball_pos)
    d_lion = np.linalg.norm(positions - lion, axis=-1)
    d_ball = np.linalg.norm(positions - ball, axis=-1)
    lion_t = (d_lion <= self.vicinity_radius).any(axis=-1)
    ball_t = (d_ball <= self.vicinity_radius).any(axis=-1)
    return [{LION: bool(a), BALL: bool(b)} for a, b in zip(lion_t, ball_t)]

# Three object distributions; the depot is where every robot starts.
_LAYOUT_SITES: Tuple[Tuple[Point, Point, Point], ...] = (
    ((0.25, 0.75), (0.75, 0.75), (0.50, 0.15)),
    ((0.20, 0.30), (0.70, 0.80), (0.80, 0.20)),
    ((0.80, 0.50), (0.25, 0.60), (0.50, 0.10)),
  )

NUM_LAYOUTS = len(_LAYOUT_SITES)

def get_arena(layout: int, vicinity_radius: float=DEFAULT_VICINITY_RADIUS) -> Arena:
  if not 0 <= layout < NUM_LAYOUTS:
    raise ConfigError(f"Layout index must be in [0, {NUM_LAYOUTS - 1}], got {layout}")
  lion, ball, depot = _LAYOUT_SITES[layout]
  return Arena(lion_pos=lion, ball_pos=ball, depot_pos=depot, vicinity_radius=vicinity_radius, layout=layout)
