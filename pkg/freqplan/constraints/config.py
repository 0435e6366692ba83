# Copyright 2022 The Freqplan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
from typing import FrozenSet, Iterable, Optional

import traitlets as tl

from freqplan.core import traits as ftl

__all__ = ("ConstraintConfig", "LARGER_SERVICE_TIMES", "LARGER_THRESHOLD", "LARGER_AREAS",
           "PROACTIVE_STRATEGIES")

LARGER_SERVICE_TIMES = "S1"
LARGER_THRESHOLD = "S2"
LARGER_AREAS = "S3"
PROACTIVE_STRATEGIES = (LARGER_SERVICE_TIMES, LARGER_THRESHOLD, LARGER_AREAS)


class ConstraintConfig(tl.HasTraits):
  """ How restriction sets are derived.

  S1 extends every delayable beam by up to t_d_s, S2 scales the interference threshold by x_min
  and S3 replaces the position of uncertain mobile beams by a disc of radius gamma_m (plus any
  declared operational area). A strategy is active when its parameter departs from the neutral
  value (t_d_s=0, x_min=1, gamma_m=0).
  """

  delta_min_rad = ftl.PositiveFloat(math.radians(0.8))
  t_d_s = tl.Float(0.)
  x_min = tl.Float(1.)
  gamma_m = tl.Float(0.)
  dt_s = ftl.PositiveFloat(60.)
  area_samples = tl.Integer(16)
  prune = tl.Bool(True)

  def __init__(self, delta_min_rad: float = math.radians(0.8), t_d_s: float = 0.,
               x_min: float = 1., gamma_m: float = 0., dt_s: float = 60.,
               area_samples: int = 16, prune: bool = True):
    super().__init__(delta_min_rad=delta_min_rad, t_d_s=t_d_s, x_min=x_min, gamma_m=gamma_m,
                     dt_s=dt_s, area_samples=area_samples, prune=prune)

  @tl.validate("t_d_s", "gamma_m")
  def _valid_non_negative(self, proposal):
    value = proposal["value"]
    if value < 0:
      raise tl.TraitError(f"{proposal['trait'].name} should be >= 0, but was {value}")
    return value

  @tl.validate("x_min")
  def _valid_x_min(self, proposal):
    value = proposal["value"]
    if value < 1:
      raise tl.TraitError(f"x_min should be >= 1, but was {value}")
    return value

  @tl.validate("area_samples")
  def _valid_area_samples(self, proposal):
    value = proposal["value"]
    if value < 3:
      raise tl.TraitError(f"area_samples should be >= 3, but was {value}")
    return value

  @property
  def active_strategies(self) -> FrozenSet[str]:
    active = set()
    if self.t_d_s > 0:
      active.add(LARGER_SERVICE_TIMES)
    if self.x_min > 1:
      active.add(LARGER_THRESHOLD)
    if self.gamma_m > 0:
      active.add(LARGER_AREAS)
    return frozenset(active)

  def strategies(self, strategy_set: Optional[Iterable[str]] = None) -> FrozenSet[str]:
    if strategy_set is None:
      return self.active_strategies
    strategy_set = frozenset(strategy_set)
    unknown = strategy_set - set(PROACTIVE_STRATEGIES)
    if unknown:
      raise ValueError(f"unknown proactive strategies {sorted(unknown)}")
    return strategy_set

  def threshold_rad(self, strategy_set: Optional[Iterable[str]] = None) -> float:
    if LARGER_THRESHOLD in self.strategies(strategy_set):
      return self.x_min * self.delta_min_rad
    return self.delta_min_rad

  def delay_steps(self, strategy_set: Optional[Iterable[str]] = None) -> int:
    """ Number of grid steps a delayable beam may slip under S1. """
    if LARGER_SERVICE_TIMES not in self.strategies(strategy_set):
      return 0
    return int(math.floor(self.t_d_s / self.dt_s + 1e-9))

  def to_dict(self):
    return {name: getattr(self, name) for name in sorted(self.trait_names())}

  def replace(self, **changes) -> "ConstraintConfig":
    values = self.to_dict()
    values.update(changes)
    return ConstraintConfig(**values)

  def __repr__(self):
    return (f"<ConstraintConfig delta_min_deg={math.degrees(self.delta_min_rad):.3f} "
            f"t_d_s={self.t_d_s} x_min={self.x_min} gamma_m={self.gamma_m} dt_s={self.dt_s}>")
