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

""" Sets of possible positions of a beam, used in place of its point position under S3. """

from typing import Callable, Iterable, Optional, Tuple

from freqplan.constraints.config import LARGER_AREAS, ConstraintConfig
from freqplan.core.trajectory import Position
from freqplan.geometry.earth import sample_disc, sample_polygon

__all__ = ("has_uncertainty_area", "possible_positions", "area_function")


def has_uncertainty_area(beam) -> bool:
  return beam.is_mobile and not beam.uncertainty.is_certain


def possible_positions(beam, t: float, config: ConstraintConfig,
                       strategy_set: Optional[Iterable[str]] = None) -> Tuple[Position, ...]:
  """ Centre at t, plus a sampled disc of radius gamma_m and the sampled operational area. """
  center = beam.position_at(t)
  if LARGER_AREAS not in config.strategies(strategy_set) or not has_uncertainty_area(beam):
    return (center,)
  points = sample_disc(center, config.gamma_m, config.area_samples)
  if beam.uncertainty.operational_area:
    points += sample_polygon(beam.uncertainty.operational_area, config.area_samples)
  return points


def area_function(config: ConstraintConfig,
                  strategy_set: Optional[Iterable[str]] = None
                  ) -> Optional[Callable[[object, float], Tuple[Position, ...]]]:
  """ A (beam, t) -> positions callable for track building, or None when S3 is off. """
  strategies = config.strategies(strategy_set)
  if LARGER_AREAS not in strategies:
    return None

  def positions(beam, t):
    return possible_positions(beam, t, config, strategies)
  return positions
