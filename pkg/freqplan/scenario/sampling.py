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

""" Random positions and routes inside a geographic region. """

import math
from typing import Callable, Sequence, Tuple, TypeVar

import numpy as np

from freqplan.core.trajectory import Position, Trajectory, slerp_positions
from freqplan.errors import InvalidSpec
from freqplan.geometry.earth import course_and_distance, ground_distance_m, project

__all__ = ("in_region", "random_position", "scattered_position", "resample_while",
           "direct_route", "deviated_route", "route_deviation_m")

T = TypeVar("T")
Region = Tuple[float, float, float, float]


def in_region(position: Position, region: Region) -> bool:
  lat_min, lat_max, lon_min, lon_max = region
  return lat_min <= position.lat_deg <= lat_max and lon_min <= position.lon_deg <= lon_max


def random_position(region: Region, rng: np.random.Generator) -> Position:
  """ Uniform over the sphere area of the box. """
  lat_min, lat_max, lon_min, lon_max = region
  z = rng.uniform(math.sin(math.radians(lat_min)), math.sin(math.radians(lat_max)))
  return Position(math.degrees(math.asin(z)), float(rng.uniform(lon_min, lon_max)), 0.)


def resample_while(sampler: Callable[[], T], condition: Callable[[T], bool],
                   max_trials: int = 100) -> T:
  """ Draws from `sampler` until `condition` is false. """
  for _ in range(max_trials):
    value = sampler()
    if not condition(value):
      return value
  raise InvalidSpec(f"no acceptable sample after {max_trials} trials")


def scattered_position(center: Position, sigma_m: float, region: Region,
                       rng: np.random.Generator) -> Position:
  """ A point at a normally distributed distance and uniform course from `center`, in region. """
  def sampler():
    p = project(center, rng.uniform(0., 360.), abs(rng.normal(0., sigma_m)))
    return Position(p.lat_deg, p.lon_deg, 0.)
  return resample_while(sampler, lambda p: not in_region(p, region))


def direct_route(origin: Position, destination: Position, t_start: float,
                 t_end: float) -> Trajectory:
  return Trajectory.from_samples([(t_start, origin), (t_end, destination)])


def deviated_route(origin: Position, destination: Position, t_start: float, t_end: float,
                   offset_m: float) -> Trajectory:
  """ Same end points and times, passing offset_m to the side of the great-circle midpoint. """
  middle = slerp_positions(origin, destination, 0.5)
  course, _ = course_and_distance(middle, destination)
  via = project(middle, course + 90., offset_m)
  return Trajectory.from_samples([(t_start, origin),
                                  ((t_start + t_end) / 2., Position(via.lat_deg, via.lon_deg, 0.)),
                                  (t_end, destination)])


def route_deviation_m(route: Trajectory, reference: Sequence[Position]) -> float:
  """ Largest distance between the samples of `route` and the nearest reference point. """
  return max(min(ground_distance_m(s.position, p) for p in reference) for s in route.samples)
