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

import bisect
import math
from typing import Iterable, NamedTuple, Sequence, Tuple

__all__ = ("Position", "TrajectorySample", "Trajectory", "slerp_positions")


class Position(NamedTuple):
  """ A geodetic position on the spherical Earth model. """

  lat_deg: float
  lon_deg: float
  alt_m: float = 0.

  @classmethod
  def create(cls, lat_deg: float, lon_deg: float, alt_m: float = 0.):
    if not -90. <= lat_deg <= 90.:
      raise ValueError(f"latitude has to be between -90 and 90 (was {lat_deg})")
    if not -180. <= lon_deg <= 180.:
      raise ValueError(f"longitude has to be between -180 and 180 (was {lon_deg})")
    return cls(float(lat_deg), float(lon_deg), float(alt_m))

  @property
  def unit_vector(self) -> Tuple[float, float, float]:
    lat, lon = math.radians(self.lat_deg), math.radians(self.lon_deg)
    return math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)

  @classmethod
  def from_unit_vector(cls, x: float, y: float, z: float, alt_m: float = 0.):
    norm = math.sqrt(x * x + y * y + z * z)
    lat = math.degrees(math.asin(max(-1., min(1., z / norm))))
    lon = math.degrees(math.atan2(y, x))
    return cls(lat, lon, alt_m)


def slerp_positions(p1: Position, p2: Position, fraction: float) -> Position:
  """ Great-circle interpolation from p1 (fraction 0) to p2 (fraction 1). """
  if fraction <= 0.:
    return p1
  if fraction >= 1.:
    return p2
  u, v = p1.unit_vector, p2.unit_vector
  dot = max(-1., min(1., sum(a * b for a, b in zip(u, v))))
  omega = math.acos(dot)
  alt = p1.alt_m + fraction * (p2.alt_m - p1.alt_m)
  if omega < 1e-12:
    return Position(p1.lat_deg, p1.lon_deg, alt)
  w1 = math.sin((1. - fraction) * omega) / math.sin(omega)
  w2 = math.sin(fraction * omega) / math.sin(omega)
  return Position.from_unit_vector(*[w1 * a + w2 * b for a, b in zip(u, v)], alt_m=alt)


class TrajectorySample(NamedTuple):
  t: float
  position: Position


class Trajectory(NamedTuple):
  """ Time-stamped positions; in between samples the position moves along the great circle.

  Before the first sample and after the last one the trajectory stays at the end points.
  """

  samples: Tuple[TrajectorySample, ...]

  @classmethod
  def from_samples(cls, samples: Iterable[Tuple[float, Position]]):
    samples = tuple(TrajectorySample(float(t), Position(*p)) for t, p in samples)
    if not samples:
      raise ValueError("a trajectory needs at least one sample")
    for (t1, _), (t2, _) in zip(samples, samples[1:]):
      if not t2 > t1:
        raise ValueError(f"trajectory timestamps have to be strictly increasing ({t1} >= {t2})")
    return cls(samples)

  @classmethod
  def static(cls, position: Position, t: float = 0.):
    return cls((TrajectorySample(float(t), Position(*position)),))

  @property
  def times(self) -> Tuple[float, ...]:
    return tuple(s.t for s in self.samples)

  @property
  def is_static(self) -> bool:
    return len(self.samples) == 1

  @property
  def t_first(self) -> float:
    return self.samples[0].t

  @property
  def t_last(self) -> float:
    return self.samples[-1].t

  def position_at(self, t: float) -> Position:
    samples = self.samples
    if t <= samples[0].t:
      return samples[0].position
    if t >= samples[-1].t:
      return samples[-1].position
    times = self.times
    i = bisect.bisect_left(times, t)
    if times[i] == t:
      return samples[i].position
    (t1, p1), (t2, p2) = samples[i - 1], samples[i]
    return slerp_positions(p1, p2, (t - t1) / (t2 - t1))

  def positions_at(self, times: Sequence[float]) -> Tuple[Position, ...]:
    return tuple(self.position_at(t) for t in times)

  def shifted(self, delay_s: float):
    """ The same path travelled delay_s seconds later. """
    return Trajectory(tuple(TrajectorySample(t + delay_s, p) for t, p in self.samples))
