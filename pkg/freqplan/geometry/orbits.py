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
from typing import Sequence

import numpy as np
import traitlets as tl

from freqplan.geometry.earth import EARTH_RADIUS_M

__all__ = ("EARTH_MU", "Constellation", "propagate", "elevation", "max_slant_range")

EARTH_MU = 3.986004418e14  # m^3 / s^2


class Constellation(tl.HasTraits):
  """ A single ring of identical satellites on a circular orbit.

  Satellites are numbered from 1. They are evenly phased along the orbit unless
  `phase_offsets_deg` gives the mean anomaly of each satellite at t=0.
  With the default `earth_rotation_rad_s=0` positions are expressed in a frame where the ground
  does not move, so the whole constellation repeats after one orbital period.
  """

  n_satellites = tl.Integer(7)
  altitude_m = tl.Float(8062e3)
  inclination_deg = tl.Float(0.)
  raan_deg = tl.Float(0.)
  phase_offsets_deg = tl.List(tl.Float())
  min_elevation_deg = tl.Float(20.)
  earth_rotation_rad_s = tl.Float(0.)

  def __init__(self, n_satellites: int = 7, altitude_m: float = 8062e3,
               inclination_deg: float = 0., raan_deg: float = 0.,
               phase_offsets_deg: Sequence[float] = (), min_elevation_deg: float = 20.,
               earth_rotation_rad_s: float = 0.):
    super().__init__(n_satellites=n_satellites, altitude_m=altitude_m,
                     inclination_deg=inclination_deg, raan_deg=raan_deg,
                     phase_offsets_deg=list(phase_offsets_deg),
                     min_elevation_deg=min_elevation_deg,
                     earth_rotation_rad_s=earth_rotation_rad_s)

  @tl.validate("n_satellites")
  def _valid_n_satellites(self, proposal):
    value = proposal["value"]
    if value < 1:
      raise tl.TraitError(f"n_satellites should be >= 1, but was {value}")
    return value

  @tl.validate("altitude_m")
  def _valid_altitude(self, proposal):
    value = proposal["value"]
    if value <= 0:
      raise tl.TraitError(f"altitude_m should be > 0, but was {value}")
    return value

  @tl.validate("phase_offsets_deg")
  def _valid_offsets(self, proposal):
    value = proposal["value"]
    if value and len(value) != self.n_satellites:
      raise tl.TraitError(f"phase_offsets_deg needs one entry per satellite "
                          f"({len(value)} != {self.n_satellites})")
    return value

  @tl.validate("min_elevation_deg")
  def _valid_mask(self, proposal):
    value = proposal["value"]
    if not 0. <= value < 90.:
      raise tl.TraitError(f"min_elevation_deg should be in [0, 90), but was {value}")
    return value

  @property
  def semi_major_axis_m(self) -> float:
    return EARTH_RADIUS_M + self.altitude_m

  @property
  def period_s(self) -> float:
    return 2. * math.pi * math.sqrt(self.semi_major_axis_m ** 3 / EARTH_MU)

  @property
  def mean_motion_rad_s(self) -> float:
    return 2. * math.pi / self.period_s

  @property
  def satellite_ids(self):
    return tuple(range(1, self.n_satellites + 1))

  @property
  def epoch_anomalies_rad(self) -> np.ndarray:
    if self.phase_offsets_deg:
      return np.radians(np.asarray(self.phase_offsets_deg, dtype=np.float64))
    return 2. * np.pi * np.arange(self.n_satellites) / self.n_satellites

  def __repr__(self):
    return (f"<Constellation n_satellites={self.n_satellites} altitude_m={self.altitude_m} "
            f"inclination_deg={self.inclination_deg} min_elevation_deg={self.min_elevation_deg}>")


def propagate(constellation: Constellation, t: float) -> np.ndarray:
  """ Earth-fixed positions (n_satellites x 3, metres) of all satellites at time t. """
  u = constellation.epoch_anomalies_rad + constellation.mean_motion_rad_s * t
  a = constellation.semi_major_axis_m
  x, y = a * np.cos(u), a * np.sin(u)

  inc = math.radians(constellation.inclination_deg)
  y, z = y * math.cos(inc), y * math.sin(inc)

  raan = math.radians(constellation.raan_deg) - constellation.earth_rotation_rad_s * t
  x, y = x * math.cos(raan) - y * math.sin(raan), x * math.sin(raan) + y * math.cos(raan)
  return np.stack([x, y, z], axis=-1)


def elevation(sat_positions: np.ndarray, ground: np.ndarray) -> np.ndarray:
  """ Elevation angle (radians) of each satellite above the local horizon of `ground`. """
  los = np.atleast_2d(sat_positions) - ground
  up = ground / np.linalg.norm(ground)
  return np.arcsin(np.clip(los @ up / np.linalg.norm(los, axis=-1), -1., 1.))


def max_slant_range(constellation: Constellation) -> float:
  """ Distance to a satellite seen exactly at the elevation mask. """
  eps = math.radians(constellation.min_elevation_deg)
  a, r = constellation.semi_major_axis_m, EARTH_RADIUS_M
  return math.sqrt(a ** 2 - (r * math.cos(eps)) ** 2) - r * math.sin(eps)
