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

""" Beams sampled on the time grid: footprint centres and serving satellites per step. """

import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from freqplan.core.grid import TimeGrid
from freqplan.core.trajectory import Position
from freqplan.errors import NoVisibleSatellite
from freqplan.geometry.earth import positions_to_ecef
from freqplan.geometry.orbits import Constellation, propagate
from freqplan.geometry.routing import HandoverSchedule, best_satellite

logger = logging.getLogger(__name__)

__all__ = ("Ephemeris", "BeamTrack", "build_track")

AreaFunction = Callable[[object, float], Sequence[Position]]


class Ephemeris:
  """ Satellite positions at every step of a time grid, shape (n_steps, n_satellites, 3). """

  def __init__(self, constellation: Constellation, grid: TimeGrid):
    self.constellation = constellation
    self.grid = grid
    self.positions = np.stack([propagate(constellation, t) for t in grid.times]) \
        if grid.n_steps else np.zeros((0, constellation.n_satellites, 3))

  def at_step(self, k: int) -> np.ndarray:
    return self.positions[k]

  def satellite(self, satellite_id: int, k) -> np.ndarray:
    return self.positions[k, np.asarray(satellite_id) - 1]

  def __repr__(self):
    return f"<Ephemeris steps={self.grid.n_steps} satellites={self.constellation.n_satellites}>"


class BeamTrack(NamedTuple):
  """ A beam on the grid: steps [k0, k1) where it is active, seen at each of those steps.

  `areas` holds the sampled set of possible positions per step (n, m, 3) when the beam is
  modelled with an uncertainty area, and is None otherwise.
  """

  beam_id: str
  k0: int
  k1: int
  centers: np.ndarray
  satellites: np.ndarray
  areas: Optional[np.ndarray] = None

  @property
  def n_steps(self) -> int:
    return self.k1 - self.k0

  @property
  def steps(self) -> np.ndarray:
    return np.arange(self.k0, self.k1)

  def is_active(self, k: int) -> bool:
    return self.k0 <= k < self.k1

  def points(self) -> np.ndarray:
    """ Area samples per step, or the centre as a one-point area. """
    if self.areas is not None:
      return self.areas
    return self.centers[:, None, :]

  def area_radius_m(self) -> float:
    """ Largest distance between a step's centre and one of its area samples. """
    if self.areas is None or not self.n_steps:
      return 0.
    return float(np.linalg.norm(self.areas - self.centers[:, None, :], axis=-1).max())


def build_track(beam, grid: TimeGrid, ephemeris: Ephemeris,
                schedule: Optional[HandoverSchedule] = None,
                area_fn: Optional[AreaFunction] = None) -> BeamTrack:
  """ Samples `beam` at the grid steps of its window.

  The serving satellite comes from `schedule` when given, otherwise it is recomputed from the
  ephemeris with the maximum-elevation rule.
  """
  k0, k1 = grid.step_range(beam.t_start, beam.t_end)
  times = grid.times[k0:k1]
  positions = beam.trajectory.positions_at(times)
  centers = positions_to_ecef(positions)

  if schedule is not None:
    satellites = np.array([schedule.satellite_at(t) for t in times], dtype=np.int64)
  else:
    mask = math.radians(ephemeris.constellation.min_elevation_deg)
    satellites = np.zeros(len(times), dtype=np.int64)
    for i, k in enumerate(range(k0, k1)):
      sat_id = best_satellite(ephemeris.at_step(k), centers[i], mask)
      if sat_id is None:
        raise NoVisibleSatellite(f"beam {beam.id}: no satellite visible at t={times[i]}")
      satellites[i] = sat_id

  areas = None
  if area_fn is not None and len(times):
    areas = np.stack([positions_to_ecef(area_fn(beam, t)) for t in times])
  return BeamTrack(beam.id, k0, k1, centers.reshape(-1, 3), satellites, areas)
