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

""" Routing: which satellite serves a beam, and through which gateway. """

import bisect
import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from freqplan.core.trajectory import Position
from freqplan.errors import NoVisibleSatellite
from freqplan.geometry.earth import ground_distance_m, to_ecef
from freqplan.geometry.orbits import Constellation, elevation, propagate

logger = logging.getLogger(__name__)

__all__ = ("assign_satellite", "closest_gateway", "HandoverInterval", "HandoverSchedule",
           "build_handover_schedule", "gateway_intervals")

ELEVATION_TIE_RAD = 1e-12


def _position_of(beam_or_position, t: float) -> Position:
  if isinstance(beam_or_position, Position):
    return beam_or_position
  return beam_or_position.position_at(t)


def best_satellite(sat_positions: np.ndarray, ground: np.ndarray,
                   min_elevation_rad: float) -> Optional[int]:
  """ 1-based id of the visible satellite with the highest elevation; lowest id on ties. """
  elevations = elevation(sat_positions, ground)
  visible = elevations >= min_elevation_rad
  if not visible.any():
    return None
  top = elevations[visible].max()
  candidates = np.flatnonzero(visible & (elevations >= top - ELEVATION_TIE_RAD))
  return int(candidates[0]) + 1


def assign_satellite(beam, constellation: Constellation, t: float) -> int:
  """ The satellite serving `beam` (a Beam, User or Position) at time t. """
  position = _position_of(beam, t)
  sat_id = best_satellite(propagate(constellation, t), to_ecef(position),
                          math.radians(constellation.min_elevation_deg))
  if sat_id is None:
    raise NoVisibleSatellite(f"no satellite above {constellation.min_elevation_deg} deg from "
                             f"{position} at t={t}")
  return sat_id


def closest_gateway(position: Position, gateways: Sequence) -> str:
  """ Id of the gateway with the smallest ground distance; first one in order on ties. """
  if not gateways:
    raise ValueError("no gateways to route to")
  distances = [ground_distance_m(position, gw.position) for gw in gateways]
  return gateways[int(np.argmin(distances))].id


class HandoverInterval(NamedTuple):
  t_from: float
  t_to: float
  satellite_id: int


class HandoverSchedule(NamedTuple):
  """ Maximal intervals during which one satellite serves the beam. """

  beam_id: str
  intervals: Tuple[HandoverInterval, ...]

  @property
  def n_handovers(self) -> int:
    return max(len(self.intervals) - 1, 0)

  def satellite_at(self, t: float) -> Optional[int]:
    if not self.intervals or not self.intervals[0].t_from <= t < self.intervals[-1].t_to:
      return None
    i = bisect.bisect_right([iv.t_from for iv in self.intervals], t) - 1
    return self.intervals[i].satellite_id


def sample_times(t_start: float, t_end: float, dt_s: float) -> List[float]:
  """ t_start followed by every multiple of dt_s strictly inside (t_start, t_end). """
  times = [t_start]
  k = math.floor(t_start / dt_s) + 1
  while k * dt_s < t_end:
    times.append(k * dt_s)
    k += 1
  return times


def _merge_runs(beam_id, times, values, t_end) -> Tuple[HandoverInterval, ...]:
  intervals = []
  run_start, run_value = times[0], values[0]
  for t, value in zip(times[1:], values[1:]):
    if value != run_value:
      intervals.append(HandoverInterval(run_start, t, run_value))
      run_start, run_value = t, value
  intervals.append(HandoverInterval(run_start, t_end, run_value))
  return tuple(intervals)


def build_handover_schedule(beam, constellation: Constellation, dt_s: float) -> HandoverSchedule:
  """ Piecewise-constant satellite assignment of a beam, sampled every dt_s. """
  if not beam.t_start < beam.t_end:
    return HandoverSchedule(beam.id, ())
  times = sample_times(beam.t_start, beam.t_end, dt_s)
  satellites = [assign_satellite(beam, constellation, t) for t in times]
  schedule = HandoverSchedule(beam.id, _merge_runs(beam.id, times, satellites, beam.t_end))
  logger.debug("beam %s: %d handovers", beam.id, schedule.n_handovers)
  return schedule


def gateway_intervals(trajectory, t_start: float, t_end: float, gateways: Sequence,
                      dt_s: float) -> Tuple[HandoverInterval, ...]:
  """ Maximal intervals of constant closest gateway along a trajectory.

  Returned as (t_from, t_to, gateway_id) triples.
  """
  times = sample_times(t_start, t_end, dt_s)
  ids = [closest_gateway(trajectory.position_at(t), gateways) for t in times]
  return _merge_runs(None, times, ids, t_end)
