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

""" From users to beams: fixed-user grouping, gateway splitting, link budgets and routing. """

import logging
from types import MappingProxyType
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from freqplan.core.beams import Beam
from freqplan.core.grid import GridConfig
from freqplan.core.trajectory import Trajectory
from freqplan.core.users import FIXED, User
from freqplan.errors import InfeasibleBeam, NoVisibleSatellite
from freqplan.geometry.earth import to_ecef
from freqplan.geometry.orbits import Constellation, propagate
from freqplan.geometry.routing import (HandoverSchedule, build_handover_schedule, closest_gateway,
                                       gateway_intervals, sample_times)
from freqplan.linkbudget.budget import LinkParams, build_power_table, compute_b_range
from freqplan.linkbudget.modcod import ModcodTable
from freqplan.scenario.grouping import group_fixed_users

logger = logging.getLogger(__name__)

__all__ = ("BeamSet", "build_beams", "mobile_beams", "fixed_beams", "worst_slant_range",
           "with_budget")


class BeamSet(NamedTuple):
  """ Beams ready for planning, their handover schedules and the users that cannot be served. """

  beams: Tuple[Beam, ...]
  schedules: Mapping[str, HandoverSchedule]
  unservable: Tuple[str, ...] = ()

  def of_user(self, user_id: str) -> Tuple[Beam, ...]:
    return tuple(b for b in self.beams if user_id in b.user_ids)


def mobile_beams(user: User, gateways: Sequence, dt_s: float) -> List[Beam]:
  """ One beam per interval of constant closest gateway, ids "<user>/<n>". Budget not set. """
  if gateways:
    intervals = gateway_intervals(user.trajectory, user.t_start, user.t_end, gateways, dt_s)
  else:
    intervals = ((user.t_start, user.t_end, None),)
  return [Beam(id=f"{user.id}/{n}", user_ids=(user.id,), t_start=t_from, t_end=t_to,
               demand_bps=user.demand_bps, b_min=1, b_max=1, trajectory=user.trajectory,
               kind=user.kind, gateway_id=gateway_id, uncertainty=user.uncertainty)
          for n, (t_from, t_to, gateway_id) in enumerate(intervals)]


def fixed_beams(users: Sequence[User], gateways: Sequence, max_beam_radius_m: float,
                horizon_s: float) -> List[Beam]:
  beams = []
  for n, group in enumerate(group_fixed_users(users, max_beam_radius_m)):
    gateway_id = closest_gateway(group.center, gateways) if gateways else None
    beams.append(Beam(id=f"fixed/{n}", user_ids=group.user_ids, t_start=0., t_end=horizon_s,
                      demand_bps=group.demand_bps, b_min=1, b_max=1,
                      trajectory=Trajectory.static(group.center), kind=FIXED,
                      gateway_id=gateway_id))
  return beams


def worst_slant_range(beam: Beam, schedule: HandoverSchedule, constellation: Constellation,
                      dt_s: float) -> float:
  """ Largest distance between the beam and its serving satellite over its window. """
  worst = 0.
  for t in sample_times(beam.t_start, beam.t_end, dt_s):
    sat = propagate(constellation, t)[schedule.satellite_at(t) - 1]
    worst = max(worst, float(np.linalg.norm(sat - to_ecef(beam.position_at(t)))))
  return worst


def with_budget(beam: Beam, schedule: HandoverSchedule, grid: GridConfig,
                constellation: Constellation, link: LinkParams, table: ModcodTable,
                dt_s: float) -> Beam:
  """ The beam with b_min, b_max and power table from its worst-case link.

  Raises InfeasibleBeam.
  """
  beam_link = link.replace(slant_range_m=worst_slant_range(beam, schedule, constellation, dt_s),
                           channel_bandwidth_hz=grid.channel_bandwidth_hz)
  b_min, b_max = compute_b_range(beam, beam_link, table, grid.n_channels)
  beam = beam._replace(b_min=b_min, b_max=b_max)
  return beam._replace(power_table=build_power_table(beam, beam_link, table))


def build_beams(users: Sequence[User], gateways: Sequence, grid: GridConfig,
                constellation: Constellation, link: LinkParams, table: ModcodTable,
                horizon_s: float, dt_s: float = 60., max_beam_radius_m: float = 250e3) -> BeamSet:
  """ Beams for `users`, with link budgets and handover schedules.

  Users whose beams see no satellite or cannot carry their demand are left out and reported as
  unservable.
  """
  fixed = [u for u in users if u.kind == FIXED]
  candidates = fixed_beams(fixed, gateways, max_beam_radius_m, horizon_s)
  for user in users:
    if user.kind != FIXED:
      candidates.extend(mobile_beams(user, gateways, dt_s))

  beams: List[Beam] = []
  schedules: Dict[str, HandoverSchedule] = {}
  unservable = set()
  for beam in candidates:
    try:
      schedule = build_handover_schedule(beam, constellation, dt_s)
      beam = with_budget(beam, schedule, grid, constellation, link, table, dt_s)
    except (InfeasibleBeam, NoVisibleSatellite) as err:
      logger.warning("beam %s cannot be served: %s", beam.id, err)
      unservable.update(beam.user_ids)
      continue
    beams.append(beam)
    schedules[beam.id] = schedule

  if unservable:
    beams = [b for b in beams if not unservable.intersection(b.user_ids)]
    schedules = {b.id: schedules[b.id] for b in beams}
  logger.info("built %d beams for %d users (%d unservable)", len(beams), len(users),
              len(unservable))
  return BeamSet(tuple(sorted(beams, key=lambda b: b.id)), MappingProxyType(schedules),
                 tuple(sorted(unservable)))
