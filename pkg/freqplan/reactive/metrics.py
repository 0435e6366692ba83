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

""" Cost and performance metrics of a finished run. """

import logging
from typing import Iterable, Mapping, Optional, Sequence, Union

import munch

from freqplan.core.beams import Beam
from freqplan.core.grid import TimeGrid
from freqplan.core.plan import FrequencyPlan
from freqplan.reactive.log import OperationsLog

logger = logging.getLogger(__name__)

__all__ = ("average_power", "served_users", "compute_metrics")


def average_power(plan: FrequencyPlan, beams: Union[Mapping[str, Beam], Sequence[Beam]],
                  time_grid: TimeGrid) -> float:
  """ (1/T) * sum over beams and grid steps of the power of the active, non-deactivated piece. """
  if not isinstance(beams, Mapping):
    beams = {b.id: b for b in beams}
  total = 0.
  for beam_id, pieces in plan.pieces.items():
    beam = beams.get(beam_id)
    if beam is None:
      continue
    w0, w1 = time_grid.step_range(beam.t_start, beam.t_end)
    for piece in pieces:
      if piece.is_deactivated:
        continue
      k0, k1 = time_grid.step_range(piece.t_from, piece.t_to)
      steps = min(k1, w1) - max(k0, w0)
      if steps > 0:
        total += beam.power(piece.assignment.used_channels) * steps * time_grid.dt_s
  return total / time_grid.horizon_s


def served_users(plan: FrequencyPlan, beams: Iterable[Beam], user_ids: Iterable[str],
                 unservable: Iterable[str] = ()) -> set:
  """ Users that have at least one beam and none of whose beams was ever deactivated. """
  deactivated = set(plan.deactivated_beams)
  beams_of = {}
  for beam in beams:
    for user_id in beam.user_ids:
      beams_of.setdefault(user_id, []).append(beam.id)
  unservable = set(unservable)
  return {u for u in user_ids
          if u not in unservable and beams_of.get(u)
          and all(b in plan and b not in deactivated for b in beams_of[u])}


def compute_metrics(plan: FrequencyPlan, beams: Union[Mapping[str, Beam], Sequence[Beam]],
                    user_ids: Sequence[str], time_grid: TimeGrid,
                    log: Optional[OperationsLog] = None, p_sat_w: Optional[float] = None,
                    unservable: Iterable[str] = ()) -> munch.Munch:
  """ Average power, its ratio to the satellite power budget, served and reallocation shares. """
  if isinstance(beams, Mapping):
    beams = list(beams.values())
  log = log or OperationsLog()
  power = average_power(plan, beams, time_grid)
  served = served_users(plan, beams, user_ids, unservable)
  n_users, n_beams = len(user_ids), len(beams)
  metrics = munch.Munch(
      power_w=power,
      power_ratio=power / p_sat_w if p_sat_w else None,
      n_users=n_users,
      n_served=len(served),
      served_fraction=len(served) / n_users if n_users else 1.,
      n_beams=n_beams,
      n_deactivated_beams=len(plan.deactivated_beams),
      n_realloc=log.n_realloc,
      realloc_per_beam=log.n_realloc / n_beams if n_beams else 0.,
  )
  logger.info("metrics: P=%.6g W, served %d/%d users, %d reallocations", metrics.power_w,
              metrics.n_served, metrics.n_users, metrics.n_realloc)
  return metrics
