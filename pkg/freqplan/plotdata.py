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

""" Channel-occupancy chart data, seen from the satellites and from the gateways.

One row per plan piece, handover interval and channel block. Rendering is left to the user.
"""

import logging
import pathlib
from typing import Iterator, Mapping, Sequence, Union

import pandas as pd

from freqplan.core.beams import Beam
from freqplan.core.plan import FrequencyAssignment, FrequencyPlan
from freqplan.geometry.routing import HandoverSchedule

logger = logging.getLogger(__name__)

__all__ = ("occupancy_rows", "occupancy_frame", "write_occupancy", "COLUMNS")

COLUMNS = ("view", "owner", "beam_id", "t_from", "t_to", "g", "p", "f", "f_end", "role")
PRIMARY, RESERVED, BACKUP = "primary", "reserved", "backup"


def _blocks(assignment: FrequencyAssignment) -> Iterator[tuple]:
  used = assignment.used_channels
  yield PRIMARY, assignment.f, assignment.f + used - 1, assignment.g, assignment.p
  if assignment.reserved_extra_channels:
    yield RESERVED, assignment.f + used, assignment.f_end, assignment.g, assignment.p
  for slot in assignment.backup_slots:
    yield BACKUP, slot.f, slot.f + slot.b - 1, slot.g, slot.p


def occupancy_rows(plan: FrequencyPlan, beams: Union[Mapping[str, Beam], Sequence[Beam]],
                   schedules: Mapping[str, HandoverSchedule]) -> Iterator[dict]:
  if not isinstance(beams, Mapping):
    beams = {b.id: b for b in beams}
  for beam_id, pieces in plan.pieces.items():
    beam = beams.get(beam_id)
    schedule = schedules.get(beam_id)
    for piece in pieces:
      if piece.is_deactivated:
        continue
      blocks = list(_blocks(piece.assignment))
      if beam is not None and beam.gateway_id is not None:
        for role, f, f_end, g, p in blocks:
          yield dict(view="gateway", owner=beam.gateway_id, beam_id=beam_id, t_from=piece.t_from,
                     t_to=piece.t_to, g=g, p=p, f=f, f_end=f_end, role=role)
      if schedule is None:
        continue
      for interval in schedule.intervals:
        t_from, t_to = max(piece.t_from, interval.t_from), min(piece.t_to, interval.t_to)
        if t_from >= t_to:
          continue
        for role, f, f_end, g, p in blocks:
          yield dict(view="satellite", owner=str(interval.satellite_id), beam_id=beam_id,
                     t_from=t_from, t_to=t_to, g=g, p=p, f=f, f_end=f_end, role=role)


def occupancy_frame(plan: FrequencyPlan, beams, schedules) -> pd.DataFrame:
  frame = pd.DataFrame(list(occupancy_rows(plan, beams, schedules)), columns=list(COLUMNS))
  return frame.sort_values(["view", "owner", "t_from", "beam_id", "role"], kind="stable",
                           ignore_index=True)


def write_occupancy(path: Union[str, pathlib.Path], plan: FrequencyPlan, beams,
                    schedules) -> pd.DataFrame:
  path = pathlib.Path(path)
  path.parent.mkdir(parents=True, exist_ok=True)
  frame = occupancy_frame(plan, beams, schedules)
  frame.to_csv(path, index=False)
  logger.info("wrote %d occupancy rows to %s", len(frame), path)
  return frame
