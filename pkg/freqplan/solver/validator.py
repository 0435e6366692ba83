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

""" Per-instant checking of a frequency plan on the time grid. """

import collections
import logging
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from freqplan.constraints.config import ConstraintConfig
from freqplan.constraints.instant import InstantConflicts
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.core.plan import Block, FrequencyPlan
from freqplan.geometry.orbits import Constellation
from freqplan.geometry.routing import HandoverSchedule
from freqplan.geometry.tracks import BeamTrack, Ephemeris, build_track

logger = logging.getLogger(__name__)

__all__ = ("Violation", "validate_plan", "HANDOVER_VIOLATION", "INTERFERENCE_VIOLATION",
           "BOUNDS_VIOLATION", "COVERAGE_VIOLATION", "UNKNOWN_BEAM")

HANDOVER_VIOLATION = "handover"
INTERFERENCE_VIOLATION = "interference"
BOUNDS_VIOLATION = "bounds"
COVERAGE_VIOLATION = "coverage"
UNKNOWN_BEAM = "unknown_beam"


class Violation(NamedTuple):
  kind: str
  beam_i: str
  beam_j: Optional[str] = None
  t: Optional[float] = None
  detail: str = ""

  def __str__(self):
    where = f" t={self.t}" if self.t is not None else ""
    other = f"/{self.beam_j}" if self.beam_j is not None else ""
    return f"{self.kind} {self.beam_i}{other}{where}: {self.detail}"


class _Entry(NamedTuple):
  beam_id: str
  piece: int
  k0: int
  k1: int
  blocks: Tuple[Block, ...]


def _entries(plan: FrequencyPlan, beams: Mapping[str, object], time_grid: TimeGrid) -> List[_Entry]:
  entries = []
  for beam_id, pieces in plan.pieces.items():
    if beam_id not in beams:
      continue
    for index, piece in enumerate(pieces):
      if piece.is_deactivated or piece.assignment is None:
        continue
      k0, k1 = time_grid.step_range(piece.t_from, piece.t_to)
      if k0 < k1:
        entries.append(_Entry(beam_id, index, k0, k1, piece.assignment.blocks))
  return entries


def _overlapping_entries(entries: Sequence[_Entry]) -> Set[Tuple[int, int]]:
  """ Index pairs of entries of different beams overlapping in one polarization. """
  by_polarization: Dict[int, List[Tuple[int, int, int]]] = collections.defaultdict(list)
  for index, entry in enumerate(entries):
    for block in entry.blocks:
      by_polarization[block.p].append((block.f, block.f_end, index))
  pairs = set()
  for intervals in by_polarization.values():
    intervals.sort()
    open_intervals: List[Tuple[int, int]] = []
    for f, f_end, index in intervals:
      open_intervals = [(e, i) for e, i in open_intervals if e >= f]
      for _, other in open_intervals:
        if entries[other].beam_id != entries[index].beam_id:
          pairs.add((min(index, other), max(index, other)))
      open_intervals.append((f_end, index))
  return pairs


def _shares(blocks_i: Sequence[Block], blocks_j: Sequence[Block], same_group: bool) -> bool:
  return any(x.p == y.p and x.overlaps(y) and (not same_group or x.g == y.g)
             for x in blocks_i for y in blocks_j)


def _covering_schedule(beam, schedules: Mapping[str, HandoverSchedule]):
  """ The beam's schedule when it spans the beam's window, else None (recomputed from orbits). """
  schedule = schedules.get(beam.id)
  if schedule is None or not schedule.intervals:
    return None
  if schedule.intervals[0].t_from > beam.t_start or schedule.intervals[-1].t_to < beam.t_end:
    return None
  return schedule


def validate_plan(plan: FrequencyPlan, beams: Sequence, schedules: Mapping[str, HandoverSchedule],
                  grid: GridConfig, constellation: Constellation, horizon_s: float,
                  config: Optional[ConstraintConfig] = None) -> List[Violation]:
  """ Violations of the handover and interference conditions and of the assignment bounds.

  Conditions are evaluated per grid instant from the beams' own positions (the realized ones when
  realized beams are passed), not from the restriction sets. One violation is reported per beam
  pair, kind and pair of plan pieces, at the first offending instant.
  """
  config = config or ConstraintConfig()
  by_id = {beam.id: beam for beam in beams}
  violations = []

  for beam_id in plan.beam_ids:
    if beam_id not in by_id:
      violations.append(Violation(UNKNOWN_BEAM, beam_id, detail="beam is not part of the scenario"))
  for beam_id, beam in sorted(by_id.items()):
    for problem in plan.coverage_violations({beam_id: (beam.t_start, beam.t_end)}):
      violations.append(Violation(COVERAGE_VIOLATION, beam_id, detail=problem))
    for piece in plan.pieces.get(beam_id, ()):
      if piece.is_deactivated:
        continue
      for problem in piece.assignment.violations(grid.n_channels, grid.n_reuses,
                                                 grid.n_polarizations, beam.b_min, beam.b_max):
        violations.append(Violation(BOUNDS_VIOLATION, beam_id, t=piece.t_from, detail=problem))

  if not plan.beam_ids or not by_id:
    return violations

  time_grid = TimeGrid.create(horizon_s, config.dt_s)
  entries = _entries(plan, by_id, time_grid)
  candidates = sorted(_overlapping_entries(entries))
  if not candidates:
    return violations

  ephemeris = Ephemeris(constellation, time_grid)
  instant = InstantConflicts(constellation, time_grid, config.delta_min_rad, config.prune,
                             ephemeris)
  tracks: Dict[str, BeamTrack] = {}

  def track_of(beam_id: str) -> BeamTrack:
    if beam_id not in tracks:
      tracks[beam_id] = build_track(by_id[beam_id], time_grid, ephemeris,
                                     _covering_schedule(by_id[beam_id], schedules))
    return tracks[beam_id]

  for a, b in candidates:
    ei, ej = sorted((entries[a], entries[b]), key=lambda e: (e.beam_id, e.piece))
    k_from, k_to = max(ei.k0, ej.k0), min(ei.k1, ej.k1)
    if k_from >= k_to:
      continue
    conflicts = instant.steps(track_of(ei.beam_id), track_of(ej.beam_id), k_from)
    beta = conflicts.beta[conflicts.beta < k_to]
    alpha = conflicts.alpha[conflicts.alpha < k_to]
    if len(beta) and _shares(ei.blocks, ej.blocks, same_group=True):
      violations.append(Violation(
          HANDOVER_VIOLATION, ei.beam_id, ej.beam_id, time_grid.time(int(beta[0])),
          f"pieces {ei.piece}/{ej.piece} share a satellite and overlap in one frequency group"))
    if len(alpha) and _shares(ei.blocks, ej.blocks, same_group=False):
      violations.append(Violation(
          INTERFERENCE_VIOLATION, ei.beam_id, ej.beam_id, time_grid.time(int(alpha[0])),
          f"pieces {ei.piece}/{ej.piece} interfere and overlap in one polarization"))

  if violations:
    logger.debug("plan has %d violations", len(violations))
  return violations
