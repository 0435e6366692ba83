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

""" Reactive stage: replays the horizon, reveals events and repairs the plan beam by beam.

Events sharing a reveal time form one batch. Within a batch, the beams of every updated user are
re-checked from the reveal time on against the current assignments of all other beams, and the
ones whose assignment no longer holds go through the reallocation cascade: keep, shrink inside
the S4 reserve, move to an S5 backup slot, first-fit inside the S6 emergency spectrum, first-fit
over the whole grid, deactivate. Assignments before the reveal time are never changed.
"""

import collections
import itertools
import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from singledispatchmethod import singledispatchmethod

from freqplan.constraints.config import ConstraintConfig
from freqplan.constraints.instant import InstantConflicts
from freqplan.core.beams import Beam
from freqplan.core.events import Delay, Event, NewUser, TrajectoryChange
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.core.plan import DEACTIVATED as PLAN_DEACTIVATED
from freqplan.core.plan import BackupSlot, Block, FrequencyAssignment, FrequencyPlan, PlanPiece
from freqplan.core.scenario import Scenario
from freqplan.core.trajectory import Trajectory
from freqplan.core.users import AERONAUTICAL, FIXED, LAND_MOBILE, MARITIME, User
from freqplan.errors import InfeasibleBeam, NoVisibleSatellite
from freqplan.geometry.routing import HandoverSchedule, build_handover_schedule
from freqplan.geometry.tracks import BeamTrack, Ephemeris, build_track
from freqplan.linkbudget.budget import LinkParams
from freqplan.linkbudget.modcod import ModcodTable
from freqplan.reactive.log import (DEACTIVATED, KEPT, MOVED_TO_RESERVED_SPECTRUM, MOVED_TO_SLOT,
                                   RE_SOLVED, WIDENED, LogRecord, OperationsLog)
from freqplan.scenario.beams import BeamSet, mobile_beams, with_budget
from freqplan.solver.config import SolveConfig
from freqplan.solver.occupancy import ChannelMask

logger = logging.getLogger(__name__)

__all__ = ("ReactiveEngine", "simulate_operations", "reallocate_beam", "realized_beams",
           "PRIORITIES", "KIND_PRIORITY")

KIND_PRIORITY = (FIXED, MARITIME, AERONAUTICAL, LAND_MOBILE)

Outcome = Tuple[str, Union[FrequencyAssignment, str]]


class Pending(NamedTuple):
  """ A beam waiting for a decision within one batch. `order` is the event order of its user. """

  order: int
  beam: Beam
  event: str
  user_id: str
  is_new: bool = False


def fifo_priority(pending: Pending):
  return pending.order, pending.beam.id


def kind_priority(pending: Pending):
  return KIND_PRIORITY.index(pending.beam.kind), pending.order, pending.beam.id


PRIORITIES: Dict[str, Callable[[Pending], tuple]] = {"fifo": fifo_priority, "kind": kind_priority}


# --------------------------------------------------------------------------------------------------
# Reallocation cascade
# --------------------------------------------------------------------------------------------------

def _valid_slots(slots: Sequence[BackupSlot], mask: ChannelMask,
                 primary: Block) -> Tuple[BackupSlot, ...]:
  return tuple(s for s in slots if mask.is_free(s.block) and not (
      s.g == primary.g and s.p == primary.p and s.block.overlaps(primary)))


def _moved(beam_id: str, block: Block, slots: Sequence[BackupSlot],
           mask: ChannelMask) -> FrequencyAssignment:
  return FrequencyAssignment(beam_id, block.f, block.b, block.g, block.p,
                             reserved_extra_channels=0,
                             backup_slots=_valid_slots(slots, mask, block))


def reallocate_beam(beam: Beam, current: Optional[FrequencyAssignment], mask: ChannelMask,
                    grid: GridConfig, config: SolveConfig) -> Outcome:
  """ First step of the cascade that succeeds against `mask` (the channels other beams hold).

  Returns the action and the new assignment, or DEACTIVATED.
  """
  by_power = [b for b in beam.power_table.by_power() if beam.b_min <= b <= beam.b_max]
  slots: Tuple[BackupSlot, ...] = ()

  if isinstance(current, FrequencyAssignment):
    slots = current.backup_slots
    if mask.is_free(current.block):
      return KEPT, current._replace(backup_slots=_valid_slots(slots, mask, current.block))

    if current.reserved_extra_channels:
      for b in by_power:
        if b > current.b:
          continue
        f = mask.first_fit(b, current.g, current.p, current.f, current.f_end)
        if f is not None:
          return WIDENED, _moved(beam.id, Block(f, b, current.g, current.p), slots, mask)

    for slot in slots:
      if mask.is_free(slot.block):
        others = tuple(s for s in slots if s != slot)
        return MOVED_TO_SLOT, _moved(beam.id, slot.block, others, mask)

  n_reserved = grid.reserved_channels(config.x_spec)
  if n_reserved:
    for b in by_power:
      block = mask.place(b, grid.groups, 1, n_reserved)
      if block is not None:
        return MOVED_TO_RESERVED_SPECTRUM, _moved(beam.id, block, slots, mask)

  for b in by_power:
    block = mask.place(b, grid.groups)
    if block is not None:
      return RE_SOLVED, _moved(beam.id, block, slots, mask)
  return DEACTIVATED, PLAN_DEACTIVATED


def realized_beams(beams: Sequence[Beam], scenario: Scenario) -> List[Beam]:
  """ The beams as they actually happen according to the scenario truth. """
  realized = []
  for beam in beams:
    if not beam.is_mobile:
      realized.append(beam)
      continue
    user = scenario.user(beam.user_ids[0])
    truth = scenario.truth_of(user.id)
    trajectory = None
    if truth.trajectory_index >= 0:
      trajectory = user.uncertainty.alt_trajectories[truth.trajectory_index]
    realized.append(beam.realized(scenario.horizon_s, truth.delay_s, trajectory))
  return [b for b in realized if b.t_start < b.t_end]


# --------------------------------------------------------------------------------------------------
# Engine
# --------------------------------------------------------------------------------------------------

class ReactiveEngine:
  """ Event loop of the reactive stage. After `run`, `plan`, `log`, `beams` and `schedules` hold
  the final plan and the beams as known at the end of the horizon.
  """

  def __init__(self, scenario: Scenario, beam_set: BeamSet, baseline: FrequencyPlan,
               link: LinkParams, table: ModcodTable,
               constraint_config: Optional[ConstraintConfig] = None,
               solve_config: Optional[SolveConfig] = None, priority: str = "fifo"):
    if priority not in PRIORITIES:
      raise ValueError(f"unknown priority '{priority}', choose from {sorted(PRIORITIES)}")
    self.scenario = scenario
    self.grid = scenario.grid
    self.link = link
    self.table = table
    self.constraint_config = constraint_config or ConstraintConfig()
    self.solve_config = solve_config or SolveConfig()
    self.priority = PRIORITIES[priority]
    self.time_grid = TimeGrid.create(scenario.horizon_s, self.constraint_config.dt_s)
    self.ephemeris = Ephemeris(scenario.constellation, self.time_grid)
    self.instant = InstantConflicts(scenario.constellation, self.time_grid,
                                    self.constraint_config.delta_min_rad,
                                    self.constraint_config.prune, self.ephemeris)

    self.declared: Dict[str, Beam] = {b.id: b for b in beam_set.beams}
    self.beams: Dict[str, Beam] = dict(self.declared)
    self.schedules: Dict[str, HandoverSchedule] = dict(beam_set.schedules)
    self.unservable: Set[str] = set(beam_set.unservable)
    self.plan = baseline
    self.log = OperationsLog()
    self._tracks: Dict[str, BeamTrack] = {}
    self._knowledge: Dict[str, Tuple[float, Optional[Trajectory]]] = {}
    self._announced: Dict[str, User] = {}

  # --- event payloads

  @singledispatchmethod
  def apply(self, payload) -> str:
    """ Updates what is known about a user; returns the event name. """
    raise NotImplementedError(f"Cannot apply {payload!r}")

  @apply.register(Delay)
  def _(self, payload) -> str:
    _, trajectory = self._knowledge.get(payload.user_id, (0., None))
    self._knowledge[payload.user_id] = (payload.delay_s, trajectory)
    return "delay"

  @apply.register(TrajectoryChange)
  def _(self, payload) -> str:
    delay, _ = self._knowledge.get(payload.user_id, (0., None))
    self._knowledge[payload.user_id] = (delay, payload.trajectory)
    return "trajectory_change"

  @apply.register(NewUser)
  def _(self, payload) -> str:
    self._announced[payload.user.id] = payload.user
    return "new_user"

  # --- helpers

  def _track(self, beam_id: str) -> BeamTrack:
    if beam_id not in self._tracks:
      self._tracks[beam_id] = build_track(self.beams[beam_id], self.time_grid, self.ephemeris,
                                          self.schedules.get(beam_id))
    return self._tracks[beam_id]

  def _set_beam(self, beam: Beam) -> None:
    self.beams[beam.id] = beam
    self.schedules[beam.id] = build_handover_schedule(beam, self.scenario.constellation,
                                                      self.constraint_config.dt_s)
    self._tracks.pop(beam.id, None)

  def _current(self, beam_id: str) -> Optional[FrequencyAssignment]:
    pieces = self.plan.pieces.get(beam_id, ())
    if not pieces or pieces[-1].is_deactivated:
      return None
    return pieces[-1].assignment

  def _mask(self, beam_id: str, k_from: int) -> ChannelMask:
    """ Channels held by other beams at conflicting steps k >= k_from. """
    mask = ChannelMask(self.grid)
    mine = self._track(beam_id)
    if k_from >= mine.k1:
      return mask
    for other_id, pieces in self.plan.pieces.items():
      if other_id == beam_id or other_id not in self.beams:
        continue
      other = self.beams[other_id]
      if (other.t_end <= self.time_grid.time(k_from)
          or other.t_start >= self.time_grid.time(mine.k1)):
        continue
      for piece in pieces:
        if piece.is_deactivated:
          continue
        k0, k1 = self.time_grid.step_range(piece.t_from, piece.t_to)
        if k1 <= k_from or k0 >= mine.k1:
          continue
        conflicts = self.instant.steps(mine, self._track(other_id), max(k0, k_from))
        interference = bool((conflicts.alpha < k1).any())
        handover = bool((conflicts.beta < k1).any())
        if interference or handover:
          mask.add_partner(piece.assignment.blocks, interference, handover)
    return mask

  def _set_pieces(self, beam: Beam, t_e: float, assignment) -> None:
    head = [PlanPiece(p.t_from, min(p.t_to, t_e), p.assignment)
            for p in self.plan.pieces.get(beam.id, ())
            if beam.t_start <= p.t_from < t_e]
    start = head[-1].t_to if head else beam.t_start
    if start < beam.t_end:
      if head and head[-1].assignment == assignment:
        head[-1] = head[-1]._replace(t_to=beam.t_end)
      else:
        head.append(PlanPiece(start, beam.t_end, assignment))
    self.plan = self.plan.with_pieces(beam.id, head)

  def _new_beams(self, user: User) -> List[Beam]:
    beams = []
    for beam in mobile_beams(user, self.scenario.gateways, self.constraint_config.dt_s):
      schedule = build_handover_schedule(beam, self.scenario.constellation,
                                         self.constraint_config.dt_s)
      beams.append(with_budget(beam, schedule, self.grid, self.scenario.constellation,
                               self.link, self.table, self.constraint_config.dt_s))
    return beams

  def _affected(self, t_e: float, user_id: str, order: int, event: str) -> List[Pending]:
    if user_id in self._announced:
      user = self._announced.pop(user_id)
      try:
        beams = self._new_beams(user)
      except (InfeasibleBeam, NoVisibleSatellite) as err:
        logger.warning("announced user %s cannot be served: %s", user_id, err)
        self.unservable.add(user_id)
        self.log.append(LogRecord(t_e, event, user_id, f"{user_id}/0", DEACTIVATED))
        return []
      for beam in beams:
        self.declared[beam.id] = beam
      return [Pending(order, beam, event, user_id, is_new=True) for beam in beams]

    delay, trajectory = self._knowledge.get(user_id, (0., None))
    pending = []
    for beam_id, declared in sorted(self.declared.items()):
      if user_id not in declared.user_ids or not declared.is_mobile:
        continue
      beam = declared.realized(self.scenario.horizon_s, delay, trajectory)
      if not beam.t_start < beam.t_end:
        logger.debug("beam %s moved past the horizon", beam_id)
        self.beams.pop(beam_id, None)
        self.plan = self.plan.without(beam_id)
        continue
      pending.append(Pending(order, beam, event, user_id))
    return pending

  def _decide(self, t_e: float, pending: Pending) -> None:
    beam = pending.beam
    try:
      self._set_beam(beam)
    except NoVisibleSatellite as err:
      logger.warning("beam %s lost satellite coverage: %s", beam.id, err)
      self.schedules.pop(beam.id, None)
      self._set_pieces(beam, t_e, PLAN_DEACTIVATED)
      self.log.append(LogRecord(t_e, pending.event, pending.user_id, beam.id, DEACTIVATED))
      return
    current = None if pending.is_new else self._current(beam.id)
    k_from = self.time_grid.first_step_at_or_after(max(t_e, beam.t_start))
    mask = self._mask(beam.id, k_from)
    action, assignment = reallocate_beam(beam, current, mask, self.grid, self.solve_config)
    if action == DEACTIVATED:
      logger.warning("beam %s deactivated at t=%s", beam.id, t_e)
    self._set_pieces(beam, t_e, assignment)
    self.log.append(LogRecord(t_e, pending.event, pending.user_id, beam.id, action,
                              assignment if isinstance(assignment, FrequencyAssignment) else None))

  def run(self, events: Optional[Sequence[Event]] = None) -> Tuple[FrequencyPlan, OperationsLog]:
    events = self.scenario.events if events is None else events
    events = sorted(events, key=lambda e: e.t_reveal)
    for t_e, batch in itertools.groupby(events, key=lambda e: e.t_reveal):
      by_user: Dict[str, List[str]] = collections.OrderedDict()
      for event in batch:
        name = self.apply(event.payload)
        names = by_user.setdefault(event.user_id, [])
        if name not in names:
          names.append(name)
      pending = []
      for order, (user_id, names) in enumerate(by_user.items()):
        pending.extend(self._affected(t_e, user_id, order, "+".join(names)))
      for item in sorted(pending, key=self.priority):
        self._decide(t_e, item)

    logger.info("operations: %d records, %d reallocations, %d deactivations",
                len(self.log), self.log.n_realloc, self.log.n_deactivations)
    return self.plan, self.log


def simulate_operations(baseline: FrequencyPlan, scenario: Scenario, beam_set: BeamSet,
                        link: LinkParams, table: ModcodTable,
                        constraint_config: Optional[ConstraintConfig] = None,
                        solve_config: Optional[SolveConfig] = None, priority: str = "fifo",
                        events: Optional[Sequence[Event]] = None
                        ) -> Tuple[FrequencyPlan, OperationsLog]:
  """ Replays the horizon from `baseline`; returns the final plan and the operations log. """
  engine = ReactiveEngine(scenario, beam_set, baseline, link, table, constraint_config,
                          solve_config, priority)
  return engine.run(events)
