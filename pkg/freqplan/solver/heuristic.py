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

""" Proactive baseline planning: greedy first-fit, local search and seeded restarts. """

import logging
import math
import time
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from freqplan.constraints.restrictions import RestrictionSets
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.core.plan import DEACTIVATED, BackupSlot, FrequencyAssignment, FrequencyPlan
from freqplan.errors import InconsistentInput
from freqplan.solver.config import SolveConfig, SolveReport
from freqplan.solver.occupancy import ChannelMask

logger = logging.getLogger(__name__)

__all__ = ("solve_baseline", "active_weights", "assignment_power", "Placer")

# Exact plans replace the heuristic one only when cheaper by more than this.
IMPROVEMENT_RTOL = 1e-9

Assignments = Dict[str, FrequencyAssignment]


def active_weights(beams: Sequence, time_grid: Optional[TimeGrid] = None) -> Dict[str, float]:
  """ Share of the horizon each beam is active on the grid (1 for every beam without a grid). """
  if time_grid is None:
    return {beam.id: 1. for beam in beams}
  weights = {}
  for beam in beams:
    k0, k1 = time_grid.step_range(beam.t_start, beam.t_end)
    weights[beam.id] = (k1 - k0) * time_grid.dt_s / time_grid.horizon_s
  return weights


def assignment_power(beam, assignment: FrequencyAssignment) -> float:
  return beam.power(assignment.used_channels)


def check_power_tables(beams: Sequence) -> None:
  for beam in beams:
    table = beam.power_table
    if table is None or table.beam_id != beam.id:
      raise InconsistentInput(f"beam {beam.id}: missing power table")
    missing = [b for b in range(beam.b_min, beam.b_max + 1) if b not in table.p_watts]
    if missing:
      raise InconsistentInput(f"beam {beam.id}: power table lacks b={missing}")


class Placer:
  """ First-fit placement of single beams against the blocks of already placed partners. """

  def __init__(self, beams: Mapping[str, object], restriction_sets: RestrictionSets,
               grid: GridConfig, config: SolveConfig):
    self.beams = beams
    self.grid = grid
    self.config = config
    self.partners = restriction_sets.partners()
    self.f_floor = config.channel_floor(grid)

  def mask_for(self, beam_id: str, assignments: Assignments) -> ChannelMask:
    mask = ChannelMask(self.grid)
    for partner, (interference, handover) in self.partners.get(beam_id, {}).items():
      placed = assignments.get(partner)
      if placed is not None:
        mask.add_partner(placed.blocks, interference, handover)
    return mask

  def place(self, beam, assignments: Assignments) -> Optional[FrequencyAssignment]:
    """ Cheapest channel count that fits, at the lowest f, then g, then p. """
    mask = self.mask_for(beam.id, assignments)
    reserved = self.config.reserved_extra(beam)
    block = None
    for used in beam.power_table.by_power():
      total = used + reserved
      if not beam.b_min <= used <= beam.b_max or total > self.grid.n_channels:
        continue
      block = mask.place(total, self.grid.groups, self.f_floor)
      if block is not None:
        break
    if block is None:
      return None

    slots = []
    n_slots = self.config.n_backup_slots(beam)
    if n_slots:
      slot_mask = mask.copy()
      slot_mask.block_group(block)
      for _ in range(n_slots):
        slot = slot_mask.place(beam.b_min, self.grid.groups, self.f_floor)
        if slot is None:
          logger.warning("beam %s: only %d of %d backup slots fit", beam.id, len(slots), n_slots)
          break
        slots.append(BackupSlot(slot.f, slot.g, slot.p, slot.b))
        slot_mask.block_group(slot)
    return FrequencyAssignment(beam.id, block.f, block.b, block.g, block.p,
                               reserved_extra_channels=reserved, backup_slots=tuple(slots))

  def greedy(self, order: Sequence[str]) -> Tuple[Assignments, List[str]]:
    assignments: Assignments = {}
    unplaced = []
    for beam_id in order:
      assignment = self.place(self.beams[beam_id], assignments)
      if assignment is None:
        unplaced.append(beam_id)
      else:
        assignments[beam_id] = assignment
    return assignments, unplaced

  def local_search(self, assignments: Assignments, order: Sequence[str], budget: int) -> int:
    """ Re-places beams one at a time while that lowers their power. Returns attempts used. """
    attempts = 0
    improved = True
    while improved and attempts < budget:
      improved = False
      for beam_id in order:
        if beam_id not in assignments:
          continue
        if attempts >= budget:
          break
        attempts += 1
        beam = self.beams[beam_id]
        current = assignments.pop(beam_id)
        candidate = self.place(beam, assignments)
        if (candidate is not None
            and assignment_power(beam, candidate) < assignment_power(beam, current)):
          assignments[beam_id] = candidate
          improved = True
        else:
          assignments[beam_id] = current
    return attempts

  def retry(self, assignments: Assignments, unplaced: Sequence[str]) -> List[str]:
    still_unplaced = []
    for beam_id in unplaced:
      assignment = self.place(self.beams[beam_id], assignments)
      if assignment is None:
        still_unplaced.append(beam_id)
      else:
        assignments[beam_id] = assignment
    return still_unplaced


def _objective(beams: Mapping[str, object], assignments: Assignments,
               weights: Mapping[str, float]) -> float:
  return sum(assignment_power(beams[beam_id], a) * weights[beam_id]
             for beam_id, a in sorted(assignments.items()))


def base_order(beams: Sequence, restriction_sets: RestrictionSets) -> List[str]:
  """ Descending conflict degree, then descending b_min, then id. """
  graph = restriction_sets.conflict_graph(beam.id for beam in beams)
  return [beam.id for beam in sorted(beams, key=lambda b: (-graph.degree[b.id], -b.b_min, b.id))]


def _plan(beams: Sequence, assignments: Assignments) -> FrequencyPlan:
  windows = {beam.id: (beam.t_start, beam.t_end) for beam in beams}
  return FrequencyPlan.static(windows, {beam.id: assignments.get(beam.id, DEACTIVATED)
                                        for beam in beams})


def _exact_search(beams, restriction_sets, grid, config, time_grid, upper_bound):
  from freqplan.solver.exact import solve_exact
  return solve_exact(beams, restriction_sets, grid, config, time_grid=time_grid,
                     upper_bound=upper_bound, node_limit=len(beams) * config.max_combinations)


def solve_baseline(beams: Sequence, restriction_sets: RestrictionSets, grid: GridConfig,
                   config: Optional[SolveConfig] = None,
                   time_grid: Optional[TimeGrid] = None) -> Tuple[FrequencyPlan, SolveReport]:
  """ Static power-minimal assignment of every beam; beams that do not fit are DEACTIVATED.

  With a time grid the objective is the time-averaged power, otherwise the plain sum. Up to
  config.exact_search_limit beams the heuristic result seeds a branch and bound that either
  proves it optimal, improves on it, or places beams the heuristic had to deactivate.
  """
  config = config or SolveConfig()
  started = time.perf_counter()
  beams = sorted(beams, key=lambda b: b.id)
  check_power_tables(beams)
  by_id = {beam.id: beam for beam in beams}
  weights = active_weights(beams, time_grid)

  placer = Placer(by_id, restriction_sets, grid, config)
  order = base_order(beams, restriction_sets)
  rng = np.random.default_rng(config.seed)
  orders = [order] + [list(rng.permutation(order)) for _ in range(config.restarts)]
  best, best_key = None, None
  for run, run_order in enumerate(orders):
    assignments, unplaced = placer.greedy(run_order)
    placer.local_search(assignments, run_order, config.local_search_budget)
    unplaced = placer.retry(assignments, unplaced)
    key = (len(unplaced), _objective(by_id, assignments, weights), run)
    logger.debug("pass %d: %d unplaced, objective %.6g W", run, key[0], key[1])
    if best_key is None or key < best_key:
      best_key, best = key, (assignments, unplaced)

  method = "heuristic"
  if beams and len(beams) <= config.exact_search_limit and not config.x_slots:
    upper_bound = best_key[1] * (1. - IMPROVEMENT_RTOL) if not best_key[0] else math.inf
    exact = _exact_search(beams, restriction_sets, grid, config, time_grid, upper_bound)
    if exact.feasible:
      best = (dict(exact.assignments), [])
    if exact.complete and not best[1]:
      method = "exact"
    elif exact.feasible:
      method = "bounded-search"

  assignments, unplaced = best
  for beam_id in unplaced:
    logger.warning("beam %s deactivated: no conflict-free placement", beam_id)
  plan = _plan(beams, assignments)
  report = SolveReport(objective_watts=_objective(by_id, assignments, weights),
                       served=tuple(sorted(assignments)),
                       deactivated=tuple(sorted(set(by_id) - set(assignments))),
                       method=method, wall_time_s=time.perf_counter() - started)
  logger.info("baseline plan (%s): %d beams served, %d deactivated, objective %.6g W in %.1fs",
              method, len(report.served), len(report.deactivated), report.objective_watts,
              report.wall_time_s)
  return plan, report
