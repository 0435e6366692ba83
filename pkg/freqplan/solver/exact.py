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

""" Exhaustive branch-and-bound assignment for small instances (reference oracle). """

import logging
import math
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from freqplan.constraints.restrictions import RestrictionSets
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.core.plan import Block, FrequencyAssignment, FrequencyPlan
from freqplan.errors import SearchSpaceTooLarge
from freqplan.solver.config import SolveConfig
from freqplan.solver.heuristic import active_weights, check_power_tables

logger = logging.getLogger(__name__)

__all__ = ("ExactResult", "solve_exact")


class ExactResult(NamedTuple):
  feasible: bool
  objective_watts: Optional[float]
  assignments: Mapping[str, FrequencyAssignment]
  plan: Optional[FrequencyPlan]
  nodes: int = 0
  complete: bool = True


class _Option(NamedTuple):
  cost: float
  block: Block
  used: int


def _options(beam, grid: GridConfig, config: SolveConfig, weight: float) -> List[_Option]:
  reserved = config.reserved_extra(beam)
  f_floor = config.channel_floor(grid)
  options = []
  for used in range(beam.b_min, beam.b_max + 1):
    total = used + reserved
    cost = beam.power(used) * weight
    for f in range(f_floor, grid.n_channels - total + 2):
      for g, p in grid.groups:
        options.append(_Option(cost, Block(f, total, g, p), used))
  options.sort(key=lambda o: (o.cost, o.block.f, o.block.g, o.block.p))
  return options


def _compatible(a: Block, b: Block, interference: bool, handover: bool) -> bool:
  if interference and a.p == b.p and a.overlaps(b):
    return False
  if handover and a.g == b.g and a.p == b.p and a.overlaps(b):
    return False
  return True


def solve_exact(beams: Sequence, restriction_sets: RestrictionSets, grid: GridConfig,
                config: Optional[SolveConfig] = None,
                time_grid: Optional[TimeGrid] = None,
                upper_bound: float = math.inf,
                node_limit: Optional[int] = None) -> ExactResult:
  """ Minimum-objective assignment serving every beam, or feasible=False when none exists.

  Raises SearchSpaceTooLarge when the product of per-beam option counts exceeds
  config.max_combinations. Backup slots are not supported.

  With a node_limit the size check is skipped and the search stops after that many visited
  nodes (complete=False). Only plans strictly cheaper than upper_bound are returned, so a
  complete search that comes back infeasible proves no such plan exists.
  """
  config = config or SolveConfig()
  beams = sorted(beams, key=lambda b: b.id)
  check_power_tables(beams)
  weights = active_weights(beams, time_grid)
  options = {beam.id: _options(beam, grid, config, weights[beam.id]) for beam in beams}

  size = math.prod(max(len(o), 1) for o in options.values())
  if node_limit is None and size > config.max_combinations:
    raise SearchSpaceTooLarge(
        f"{len(beams)} beams span {size} combinations (limit {config.max_combinations})")

  if any(not o for o in options.values()):
    logger.debug("some beam has no placement in the spectrum")
    return ExactResult(False, None, {}, None)

  partners = restriction_sets.partners()
  graph = restriction_sets.conflict_graph(beam.id for beam in beams)
  order = [b.id for b in sorted(
      beams, key=lambda b: (-graph.degree[b.id], len(options[b.id]), b.id))]
  remaining_min = [0.] * (len(order) + 1)
  for depth in range(len(order) - 1, -1, -1):
    remaining_min[depth] = remaining_min[depth + 1] + options[order[depth]][0].cost

  best_cost = upper_bound
  best: Optional[Dict[str, _Option]] = None
  chosen: Dict[str, _Option] = {}
  nodes = 0
  truncated = False

  def search(depth: int, cost: float) -> None:
    nonlocal best_cost, best, nodes, truncated
    if depth == len(order):
      if cost < best_cost:
        best_cost, best = cost, dict(chosen)
      return
    beam_id = order[depth]
    for option in options[beam_id]:
      if cost + option.cost + remaining_min[depth + 1] >= best_cost:
        break
      if node_limit is not None and nodes >= node_limit:
        truncated = True
        return
      nodes += 1
      if all(_compatible(option.block, chosen[other].block, *flags)
             for other, flags in partners.get(beam_id, {}).items() if other in chosen):
        chosen[beam_id] = option
        search(depth + 1, cost + option.cost)
        del chosen[beam_id]
        if truncated:
          return

  search(0, 0.)
  logger.debug("exact search visited %d nodes%s", nodes, " (budget exhausted)" if truncated else "")
  if best is None:
    return ExactResult(False, None, {}, None, nodes, not truncated)

  by_id = {beam.id: beam for beam in beams}
  assignments = {}
  for beam_id, option in sorted(best.items()):
    block = option.block
    assignments[beam_id] = FrequencyAssignment(
        beam_id, block.f, block.b, block.g, block.p,
        reserved_extra_channels=config.reserved_extra(by_id[beam_id]))
  windows = {beam.id: (beam.t_start, beam.t_end) for beam in beams}
  return ExactResult(True, best_cost, assignments, FrequencyPlan.static(windows, assignments),
                     nodes, not truncated)
