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

import logging
from typing import NamedTuple, Optional, Tuple

import traitlets as tl

from freqplan.core import traits as ftl
from freqplan.core.grid import GridConfig

logger = logging.getLogger(__name__)

__all__ = ("SolveConfig", "SolveReport")


class OptionalCount(tl.Integer):
  """ An integer >= 1, or None for "strategy off". """

  def __init__(self, **kwargs):
    super().__init__(default_value=None, allow_none=True, **kwargs)

  def validate(self, obj, value):
    if value is None:
      return value
    value = super().validate(obj, value)
    if value < 1:
      self.error(obj, value)
    return value


class SolveConfig(tl.HasTraits):
  """ Reservation strategies and search budget of the proactive solver.

  x_ch (S4) reserves x_ch * b_min adjacent channels for every mobile beam, x_slots (S5) reserves
  that many backup slots of b_min channels for every mobile beam, and x_spec (S6) keeps the lowest
  ceil(x_spec * N_ch) channels out of the baseline plan. Up to exact_search_limit beams (0 turns it
  off) the solver finishes with a branch and bound that visits at most
  len(beams) * max_combinations nodes.
  """

  x_ch = OptionalCount()
  x_slots = OptionalCount()
  x_spec = ftl.Fraction(allow_none=True)
  seed = tl.Integer(0)
  local_search_budget = tl.Integer(1000)
  restarts = tl.Integer(4)
  exact_search_limit = tl.Integer(6)
  max_combinations = tl.Integer(10 ** 7)

  def __init__(self, x_ch: Optional[int] = None, x_slots: Optional[int] = None,
               x_spec: Optional[float] = None, seed: int = 0, local_search_budget: int = 1000,
               restarts: int = 4, exact_search_limit: int = 6,
               max_combinations: int = 10 ** 7):
    super().__init__(x_ch=x_ch, x_slots=x_slots, x_spec=x_spec, seed=seed,
                     local_search_budget=local_search_budget, restarts=restarts,
                     exact_search_limit=exact_search_limit, max_combinations=max_combinations)

  @tl.validate("local_search_budget", "restarts", "exact_search_limit")
  def _valid_non_negative(self, proposal):
    value = proposal["value"]
    if value < 0:
      raise tl.TraitError(f"{proposal['trait'].name} should be >= 0, but was {value}")
    return value

  @tl.validate("max_combinations")
  def _valid_max_combinations(self, proposal):
    value = proposal["value"]
    if value < 1:
      raise tl.TraitError(f"max_combinations should be >= 1, but was {value}")
    return value

  def reserved_extra(self, beam) -> int:
    """ S4 channels held next to a mobile beam's block. """
    return self.x_ch * beam.b_min if self.x_ch and beam.is_mobile else 0

  def n_backup_slots(self, beam) -> int:
    return self.x_slots if self.x_slots and beam.is_mobile else 0

  def channel_floor(self, grid: GridConfig) -> int:
    """ Lowest channel a baseline assignment may use. """
    return 1 + grid.reserved_channels(self.x_spec)

  def to_dict(self):
    return {name: getattr(self, name) for name in sorted(self.trait_names())}

  def replace(self, **changes) -> "SolveConfig":
    values = self.to_dict()
    values.update(changes)
    return SolveConfig(**values)

  def __repr__(self):
    return (f"<SolveConfig x_ch={self.x_ch} x_slots={self.x_slots} x_spec={self.x_spec} "
            f"seed={self.seed} restarts={self.restarts}>")


class SolveReport(NamedTuple):
  """ Outcome of a proactive solve. wall_time_s is logged but never written to output files. """

  objective_watts: float
  served: Tuple[str, ...]
  deactivated: Tuple[str, ...]
  method: str = "heuristic"
  wall_time_s: float = 0.

  @property
  def n_beams(self) -> int:
    return len(self.served) + len(self.deactivated)

  @property
  def served_fraction(self) -> float:
    return len(self.served) / self.n_beams if self.n_beams else 1.
