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

from typing import TYPE_CHECKING, List, NamedTuple, Optional, Tuple

from freqplan.core.trajectory import Position, Trajectory
from freqplan.core.users import FIXED, UncertaintySpec

if TYPE_CHECKING:  # pragma: no cover
  from freqplan.linkbudget.budget import PowerTable

__all__ = ("Beam",)


class Beam(NamedTuple):
  """ A downlink beam: one mobile user, or a group of fixed users, towards one gateway.

  The beam follows `trajectory` (the mobile user's path, or the static centre of a fixed group)
  and needs service during [t_start, t_end).
  """

  id: str
  user_ids: Tuple[str, ...]
  t_start: float
  t_end: float
  demand_bps: float
  b_min: int
  b_max: int
  trajectory: Trajectory
  kind: str = FIXED
  gateway_id: Optional[str] = None
  uncertainty: UncertaintySpec = UncertaintySpec()
  power_table: Optional["PowerTable"] = None

  @property
  def is_mobile(self) -> bool:
    return self.kind != FIXED

  @property
  def is_delayable(self) -> bool:
    return self.uncertainty.max_delay_s > 0

  def is_active(self, t: float) -> bool:
    return self.t_start <= t < self.t_end

  def position_at(self, t: float) -> Position:
    return self.trajectory.position_at(t)

  def power(self, b: int) -> float:
    return self.power_table.p_watts[b]

  def realized(self, horizon_s: float, delay_s: float = 0.,
               trajectory: Optional[Trajectory] = None):
    """ This beam as it actually happens: on another trajectory and/or delay_s later.

    The window keeps its length but is clamped to the horizon.
    """
    trajectory = self.trajectory if trajectory is None else trajectory
    if delay_s:
      trajectory = trajectory.shifted(delay_s)
    return self._replace(t_start=min(self.t_start + delay_s, horizon_s),
                         t_end=min(self.t_end + delay_s, horizon_s),
                         trajectory=trajectory)

  def violations(self, n_channels: int) -> List[str]:
    problems = []
    if self.b_min > self.b_max:
      problems.append(f"beam {self.id}: b_min>b_max")
    if self.b_min < 1:
      problems.append(f"beam {self.id}: b_min<1")
    if self.b_max > n_channels:
      problems.append(f"beam {self.id}: b_max>n_channels")
    if not self.t_start < self.t_end:
      problems.append(f"beam {self.id}: empty service window")
    if self.is_mobile and len(self.user_ids) != 1:
      problems.append(f"beam {self.id}: mobile beams carry exactly one user")
    if not self.user_ids:
      problems.append(f"beam {self.id}: no users")
    if not self.demand_bps > 0:
      problems.append(f"beam {self.id}: demand_bps must be > 0")
    return problems
