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

from typing import List, NamedTuple, Optional, Tuple

from freqplan.core.trajectory import Position, Trajectory

__all__ = ("FIXED", "AERONAUTICAL", "MARITIME", "LAND_MOBILE", "USER_KINDS",
           "UncertaintySpec", "User")

FIXED = "fixed"
AERONAUTICAL = "aeronautical"
MARITIME = "maritime"
LAND_MOBILE = "land_mobile"
USER_KINDS = (FIXED, AERONAUTICAL, MARITIME, LAND_MOBILE)


class UncertaintySpec(NamedTuple):
  """ What the operator knows about how a user may deviate from its declared plan. """

  max_delay_s: float = 0.
  alt_trajectories: Tuple[Trajectory, ...] = ()
  operational_area: Optional[Tuple[Position, ...]] = None

  @property
  def is_certain(self) -> bool:
    return (self.max_delay_s == 0. and not self.alt_trajectories
            and self.operational_area is None)


class User(NamedTuple):
  id: str
  kind: str
  demand_bps: float
  t_start: float
  t_end: float
  trajectory: Trajectory
  known_a_priori: bool = True
  uncertainty: UncertaintySpec = UncertaintySpec()

  @property
  def is_mobile(self) -> bool:
    return self.kind != FIXED

  def position_at(self, t: float) -> Position:
    return self.trajectory.position_at(t)

  def violations(self, horizon_s: float) -> List[str]:
    problems = []
    if self.kind not in USER_KINDS:
      problems.append(f"user {self.id}: unknown kind '{self.kind}'")
    if not self.demand_bps > 0:
      problems.append(f"user {self.id}: demand_bps must be > 0")
    if not self.t_start < self.t_end:
      problems.append(f"user {self.id}: empty service window")
    if self.t_start < 0 or self.t_end > horizon_s:
      problems.append(f"user {self.id}: service window outside [0, {horizon_s}]")
    if self.kind == FIXED:
      if self.t_start != 0 or self.t_end != horizon_s:
        problems.append(f"user {self.id}: fixed users are served over the whole horizon")
      if not self.trajectory.is_static:
        problems.append(f"user {self.id}: fixed users have a single static position")
    times = self.trajectory.times
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
      problems.append(f"user {self.id}: trajectory timestamps not strictly increasing")
    if self.uncertainty.max_delay_s < 0:
      problems.append(f"user {self.id}: max_delay_s must be >= 0")
    return problems
