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

import collections
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from freqplan.core.beams import Beam
from freqplan.core.events import Delay, Event, NewUser, TrajectoryChange
from freqplan.core.grid import GridConfig
from freqplan.core.trajectory import Position
from freqplan.core.users import UncertaintySpec, User
from freqplan.geometry.orbits import Constellation

__all__ = ("Gateway", "UserTruth", "Scenario", "validate_scenario")

empty_dict = MappingProxyType({})


class Gateway(NamedTuple):
  id: str
  position: Position


class UserTruth(NamedTuple):
  """ What actually happens to a user: its delay and route index (-1: the declared one). """

  delay_s: float = 0.
  trajectory_index: int = -1


class Scenario(NamedTuple):
  grid: GridConfig
  constellation: Constellation
  gateways: Tuple[Gateway, ...]
  users: Tuple[User, ...]
  horizon_s: float
  seed: int
  events: Tuple[Event, ...] = ()
  truth: Mapping[str, UserTruth] = empty_dict
  spec: Optional[Mapping[str, Any]] = None

  @property
  def known_users(self) -> Tuple[User, ...]:
    """ U_info: the users the proactive stage plans for. """
    return tuple(u for u in self.users if u.known_a_priori)

  def user(self, user_id: str) -> User:
    for u in self.users:
      if u.id == user_id:
        return u
    raise KeyError(f"Unknown user '{user_id}'")

  def truth_of(self, user_id: str) -> UserTruth:
    return self.truth.get(user_id, UserTruth())

  def realized_user(self, user_id: str) -> User:
    user = self.user(user_id)
    truth = self.truth_of(user_id)
    trajectory = user.trajectory
    if truth.trajectory_index >= 0:
      trajectory = user.uncertainty.alt_trajectories[truth.trajectory_index]
    if truth.delay_s:
      trajectory = trajectory.shifted(truth.delay_s)
    return user._replace(t_start=min(user.t_start + truth.delay_s, self.horizon_s),
                         t_end=min(user.t_end + truth.delay_s, self.horizon_s),
                         trajectory=trajectory)

  def revealed(self) -> "Scenario":
    """ The ideal scenario: every user known a priori exactly as it happens, no events. """
    users = tuple(self.realized_user(u.id)._replace(known_a_priori=True,
                                                     uncertainty=UncertaintySpec())
                  for u in self.users)
    return self._replace(users=users, events=(), truth=empty_dict)


def validate_scenario(scenario: Scenario, beams: Sequence[Beam] = ()) -> List[str]:
  """ Returns every invariant violation of the scenario (and of optional beams). """
  problems = []
  counts = collections.Counter(u.id for u in scenario.users)
  problems += [f"user {uid}: duplicate id" for uid, n in sorted(counts.items()) if n > 1]
  if not scenario.horizon_s > 0:
    problems.append("horizon_s must be > 0")
  for user in scenario.users:
    problems += user.violations(scenario.horizon_s)
    for i, alt in enumerate(user.uncertainty.alt_trajectories):
      times = alt.times
      if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        problems.append(f"user {user.id}: alternative trajectory {i} timestamps not increasing")

  users: Dict[str, User] = {u.id: u for u in scenario.users}
  for event in scenario.events:
    payload = event.payload
    user = users.get(event.user_id)
    if user is None:
      problems.append(f"event at {event.t_reveal}: unknown user {event.user_id}")
      continue
    if isinstance(payload, NewUser):
      if user.known_a_priori:
        problems.append(f"event at {event.t_reveal}: user {user.id} announced but already known")
    elif isinstance(payload, (Delay, TrajectoryChange)) and not user.known_a_priori:
      problems.append(f"event at {event.t_reveal}: update for unannounced user {user.id}")
    if isinstance(payload, Delay) and payload.delay_s < 0:
      problems.append(f"event at {event.t_reveal}: negative delay for user {user.id}")
    if event.t_reveal > user.t_start:
      problems.append(f"event at {event.t_reveal}: revealed after the change it announces "
                      f"(user {user.id} starts at {user.t_start})")
  reveal_times = [e.t_reveal for e in scenario.events]
  if reveal_times != sorted(reveal_times):
    problems.append("events are not sorted by t_reveal")

  for user_id, truth in scenario.truth.items():
    user = users.get(user_id)
    if user is None:
      problems.append(f"truth: unknown user {user_id}")
      continue
    if truth.trajectory_index >= len(user.uncertainty.alt_trajectories):
      problems.append(f"truth: user {user_id} takes a route that is not declared")
    if truth.delay_s > user.uncertainty.max_delay_s:
      problems.append(f"truth: user {user_id} delay exceeds max_delay_s")

  for beam in beams:
    problems += beam.violations(scenario.grid.n_channels)
  return problems
