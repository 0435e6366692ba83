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

from typing import NamedTuple, Union

from freqplan.core.trajectory import Trajectory
from freqplan.core.users import User

__all__ = ("Delay", "TrajectoryChange", "NewUser", "Event")


class Delay(NamedTuple):
  user_id: str
  delay_s: float


class TrajectoryChange(NamedTuple):
  user_id: str
  trajectory: Trajectory


class NewUser(NamedTuple):
  user: User


class Event(NamedTuple):
  """ New information about a user, revealed to the operator at t_reveal. """

  t_reveal: float
  payload: Union[Delay, TrajectoryChange, NewUser]

  @property
  def user_id(self) -> str:
    if isinstance(self.payload, NewUser):
      return self.payload.user.id
    return self.payload.user_id
