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

""" Greedy disc clustering of fixed users into beams. """

import logging
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from sklearn.neighbors import BallTree

from freqplan.core.trajectory import Position
from freqplan.geometry.earth import EARTH_RADIUS_M

logger = logging.getLogger(__name__)

__all__ = ("FixedGroup", "group_fixed_users")


class FixedGroup(NamedTuple):
  """ Fixed users served by one beam pointed at `center`. """

  user_ids: Tuple[str, ...]
  center: Position
  demand_bps: float


def group_fixed_users(users: Sequence, max_beam_radius_m: float) -> List[FixedGroup]:
  """ Repeatedly opens a beam on the unassigned user with the most unassigned users within
  max_beam_radius_m and absorbs all of them. Ties go to the user listed first.
  """
  if not users:
    return []
  if not max_beam_radius_m > 0:
    raise ValueError(f"max_beam_radius_m has to be > 0 (was {max_beam_radius_m})")
  positions = [u.position_at(u.t_start) for u in users]
  coords = np.radians([[p.lat_deg, p.lon_deg] for p in positions])
  tree = BallTree(coords, metric="haversine")
  neighbours = tree.query_radius(coords, r=max_beam_radius_m / EARTH_RADIUS_M)

  unassigned = np.ones(len(users), dtype=bool)
  groups = []
  while unassigned.any():
    counts = np.array([unassigned[n].sum() if unassigned[i] else -1
                       for i, n in enumerate(neighbours)])
    seed = int(np.argmax(counts))
    members = sorted(int(i) for i in neighbours[seed] if unassigned[i])
    unassigned[members] = False
    center = positions[seed]
    groups.append(FixedGroup(user_ids=tuple(users[i].id for i in members),
                             center=Position(center.lat_deg, center.lon_deg, 0.),
                             demand_bps=float(sum(users[i].demand_bps for i in members))))
  logger.debug("grouped %d fixed users into %d beams", len(users), len(groups))
  return groups
