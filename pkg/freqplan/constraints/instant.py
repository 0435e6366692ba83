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

""" Instantaneous interference and handover conditions between two tracks at the same time. """

import logging
import math
from typing import NamedTuple

import numpy as np

from freqplan.core.grid import TimeGrid
from freqplan.geometry.orbits import Constellation, max_slant_range
from freqplan.geometry.separation import (above_horizon, chord_cutoff, pairwise_angles,
                                          separation_lower_bound)
from freqplan.geometry.tracks import BeamTrack, Ephemeris

logger = logging.getLogger(__name__)

__all__ = ("ConflictSteps", "InstantConflicts")


class ConflictSteps(NamedTuple):
  """ Grid steps at which two beams interfere (alpha) and share a satellite (beta). """

  alpha: np.ndarray
  beta: np.ndarray

  @property
  def empty(self) -> bool:
    return not (len(self.alpha) or len(self.beta))


class InstantConflicts:
  """ Evaluates alpha(t) and beta(t) on the grid for beams observed at the same time. """

  def __init__(self, constellation: Constellation, grid: TimeGrid, delta_min_rad: float,
               prune: bool = True, ephemeris: Ephemeris = None):
    self.constellation = constellation
    self.grid = grid
    self.delta_min_rad = delta_min_rad
    self.prune = prune
    self.ephemeris = ephemeris if ephemeris is not None else Ephemeris(constellation, grid)
    self._min_elevation_rad = math.radians(constellation.min_elevation_deg)
    self._max_range_m = max_slant_range(constellation)
    self._cutoff = chord_cutoff(delta_min_rad, self._max_range_m)

  def steps(self, ti: BeamTrack, tj: BeamTrack, k_from: int = 0) -> ConflictSteps:
    """ Conflicting steps k >= k_from where both tracks are active. """
    if tj.beam_id < ti.beam_id:
      ti, tj = tj, ti
    k_start = max(ti.k0, tj.k0, k_from)
    k_stop = min(ti.k1, tj.k1)
    if k_start >= k_stop:
      empty = np.zeros(0, dtype=np.int64)
      return ConflictSteps(empty, empty)
    ks = np.arange(k_start, k_stop)
    a, b = ks - ti.k0, ks - tj.k0

    beta = ks[ti.satellites[a] == tj.satellites[b]]

    centers_i, centers_j = ti.centers[a], tj.centers[b]
    candidate = np.ones(len(ks), dtype=bool)
    if self.prune:
      chord = np.linalg.norm(centers_i - centers_j, axis=-1)
      candidate = (chord <= self._cutoff) & ~separation_lower_bound(
          chord, self._min_elevation_rad, self._max_range_m, self.delta_min_rad)
    idx = np.flatnonzero(candidate)
    sats = self.ephemeris.positions[ks[idx], ti.satellites[a[idx]] - 1]
    visible = above_horizon(sats, centers_j[idx])
    idx, sats = idx[visible], sats[visible]
    angles = pairwise_angles(sats, centers_i[idx][:, None, :], centers_j[idx][:, None, :])
    alpha = ks[idx[angles[:, 0, 0] <= self.delta_min_rad]]
    return ConflictSteps(alpha, beta)

  def __repr__(self):
    return (f"<InstantConflicts delta_min_deg={math.degrees(self.delta_min_rad):.3f} "
            f"steps={self.grid.n_steps}>")
