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

import math
from typing import Sequence, Union

import numpy as np

from freqplan.core.trajectory import Position
from freqplan.geometry.earth import EARTH_RADIUS_M, positions_to_ecef, to_ecef

__all__ = ("angular_separation", "set_separation", "pairwise_angles", "min_set_angles",
           "above_horizon", "chord_cutoff", "separation_lower_bound")

PointLike = Union[Position, np.ndarray]


def _as_ecef(point: PointLike) -> np.ndarray:
  if isinstance(point, Position):
    return to_ecef(point)
  return np.asarray(point, dtype=np.float64)


def _as_ecef_set(points) -> np.ndarray:
  if isinstance(points, np.ndarray):
    return np.atleast_2d(points).astype(np.float64)
  points = list(points)
  if points and isinstance(points[0], Position):
    return positions_to_ecef(points)
  return np.atleast_2d(np.asarray(points, dtype=np.float64))


def pairwise_angles(sat: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
  """ Angles at `sat` between every point of `a` and every point of `b`.

  Works on batches: sat is (..., 3), a is (..., m, 3), b is (..., n, 3); returns (..., m, n).
  atan2 of cross and dot products stays exact for coincident directions.
  """
  u = a - sat[..., None, :]
  v = b - sat[..., None, :]
  cross = np.cross(u[..., :, None, :], v[..., None, :, :])
  dot = np.einsum("...mk,...nk->...mn", u, v)
  return np.arctan2(np.sqrt(np.sum(cross * cross, axis=-1)), dot)


def min_set_angles(sat: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
  return pairwise_angles(sat, a, b).min(axis=(-2, -1))


def angular_separation(sat_position: PointLike, p_i: PointLike, p_j: PointLike) -> float:
  """ Angle (radians) at the satellite between the directions towards p_i and p_j. """
  sat = _as_ecef(sat_position)
  return float(pairwise_angles(sat, _as_ecef(p_i)[None, :], _as_ecef(p_j)[None, :])[0, 0])


def set_separation(area_i: Sequence[PointLike], area_j: Sequence[PointLike],
                   sat_position: PointLike) -> float:
  """ Smallest angular separation between any point of area_i and any point of area_j. """
  a, b = _as_ecef_set(area_i), _as_ecef_set(area_j)
  if not len(a) or not len(b):
    raise ValueError("set_separation needs non-empty areas")
  return float(min_set_angles(_as_ecef(sat_position), a, b))


def above_horizon(sat: np.ndarray, ground: np.ndarray) -> np.ndarray:
  """ Whether each satellite is at or above the local horizon of the matching ground point. """
  return np.einsum("...k,...k->...", sat - ground, ground) >= 0.


def chord_cutoff(threshold_rad: float, max_range_m: float) -> float:
  """ Footprint centres farther apart (straight line) than this are never within threshold_rad
  of each other, seen from a satellite that serves one of them and sees the other.

  With both points on the sphere and the served one at most max_range_m away,
  sin(angle) >= chord^2 / (2 R max_range).
  """
  return math.sqrt(2. * EARTH_RADIUS_M * max_range_m * math.sin(min(threshold_rad, math.pi / 2)))


def separation_lower_bound(chord_m, min_elevation_rad: float, max_range_m: float,
                           threshold_rad: float) -> np.ndarray:
  """ Whether footprint centres chord_m apart are provably separated by more than threshold_rad,
  seen from a satellite serving the first one at min_elevation_rad or more.

  The elevation at the second centre is lower by at most the central angle plus the separation,
  which bounds the triangle's angle at that centre from below.
  """
  chord_m = np.asarray(chord_m, dtype=np.float64)
  half_central = np.arcsin(np.clip(chord_m / (2. * EARTH_RADIUS_M), 0., 1.))
  margin = min_elevation_rad - half_central - threshold_rad
  bound = chord_m * np.sin(np.clip(margin, 0., None)) / max_range_m
  return (margin > 0.) & (bound > math.sin(threshold_rad))
