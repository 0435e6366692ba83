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

""" Spherical Earth helpers: ECEF conversion and great-circle navigation. """

import math
from typing import Sequence, Tuple

import numpy as np

from freqplan.core.trajectory import Position, slerp_positions

__all__ = ("EARTH_RADIUS_M", "to_ecef", "positions_to_ecef", "ground_distance_m",
           "course_and_distance", "project", "sample_disc", "sample_polygon")

EARTH_RADIUS_M = 6371e3


def to_ecef(position: Position) -> np.ndarray:
  lat, lon = math.radians(position.lat_deg), math.radians(position.lon_deg)
  r = EARTH_RADIUS_M + position.alt_m
  return np.array([r * math.cos(lat) * math.cos(lon),
                   r * math.cos(lat) * math.sin(lon),
                   r * math.sin(lat)])


def positions_to_ecef(positions: Sequence[Position]) -> np.ndarray:
  if not len(positions):
    return np.zeros((0, 3))
  return np.stack([to_ecef(p) for p in positions])


def ground_distance_m(p1: Position, p2: Position) -> float:
  """ Great-circle (haversine) distance along the surface. """
  lat1, lon1 = math.radians(p1.lat_deg), math.radians(p1.lon_deg)
  lat2, lon2 = math.radians(p2.lat_deg), math.radians(p2.lon_deg)
  h = (math.sin((lat2 - lat1) / 2) ** 2
       + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2)
  return 2. * EARTH_RADIUS_M * math.asin(min(1., math.sqrt(h)))


def course_and_distance(p1: Position, p2: Position) -> Tuple[float, float]:
  """ Initial true course (degrees, clockwise from north) and distance (m) from p1 to p2. """
  lat1, lon1 = math.radians(p1.lat_deg), math.radians(p1.lon_deg)
  lat2, lon2 = math.radians(p2.lat_deg), math.radians(p2.lon_deg)
  dist = ground_distance_m(p1, p2)
  if dist < 1e-3:
    return 0., dist
  y = math.sin(lon2 - lon1) * math.cos(lat2)
  x = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(lon2 - lon1)
  return math.degrees(math.atan2(y, x)) % 360., dist


def project(p: Position, course_deg: float, distance_m: float) -> Position:
  """ The position reached after travelling distance_m along course_deg from p. """
  lat1, lon1 = math.radians(p.lat_deg), math.radians(p.lon_deg)
  tc = math.radians(course_deg)
  d = distance_m / EARTH_RADIUS_M
  lat = math.asin(max(-1., min(1., math.sin(lat1) * math.cos(d)
                               + math.cos(lat1) * math.sin(d) * math.cos(tc))))
  lon = lon1 + math.atan2(math.sin(tc) * math.sin(d) * math.cos(lat1),
                          math.cos(d) - math.sin(lat1) * math.sin(lat))
  lon = (lon + math.pi) % (2 * math.pi) - math.pi
  return Position(math.degrees(lat), math.degrees(lon), p.alt_m)


def sample_disc(center: Position, radius_m: float, n_boundary: int = 16) -> Tuple[Position, ...]:
  """ The centre followed by n_boundary points evenly spaced on the circle of radius_m. """
  if radius_m <= 0:
    return (center,)
  ring = tuple(project(center, 360. * i / n_boundary, radius_m) for i in range(n_boundary))
  return (center,) + ring


def sample_polygon(vertices: Sequence[Position], n_boundary: int = 16) -> Tuple[Position, ...]:
  """ The vertices plus points spread along the closed boundary, n_boundary in total at least. """
  vertices = tuple(vertices)
  if len(vertices) < 2:
    return vertices
  edges = list(zip(vertices, vertices[1:] + vertices[:1]))
  lengths = np.array([ground_distance_m(a, b) for a, b in edges])
  perimeter = float(lengths.sum())
  if perimeter <= 0:
    return vertices[:1]
  points = list(vertices)
  for (a, b), length in zip(edges, lengths):
    extra = int(round(n_boundary * length / perimeter)) - 1
    for i in range(1, extra + 1):
      points.append(slerp_positions(a, b, i / (extra + 1)))
  return tuple(points)
