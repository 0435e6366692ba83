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

""" Interference (R_A) and handover (R_E) restriction sets.

A pair of beams lands in R_E when, at some pair of grid times, both are served by the same
satellite, and in R_A when their (possible) positions come within the interference threshold as
seen from a satellite. Times are each beam's own time: under S1 a delayable beam may run up to
t_d late, so beam i at step k_i meets beam j at step k_j whenever k_j - k_i is in
[-D_j, D_i], D being the number of slip steps of a delayable beam and 0 otherwise.
Separations are measured from the satellite serving the beam with the smaller id, at that
beam's own time; a beam below that satellite's horizon cannot interfere.
"""

import logging
import math
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from freqplan.constraints.areas import area_function, possible_positions
from freqplan.constraints.config import ConstraintConfig
from freqplan.core.grid import TimeGrid
from freqplan.geometry.earth import EARTH_RADIUS_M, positions_to_ecef, to_ecef
from freqplan.geometry.orbits import Constellation, max_slant_range, propagate
from freqplan.geometry.routing import HandoverSchedule
from freqplan.geometry.separation import (above_horizon, chord_cutoff, min_set_angles,
                                          separation_lower_bound, set_separation)
from freqplan.geometry.tracks import BeamTrack, Ephemeris, build_track

logger = logging.getLogger(__name__)

__all__ = ("RestrictionSets", "alpha", "beta", "build_restriction_sets", "dilate_steps",
           "INTERFERENCE", "HANDOVER")

INTERFERENCE = "interference"
HANDOVER = "handover"

Pair = Tuple[str, str]
CANDIDATE_CHUNK = 2 ** 20
ANGLE_CHUNK = 4096


def _key(i: str, j: str) -> Pair:
  return (i, j) if i <= j else (j, i)


def _normalize(pairs: Iterable[Pair]) -> FrozenSet[Pair]:
  normalized = set()
  for i, j in pairs:
    if i == j:
      raise ValueError(f"restriction sets cannot contain self-pairs ({i})")
    normalized.add(_key(i, j))
  return frozenset(normalized)


class RestrictionSets(NamedTuple):
  """ Beam pairs that may not share channels (R_A: same polarization, R_E: same group). """

  r_a: FrozenSet[Pair] = frozenset()
  r_e: FrozenSet[Pair] = frozenset()

  @classmethod
  def create(cls, r_a: Iterable[Pair] = (), r_e: Iterable[Pair] = ()):
    return cls(_normalize(r_a), _normalize(r_e))

  def interferes(self, i: str, j: str) -> bool:
    return _key(i, j) in self.r_a

  def handover(self, i: str, j: str) -> bool:
    return _key(i, j) in self.r_e

  @property
  def n_pairs(self) -> int:
    """ |R_A ∪ R_E| """
    return len(self.r_a | self.r_e)

  def partners(self) -> Dict[str, Dict[str, Tuple[bool, bool]]]:
    """ beam -> partner -> (in R_A, in R_E) """
    result: Dict[str, Dict[str, Tuple[bool, bool]]] = {}
    for i, j in sorted(self.r_a | self.r_e):
      flags = (_key(i, j) in self.r_a, _key(i, j) in self.r_e)
      result.setdefault(i, {})[j] = flags
      result.setdefault(j, {})[i] = flags
    return result

  def conflict_graph(self, beam_ids: Iterable[str] = ()) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(sorted(beam_ids))
    for i, j in sorted(self.r_a | self.r_e):
      graph.add_edge(i, j, interference=_key(i, j) in self.r_a, handover=_key(i, j) in self.r_e)
    return graph

  def to_multigraph(self) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    for i, j in sorted(self.r_a):
      graph.add_edge(i, j, type=INTERFERENCE)
    for i, j in sorted(self.r_e):
      graph.add_edge(i, j, type=HANDOVER)
    return graph

  def write_edge_list(self, path) -> None:
    """ One "beam_i beam_j type" line per pair and set. """
    nx.write_edgelist(self.to_multigraph(), path, data=["type"])

  @classmethod
  def read_edge_list(cls, path):
    graph = nx.read_edgelist(path, create_using=nx.MultiGraph, data=[("type", str)])
    r_a = [(i, j) for i, j, kind in graph.edges(data="type") if kind == INTERFERENCE]
    r_e = [(i, j) for i, j, kind in graph.edges(data="type") if kind == HANDOVER]
    return cls.create(r_a, r_e)

  def __repr__(self):
    return f"<RestrictionSets R_A={len(self.r_a)} R_E={len(self.r_e)}>"


# --------------------------------------------------------------------------------------------------
# Point evaluation
# --------------------------------------------------------------------------------------------------

def alpha(beam_i, beam_j, t_i: float, t_j: float, config: ConstraintConfig,
          constellation: Constellation, schedules: Mapping[str, HandoverSchedule],
          strategy_set: Optional[Iterable[str]] = None) -> int:
  """ 1 if beam_i at its time t_i could interfere with beam_j at its time t_j. """
  if not (beam_i.is_active(t_i) and beam_j.is_active(t_j)):
    return 0
  (vantage, t_v), (other, t_o) = sorted([(beam_i, t_i), (beam_j, t_j)], key=lambda x: x[0].id)
  sat_id = schedules[vantage.id].satellite_at(t_v)
  sat = propagate(constellation, t_v)[sat_id - 1]
  if not above_horizon(sat, to_ecef(other.position_at(t_o))):
    return 0
  separation = set_separation(possible_positions(vantage, t_v, config, strategy_set),
                              possible_positions(other, t_o, config, strategy_set), sat)
  return int(separation <= config.threshold_rad(strategy_set))


def beta(beam_i, beam_j, t_i: float, t_j: float,
         schedules: Mapping[str, HandoverSchedule]) -> int:
  """ 1 if both beams are active and served by the same satellite at their respective times. """
  if not (beam_i.is_active(t_i) and beam_j.is_active(t_j)):
    return 0
  return int(schedules[beam_i.id].satellite_at(t_i) == schedules[beam_j.id].satellite_at(t_j))


# --------------------------------------------------------------------------------------------------
# Handover set
# --------------------------------------------------------------------------------------------------

def dilate_steps(mask: np.ndarray, lo: int, hi: int) -> np.ndarray:
  """ out[..., k] is True when mask[..., k'] holds for some k' with k - k' in [lo, hi]. """
  n = mask.shape[-1]
  counts = np.concatenate([np.zeros(mask.shape[:-1] + (1,), dtype=np.int64),
                           np.cumsum(mask, axis=-1, dtype=np.int64)], axis=-1)
  k = np.arange(n)
  start = np.clip(k - hi, 0, n)
  stop = np.clip(k - lo + 1, 0, n)
  return (counts[..., stop] - counts[..., start]) > 0


def _served_matrix(tracks: Sequence[BeamTrack], n_satellites: int, n_steps: int) -> np.ndarray:
  served = np.zeros((len(tracks), n_satellites, n_steps), dtype=bool)
  for b, track in enumerate(tracks):
    if track.n_steps:
      served[b, track.satellites - 1, track.steps] = True
  return served


def _handover_pairs(beam_ids: Sequence[str], tracks: Sequence[BeamTrack], slips: np.ndarray,
                    n_satellites: int, n_steps: int) -> List[Pair]:
  served = _served_matrix(tracks, n_satellites, n_steps)
  flat = served.reshape(len(tracks), -1).astype(np.float32)
  pairs = []
  for slip_i in np.unique(slips):
    rows = np.flatnonzero(slips == slip_i)
    for slip_j in np.unique(slips):
      cols = np.flatnonzero(slips == slip_j)
      dilated = dilate_steps(served[rows], -int(slip_j), int(slip_i))
      counts = dilated.reshape(len(rows), -1).astype(np.float32) @ flat[cols].T
      r, c = np.nonzero(counts > 0)
      pairs += [(beam_ids[rows[a]], beam_ids[cols[b]]) for a, b in zip(r, c) if rows[a] < cols[b]]
  return pairs


# --------------------------------------------------------------------------------------------------
# Interference set
# --------------------------------------------------------------------------------------------------

class _Geometry(NamedTuple):
  ephemeris: Ephemeris
  threshold_rad: float
  min_elevation_rad: float
  max_range_m: float
  altitude_m: float
  prune: bool


def _is_static(track: BeamTrack) -> bool:
  return bool(track.n_steps) and bool(np.all(track.centers == track.centers[0]))


def _area_angle(track: BeamTrack, altitude_m: float) -> float:
  """ Largest angle a step's area can span around its centre, seen from orbit. """
  return 2. * math.atan(track.area_radius_m() / (2. * altitude_m))


def _band_candidates(ti: BeamTrack, tj: BeamTrack, lo: int, hi: int,
                     near_i: np.ndarray, near_j: np.ndarray):
  """ Yields chunks of index pairs (a, b) with (tj.k0 + b) - (ti.k0 + a) in [lo, hi]. """
  a_all = np.flatnonzero(near_i)
  offsets = np.arange(lo, hi + 1)
  chunk = max(1, CANDIDATE_CHUNK // len(offsets))
  for start in range(0, len(a_all), chunk):
    a = np.repeat(a_all[start:start + chunk], len(offsets))
    b = a + (ti.k0 - tj.k0) + np.tile(offsets, min(chunk, len(a_all) - start))
    valid = (b >= 0) & (b < tj.n_steps)
    a, b = a[valid], b[valid]
    keep = near_j[b]
    if keep.any():
      yield a[keep], b[keep]


def _pair_interferes(ti: BeamTrack, tj: BeamTrack, lo: int, hi: int, geo: _Geometry) -> bool:
  """ Whether some admissible (k_i, k_j) brings the pair within the threshold, seen from ti. """
  threshold = geo.threshold_rad + _area_angle(ti, geo.altitude_m) + _area_angle(tj, geo.altitude_m)
  near_i = np.ones(ti.n_steps, dtype=bool)
  near_j = np.ones(tj.n_steps, dtype=bool)
  if geo.prune:
    cutoff = chord_cutoff(threshold, geo.max_range_m)
    if _is_static(tj):
      near_i = np.linalg.norm(ti.centers - tj.centers[0], axis=-1) <= cutoff
    if _is_static(ti):
      near_j = np.linalg.norm(tj.centers - ti.centers[0], axis=-1) <= cutoff

  points_i, points_j = ti.points(), tj.points()
  for a, b in _band_candidates(ti, tj, lo, hi, near_i, near_j):
    if geo.prune:
      chord = np.linalg.norm(ti.centers[a] - tj.centers[b], axis=-1)
      keep = (chord <= cutoff) & ~separation_lower_bound(chord, geo.min_elevation_rad,
                                                         geo.max_range_m, threshold)
      a, b = a[keep], b[keep]
    for start in range(0, len(a), ANGLE_CHUNK):
      ca, cb = a[start:start + ANGLE_CHUNK], b[start:start + ANGLE_CHUNK]
      sats = geo.ephemeris.positions[ti.k0 + ca, ti.satellites[ca] - 1]
      visible = above_horizon(sats, tj.centers[cb])
      if not visible.any():
        continue
      ca, cb, sats = ca[visible], cb[visible], sats[visible]
      angles = min_set_angles(sats, points_i[ca], points_j[cb])
      if np.any(angles <= geo.threshold_rad):
        return True
  return False


def _caps(tracks: Sequence[BeamTrack]) -> Tuple[np.ndarray, np.ndarray]:
  centers = np.zeros((len(tracks), 3))
  radii = np.zeros(len(tracks))
  for b, track in enumerate(tracks):
    if not track.n_steps:
      continue
    mean = track.centers.mean(axis=0)
    norm = np.linalg.norm(mean)
    centers[b] = mean / norm * EARTH_RADIUS_M if norm > 0 else track.centers[0]
    radii[b] = np.linalg.norm(track.centers - centers[b], axis=-1).max()
  return centers, radii


def _candidate_pairs(tracks: Sequence[BeamTrack], slips: np.ndarray,
                     geo: _Geometry) -> np.ndarray:
  """ Index pairs (i < j) that overlap in time within their slips and, when pruning, in space. """
  k0 = np.array([t.k0 for t in tracks])
  k1 = np.array([t.k1 for t in tracks])
  active = k1 > k0
  lo = -slips[None, :]
  hi = slips[:, None]
  keep = ((k0[None, :] - (k1[:, None] - 1) <= hi) & ((k1[None, :] - 1) - k0[:, None] >= lo)
          & active[:, None] & active[None, :])
  if geo.prune:
    centers, radii = _caps(tracks)
    spans = np.array([_area_angle(t, geo.altitude_m) for t in tracks])
    threshold = np.minimum(geo.threshold_rad + spans[:, None] + spans[None, :], math.pi / 2)
    cutoff = np.sqrt(2. * EARTH_RADIUS_M * geo.max_range_m * np.sin(threshold))
    gap = (np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
           - radii[:, None] - radii[None, :])
    keep &= gap <= cutoff
  return np.argwhere(np.triu(keep, k=1))


def build_restriction_sets(beams: Sequence, schedules: Mapping[str, HandoverSchedule],
                           config: ConstraintConfig, constellation: Constellation,
                           horizon_s: float,
                           strategy_set: Optional[Iterable[str]] = None) -> RestrictionSets:
  """ Worst-case interference and handover pairs over the horizon, for the active strategies. """
  strategies = config.strategies(strategy_set)
  grid = TimeGrid.create(horizon_s, config.dt_s)
  ephemeris = Ephemeris(constellation, grid)
  area_fn = area_function(config, strategies)

  beams = sorted(beams, key=lambda beam: beam.id)
  beam_ids = [beam.id for beam in beams]
  tracks = [build_track(beam, grid, ephemeris, schedules[beam.id], area_fn) for beam in beams]
  delay_steps = config.delay_steps(strategies)
  slips = np.array([delay_steps if beam.is_delayable else 0 for beam in beams], dtype=np.int64)

  r_e = _handover_pairs(beam_ids, tracks, slips, constellation.n_satellites, grid.n_steps) \
      if beams else []

  geo = _Geometry(ephemeris=ephemeris,
                  threshold_rad=config.threshold_rad(strategies),
                  min_elevation_rad=math.radians(constellation.min_elevation_deg),
                  max_range_m=max_slant_range(constellation),
                  altitude_m=constellation.altitude_m,
                  prune=config.prune)
  candidates = _candidate_pairs(tracks, slips, geo) if beams else np.zeros((0, 2), dtype=int)
  r_a = [(beam_ids[i], beam_ids[j]) for i, j in candidates
         if _pair_interferes(tracks[i], tracks[j], -int(slips[j]), int(slips[i]), geo)]

  sets = RestrictionSets.create(r_a, r_e)
  logger.info("restriction sets for %d beams (strategies %s): %d candidate pairs, |R_A|=%d, "
              "|R_E|=%d", len(beams), sorted(strategies) or "none", len(candidates),
              len(sets.r_a), len(sets.r_e))
  return sets
