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

""" Synthetic scenarios: fixed users around cities, flights, ship voyages and land vehicles.

Every draw comes from one `np.random.default_rng(spec.seed)` in a fixed order, so a spec and seed
always give the same scenario.
"""

import logging
import math
import pathlib
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from freqplan.core.events import Delay, Event, NewUser, TrajectoryChange
from freqplan.core.grid import GridConfig
from freqplan.core.scenario import Gateway, Scenario, UserTruth
from freqplan.core.trajectory import Position, Trajectory
from freqplan.core.users import (AERONAUTICAL, FIXED, LAND_MOBILE, MARITIME, UncertaintySpec,
                                 User)
from freqplan.errors import InvalidSpec
from freqplan.geometry.earth import ground_distance_m, project
from freqplan.geometry.orbits import Constellation
from freqplan.scenario import sampling
from freqplan.scenario.spec import ScenarioSpec

logger = logging.getLogger(__name__)

__all__ = ("generate_scenario", "load_sites", "sample_delays", "sample_deviations")

DATA_DIR = pathlib.Path(__file__).parent
AIRPORTS_CSV = DATA_DIR / "airports.csv"
PORTS_CSV = DATA_DIR / "ports.csv"

MIN_FLIGHT_M = 200e3
LAND_TRIP_S = (3600., 4 * 3600.)

Site = Tuple[str, Position]


def load_sites(path, region) -> List[Site]:
  """ Named sites (columns name, lat_deg, lon_deg) lying inside `region`. """
  frame = pd.read_csv(path)
  missing = {"name", "lat_deg", "lon_deg"} - set(frame.columns)
  if missing:
    raise InvalidSpec(f"{path}: missing columns {sorted(missing)}")
  sites = [(str(row.name), Position(float(row.lat_deg), float(row.lon_deg), 0.))
           for row in frame.itertuples(index=False)]
  return [site for site in sites if sampling.in_region(site[1], region)]


def sample_delays(spec: ScenarioSpec, rng: np.random.Generator, size: int) -> np.ndarray:
  """ Delays of delayed flights, clipped to the declared bound. """
  if spec.uncertainty == "none":
    return np.zeros(size)
  if spec.delay_distribution == "lognormal":
    delays = rng.lognormal(math.log(spec.delay_median_s), spec.delay_sigma, size)
  elif spec.delay_distribution == "uniform":
    delays = rng.uniform(0., 2. * spec.delay_median_s, size)
  else:
    delays = np.full(size, spec.delay_median_s)
  return np.minimum(delays, spec.max_delay_s)


def sample_deviations(spec: ScenarioSpec, rng: np.random.Generator, size: int) -> np.ndarray:
  """ Signed lateral offsets of alternative routes at their midpoint. """
  return rng.normal(0., spec.deviation_scale_m * spec.spread, size)


def _pick(sites: List[Site], rng: np.random.Generator) -> Site:
  return sites[int(rng.integers(len(sites)))]


def _fixed_users(spec: ScenarioSpec, cities: List[Site], rng) -> List[User]:
  users = []
  for n in range(spec.n_fixed):
    _, center = _pick(cities, rng)
    position = sampling.scattered_position(center, spec.fixed_scatter_m, spec.region, rng)
    users.append(User(f"F{n + 1:03d}", FIXED, spec.demand_fixed_bps, 0., spec.horizon_s,
                      Trajectory.static(position)))
  return users


def _flights(spec: ScenarioSpec, airports: List[Site], rng):
  """ Declared flights, their hidden truth and the events announcing it. """
  max_delay = spec.max_delay_s
  longest = spec.horizon_s - max_delay - 1.

  def pair():
    origin, destination = _pick(airports, rng), _pick(airports, rng)
    return origin, destination, ground_distance_m(origin[1], destination[1])

  def unusable(candidate):
    _, _, distance = candidate
    return distance < MIN_FLIGHT_M or distance / spec.aircraft_speed_m_s > longest

  users, truth, events = [], {}, []
  for n in range(spec.n_aeronautical):
    (_, origin), (_, destination), distance = sampling.resample_while(pair, unusable)
    duration = float(math.ceil(distance / spec.aircraft_speed_m_s))
    t_start = float(math.floor(rng.uniform(0., spec.horizon_s - max_delay - duration)))
    t_end = t_start + duration
    uid = f"A{n + 1:03d}"

    uncertainty = UncertaintySpec()
    if spec.uncertainty != "none":
      n_alt = int(rng.integers(spec.min_alternatives, spec.max_alternatives + 1))
      offsets = sample_deviations(spec, rng, n_alt)
      routes = tuple(sampling.deviated_route(origin, destination, t_start, t_end, float(o))
                     for o in offsets)
      uncertainty = UncertaintySpec(max_delay, routes)
    user = User(uid, AERONAUTICAL, spec.demand_aeronautical_bps, t_start, t_end,
                sampling.direct_route(origin, destination, t_start, t_end),
                uncertainty=uncertainty)
    users.append(user)
    if spec.uncertainty == "none":
      continue

    delay = 0.
    if rng.uniform() < spec.delayed_fraction:
      delay = float(math.floor(sample_delays(spec, rng, 1)[0]))
    index = int(rng.integers(-1, len(uncertainty.alt_trajectories)))
    if delay == 0. and index < 0:
      continue
    truth[uid] = UserTruth(delay, index)
    t_reveal = max(0., t_start - spec.reveal_lead_s)
    if delay > 0.:
      events.append(Event(t_reveal, Delay(uid, delay)))
    if index >= 0:
      events.append(Event(t_reveal, TrajectoryChange(uid, uncertainty.alt_trajectories[index])))
  return users, truth, events


def _voyages(spec: ScenarioSpec, ports: List[Site], rng) -> List[User]:
  """ Ships on known routes, possibly under way at t=0 or still sailing at the horizon. """
  def pair():
    return _pick(ports, rng)[1], _pick(ports, rng)[1]

  users = []
  for n in range(spec.n_maritime):
    origin, destination = sampling.resample_while(
        pair, lambda c: ground_distance_m(*c) < MIN_FLIGHT_M)
    duration = float(math.ceil(ground_distance_m(origin, destination) / spec.ship_speed_m_s))
    t_departure = float(math.floor(rng.uniform(-duration / 2., spec.horizon_s / 2.)))
    users.append(User(f"M{n + 1:03d}", MARITIME, spec.demand_maritime_bps,
                      max(0., t_departure), min(spec.horizon_s, t_departure + duration),
                      sampling.direct_route(origin, destination, t_departure,
                                            t_departure + duration)))
  return users


def _land_users(spec: ScenarioSpec, rng):
  unknown = set(rng.choice(spec.n_land_mobile, spec.n_unknown_land, replace=False).tolist()
                if spec.n_land_mobile else ())
  users, events = [], []
  for n in range(spec.n_land_mobile):
    duration = float(math.floor(rng.uniform(*LAND_TRIP_S)))
    duration = min(duration, spec.horizon_s)
    start = sampling.random_position(spec.region, rng)
    end = sampling.resample_while(
        lambda: project(start, rng.uniform(0., 360.), spec.vehicle_speed_m_s * duration),
        lambda p: not sampling.in_region(p, spec.region))
    t_start = float(math.floor(rng.uniform(0., spec.horizon_s - duration)))
    user = User(f"L{n + 1:03d}", LAND_MOBILE, spec.demand_land_mobile_bps, t_start,
                t_start + duration,
                sampling.direct_route(start, end, t_start, t_start + duration),
                known_a_priori=n not in unknown)
    users.append(user)
    if not user.known_a_priori:
      events.append(Event(max(0., t_start - spec.reveal_lead_s), NewUser(user)))
  return users, events


def _gateways(spec: ScenarioSpec, rng) -> List[Gateway]:
  return [Gateway(f"gw{n + 1}", sampling.random_position(spec.region, rng))
          for n in range(spec.n_gateways)]


def _sites(path: Optional[str], default: pathlib.Path, region, needed: bool, what: str):
  if not needed:
    return []
  sites = load_sites(path or default, region)
  if len(sites) < 2:
    raise InvalidSpec(f"need at least two {what} inside region {region}, found {len(sites)}")
  return sites


def generate_scenario(spec: Optional[ScenarioSpec] = None) -> Scenario:
  """ A scenario with its hidden truth and the events revealing it. """
  spec = spec or ScenarioSpec()
  spec.check()
  if spec.n_users and not spec.n_gateways:
    raise InvalidSpec("users need at least one gateway")
  rng = np.random.default_rng(spec.seed)
  airports = _sites(spec.airports_csv, AIRPORTS_CSV, spec.region,
                    bool(spec.n_fixed or spec.n_aeronautical), "airports")
  ports = _sites(spec.ports_csv, PORTS_CSV, spec.region, bool(spec.n_maritime), "ports")

  gateways = _gateways(spec, rng)
  fixed = _fixed_users(spec, airports, rng)
  flights, truth, flight_events = _flights(spec, airports, rng)
  ships = _voyages(spec, ports, rng)
  land, land_events = _land_users(spec, rng)

  events = sorted(flight_events + land_events, key=lambda e: e.t_reveal)
  scenario = Scenario(GridConfig(), Constellation(), tuple(gateways),
                      tuple(fixed + flights + ships + land), spec.horizon_s, spec.seed,
                      tuple(events), truth, spec.to_dict())
  logger.info("generated %d users (%d unknown a priori), %d events, seed %d",
              len(scenario.users), len(scenario.users) - len(scenario.known_users),
              len(events), spec.seed)
  return scenario
