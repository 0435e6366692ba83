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

import numpy as np
import pytest
import traitlets as tl

from freqplan.core import (AERONAUTICAL, FIXED, Gateway, GridConfig, Position, Trajectory, User,
                           validate_scenario)
from freqplan.core.events import Delay, NewUser, TrajectoryChange
from freqplan.errors import InvalidSpec
from freqplan.geometry.earth import ground_distance_m, project
from freqplan.geometry.orbits import Constellation
from freqplan.linkbudget import LinkParams, ModcodTable
from freqplan.scenario import (PRESETS, ScenarioSpec, build_beams, compute_percentiles,
                               generate_scenario, group_fixed_users, load_sites)
from freqplan.scenario import sampling
from freqplan.scenario.generator import sample_delays

SMALL = dict(n_fixed=3, n_aeronautical=6, n_maritime=2, n_land_mobile=4, seed=7)


def same_scenario(a, b):
  return a.users == b.users and a.events == b.events and dict(a.truth) == dict(b.truth)


# --- spec

def test_presets():
  assert ScenarioSpec.from_preset("paper-245").n_users == 245
  assert ScenarioSpec.from_preset("paper-330", seed=3).n_users == 330
  with pytest.raises(InvalidSpec):
    ScenarioSpec.from_preset("paper-1000")
  assert set(PRESETS) == {"paper-245", "paper-330"}


@pytest.mark.parametrize("values", [dict(n_fixed=-1), dict(delayed_fraction=1.5),
                                    dict(region=(10., 0., 0., 10.)),
                                    dict(min_alternatives=3, max_alternatives=2),
                                    dict(uncertainty="extreme")])
def test_invalid_specs(values):
  with pytest.raises(InvalidSpec):
    ScenarioSpec.create(**values)


def test_fixed_scatter_must_be_positive():
  with pytest.raises(tl.TraitError):
    ScenarioSpec(fixed_scatter_m=0.)


def test_spec_dict_round_trip():
  spec = ScenarioSpec.create(uncertainty="low", region=(0., 10., 0., 10.), **SMALL)
  again = ScenarioSpec.from_dict(spec.to_dict())
  assert again.to_dict() == spec.to_dict()


@pytest.mark.parametrize("uncertainty, n_unknown", [("none", 0), ("low", 1), ("high", 3)])
def test_unknown_land_users(uncertainty, n_unknown):
  assert ScenarioSpec(n_land_mobile=4, uncertainty=uncertainty).n_unknown_land == n_unknown


def test_max_delay():
  spec = ScenarioSpec()
  assert spec.delay_sigma == pytest.approx(math.log(5.) / 1.6448536269514722)
  assert spec.max_delay_s == pytest.approx(2 * 900. * 5.)
  assert ScenarioSpec(delay_distribution="uniform").max_delay_s == 1800.
  assert ScenarioSpec(delay_distribution="constant").max_delay_s == 900.
  assert ScenarioSpec(uncertainty="none").max_delay_s == 0.
  assert ScenarioSpec(uncertainty="low").delay_sigma == pytest.approx(spec.delay_sigma / 2)


def test_sampled_delays_respect_the_bound():
  rng = np.random.default_rng(0)
  for distribution in ("lognormal", "uniform", "constant"):
    spec = ScenarioSpec(delay_distribution=distribution)
    delays = sample_delays(spec, rng, 1000)
    assert delays.min() >= 0.
    assert delays.max() <= spec.max_delay_s
  assert not sample_delays(ScenarioSpec(uncertainty="none"), rng, 10).any()


# --- sampling helpers

def test_random_positions_stay_in_region():
  rng = np.random.default_rng(1)
  region = (-10., 5., 20., 30.)
  for _ in range(200):
    assert sampling.in_region(sampling.random_position(region, rng), region)
  center = Position(0., 25.)
  for _ in range(50):
    p = sampling.scattered_position(center, 100e3, region, rng)
    assert sampling.in_region(p, region)


def test_resample_while_gives_up():
  with pytest.raises(InvalidSpec):
    sampling.resample_while(lambda: 1, lambda x: x == 1, max_trials=5)


def test_deviated_route():
  origin, destination = Position(0., 0.), Position(0., 10.)
  route = sampling.deviated_route(origin, destination, 100., 2100., 50e3)
  assert route.times == (100., 1100., 2100.)
  assert route.position_at(100.) == origin
  assert route.position_at(2100.) == destination
  assert route.position_at(1100.).lat_deg < 0
  direct = sampling.direct_route(origin, destination, 100., 2100.)
  assert ground_distance_m(route.position_at(1100.), direct.position_at(1100.)) == \
      pytest.approx(50e3, rel=1e-6)
  assert sampling.route_deviation_m(route, [origin, direct.position_at(1100.), destination]) == \
      pytest.approx(50e3, rel=1e-6)


def test_load_sites(tmp_path):
  path = tmp_path / "sites.csv"
  path.write_text("name,lat_deg,lon_deg\nin,1.0,1.0\nout,50.0,1.0\n")
  assert load_sites(path, (0., 10., 0., 10.)) == [("in", Position(1., 1., 0.))]
  bad = tmp_path / "bad.csv"
  bad.write_text("name,lat\nx,1\n")
  with pytest.raises(InvalidSpec):
    load_sites(bad, (0., 10., 0., 10.))


# --- generator

def test_generation_is_deterministic():
  spec = ScenarioSpec.create(**SMALL)
  assert same_scenario(generate_scenario(spec), generate_scenario(spec))
  other = generate_scenario(ScenarioSpec.create(**dict(SMALL, seed=8)))
  assert not same_scenario(generate_scenario(spec), other)


@pytest.mark.parametrize("uncertainty", ["none", "low", "high"])
def test_generated_scenarios_are_valid(uncertainty):
  spec = ScenarioSpec.create(uncertainty=uncertainty, **SMALL)
  scenario = generate_scenario(spec)
  assert validate_scenario(scenario) == []
  assert [u.id for u in scenario.users] == [
      "F001", "F002", "F003", "A001", "A002", "A003", "A004", "A005", "A006",
      "M001", "M002", "L001", "L002", "L003", "L004"]
  assert len(scenario.gateways) == 4
  assert scenario.spec == spec.to_dict()
  unknown = [u.id for u in scenario.users if not u.known_a_priori]
  assert len(unknown) == spec.n_unknown_land
  announced = [e.user_id for e in scenario.events if isinstance(e.payload, NewUser)]
  assert sorted(announced) == sorted(unknown)


def test_no_uncertainty_means_no_surprises():
  scenario = generate_scenario(ScenarioSpec.create(uncertainty="none", **SMALL))
  assert scenario.events == ()
  assert dict(scenario.truth) == {}
  assert all(u.uncertainty.is_certain for u in scenario.users)
  assert len(scenario.known_users) == len(scenario.users)


def test_flights_fit_the_horizon_with_their_delay():
  spec = ScenarioSpec.create(n_fixed=0, n_aeronautical=40, n_maritime=0, n_land_mobile=0,
                             seed=11)
  scenario = generate_scenario(spec)
  for user in scenario.users:
    assert user.kind == AERONAUTICAL
    assert user.t_end + spec.max_delay_s <= spec.horizon_s
    assert 2 <= len(user.uncertainty.alt_trajectories) <= 4
    truth = scenario.truth_of(user.id)
    assert truth.delay_s <= spec.max_delay_s
  for event in scenario.events:
    user = scenario.user(event.user_id)
    assert event.t_reveal == max(0., user.t_start - spec.reveal_lead_s)
    if isinstance(event.payload, Delay):
      assert event.payload.delay_s == scenario.truth_of(user.id).delay_s
    else:
      assert isinstance(event.payload, TrajectoryChange)
      index = scenario.truth_of(user.id).trajectory_index
      assert event.payload.trajectory == user.uncertainty.alt_trajectories[index]


def test_empty_scenario():
  scenario = generate_scenario(ScenarioSpec.create(n_fixed=0, n_aeronautical=0, n_maritime=0,
                                                   n_land_mobile=0, n_gateways=0))
  assert scenario.users == ()
  assert scenario.events == ()


def test_generation_rejects():
  with pytest.raises(InvalidSpec):
    generate_scenario(ScenarioSpec.create(n_gateways=0, **SMALL))
  with pytest.raises(InvalidSpec):
    generate_scenario(ScenarioSpec.create(delay_p95_s=600., **SMALL))
  with pytest.raises(InvalidSpec):
    generate_scenario(ScenarioSpec.create(region=(60., 70., 100., 110.), **SMALL))


# --- percentiles

def test_percentiles_of_constant_delays():
  spec = ScenarioSpec(delay_distribution="constant")
  percentiles = compute_percentiles(spec, n_samples=200)
  assert percentiles.delay_s == {50: 900., 75: 900., 95: 900.}
  assert percentiles.to_dict()["delay_s"] == {"p50": 900., "p75": 900., "p95": 900.}


def test_percentiles_of_uniform_delays_and_deviations():
  family = [ScenarioSpec(delay_distribution="uniform", seed=s) for s in range(4)]
  percentiles = compute_percentiles(family, n_samples=2000)
  assert percentiles.delay(50) == pytest.approx(900., rel=0.1)
  assert percentiles.delay(95) == pytest.approx(1710., rel=0.05)
  # |N(0, s)| has its median at 0.674 s
  assert percentiles.deviation(50) == pytest.approx(0.674 * 150e3, rel=0.1)
  assert percentiles.delay(50) <= percentiles.delay(75) <= percentiles.delay(95)
  assert compute_percentiles(family, n_samples=2000) == percentiles


def test_percentiles_without_uncertainty():
  percentiles = compute_percentiles(ScenarioSpec(uncertainty="none"), n_samples=100)
  assert set(percentiles.delay_s.values()) == {0.}
  assert set(percentiles.deviation_m.values()) == {0.}


@pytest.mark.parametrize("family, n_samples", [([], 1000), (ScenarioSpec(), 10),
                                               (ScenarioSpec(delay_p95_s=100.), 1000)])
def test_percentiles_reject(family, n_samples):
  with pytest.raises(InvalidSpec):
    compute_percentiles(family, n_samples)


# --- fixed user grouping

def fixed_user(user_id, position, demand_bps=25e6):
  return User(user_id, FIXED, demand_bps, 0., 86400., Trajectory.static(position))


def test_single_user_group():
  groups = group_fixed_users([fixed_user("F001", Position(1., 2.))], 250e3)
  assert len(groups) == 1
  assert groups[0].user_ids == ("F001",)
  assert groups[0].center == Position(1., 2.)
  assert group_fixed_users([], 250e3) == []
  with pytest.raises(ValueError):
    group_fixed_users([fixed_user("F001", Position(1., 2.))], 0.)


def test_ties_open_the_first_user():
  a, b = Position(0., 0.), project(Position(0., 0.), 90., 100e3)
  groups = group_fixed_users([fixed_user("F001", a), fixed_user("F002", b)], 250e3)
  assert len(groups) == 1
  assert groups[0].center == a
  assert groups[0].demand_bps == 50e6


def test_cluster_and_scattered_users():
  rng = np.random.default_rng(5)
  center = Position(0., 0.)
  users = [fixed_user(f"C{n:02d}", project(center, rng.uniform(0., 360.), rng.uniform(0., 50e3)))
           for n in range(20)]
  users += [fixed_user(f"S{n}", Position(-20. + 10. * n, 15.)) for n in range(5)]
  groups = group_fixed_users(users, 250e3)
  assert len(groups) == 6
  assert len(groups[0].user_ids) == 20
  members = [u for g in groups for u in g.user_ids]
  assert sorted(members) == sorted(u.id for u in users)
  by_id = {u.id: u for u in users}
  for group in groups:
    for user_id in group.user_ids:
      assert ground_distance_m(group.center, by_id[user_id].position_at(0.)) <= 250e3


# --- beams

def test_build_beams():
  users = [
      fixed_user("F001", Position(0., 0.)),
      fixed_user("F002", Position(80., 0.)),
      User("A001", AERONAUTICAL, 20e6, 0., 3600.,
           Trajectory.from_samples([(0., Position(0., 0.)), (3600., Position(0., 8.))])),
  ]
  gateways = (Gateway("west", Position(0., 0.)), Gateway("east", Position(0., 7.)))
  beam_set = build_beams(users, gateways, GridConfig(), Constellation(), LinkParams(),
                         ModcodTable.default(), 3600.)
  assert [b.id for b in beam_set.beams] == ["A001/0", "A001/1", "fixed/0"]
  assert beam_set.unservable == ("F002",)
  first, second, fixed = beam_set.beams
  assert (first.t_start, first.t_end, first.gateway_id) == (0., 1620., "west")
  assert (second.t_start, second.t_end, second.gateway_id) == (1620., 3600., "east")
  assert fixed.user_ids == ("F001",)
  for beam in beam_set.beams:
    assert 1 <= beam.b_min <= beam.b_max
    assert beam.power_table.b_min == beam.b_min
    assert set(beam_set.schedules) == {b.id for b in beam_set.beams}
  assert beam_set.of_user("A001") == (first, second)
