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

import pytest
import traitlets as tl
from numpy.testing import assert_allclose

from freqplan.core.beams import Beam
from freqplan.core.events import Delay, Event, NewUser, TrajectoryChange
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.core.plan import (DEACTIVATED, BackupSlot, Block, FrequencyAssignment,
                                FrequencyPlan, PlanPiece)
from freqplan.core.scenario import Gateway, Scenario, UserTruth, validate_scenario
from freqplan.core.trajectory import Position, Trajectory, slerp_positions
from freqplan.core.users import AERONAUTICAL, FIXED, LAND_MOBILE, UncertaintySpec, User
from freqplan.geometry.orbits import Constellation


def flight(uid="A001", t_start=1000., t_end=4600., **kwargs):
  trajectory = Trajectory.from_samples([(t_start, Position(0., 0.)), (t_end, Position(0., 10.))])
  return User(uid, AERONAUTICAL, 20e6, t_start, t_end, trajectory, **kwargs)


def scenario_with(users, events=(), truth=None, horizon_s=86400.):
  return Scenario(GridConfig(), Constellation(), (Gateway("gw1", Position(0., 0.)),),
                  tuple(users), horizon_s, 0, tuple(events), truth or {})


# --- grid

def test_grid_groups_in_tie_break_order():
  grid = GridConfig(n_channels=10, n_reuses=2, n_polarizations=2)
  assert grid.n_groups == 4
  assert grid.groups == ((1, 1), (1, 2), (2, 1), (2, 2))
  assert grid.group_row(2, 2) == 4
  assert grid.group_row(1, 2) == 3


@pytest.mark.parametrize("x_spec, expected", [(None, 0), (0.05, 4), (0.1, 8), (0.125, 10)])
def test_reserved_channels(x_spec, expected):
  assert GridConfig(n_channels=80).reserved_channels(x_spec) == expected


@pytest.mark.parametrize("name", ["n_channels", "n_reuses", "n_polarizations"])
def test_grid_rejects_zero_counts(name):
  with pytest.raises(tl.TraitError):
    GridConfig(**{name: 0})


def test_time_grid_steps():
  grid = TimeGrid.create(3600., 60.)
  assert grid.n_steps == 60
  assert grid.time(3) == 180.
  assert grid.step_range(0., 3600.) == (0, 60)
  assert grid.step_range(30., 90.) == (1, 2)
  assert grid.step_range(100., 100.) == (2, 2)
  assert grid.first_step_at_or_after(1e9) == 60


def test_time_grid_rejects_non_dividing_step():
  with pytest.raises(ValueError, match="does not divide"):
    TimeGrid.create(100., 30.)


# --- trajectories

def test_position_create_validates():
  with pytest.raises(ValueError, match="latitude"):
    Position.create(91., 0.)
  with pytest.raises(ValueError, match="longitude"):
    Position.create(0., 200.)


def test_slerp_along_equator():
  p = slerp_positions(Position(0., 0.), Position(0., 10.), 0.5)
  assert_allclose([p.lat_deg, p.lon_deg], [0., 5.], atol=1e-9)


def test_trajectory_interpolates_and_clamps():
  trajectory = Trajectory.from_samples([(0., Position(0., 0.)), (100., Position(0., 10.))])
  assert trajectory.position_at(-5.) == Position(0., 0.)
  assert trajectory.position_at(500.) == Position(0., 10.)
  assert_allclose(trajectory.position_at(25.).lon_deg, 2.5, atol=1e-9)


def test_trajectory_requires_increasing_times():
  with pytest.raises(ValueError, match="strictly increasing"):
    Trajectory.from_samples([(0., Position(0., 0.)), (0., Position(1., 0.))])
  with pytest.raises(ValueError):
    Trajectory.from_samples([])


def test_shifted_trajectory():
  trajectory = Trajectory.from_samples([(0., Position(0., 0.)), (100., Position(0., 10.))])
  later = trajectory.shifted(50.)
  assert later.times == (50., 150.)
  assert later.position_at(75.) == trajectory.position_at(25.)


# --- users and beams

def test_user_violations():
  assert flight().violations(86400.) == []
  bad = flight()._replace(t_start=5000., t_end=5000., demand_bps=0.)
  problems = bad.violations(86400.)
  assert any("demand_bps" in p for p in problems)
  assert any("empty service window" in p for p in problems)


def test_fixed_user_must_be_static_over_horizon():
  user = User("F001", FIXED, 1e6, 0., 100., Trajectory.static(Position(0., 0.)))
  assert any("whole horizon" in p for p in user.violations(86400.))


def test_uncertainty_is_certain():
  assert UncertaintySpec().is_certain
  assert not UncertaintySpec(max_delay_s=60.).is_certain


def test_beam_realized_shifts_window_and_clamps():
  trajectory = Trajectory.from_samples([(0., Position(0., 0.)), (100., Position(0., 1.))])
  beam = Beam("b", ("u",), 0., 100., 1e6, 1, 2, trajectory, kind=LAND_MOBILE)
  late = beam.realized(horizon_s=130., delay_s=50.)
  assert (late.t_start, late.t_end) == (50., 130.)
  assert late.trajectory.times == (50., 150.)
  assert beam.realized(130.) == beam


def test_beam_violations():
  beam = Beam("b", (), 0., 0., 0., 3, 2, Trajectory.static(Position(0., 0.)))
  problems = beam.violations(n_channels=80)
  assert len(problems) == 4


# --- plans

def test_block_overlap():
  assert Block(1, 3, 1, 1).overlaps(Block(3, 2, 1, 1))
  assert not Block(1, 3, 1, 1).overlaps(Block(4, 2, 1, 1))


def test_assignment_blocks_and_used_channels():
  a = FrequencyAssignment("b", 5, 4, 2, 1, reserved_extra_channels=2,
                          backup_slots=(BackupSlot(20, 1, 2, 2),))
  assert a.used_channels == 2
  assert a.f_end == 8
  assert a.blocks == (Block(5, 4, 2, 1), Block(20, 2, 1, 2))


def test_assignment_violations():
  a = FrequencyAssignment("b", 79, 3, 9, 3)
  problems = a.violations(n_channels=80, n_reuses=8, n_polarizations=2, b_min=4)
  assert len(problems) == 4


def test_plan_coverage_and_deactivation():
  a = FrequencyAssignment("b", 1, 2, 1, 1)
  plan = FrequencyPlan({"b": [PlanPiece(0., 50., a), PlanPiece(50., 100., DEACTIVATED)]})
  assert plan.coverage_violations({"b": (0., 100.)}) == []
  assert plan.deactivated_beams == ("b",)
  assert plan.assignment_at("b", 10.) == a
  assert plan.assignment_at("b", 60.) == DEACTIVATED
  assert plan.assignment_at("b", 100.) is None

  gap = FrequencyPlan({"b": [PlanPiece(0., 40., a), PlanPiece(50., 100., a)]})
  assert any("contiguous" in p for p in gap.coverage_violations({"b": (0., 100.)}))
  assert FrequencyPlan().coverage_violations({"b": (0., 1.)}) == ["beam b: no plan pieces"]


def test_plan_is_immutable_value():
  a = FrequencyAssignment("b", 1, 2, 1, 1)
  plan = FrequencyPlan.static({"b": (0., 10.)}, {"b": a})
  other = plan.with_pieces("c", [PlanPiece(0., 5., a)])
  assert "c" not in plan
  assert "c" in other
  assert other.without("c") == plan


# --- scenarios

def test_valid_scenario_has_no_problems():
  user = flight(uncertainty=UncertaintySpec(600., ()))
  scenario = scenario_with([user], [Event(0., Delay(user.id, 300.))], {user.id: UserTruth(300.)})
  assert validate_scenario(scenario) == []


def test_validate_scenario_reports_each_problem():
  known = flight("A001")
  hidden = flight("L001")._replace(kind=LAND_MOBILE, known_a_priori=False)
  events = [Event(2000., Delay("A001", 10.)),             # after the user starts
            Event(0., NewUser(known)),                   # already known
            Event(0., TrajectoryChange("L001", known.trajectory)),  # not announced yet
            Event(0., Delay("nobody", 1.))]
  scenario = scenario_with([known, hidden, known], events,
                           {"A001": UserTruth(5000., 2)})
  problems = "\n".join(validate_scenario(scenario))
  assert "duplicate id" in problems
  assert "revealed after" in problems
  assert "already known" in problems
  assert "unannounced user L001" in problems
  assert "unknown user nobody" in problems
  assert "not sorted" in problems
  assert "route that is not declared" in problems
  assert "exceeds max_delay_s" in problems


def test_realized_user_and_revealed_scenario():
  alt = Trajectory.from_samples([(1000., Position(0., 0.)), (2800., Position(1., 5.)),
                                 (4600., Position(0., 10.))])
  user = flight(uncertainty=UncertaintySpec(900., (alt,)))
  hidden = flight("L001")._replace(kind=LAND_MOBILE, known_a_priori=False)
  scenario = scenario_with([user, hidden], [Event(0., NewUser(hidden))],
                           {user.id: UserTruth(600., 0)})

  realized = scenario.realized_user(user.id)
  assert (realized.t_start, realized.t_end) == (1600., 5200.)
  assert realized.trajectory.times == (1600., 3400., 5200.)

  ideal = scenario.revealed()
  assert ideal.events == ()
  assert all(u.known_a_priori and u.uncertainty.is_certain for u in ideal.users)
  assert ideal.user(user.id).t_start == 1600.
  assert len(ideal.known_users) == 2
  assert len(scenario.known_users) == 1


def test_event_user_id():
  user = flight()
  assert Event(0., NewUser(user)).user_id == user.id
  assert Event(0., Delay("x", 1.)).user_id == "x"
  assert math.isclose(Event(5., Delay("x", 1.)).t_reveal, 5.)
