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

import json
import types

import numpy as np
import pytest

from freqplan import io as fio
from freqplan.core import (DEACTIVATED, BackupSlot, Delay, Event, FrequencyAssignment,
                           FrequencyPlan, Gateway, GridConfig, NewUser, PlanPiece, Position,
                           Scenario, Trajectory, TrajectoryChange, UncertaintySpec, User,
                           UserTruth)
from freqplan.core.users import AERONAUTICAL, FIXED
from freqplan.errors import InvalidSpec, ScenarioMismatch
from freqplan.geometry.orbits import Constellation
from freqplan.utils import canonical_json, content_hash, worker_count

ROUTE = Trajectory.from_samples([(0., Position(0., -2.)), (1800., Position(0., 2.))])
DETOUR = Trajectory.from_samples([(0., Position(0., -2.)), (900., Position(-.5, 0.)),
                                  (1800., Position(0., 2.))])


@pytest.fixture
def scenario():
  flight = User("A001", AERONAUTICAL, 20e6, 0., 1800., ROUTE,
                uncertainty=UncertaintySpec(max_delay_s=600., alt_trajectories=(ROUTE, DETOUR)))
  newcomer = User("N001", FIXED, 25e6, 600., 1800., Trajectory.static(Position(1., 1.)),
                  known_a_priori=False)
  return Scenario(grid=GridConfig(n_channels=20, n_reuses=2, n_polarizations=2),
                  constellation=Constellation(min_elevation_deg=15.),
                  gateways=(Gateway("gw1", Position(0., 0.)),),
                  users=(flight, newcomer), horizon_s=3600., seed=5,
                  events=(Event(0., Delay("A001", 120.)),
                          Event(60., TrajectoryChange("A001", DETOUR)),
                          Event(600., NewUser(newcomer))),
                  truth={"A001": UserTruth(120., 1)}, spec={"n_fixed": 1})


@pytest.fixture
def plan():
  assignment = FrequencyAssignment("A001/0", 3, 4, 2, 1, reserved_extra_channels=1,
                                   backup_slots=(BackupSlot(10, 1, 2, 3),))
  return FrequencyPlan({"A001/0": [PlanPiece(0., 900., assignment),
                                   PlanPiece(900., 1800., DEACTIVATED)]})


def test_scenario_round_trip(tmp_path, scenario):
  path = fio.save_scenario(tmp_path / "out" / "scenario.json", scenario)
  loaded = fio.load_scenario(path)
  assert fio.dumps(loaded) == fio.dumps(scenario)
  assert loaded.users == scenario.users
  assert loaded.events == scenario.events
  assert dict(loaded.truth) == dict(scenario.truth)
  assert loaded.grid.n_reuses == 2
  assert loaded.constellation.min_elevation_deg == 15.
  assert fio.scenario_hash(loaded) == fio.scenario_hash(scenario)


def test_files_are_sorted_and_stable(tmp_path, scenario):
  text = fio.save_scenario(tmp_path / "scenario.json", scenario).read_text()
  data = json.loads(text)
  assert list(data) == sorted(data)
  assert data["events"][1]["type"] == "trajectory_change"
  assert data["users"][0]["trajectory"] == [[0., [0., -2., 0.]], [1800., [0., 2., 0.]]]


def test_scenario_hash_tracks_content(scenario):
  assert fio.scenario_hash(scenario) != fio.scenario_hash(scenario._replace(seed=6))
  assert len(fio.scenario_hash(scenario)) == 16


def test_malformed_scenario():
  with pytest.raises(InvalidSpec):
    fio.scenario_from_dict({"users": []})
  with pytest.raises(InvalidSpec):
    fio.scenario_from_dict({"horizon_s": 10., "events": [{"type": "teleport", "t_reveal": 0.}]})


def test_event_dicts(scenario):
  delay, change, new_user = (fio.to_dict(e) for e in scenario.events)
  assert delay == {"t_reveal": 0., "type": "delay", "user_id": "A001", "delay_s": 120.}
  assert change["trajectory"][1] == [900., [-.5, 0., 0.]]
  assert new_user["user"]["id"] == "N001"
  assert new_user["user"]["known_a_priori"] is False


def test_plan_round_trip(tmp_path, scenario, plan):
  path = fio.save_plan(tmp_path / "plan.json", plan, scenario, {"name": "B"}, dt_s=30.)
  loaded, header = fio.load_plan(path, scenario)
  assert loaded == plan
  assert loaded["A001/0"][0].assignment.backup_slots == (BackupSlot(10, 1, 2, 3),)
  assert loaded["A001/0"][1].is_deactivated
  assert header == {"scenario_hash": fio.scenario_hash(scenario), "config": {"name": "B"},
                    "seed": 5, "dt_s": 30.}


def test_plan_of_another_scenario(tmp_path, scenario, plan):
  path = fio.save_plan(tmp_path / "plan.json", plan, scenario)
  with pytest.raises(ScenarioMismatch):
    fio.load_plan(path, scenario._replace(horizon_s=7200.))
  loaded, _ = fio.load_plan(path)
  assert loaded == plan


def test_unknown_values_are_not_serialized():
  with pytest.raises(TypeError):
    fio.to_dict(object())


def test_read_only_mappings_are_serialized():
  frozen = types.MappingProxyType({"b": np.int64(1), "a": (np.float32(0.5), None)})
  assert fio.to_dict(frozen) == {"a": [0.5, None], "b": 1}
  assert fio.to_dict({"outer": frozen}) == {"outer": {"a": [0.5, None], "b": 1}}


def test_content_hash():
  assert canonical_json({"b": 1, "a": [1., "x"]}) == '{"a":[1.0,"x"],"b":1}'
  assert content_hash({"b": 1, "a": 2}) == content_hash({"a": 2, "b": 1})
  assert content_hash({"a": 1}) != content_hash({"a": 2})
  assert len(content_hash([])) == 16


def test_worker_count(monkeypatch):
  monkeypatch.setenv("FREQPLAN_WORKERS", "3")
  assert worker_count() == 3
  monkeypatch.setenv("FREQPLAN_WORKERS", "0")
  assert worker_count() == 1
  monkeypatch.setenv("FREQPLAN_WORKERS", "many")
  with pytest.raises(ValueError):
    worker_count()
  monkeypatch.delenv("FREQPLAN_WORKERS")
  assert worker_count() >= 1
