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
from unittest import mock

import pytest

from freqplan import cli
from freqplan import io as fio
from freqplan.constraints import RestrictionSets

SPEC = dict(n_fixed=2, n_aeronautical=2, n_maritime=1, n_land_mobile=2, n_gateways=2,
            uncertainty="low", seed=2)


@pytest.fixture
def scenario_file(tmp_path):
  spec_path = tmp_path / "spec.json"
  spec_path.write_text(json.dumps(SPEC))
  assert cli.main(["generate", "--spec", str(spec_path), "--out-dir", str(tmp_path / "run"),
                   "--logging_level", "WARNING"]) == 0
  return tmp_path / "run" / cli.SCENARIO_FILE


def test_generate(tmp_path, scenario_file):
  scenario = fio.load_scenario(scenario_file)
  assert len(scenario.users) == 7
  assert scenario.seed == 2
  assert scenario.spec["uncertainty"] == "low"

  assert cli.main(["generate", "--spec", str(tmp_path / "spec.json"), "--seed", "9",
                   "--uncertainty", "none", "--out-dir", str(tmp_path / "other")]) == 0
  other = fio.load_scenario(tmp_path / "other" / cli.SCENARIO_FILE)
  assert other.seed == 9
  assert other.events == ()


def test_plan_simulate_validate(tmp_path, scenario_file):
  out_dir = tmp_path / "run"
  assert cli.main(["plan", "--scenario", str(scenario_file), "--config", "E1", "--dt", "300",
                   "--out-dir", str(out_dir), "--lp", "--edges"]) == 0
  for name in (cli.PLAN_FILE, "report.json", "baseline.lp", cli.EDGES_FILE):
    assert (out_dir / name).exists()
  report = fio.read_json(out_dir / "report.json")
  assert report["config"] == "E1"
  assert report["n_restrictions"] >= report["n_interference_pairs"]
  edges = RestrictionSets.read_edge_list(out_dir / cli.EDGES_FILE)
  assert len(edges.r_a) == report["n_interference_pairs"]
  assert len(edges.r_e) == report["n_handover_pairs"]
  assert not (out_dir / "restrictions.csv").exists()

  assert cli.main(["simulate", "--scenario", str(scenario_file), "--out-dir", str(out_dir)]) == 0
  for name in ("metrics.json", "final_plan.json", "operations.ndjson", "operations_summary.json",
               "occupancy.csv"):
    assert (out_dir / name).exists()
  metrics = fio.read_json(out_dir / "metrics.json")
  assert metrics["config"] == "E1"
  assert metrics["n_users"] == 7
  assert 0. <= metrics["served_fraction"] <= 1.

  assert cli.main(["validate", "--scenario", str(scenario_file),
                   "--plan", str(out_dir / cli.PLAN_FILE)]) == 0


def test_unknown_configuration(scenario_file):
  with pytest.raises(SystemExit) as info:
    cli.main(["plan", "--scenario", str(scenario_file), "--config", "Z9"])
  assert info.value.code == 2


def test_errors_exit_with_one(tmp_path):
  broken = tmp_path / "broken.json"
  broken.write_text(json.dumps({"users": []}))
  assert cli.main(["validate", "--scenario", str(broken)]) == 1


def test_experiment_builds_one_spec_per_seed(tmp_path):
  with mock.patch.object(cli.experiments, "run_batch") as run_batch:
    assert cli.main(["experiment", "--preset", "paper-330", "--uncertainty", "low",
                     "--uncertainty", "high", "--config", "A", "--config", "D1", "--seeds", "2",
                     "--seed", "10", "--workers", "1", "--out-dir", str(tmp_path)]) == 0
  specs, config_names, settings, workers, out_dir = run_batch.call_args.args
  assert [(s.n_users, s.uncertainty, s.seed) for s in specs] == [
      (330, "low", 10), (330, "low", 11), (330, "high", 10), (330, "high", 11)]
  assert config_names == ["A", "D1"]
  assert settings.dt_s == 60.
  assert (workers, out_dir) == (1, str(tmp_path))
