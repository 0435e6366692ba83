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

import functools

import pytest

from freqplan import experiments, pipeline
from freqplan.scenario import ScenarioSpec, compute_percentiles, generate_scenario
from freqplan.solver import validate_plan

SMALL = dict(n_fixed=2, n_aeronautical=4, n_maritime=1, n_land_mobile=4, n_gateways=2)
SEEDS = (0, 1, 2)


@functools.lru_cache(maxsize=None)
def family(uncertainty, seed, **counts):
  spec = ScenarioSpec.create(uncertainty=uncertainty, seed=seed, **(counts or SMALL))
  return spec, generate_scenario(spec), compute_percentiles(spec, n_samples=200)


def settings_for(name, spec, percentiles):
  return experiments.config_settings(experiments.get_config(name), percentiles, spec.horizon_s,
                                     pipeline.Settings(dt_s=300.))


@functools.lru_cache(maxsize=None)
def outcome(name, uncertainty, seed):
  spec, scenario, percentiles = family(uncertainty, seed)
  return pipeline.run(scenario, settings_for(name, spec, percentiles))


@pytest.mark.parametrize("seed", SEEDS)
def test_known_users_are_fully_served(seed):
  _, scenario, _ = family("none", seed)
  assert scenario.events == ()
  planned, simulated = outcome("A", "none", seed)
  assert planned.report.deactivated == ()
  assert simulated.metrics.served_fraction == 1.
  assert simulated.metrics.n_realloc == 0


@pytest.mark.parametrize("name", ["A", "B", "C", "D2", "E1", "H2"])
@pytest.mark.parametrize("seed", SEEDS)
def test_operated_plan_stays_valid(name, seed):
  _, scenario, _ = family("high", seed)
  _, simulated = outcome(name, "high", seed)
  violations = validate_plan(simulated.plan, list(simulated.beams.values()), simulated.schedules,
                             scenario.grid, scenario.constellation, scenario.horizon_s)
  assert violations == []


@pytest.mark.parametrize("seed", SEEDS)
def test_full_horizon_reservation_only_adds_restrictions(seed):
  spec, scenario, percentiles = family("high", seed)
  calibrated = pipeline.plan_baseline(scenario, settings_for("F1", spec, percentiles))
  whole = pipeline.plan_baseline(scenario, settings_for("G1", spec, percentiles),
                                 beam_set=calibrated.beam_set)
  assert whole.restriction_sets.r_a >= calibrated.restriction_sets.r_a
  assert whole.restriction_sets.r_e >= calibrated.restriction_sets.r_e


@pytest.mark.slow
def test_full_horizon_reservation_over_restricts():
  counts = dict(n_fixed=1, n_aeronautical=16, n_maritime=0, n_land_mobile=0, n_gateways=2)
  totals = {"F1": 0, "G1": 0}
  for seed in SEEDS:
    spec, scenario, percentiles = family("high", seed, **counts)
    beam_set = pipeline.prepare_beams(scenario, pipeline.Settings(dt_s=300.))
    for name in totals:
      planned = pipeline.plan_baseline(scenario, settings_for(name, spec, percentiles), beam_set)
      totals[name] += planned.restriction_sets.n_pairs
  assert totals["F1"] > 0
  assert totals["G1"] >= 2 * totals["F1"]


def mean_metric(name, field):
  return sum(outcome(name, "high", seed)[1].metrics[field] for seed in SEEDS) / len(SEEDS)


@pytest.mark.slow
def test_more_emergency_spectrum_serves_more_users():
  served = [mean_metric(name, "served_fraction") for name in ("A", "D1", "D2", "D3", "D4")]
  assert all(a <= b + 1e-9 for a, b in zip(served[1:], served[2:]))
  assert served[-1] >= served[0] - 1e-9


@pytest.mark.slow
def test_time_reservation_saves_reallocations():
  assert mean_metric("H2", "n_realloc") <= mean_metric("D4", "n_realloc")
