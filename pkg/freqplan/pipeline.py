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

""" Plan and simulate one scenario: the steps shared by the command line and experiments. """

import logging
import time
from typing import Mapping, NamedTuple, Optional, Sequence, Tuple

import munch
import traitlets as tl

from freqplan.constraints.config import ConstraintConfig
from freqplan.constraints.restrictions import RestrictionSets, build_restriction_sets
from freqplan.core import traits as ftl
from freqplan.core.beams import Beam
from freqplan.core.grid import TimeGrid
from freqplan.core.plan import FrequencyPlan
from freqplan.core.scenario import Scenario
from freqplan.geometry.routing import HandoverSchedule
from freqplan.linkbudget.budget import LinkParams
from freqplan.linkbudget.modcod import ModcodTable
from freqplan.reactive.engine import PRIORITIES, ReactiveEngine
from freqplan.reactive.log import OperationsLog
from freqplan.reactive.metrics import compute_metrics
from freqplan.scenario.beams import BeamSet, build_beams
from freqplan.solver.config import SolveConfig, SolveReport
from freqplan.solver.heuristic import solve_baseline

logger = logging.getLogger(__name__)

__all__ = ("Settings", "PlanResult", "SimulationResult", "prepare_beams", "plan_baseline",
           "simulate", "run")


class Settings(tl.HasTraits):
  """ Every run-level knob. `constraints.dt_s` is overridden by `dt_s`. """

  dt_s = ftl.PositiveFloat(60.)
  link = tl.Instance(LinkParams, args=())
  p_sat_w = ftl.PositiveFloat(None, allow_none=True)
  constraints = tl.Instance(ConstraintConfig, args=())
  solve = tl.Instance(SolveConfig, args=())
  modcod_csv = tl.Unicode(None, allow_none=True)
  max_beam_radius_m = ftl.PositiveFloat(250e3)
  priority = tl.Enum(tuple(sorted(PRIORITIES)), default_value="fifo")

  @property
  def constraint_config(self) -> ConstraintConfig:
    return self.constraints.replace(dt_s=self.dt_s)

  def modcod_table(self) -> ModcodTable:
    if self.modcod_csv:
      return ModcodTable.from_csv(self.modcod_csv)
    return ModcodTable.default()

  def replace(self, **changes) -> "Settings":
    values = {name: getattr(self, name) for name in self.trait_names()}
    values.update(changes)
    return Settings(**values)

  def to_dict(self):
    return {"dt_s": self.dt_s, "link": self.link.to_dict(), "p_sat_w": self.p_sat_w,
            "constraints": self.constraint_config.to_dict(), "solve": self.solve.to_dict(),
            "modcod_csv": self.modcod_csv, "max_beam_radius_m": self.max_beam_radius_m,
            "priority": self.priority}

  @classmethod
  def from_dict(cls, values: Optional[Mapping] = None) -> "Settings":
    values = dict(values or {})
    if "link" in values:
      values["link"] = LinkParams(**values["link"])
    if "constraints" in values:
      values["constraints"] = ConstraintConfig(**values["constraints"])
    if "solve" in values:
      values["solve"] = SolveConfig(**values["solve"])
    return cls(**values)


class PlanResult(NamedTuple):
  beam_set: BeamSet
  restriction_sets: RestrictionSets
  plan: FrequencyPlan
  report: SolveReport


class SimulationResult(NamedTuple):
  plan: FrequencyPlan
  log: OperationsLog
  beams: Mapping[str, Beam]
  schedules: Mapping[str, HandoverSchedule]
  metrics: munch.Munch


def prepare_beams(scenario: Scenario, settings: Settings,
                  users: Optional[Sequence] = None) -> BeamSet:
  """ Beams of the users known before operations (or of `users`). """
  users = scenario.known_users if users is None else users
  return build_beams(users, scenario.gateways, scenario.grid, scenario.constellation,
                     settings.link, settings.modcod_table(), scenario.horizon_s, settings.dt_s,
                     settings.max_beam_radius_m)


def plan_baseline(scenario: Scenario, settings: Optional[Settings] = None,
                  beam_set: Optional[BeamSet] = None) -> PlanResult:
  settings = settings or Settings()
  start = time.time()
  beam_set = beam_set or prepare_beams(scenario, settings)
  sets = build_restriction_sets(beam_set.beams, beam_set.schedules, settings.constraint_config,
                                scenario.constellation, scenario.horizon_s)
  time_grid = TimeGrid.create(scenario.horizon_s, settings.dt_s)
  plan, report = solve_baseline(beam_set.beams, sets, scenario.grid, settings.solve, time_grid)
  logger.info("baseline planned in %.1fs", time.time() - start)
  return PlanResult(beam_set, sets, plan, report)


def simulate(scenario: Scenario, planned: PlanResult,
             settings: Optional[Settings] = None) -> SimulationResult:
  """ Replays the events of the horizon against the baseline and measures the outcome. """
  settings = settings or Settings()
  start = time.time()
  engine = ReactiveEngine(scenario, planned.beam_set, planned.plan, settings.link,
                          settings.modcod_table(), settings.constraint_config, settings.solve,
                          settings.priority)
  plan, log = engine.run()
  time_grid = TimeGrid.create(scenario.horizon_s, settings.dt_s)
  metrics = compute_metrics(plan, engine.beams, [u.id for u in scenario.users], time_grid, log,
                            settings.p_sat_w, engine.unservable)
  logger.info("operations simulated in %.1fs", time.time() - start)
  return SimulationResult(plan, log, dict(engine.beams), dict(engine.schedules), metrics)


def run(scenario: Scenario, settings: Optional[Settings] = None
        ) -> Tuple[PlanResult, SimulationResult]:
  settings = settings or Settings()
  planned = plan_baseline(scenario, settings)
  return planned, simulate(scenario, planned, settings)
