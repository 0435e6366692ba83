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

""" Command line entry point: freqplan {generate,plan,simulate,experiment,validate}. """

import logging
import pathlib
import sys
from typing import List, Optional

import traitlets as tl

from freqplan import experiments
from freqplan import io as fio
from freqplan import pipeline
from freqplan import plotdata
from freqplan.core.scenario import validate_scenario
from freqplan.errors import FreqplanError, InvalidSpec
from freqplan.scenario.generator import generate_scenario
from freqplan.scenario.percentiles import compute_percentiles
from freqplan.scenario.spec import PRESETS, UNCERTAINTY_LEVELS, ScenarioSpec
from freqplan.solver.lp_writer import write_lp
from freqplan.solver.validator import validate_plan
from freqplan.utils import ArgumentParser, log_my_flags, setup_logging

logger = logging.getLogger(__name__)

__all__ = ("main", "build_parser")

SCENARIO_FILE = "scenario.json"
PLAN_FILE = "plan.json"
EDGES_FILE = "restrictions.edges"


def build_parser() -> ArgumentParser:
  parser = ArgumentParser(prog="freqplan", description=__doc__)
  commands = parser.add_subparsers(dest="command", required=True)

  generate = commands.add_parser("generate", help="generate a synthetic scenario")
  generate.add_argument("--preset", choices=sorted(PRESETS), default=None)
  generate.add_argument("--spec", type=str, default=None, help="ScenarioSpec JSON file")
  generate.add_argument("--uncertainty", choices=UNCERTAINTY_LEVELS, default=None)
  generate.add_argument("--out-dir", type=str, default="output")

  plan = commands.add_parser("plan", help="plan the baseline of a scenario")
  plan.add_argument("--scenario", type=str, required=True)
  plan.add_argument("--config", choices=list(experiments.CONFIGS), default="A")
  plan.add_argument("--dt", type=float, default=60.)
  plan.add_argument("--out-dir", type=str, default="output")
  plan.add_argument("--lp", action="store_true", help="also write the LP model")
  plan.add_argument("--edges", action="store_true",
                    help=f"also write the restriction sets to {EDGES_FILE}")

  simulate = commands.add_parser("simulate", help="replay operations against a baseline")
  simulate.add_argument("--scenario", type=str, required=True)
  simulate.add_argument("--plan", type=str, default=None)
  simulate.add_argument("--config", choices=list(experiments.CONFIGS), default=None,
                        help="default: the configuration stored in the plan file")
  simulate.add_argument("--dt", type=float, default=None)
  simulate.add_argument("--out-dir", type=str, default="output")

  experiment = commands.add_parser("experiment", help="batch of configurations x seeds")
  experiment.add_argument("--preset", choices=sorted(PRESETS), action="append")
  experiment.add_argument("--uncertainty", choices=UNCERTAINTY_LEVELS, action="append")
  experiment.add_argument("--config", choices=list(experiments.CONFIGS), action="append")
  experiment.add_argument("--seeds", type=int, default=10, help="number of seeds per scenario")
  experiment.add_argument("--dt", type=float, default=60.)
  experiment.add_argument("--workers", type=int, default=None)
  experiment.add_argument("--out-dir", type=str, default="output")

  validate = commands.add_parser("validate", help="check a scenario and optionally a plan")
  validate.add_argument("--scenario", type=str, required=True)
  validate.add_argument("--plan", type=str, default=None)
  validate.add_argument("--dt", type=float, default=60.)
  return parser


def _settings(scenario, config_name: str, dt_s: float) -> pipeline.Settings:
  config = experiments.get_config(config_name)
  percentiles = None
  if config.t_d or config.gamma:
    if scenario.spec is None:
      raise InvalidSpec(f"configuration {config.name} needs the generating spec of the scenario")
    percentiles = compute_percentiles(ScenarioSpec.from_dict(scenario.spec))
  return experiments.config_settings(config, percentiles, scenario.horizon_s,
                                     pipeline.Settings(dt_s=dt_s))


def cmd_generate(flags) -> int:
  if flags.spec:
    values = fio.read_json(flags.spec)
  else:
    values = dict(PRESETS[flags.preset or "paper-245"])
  if flags.seed is not None:
    values["seed"] = flags.seed
  if flags.uncertainty is not None:
    values["uncertainty"] = flags.uncertainty
  scenario = generate_scenario(ScenarioSpec.from_dict(values))
  fio.save_scenario(pathlib.Path(flags.out_dir) / SCENARIO_FILE, scenario)
  return 0


def cmd_plan(flags) -> int:
  scenario = fio.load_scenario(flags.scenario)
  settings = _settings(scenario, flags.config, flags.dt)
  if flags.seed is not None:
    settings = settings.replace(solve=settings.solve.replace(seed=flags.seed))
  planned = pipeline.plan_baseline(scenario, settings)
  out_dir = pathlib.Path(flags.out_dir)
  fio.save_plan(out_dir / PLAN_FILE, planned.plan, scenario,
                {"name": flags.config, **settings.to_dict()}, settings.dt_s, settings.solve.seed)
  report = dict(fio.to_dict(planned.report), config=flags.config,
                n_beams=len(planned.beam_set.beams),
                unservable_users=list(planned.beam_set.unservable),
                n_restrictions=planned.restriction_sets.n_pairs,
                n_interference_pairs=len(planned.restriction_sets.r_a),
                n_handover_pairs=len(planned.restriction_sets.r_e))
  fio.write_json(out_dir / "report.json", report)
  if flags.lp:
    write_lp(out_dir / "baseline.lp", planned.beam_set.beams, planned.restriction_sets,
             scenario.grid, settings.solve)
  if flags.edges:
    planned.restriction_sets.write_edge_list(out_dir / EDGES_FILE)
  return 0


def cmd_simulate(flags) -> int:
  scenario = fio.load_scenario(flags.scenario)
  out_dir = pathlib.Path(flags.out_dir)
  plan, header = fio.load_plan(flags.plan or out_dir / PLAN_FILE, scenario)
  stored = dict(header.get("config") or {})
  config_name = flags.config or stored.pop("name", "A")
  if flags.config is None and stored:
    settings = pipeline.Settings.from_dict(stored)
    if flags.dt:
      settings = settings.replace(dt_s=flags.dt)
  else:
    settings = _settings(scenario, config_name, flags.dt or header.get("dt_s", 60.))
  settings = settings.replace(solve=settings.solve.replace(seed=header.get("seed", 0)))

  beam_set = pipeline.prepare_beams(scenario, settings)
  planned = pipeline.PlanResult(beam_set, None, plan, None)
  simulated = pipeline.simulate(scenario, planned, settings)
  violations = validate_plan(simulated.plan, list(simulated.beams.values()), simulated.schedules,
                             scenario.grid, scenario.constellation, scenario.horizon_s,
                             settings.constraint_config)
  for violation in violations:
    logger.warning("final plan: %s", violation)

  metrics = dict(simulated.metrics, config=config_name, n_violations=len(violations))
  fio.write_json(out_dir / "metrics.json", metrics)
  fio.save_plan(out_dir / "final_plan.json", simulated.plan, scenario,
                header.get("config"), settings.dt_s, header.get("seed"))
  simulated.log.write(out_dir / "operations.ndjson", out_dir / "operations_summary.json")
  plotdata.write_occupancy(out_dir / "occupancy.csv", simulated.plan, simulated.beams,
                           simulated.schedules)
  return 0


def cmd_experiment(flags) -> int:
  presets = flags.preset or ["paper-245"]
  levels = flags.uncertainty or ["high"]
  config_names = flags.config or list(experiments.CONFIGS)
  root_seed = flags.seed or 0
  specs = [ScenarioSpec.from_preset(preset, uncertainty=level, seed=root_seed + n)
           for preset in presets for level in levels for n in range(flags.seeds)]
  experiments.run_batch(specs, config_names, pipeline.Settings(dt_s=flags.dt), flags.workers,
                        flags.out_dir)
  return 0


def cmd_validate(flags) -> int:
  scenario = fio.load_scenario(flags.scenario)
  problems = validate_scenario(scenario)
  for problem in problems:
    logger.error("scenario: %s", problem)
  violations = []
  if flags.plan:
    plan, header = fio.load_plan(flags.plan, scenario)
    settings = pipeline.Settings(dt_s=header.get("dt_s", flags.dt))
    beam_set = pipeline.prepare_beams(scenario, settings)
    violations = validate_plan(plan, beam_set.beams, beam_set.schedules, scenario.grid,
                               scenario.constellation, scenario.horizon_s,
                               settings.constraint_config)
    for violation in violations:
      logger.error("plan: %s", violation)
  logger.info("%d scenario problems, %d plan violations", len(problems), len(violations))
  return 1 if problems or violations else 0


COMMANDS = {"generate": cmd_generate, "plan": cmd_plan, "simulate": cmd_simulate,
            "experiment": cmd_experiment, "validate": cmd_validate}


def main(argv: Optional[List[str]] = None) -> int:
  flags = build_parser().parse_args(argv)
  setup_logging(flags.logging_level)
  log_my_flags(flags)
  try:
    return COMMANDS[flags.command](flags)
  except (FreqplanError, tl.TraitError) as err:
    logger.error("%s: %s", type(err).__name__, err)
    return 1


if __name__ == "__main__":
  sys.exit(main())
