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

""" Named strategy configurations and batches of paired runs.

Every run of a batch plans and simulates one generated scenario under each requested
configuration. The same scenario with its truth revealed a priori, planned without strategies,
gives the ideal power P* the run is normalized by.
"""

import collections
import logging
import multiprocessing
import pathlib
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Union

import munch
import pandas as pd

from freqplan import io as fio
from freqplan.errors import InvalidSpec
from freqplan.pipeline import Settings, run
from freqplan.scenario.generator import generate_scenario
from freqplan.scenario.percentiles import Percentiles, compute_percentiles
from freqplan.scenario.spec import ScenarioSpec
from freqplan.utils import worker_count

logger = logging.getLogger(__name__)

__all__ = ("ExperimentConfig", "CONFIGS", "config_settings", "ideal_settings", "run_scenario",
           "run_batch", "aggregate")

FULL_HORIZON = "T"


class ExperimentConfig(NamedTuple):
  """ Strategy parameters of a named configuration.

  t_d and gamma name a percentile ("p50", "p75", "p95") of the scenario family, or the whole
  horizon ("T", t_d only). None leaves the strategy off.
  """

  name: str
  t_d: Optional[str] = None
  x_min: float = 1.
  gamma: Optional[str] = None
  x_ch: Optional[int] = None
  x_slots: Optional[int] = None
  x_spec: Optional[float] = None


CONFIGS: Dict[str, ExperimentConfig] = collections.OrderedDict((c.name, c) for c in [
    ExperimentConfig("A"),
    ExperimentConfig("B", x_ch=1),
    ExperimentConfig("C", x_slots=1),
    ExperimentConfig("D1", x_spec=.05),
    ExperimentConfig("D2", x_spec=.10),
    ExperimentConfig("D3", x_spec=.15),
    ExperimentConfig("D4", x_spec=.20),
    ExperimentConfig("E1", t_d="p50", x_min=1.15),
    ExperimentConfig("E2", t_d="p75", x_min=1.30),
    ExperimentConfig("E3", t_d="p95", x_min=1.45),
    ExperimentConfig("F1", t_d="p50", gamma="p50"),
    ExperimentConfig("F2", t_d="p75", gamma="p75"),
    ExperimentConfig("F3", t_d="p95", gamma="p95"),
    ExperimentConfig("G1", t_d=FULL_HORIZON, gamma="p50"),
    ExperimentConfig("G2", t_d=FULL_HORIZON, gamma="p75"),
    ExperimentConfig("G3", t_d=FULL_HORIZON, gamma="p95"),
    ExperimentConfig("H1", t_d="p50", x_min=1.15, x_spec=.05),
    ExperimentConfig("H2", t_d="p75", x_min=1.30, x_spec=.10),
    ExperimentConfig("H3", t_d="p95", x_min=1.45, x_spec=.15),
])


def get_config(name: str) -> ExperimentConfig:
  if name not in CONFIGS:
    raise InvalidSpec(f"unknown configuration '{name}', choose from {list(CONFIGS)}")
  return CONFIGS[name]


def _percentile(name: str, values: Mapping[int, float]) -> float:
  if not name.startswith("p") or not name[1:].isdigit() or int(name[1:]) not in values:
    raise InvalidSpec(f"unknown percentile '{name}'")
  return values[int(name[1:])]


def config_settings(config: ExperimentConfig, percentiles: Optional[Percentiles],
                    horizon_s: float, base: Optional[Settings] = None) -> Settings:
  """ `base` with the configuration's strategies switched on. """
  base = ideal_settings(base or Settings())
  needs_percentiles = ((config.t_d not in (None, FULL_HORIZON)) or config.gamma is not None)
  if needs_percentiles and percentiles is None:
    raise InvalidSpec(f"configuration {config.name} needs delay and deviation percentiles")
  t_d_s = 0.
  if config.t_d == FULL_HORIZON:
    t_d_s = horizon_s
  elif config.t_d is not None:
    t_d_s = _percentile(config.t_d, percentiles.delay_s)
  gamma_m = 0. if config.gamma is None else _percentile(config.gamma, percentiles.deviation_m)
  return base.replace(
      constraints=base.constraints.replace(t_d_s=t_d_s, x_min=config.x_min, gamma_m=gamma_m),
      solve=base.solve.replace(x_ch=config.x_ch, x_slots=config.x_slots, x_spec=config.x_spec))


def ideal_settings(settings: Settings) -> Settings:
  """ `settings` with every proactive and reactive strategy off. """
  return settings.replace(
      constraints=settings.constraints.replace(t_d_s=0., x_min=1., gamma_m=0.),
      solve=settings.solve.replace(x_ch=None, x_slots=None, x_spec=None))


def run_scenario(spec: Union[ScenarioSpec, Mapping], config_names: Sequence[str],
                 percentiles: Optional[Percentiles] = None,
                 settings: Optional[Union[Settings, Mapping]] = None) -> List[Dict]:
  """ One row per configuration for the scenario generated from `spec`.

  Arguments may be given as plain dicts so that runs can be shipped to worker processes.
  """
  if not isinstance(spec, ScenarioSpec):
    spec = ScenarioSpec.from_dict(spec)
  if not isinstance(settings, Settings):
    settings = Settings.from_dict(settings)
  configs = [get_config(name) for name in config_names]

  scenario = generate_scenario(spec)
  _, ideal = run(scenario.revealed(), ideal_settings(settings))
  p_star = ideal.metrics.power_w
  rows = []
  for config in configs:
    logger.info("configuration %s on %d users, uncertainty %s, seed %d", config.name,
                spec.n_users, spec.uncertainty, spec.seed)
    planned, simulated = run(scenario, config_settings(config, percentiles, spec.horizon_s,
                                                       settings))
    metrics = simulated.metrics
    rows.append(dict(
        config=config.name, uncertainty=spec.uncertainty, seed=spec.seed, n_users=spec.n_users,
        n_beams=metrics.n_beams, n_restrictions=planned.restriction_sets.n_pairs,
        baseline_power_w=planned.report.objective_watts, power_w=metrics.power_w,
        ideal_power_w=p_star, power_norm=metrics.power_w / p_star if p_star else None,
        served_fraction=metrics.served_fraction, n_realloc=metrics.n_realloc,
        realloc_per_beam=metrics.realloc_per_beam,
        n_deactivated_beams=metrics.n_deactivated_beams))
  return rows


def aggregate(runs: pd.DataFrame) -> pd.DataFrame:
  """ Mean and standard deviation of the outcome columns per (uncertainty, n_users, config). """
  if runs.empty:
    return pd.DataFrame()
  keys = ["uncertainty", "n_users", "config"]
  table = runs.groupby(keys, sort=False).agg(
      served_mean=("served_fraction", "mean"), served_sd=("served_fraction", "std"),
      power_norm_mean=("power_norm", "mean"), power_norm_sd=("power_norm", "std"),
      realloc_per_beam_mean=("realloc_per_beam", "mean"),
      realloc_per_beam_sd=("realloc_per_beam", "std"),
      n_restrictions_mean=("n_restrictions", "mean"),
      n_runs=("seed", "count")).reset_index()
  order = {name: i for i, name in enumerate(CONFIGS)}
  table["_order"] = table["config"].map(order)
  table = table.sort_values(["uncertainty", "n_users", "_order"]).drop(columns="_order")
  return table.fillna({"served_sd": 0., "power_norm_sd": 0., "realloc_per_beam_sd": 0.})


def run_batch(specs: Iterable[ScenarioSpec], config_names: Sequence[str],
              settings: Optional[Settings] = None, workers: Optional[int] = None,
              out_dir: Optional[Union[str, pathlib.Path]] = None, n_samples: int = 1000
              ) -> munch.Munch:
  """ Runs every configuration on every scenario; returns `runs` and the aggregated `table`.

  Percentiles are computed once per family of scenarios sharing counts and uncertainty.
  """
  specs = list(specs)
  if not specs:
    raise InvalidSpec("an experiment needs at least one scenario")
  config_names = [get_config(name).name for name in config_names]
  settings = settings or Settings()
  workers = worker_count() if workers is None else workers

  families = collections.defaultdict(list)
  for spec in specs:
    families[(spec.n_users, spec.uncertainty)].append(spec)
  percentiles = {key: compute_percentiles(family, n_samples)
                 for key, family in families.items()}

  tasks = []
  for spec in specs:
    tasks.append((spec.to_dict(), list(config_names),
                  percentiles[(spec.n_users, spec.uncertainty)], settings.to_dict()))

  logger.info("running %d scenarios x %d configurations on %d workers", len(tasks),
              len(config_names), workers)
  if workers <= 1 or len(tasks) == 1:
    results = [run_scenario(*task) for task in tasks]
  else:
    with multiprocessing.Pool(min(workers, len(tasks))) as pool:
      futures = [pool.apply_async(run_scenario, task) for task in tasks]
      results = [future.get() for future in futures]

  runs = pd.DataFrame([row for rows in results for row in rows])
  table = aggregate(runs)
  if out_dir is not None:
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    runs.to_csv(out_dir / "runs.csv", index=False)
    table.to_csv(out_dir / "table.csv", index=False)
    for rows in results:
      for row in rows:
        fio.write_json(out_dir / "runs" / f"{row['uncertainty']}_{row['n_users']}_"
                       f"{row['config']}_{row['seed']}.json", row)
    logger.info("wrote %d runs and %d table rows to %s", len(runs), len(table), out_dir)
  return munch.Munch(runs=runs, table=table, percentiles=percentiles)
