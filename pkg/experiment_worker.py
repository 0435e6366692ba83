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
import logging
import pathlib

import freqplan as fp
from freqplan import experiments
from freqplan import io as fio

# --- parser
parser = fp.ArgumentParser()
parser.add_argument("--preset", type=str, default="paper-245", choices=sorted(fp.scenario.PRESETS))
parser.add_argument("--uncertainty", type=str, default="high", choices=["none", "low", "high"])
parser.add_argument("--config", type=str, default="A", choices=list(experiments.CONFIGS))
parser.add_argument("--dt", type=float, default=60.)
parser.add_argument("--n_samples", type=int, default=1000)
parser.add_argument("--output_dir", type=str, default="output/")
FLAGS = parser.parse_args()

# --- common setups & resources
fp.setup_logging(FLAGS.logging_level)
fp.log_my_flags(FLAGS)
seed = FLAGS.seed or 0
spec = fp.ScenarioSpec.from_preset(FLAGS.preset, uncertainty=FLAGS.uncertainty, seed=seed)
percentiles = fp.compute_percentiles(spec, FLAGS.n_samples)

# --- plan, simulate and compare with the ideal run
rows = experiments.run_scenario(spec, [FLAGS.config], percentiles, fp.Settings(dt_s=FLAGS.dt))

# --- save results
output_dir = pathlib.Path(FLAGS.output_dir)
path = fio.write_json(output_dir / f"{FLAGS.preset}_{FLAGS.uncertainty}_{FLAGS.config}_{seed}.json",
                      rows[0])
logging.info("result: %s", json.dumps(rows[0], sort_keys=True))
logging.info("written to %s", path)
