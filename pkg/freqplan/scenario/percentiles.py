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

""" Empirical percentiles of the generator's delay and route-deviation distributions.

They instantiate the delay window t_d and the area size gamma of the proactive strategies.
"""

from typing import Dict, Iterable, NamedTuple, Optional, Union

import numpy as np

from freqplan.errors import InvalidSpec
from freqplan.scenario.generator import sample_delays, sample_deviations
from freqplan.scenario.spec import ScenarioSpec

__all__ = ("Percentiles", "compute_percentiles", "PERCENTILES")

PERCENTILES = (50, 75, 95)


class Percentiles(NamedTuple):
  delay_s: Dict[int, float]
  deviation_m: Dict[int, float]

  def delay(self, q: int) -> float:
    return self.delay_s[q]

  def deviation(self, q: int) -> float:
    return self.deviation_m[q]

  def to_dict(self):
    return {"delay_s": {f"p{q}": v for q, v in self.delay_s.items()},
            "deviation_m": {f"p{q}": v for q, v in self.deviation_m.items()}}


def compute_percentiles(family: Union[ScenarioSpec, Iterable[ScenarioSpec]],
                        n_samples: int = 1000, seed: Optional[int] = None) -> Percentiles:
  """ p50, p75 and p95 of delays and deviation magnitudes, pooled over a family of specs.

  Each spec contributes n_samples draws of each distribution. The draws use `seed`, or the seed
  of the first spec.
  """
  family = [family] if isinstance(family, ScenarioSpec) else list(family)
  if not family:
    raise InvalidSpec("cannot compute percentiles of an empty scenario family")
  if n_samples < 100:
    raise InvalidSpec(f"n_samples should be >= 100, but was {n_samples}")
  rng = np.random.default_rng(family[0].seed if seed is None else seed)
  delays, deviations = [], []
  for spec in family:
    spec.check()
    delays.append(sample_delays(spec, rng, n_samples))
    deviations.append(np.abs(sample_deviations(spec, rng, n_samples)))
  delays, deviations = np.concatenate(delays), np.concatenate(deviations)
  return Percentiles({q: float(np.percentile(delays, q)) for q in PERCENTILES},
                     {q: float(np.percentile(deviations, q)) for q in PERCENTILES})
