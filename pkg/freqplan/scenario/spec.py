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

import logging
import math
from typing import Any, Dict, Optional

import traitlets as tl

from freqplan.core import traits as ftl
from freqplan.errors import InvalidSpec

logger = logging.getLogger(__name__)

__all__ = ("ScenarioSpec", "PRESETS", "UNCERTAINTY_LEVELS", "DELAY_DISTRIBUTIONS",
           "UNKNOWN_LAND_FRACTION")

UNCERTAINTY_LEVELS = ("none", "low", "high")
DELAY_DISTRIBUTIONS = ("lognormal", "uniform", "constant")

# share of land mobile users missing from U_info
UNKNOWN_LAND_FRACTION = {"none": 0., "low": .25, "high": .75}

PRESETS: Dict[str, Dict[str, int]] = {
    "paper-245": dict(n_fixed=25, n_aeronautical=200, n_maritime=10, n_land_mobile=10),
    "paper-330": dict(n_fixed=50, n_aeronautical=250, n_maritime=15, n_land_mobile=15),
}

Z_95 = 1.6448536269514722


class ScenarioSpec(tl.HasTraits):
  """ Parameters of a synthetic scenario.

  The uncertainty level sets the share of land mobile users that are unknown a priori and scales
  aeronautical delays and route deviations ("low" halves the spread of both). "none" produces a
  scenario where every user is known exactly (U_info = U_tot).
  """

  n_fixed = tl.Integer(25)
  n_aeronautical = tl.Integer(200)
  n_maritime = tl.Integer(10)
  n_land_mobile = tl.Integer(10)
  uncertainty = tl.Enum(UNCERTAINTY_LEVELS, default_value="high")
  region = ftl.LatLonBox()
  horizon_s = ftl.PositiveFloat(86400.)
  seed = tl.Integer(0)
  n_gateways = tl.Integer(4)

  delay_distribution = tl.Enum(DELAY_DISTRIBUTIONS, default_value="lognormal")
  delay_median_s = ftl.PositiveFloat(900.)
  delay_p95_s = ftl.PositiveFloat(4500.)
  delayed_fraction = ftl.Fraction(0.5)
  reveal_lead_s = tl.Float(1800.)
  deviation_scale_m = ftl.PositiveFloat(150e3)
  min_alternatives = tl.Integer(2)
  max_alternatives = tl.Integer(4)
  fixed_scatter_m = ftl.PositiveFloat(150e3)

  demand_fixed_bps = ftl.PositiveFloat(25e6)
  demand_aeronautical_bps = ftl.PositiveFloat(20e6)
  demand_maritime_bps = ftl.PositiveFloat(50e6)
  demand_land_mobile_bps = ftl.PositiveFloat(10e6)
  aircraft_speed_m_s = ftl.PositiveFloat(250.)
  ship_speed_m_s = ftl.PositiveFloat(10.)
  vehicle_speed_m_s = ftl.PositiveFloat(20.)

  airports_csv = tl.Unicode(None, allow_none=True)
  ports_csv = tl.Unicode(None, allow_none=True)

  @tl.validate("n_fixed", "n_aeronautical", "n_maritime", "n_land_mobile", "n_gateways",
               "min_alternatives")
  def _valid_count(self, proposal):
    value = proposal["value"]
    if value < 0:
      raise tl.TraitError(f"{proposal['trait'].name} should be >= 0, but was {value}")
    return value

  @tl.validate("max_alternatives")
  def _valid_max_alternatives(self, proposal):
    value = proposal["value"]
    if value < self.min_alternatives:
      raise tl.TraitError(f"max_alternatives should be >= min_alternatives, but was {value}")
    return value

  @tl.validate("reveal_lead_s")
  def _valid_lead(self, proposal):
    value = proposal["value"]
    if value < 0:
      raise tl.TraitError(f"reveal_lead_s should be >= 0, but was {value}")
    return value

  @classmethod
  def from_preset(cls, name: str, **overrides) -> "ScenarioSpec":
    if name not in PRESETS:
      raise InvalidSpec(f"unknown preset '{name}', choose from {sorted(PRESETS)}")
    values = dict(PRESETS[name])
    values.update(overrides)
    return cls.create(**values)

  @classmethod
  def create(cls, **values) -> "ScenarioSpec":
    """ Like the constructor, but reports invalid values as InvalidSpec. """
    try:
      return cls(**values)
    except tl.TraitError as err:
      raise InvalidSpec(str(err)) from err

  @property
  def n_users(self) -> int:
    return self.n_fixed + self.n_aeronautical + self.n_maritime + self.n_land_mobile

  @property
  def n_unknown_land(self) -> int:
    return int(math.ceil(UNKNOWN_LAND_FRACTION[self.uncertainty] * self.n_land_mobile - 1e-9))

  @property
  def spread(self) -> float:
    """ Multiplier of delay and deviation spread for the uncertainty level. """
    return {"none": 0., "low": .5, "high": 1.}[self.uncertainty]

  @property
  def delay_sigma(self) -> float:
    """ Log-normal shape at the current uncertainty level. """
    return self.spread * math.log(self.delay_p95_s / self.delay_median_s) / Z_95

  @property
  def max_delay_s(self) -> float:
    """ Bound declared for delayable users; sampled delays are clipped to it. """
    if self.uncertainty == "none":
      return 0.
    if self.delay_distribution == "lognormal":
      return 2. * self.delay_median_s * math.exp(Z_95 * self.delay_sigma)
    if self.delay_distribution == "uniform":
      return 2. * self.delay_median_s
    return self.delay_median_s

  def to_dict(self) -> Dict[str, Any]:
    return {name: getattr(self, name) for name in sorted(self.trait_names())}

  @classmethod
  def from_dict(cls, values: Optional[Dict[str, Any]]) -> "ScenarioSpec":
    values = dict(values or {})
    if "region" in values:
      values["region"] = tuple(values["region"])
    return cls.create(**values)

  def __repr__(self):
    return (f"<ScenarioSpec users={self.n_fixed}/{self.n_aeronautical}/{self.n_maritime}/"
            f"{self.n_land_mobile} uncertainty={self.uncertainty} seed={self.seed}>")

  def check(self) -> None:
    """ Cross-field checks the per-trait validators cannot do. """
    if self.delay_p95_s < self.delay_median_s:
      raise InvalidSpec(f"delay_p95_s ({self.delay_p95_s}) is below delay_median_s "
                        f"({self.delay_median_s})")
