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

""" Downlink power model.

For a beam carrying D bps on b channels of width BW:

  gamma_req = D (1 + roll_off) / (b BW)
  C/N0      = Eb/N + 10 log10(D / (b BW))                      (dB, MODCOD chosen from gamma_req)
  P         = C/N0 + OBO - G_Tx - G_Rx + FSPL + 10 log10(k T_sys)   (dBW)

Interference and every loss other than free-space path loss are neglected.
"""

import logging
import math
from types import MappingProxyType
from typing import Mapping, NamedTuple, Tuple, Union

import traitlets as tl

from freqplan.core import traits as ftl
from freqplan.errors import InfeasibleBeam, NoFeasibleModcod
from freqplan.linkbudget.modcod import ModcodTable, select_modcod

logger = logging.getLogger(__name__)

__all__ = ("LinkParams", "PowerTable", "required_spectral_efficiency", "carrier_to_noise_db",
           "free_space_path_loss_db", "required_power", "compute_b_range", "build_power_table",
           "SPEED_OF_LIGHT", "BOLTZMANN")

SPEED_OF_LIGHT = 299792458.
BOLTZMANN = 1.380649e-23


class LinkParams(tl.HasTraits):
  roll_off = tl.Float(0.2)
  obo_db = tl.Float(2.)
  tx_gain_db = tl.Float(45.)
  rx_gain_db = tl.Float(40.)
  system_temp_k = ftl.PositiveFloat(300.)
  boltzmann = ftl.PositiveFloat(BOLTZMANN)
  slant_range_m = ftl.PositiveFloat(8062e3)
  carrier_freq_hz = ftl.PositiveFloat(19.7e9)
  channel_bandwidth_hz = ftl.PositiveFloat(25e6)
  p_beam_max_w = ftl.PositiveFloat(None, allow_none=True)

  def __init__(self, roll_off: float = 0.2, obo_db: float = 2., tx_gain_db: float = 45.,
               rx_gain_db: float = 40., system_temp_k: float = 300.,
               boltzmann: float = BOLTZMANN, slant_range_m: float = 8062e3,
               carrier_freq_hz: float = 19.7e9, channel_bandwidth_hz: float = 25e6,
               p_beam_max_w=None):
    super().__init__(roll_off=roll_off, obo_db=obo_db, tx_gain_db=tx_gain_db,
                     rx_gain_db=rx_gain_db, system_temp_k=system_temp_k, boltzmann=boltzmann,
                     slant_range_m=slant_range_m, carrier_freq_hz=carrier_freq_hz,
                     channel_bandwidth_hz=channel_bandwidth_hz, p_beam_max_w=p_beam_max_w)

  @tl.validate("roll_off")
  def _valid_roll_off(self, proposal):
    value = proposal["value"]
    if not 0. <= value < 1.:
      raise tl.TraitError(f"roll_off should be in [0, 1), but was {value}")
    return value

  def to_dict(self):
    return {name: getattr(self, name) for name in sorted(self.trait_names())}

  def replace(self, **changes) -> "LinkParams":
    values = self.to_dict()
    values.update(changes)
    return LinkParams(**values)

  def __repr__(self):
    items = " ".join(f"{k}={v}" for k, v in self.to_dict().items())
    return f"<LinkParams {items}>"


class PowerTable(NamedTuple):
  """ Transmit power (W) of one beam for every channel count b in [b_min, b_max]. """

  beam_id: str
  p_watts: Mapping[int, float]

  @classmethod
  def create(cls, beam_id: str, p_watts: Mapping[int, float]):
    if not p_watts:
      raise ValueError(f"beam {beam_id}: empty power table")
    keys = sorted(int(b) for b in p_watts)
    if keys != list(range(keys[0], keys[-1] + 1)):
      raise ValueError(f"beam {beam_id}: power table has gaps ({keys})")
    for b, p in p_watts.items():
      if not (math.isfinite(p) and p > 0):
        raise ValueError(f"beam {beam_id}: power for b={b} has to be finite and > 0 (was {p})")
    return cls(beam_id, MappingProxyType({int(b): float(p_watts[b]) for b in keys}))

  @property
  def b_min(self) -> int:
    return min(self.p_watts)

  @property
  def b_max(self) -> int:
    return max(self.p_watts)

  def by_power(self) -> Tuple[int, ...]:
    """ Channel counts by ascending power, fewer channels first on ties. """
    return tuple(sorted(self.p_watts, key=lambda b: (self.p_watts[b], b)))

  @property
  def best_b(self) -> int:
    return self.by_power()[0]


def required_spectral_efficiency(demand_bps: float, roll_off: float, b: int,
                                 bw_hz: float) -> float:
  return demand_bps * (1. + roll_off) / (b * bw_hz)


def carrier_to_noise_db(ebn0_db: float, demand_bps: float, b: int, bw_hz: float) -> float:
  return ebn0_db + 10. * math.log10(demand_bps / (b * bw_hz))


def free_space_path_loss_db(range_m: float, freq_hz: float) -> float:
  return 20. * math.log10(4. * math.pi * range_m * freq_hz / SPEED_OF_LIGHT)


def _demand_of(beam_or_demand: Union[float, object]) -> float:
  return float(getattr(beam_or_demand, "demand_bps", beam_or_demand))


def required_power(demand_bps: float, b: int, link: LinkParams, table: ModcodTable) -> float:
  """ Transmit power (W) to carry demand_bps on b channels. Raises NoFeasibleModcod. """
  bw = link.channel_bandwidth_hz
  modcod = select_modcod(required_spectral_efficiency(demand_bps, link.roll_off, b, bw), table)
  p_db = (carrier_to_noise_db(modcod.ebn0_db, demand_bps, b, bw)
          + link.obo_db - link.tx_gain_db - link.rx_gain_db
          + free_space_path_loss_db(link.slant_range_m, link.carrier_freq_hz)
          + 10. * math.log10(link.boltzmann * link.system_temp_k))
  return 10. ** (p_db / 10.)


def compute_b_range(beam, link: LinkParams, table: ModcodTable,
                    n_channels: int) -> Tuple[int, int]:
  """ Feasible channel counts of a beam (or of a bare demand in bps).

  b_min is the smallest b with a feasible MODCOD whose power respects link.p_beam_max_w.
  b_max is the largest b that still needs at least the lowest MODCOD, clamped to
  [b_min, n_channels].
  """
  demand = _demand_of(beam)
  if not demand > 0:
    raise InfeasibleBeam(f"demand has to be > 0 (was {demand})")
  bw = link.channel_bandwidth_hz

  b_min = None
  for b in range(1, n_channels + 1):
    try:
      power = required_power(demand, b, link, table)
    except NoFeasibleModcod:
      continue
    if link.p_beam_max_w is None or power <= link.p_beam_max_w:
      b_min = b
      break
  if b_min is None:
    raise InfeasibleBeam(f"{getattr(beam, 'id', 'demand')}: {demand:.4g} bps cannot be served "
                         f"with up to {n_channels} channels")

  b_max = 1
  while (b_max < n_channels
         and required_spectral_efficiency(demand, link.roll_off, b_max + 1, bw) >= table.min_gamma):
    b_max += 1
  return b_min, min(max(b_max, b_min), n_channels)


def build_power_table(beam, link: LinkParams, table: ModcodTable) -> PowerTable:
  p_watts = {b: required_power(beam.demand_bps, b, link, table)
             for b in range(beam.b_min, beam.b_max + 1)}
  return PowerTable.create(beam.id, p_watts)
