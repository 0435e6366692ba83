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

import math
from typing import NamedTuple, Tuple

import numpy as np
import traitlets as tl

from freqplan.core import traits as ftl

__all__ = ("GridConfig", "TimeGrid")


class GridConfig(tl.HasTraits):
  """ The frequency assignment grid: N_r * N_p frequency groups (rows) by N_ch channels.

  Channels, reuse indices and polarization indices are all 1-based.
  """

  n_channels = tl.Integer(80)
  n_reuses = tl.Integer(8)
  n_polarizations = tl.Integer(2)
  channel_bandwidth_hz = ftl.PositiveFloat(25e6)

  def __init__(self, n_channels: int = 80, n_reuses: int = 8, n_polarizations: int = 2,
               channel_bandwidth_hz: float = 25e6):
    super().__init__(n_channels=n_channels, n_reuses=n_reuses, n_polarizations=n_polarizations,
                     channel_bandwidth_hz=channel_bandwidth_hz)

  @tl.validate("n_channels", "n_reuses", "n_polarizations")
  def _valid_count(self, proposal):
    value = proposal["value"]
    if value < 1:
      raise tl.TraitError(f"{proposal['trait'].name} should be >= 1, but was {value}")
    return value

  @property
  def n_groups(self) -> int:
    return self.n_reuses * self.n_polarizations

  @property
  def groups(self) -> Tuple[Tuple[int, int], ...]:
    """ All (g, p) pairs in tie-break order: lowest g first, then lowest p. """
    return tuple((g, p) for g in range(1, self.n_reuses + 1)
                 for p in range(1, self.n_polarizations + 1))

  def group_row(self, g: int, p: int) -> int:
    """ 1-based row of the (g, p) frequency group in the assignment grid. """
    return (p - 1) * self.n_reuses + g

  def reserved_channels(self, x_spec) -> int:
    """ Number of low channels set aside as emergency spectrum, ceil(x_spec * N_ch). """
    if not x_spec:
      return 0
    return int(math.ceil(x_spec * self.n_channels - 1e-9))

  def __repr__(self):
    return (f"<GridConfig n_channels={self.n_channels} n_reuses={self.n_reuses} "
            f"n_polarizations={self.n_polarizations} "
            f"channel_bandwidth_hz={self.channel_bandwidth_hz}>")


class TimeGrid(NamedTuple):
  """ The Δt sampling of the horizon [0, T). Step k stands for time k * dt_s. """

  horizon_s: float
  dt_s: float

  @classmethod
  def create(cls, horizon_s: float, dt_s: float = 60.):
    if not dt_s > 0:
      raise ValueError(f"dt_s should be > 0 (was {dt_s})")
    if not horizon_s > 0:
      raise ValueError(f"horizon_s should be > 0 (was {horizon_s})")
    ratio = horizon_s / dt_s
    if abs(ratio - round(ratio)) > 1e-9:
      raise ValueError(f"dt_s={dt_s} does not divide the horizon {horizon_s}")
    return cls(float(horizon_s), float(dt_s))

  @property
  def n_steps(self) -> int:
    return int(round(self.horizon_s / self.dt_s))

  @property
  def times(self) -> np.ndarray:
    return np.arange(self.n_steps, dtype=np.float64) * self.dt_s

  def time(self, k: int) -> float:
    return k * self.dt_s

  def first_step_at_or_after(self, t: float) -> int:
    k = int(math.ceil(t / self.dt_s))
    return min(max(k, 0), self.n_steps)

  def step_range(self, t_start: float, t_end: float) -> Tuple[int, int]:
    """ The half-open range [k0, k1) of steps with t_start <= k * dt < t_end. """
    k0 = self.first_step_at_or_after(t_start)
    k1 = self.first_step_at_or_after(t_end)
    return k0, max(k0, k1)
