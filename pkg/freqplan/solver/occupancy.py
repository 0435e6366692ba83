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

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from freqplan.core.grid import GridConfig
from freqplan.core.plan import Block

__all__ = ("ChannelMask",)


class ChannelMask:
  """ Channels unavailable to one beam.

  Blocks of handover partners are blocked within their (g, p) group only; blocks of interference
  partners are blocked in every group sharing their polarization.
  """

  def __init__(self, grid: GridConfig):
    self.grid = grid
    n = grid.n_channels + 1
    self._group = np.zeros((grid.n_reuses + 1, grid.n_polarizations + 1, n), dtype=bool)
    self._polarization = np.zeros((grid.n_polarizations + 1, n), dtype=bool)

  def copy(self) -> "ChannelMask":
    other = ChannelMask(self.grid)
    other._group = self._group.copy()
    other._polarization = self._polarization.copy()
    return other

  def block_group(self, block: Block) -> None:
    self._group[block.g, block.p, block.f:block.f_end + 1] = True

  def block_polarization(self, block: Block) -> None:
    self._polarization[block.p, block.f:block.f_end + 1] = True

  def add_partner(self, blocks: Iterable[Block], interference: bool, handover: bool) -> None:
    for block in blocks:
      if handover:
        self.block_group(block)
      if interference:
        self.block_polarization(block)

  def blocked(self, g: int, p: int) -> np.ndarray:
    """ Boolean array indexed by channel (index 0 unused). """
    return self._group[g, p] | self._polarization[p]

  def is_free(self, block: Block) -> bool:
    if block.f < 1 or block.f_end > self.grid.n_channels:
      return False
    return not self.blocked(block.g, block.p)[block.f:block.f_end + 1].any()

  def first_fit(self, b: int, g: int, p: int, f_lo: int = 1,
                f_hi: Optional[int] = None) -> Optional[int]:
    """ Lowest f with channels [f, f + b - 1] free and inside [f_lo, f_hi]. """
    f_hi = self.grid.n_channels if f_hi is None else f_hi
    if b < 1 or f_lo + b - 1 > f_hi:
      return None
    window = self.blocked(g, p)[f_lo:f_hi + 1].astype(np.int64)
    counts = np.convolve(window, np.ones(b, dtype=np.int64), mode="valid")
    free = np.flatnonzero(counts == 0)
    return int(free[0]) + f_lo if len(free) else None

  def place(self, b: int, groups: Sequence[Tuple[int, int]], f_lo: int = 1,
            f_hi: Optional[int] = None) -> Optional[Block]:
    """ The free block of b channels with the lowest f, then lowest g, then lowest p. """
    best = None
    for g, p in groups:
      f = self.first_fit(b, g, p, f_lo, f_hi)
      if f is not None and (best is None or (f, g, p) < (best.f, best.g, best.p)):
        best = Block(f, b, g, p)
    return best
