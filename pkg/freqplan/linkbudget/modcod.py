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

import bisect
import logging
import pathlib
from typing import Iterable, NamedTuple, Tuple, Union

import pandas as pd

from freqplan.errors import NoFeasibleModcod

logger = logging.getLogger(__name__)

__all__ = ("Modcod", "ModcodTable", "select_modcod", "DEFAULT_TABLE_PATH")

DEFAULT_TABLE_PATH = pathlib.Path(__file__).parent / "dvbs2.csv"
CSV_COLUMNS = ("name", "gamma", "ebn0_db")


class Modcod(NamedTuple):
  name: str
  gamma: float     # spectral efficiency (bps/Hz)
  ebn0_db: float   # required Eb/N


class ModcodTable(NamedTuple):
  """ MODCOD rows sorted by strictly increasing spectral efficiency. """

  rows: Tuple[Modcod, ...]

  @classmethod
  def create(cls, rows: Iterable[Tuple[str, float, float]]):
    rows = tuple(Modcod(str(name), float(gamma), float(ebn0)) for name, gamma, ebn0 in rows)
    if not rows:
      raise ValueError("a MODCOD table needs at least one row")
    if any(r.gamma <= 0 for r in rows):
      raise ValueError("spectral efficiencies have to be > 0")
    for r1, r2 in zip(rows, rows[1:]):
      if not r2.gamma > r1.gamma:
        raise ValueError(f"MODCOD rows have to be sorted by strictly increasing gamma "
                         f"({r1.name}: {r1.gamma} >= {r2.name}: {r2.gamma})")
    return cls(rows)

  @classmethod
  def from_csv(cls, path: Union[str, pathlib.Path]):
    df = pd.read_csv(path)
    missing = [c for c in CSV_COLUMNS if c not in df.columns]
    if missing:
      raise ValueError(f"MODCOD table {path} lacks columns {missing}")
    logger.debug("loaded %d MODCOD rows from %s", len(df), path)
    return cls.create(df[list(CSV_COLUMNS)].itertuples(index=False, name=None))

  @classmethod
  def default(cls):
    """ The DVB-S2 subset shipped with the package. """
    return cls.from_csv(DEFAULT_TABLE_PATH)

  @classmethod
  def test_table(cls):
    """ A synthetic three-row table, independent of any standard. """
    return cls.create([("T0.5", 0.5, 0.), ("T1.0", 1.0, 3.), ("T2.0", 2.0, 7.)])

  @property
  def gammas(self) -> Tuple[float, ...]:
    return tuple(r.gamma for r in self.rows)

  @property
  def min_gamma(self) -> float:
    return self.rows[0].gamma

  @property
  def max_gamma(self) -> float:
    return self.rows[-1].gamma

  def __len__(self):
    return len(self.rows)

  def to_frame(self) -> pd.DataFrame:
    return pd.DataFrame(list(self.rows), columns=list(CSV_COLUMNS))


def select_modcod(gamma_req: float, table: ModcodTable) -> Modcod:
  """ The row with the lowest spectral efficiency that still satisfies gamma >= gamma_req. """
  i = bisect.bisect_left(table.gammas, gamma_req)
  if i == len(table.rows):
    raise NoFeasibleModcod(f"required spectral efficiency {gamma_req:.4g} exceeds the best "
                           f"MODCOD ({table.max_gamma:.4g})")
  return table.rows[i]
