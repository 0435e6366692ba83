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

""" Writes the baseline assignment problem as a big-M integer program in LP format.

Variables per beam k (named "B<n>" in the file, see the header comments):
  x_k_b   binary, beam k uses b channels
  y_k_g_p binary, beam k sits in frequency group (g, p)
  f_k     integer, first channel of beam k
and, per restricted pair (k, l), the ordering binaries o_k_l (k entirely below l) and o_l_k.
A pair must be ordered whenever both beams are in one polarization (interference pairs) or in
one group (handover pairs). Backup slots are not modelled.
"""

import io
import logging
import pathlib
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import bidict

from freqplan.constraints.restrictions import RestrictionSets
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.solver.config import SolveConfig
from freqplan.solver.heuristic import active_weights, check_power_tables

logger = logging.getLogger(__name__)

__all__ = ("write_lp", "lp_text", "beam_names")

TERMS_PER_LINE = 8
Term = Tuple[float, str]


def beam_names(beam_ids: Iterable[str]) -> bidict.bidict:
  """ beam id <-> LP-safe name "B<n>", numbered in sorted id order. """
  return bidict.bidict({beam_id: f"B{n}" for n, beam_id in enumerate(sorted(beam_ids), 1)})


def _coef(c: float) -> str:
  return f"{c:.12g}"


def _expression(terms: Sequence[Term]) -> str:
  parts = []
  for i, (c, var) in enumerate(terms):
    sign = "-" if c < 0 else "+"
    magnitude = abs(c)
    text = var if magnitude == 1 else f"{_coef(magnitude)} {var}"
    if i == 0:
      parts.append(f"- {text}" if c < 0 else text)
    else:
      parts.append(f"{sign} {text}")
  lines = [" ".join(parts[i:i + TERMS_PER_LINE]) for i in range(0, len(parts), TERMS_PER_LINE)]
  return "\n   ".join(lines)


class _Model:

  def __init__(self):
    self.constraints: List[str] = []
    self.binaries: List[str] = []
    self.generals: List[str] = []
    self.bounds: List[str] = []

  def add(self, name: str, terms: Sequence[Term], sense: str, rhs: float) -> None:
    self.constraints.append(f" {name}: {_expression(terms)} {sense} {_coef(rhs)}")


def lp_text(beams: Sequence, restriction_sets: RestrictionSets, grid: GridConfig,
            config: Optional[SolveConfig] = None,
            time_grid: Optional[TimeGrid] = None) -> Tuple[str, bidict.bidict]:
  config = config or SolveConfig()
  beams = sorted(beams, key=lambda b: b.id)
  check_power_tables(beams)
  names = beam_names(beam.id for beam in beams)
  weights = active_weights(beams, time_grid)
  f_floor = config.channel_floor(grid)
  big_m = 2 * grid.n_channels
  model = _Model()
  objective: List[Term] = []
  widths: Dict[str, List[Term]] = {}
  reserved: Dict[str, int] = {}

  for beam in beams:
    k = names[beam.id]
    reserved[k] = config.reserved_extra(beam)
    x = [(b, f"x_{k}_{b}") for b in range(beam.b_min, beam.b_max + 1)]
    y = [f"y_{k}_{g}_{p}" for g, p in grid.groups]
    objective.extend((beam.power(b) * weights[beam.id], var) for b, var in x)
    widths[k] = [(float(b), var) for b, var in x]
    model.add(f"one_b_{k}", [(1., var) for _, var in x], "=", 1)
    model.add(f"one_group_{k}", [(1., var) for var in y], "=", 1)
    model.add(f"fits_{k}", [(1., f"f_{k}")] + widths[k], "<=",
              grid.n_channels + 1 - reserved[k])
    model.binaries.extend(var for _, var in x)
    model.binaries.extend(y)
    model.generals.append(f"f_{k}")
    model.bounds.append(f" {f_floor} <= f_{k} <= {grid.n_channels}")

  in_model = set(names)
  pairs = sorted(pair for pair in restriction_sets.r_a | restriction_sets.r_e
                 if pair[0] in in_model and pair[1] in in_model)
  for i, j in pairs:
    k, l = names[i], names[j]
    for low, high in ((k, l), (l, k)):
      order = f"o_{low}_{high}"
      model.binaries.append(order)
      model.add(f"below_{low}_{high}",
                [(1., f"f_{low}"), (-1., f"f_{high}")] + widths[low] + [(float(big_m), order)],
                "<=", big_m - reserved[low])
    orders = [(1., f"o_{k}_{l}"), (1., f"o_{l}_{k}")]
    if restriction_sets.interferes(i, j):
      for p in range(1, grid.n_polarizations + 1):
        same_p = [(-1., f"y_{n}_{g}_{p}") for n in (k, l) for g in range(1, grid.n_reuses + 1)]
        model.add(f"interference_{k}_{l}_{p}", orders + same_p, ">=", -1)
    if restriction_sets.handover(i, j):
      for g, p in grid.groups:
        model.add(f"handover_{k}_{l}_{g}_{p}",
                  orders + [(-1., f"y_{k}_{g}_{p}"), (-1., f"y_{l}_{g}_{p}")], ">=", -1)

  out = io.StringIO()
  out.write("\\ freqplan baseline frequency assignment\n")
  for beam_id, name in names.items():
    out.write(f"\\ {name} = {beam_id}\n")
  out.write("Minimize\n")
  out.write(f" power: {_expression(objective)}\n" if objective else " power: 0\n")
  out.write("Subject To\n")
  for line in model.constraints:
    out.write(line + "\n")
  if model.bounds:
    out.write("Bounds\n")
    out.write("\n".join(model.bounds) + "\n")
  if model.binaries:
    out.write("Binaries\n")
    out.write("\n".join(f" {var}" for var in model.binaries) + "\n")
  if model.generals:
    out.write("Generals\n")
    out.write("\n".join(f" {var}" for var in model.generals) + "\n")
  out.write("End\n")
  logger.debug("LP model: %d beams, %d pairs, %d constraints", len(beams), len(pairs),
               len(model.constraints))
  return out.getvalue(), names


def write_lp(path: Union[str, pathlib.Path], beams: Sequence, restriction_sets: RestrictionSets,
             grid: GridConfig, config: Optional[SolveConfig] = None,
             time_grid: Optional[TimeGrid] = None) -> bidict.bidict:
  """ Writes the model to `path` and returns the beam id <-> variable name map. """
  text, names = lp_text(beams, restriction_sets, grid, config, time_grid)
  path = pathlib.Path(path)
  path.parent.mkdir(parents=True, exist_ok=True)
  path.write_text(text)
  logger.info("wrote LP model for %d beams to %s", len(names), path)
  return names
