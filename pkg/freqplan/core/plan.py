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

from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

__all__ = ("DEACTIVATED", "Block", "BackupSlot", "FrequencyAssignment", "PlanPiece",
           "FrequencyPlan")

DEACTIVATED = "DEACTIVATED"


class Block(NamedTuple):
  """ A contiguous run of b channels starting at f inside frequency group (g, p). """

  f: int
  b: int
  g: int
  p: int

  @property
  def f_end(self) -> int:
    return self.f + self.b - 1

  def overlaps(self, other: "Block") -> bool:
    return self.f <= other.f_end and other.f <= self.f_end


class BackupSlot(NamedTuple):
  """ A reserved fallback position of b (= b_min) channels. """

  f: int
  g: int
  p: int
  b: int

  @property
  def block(self) -> Block:
    return Block(self.f, self.b, self.g, self.p)


class FrequencyAssignment(NamedTuple):
  """ Channels [f, f + b - 1] of group (g, p) for one beam.

  The last `reserved_extra_channels` of the b channels are held back for reallocations; the beam
  transmits on the remaining `used_channels`.
  """

  beam_id: str
  f: int
  b: int
  g: int
  p: int
  reserved_extra_channels: int = 0
  backup_slots: Tuple[BackupSlot, ...] = ()

  @property
  def used_channels(self) -> int:
    return self.b - self.reserved_extra_channels

  @property
  def f_end(self) -> int:
    return self.f + self.b - 1

  @property
  def block(self) -> Block:
    return Block(self.f, self.b, self.g, self.p)

  @property
  def blocks(self) -> Tuple[Block, ...]:
    """ Primary block followed by the backup slots; all of them are held by the beam. """
    return (self.block,) + tuple(s.block for s in self.backup_slots)

  def violations(self, n_channels: int, n_reuses: int, n_polarizations: int,
                 b_min: Optional[int] = None, b_max: Optional[int] = None) -> List[str]:
    problems = []
    for name, block in [("assignment", self.block)] + [
        (f"backup slot {i}", s.block) for i, s in enumerate(self.backup_slots)]:
      if block.f < 1 or block.f_end > n_channels:
        problems.append(f"beam {self.beam_id}: {name} channels [{block.f}, {block.f_end}] "
                        f"outside [1, {n_channels}]")
      if not 1 <= block.g <= n_reuses:
        problems.append(
            f"beam {self.beam_id}: {name} reuse index {block.g} outside [1, {n_reuses}]")
      if not 1 <= block.p <= n_polarizations:
        problems.append(f"beam {self.beam_id}: {name} polarization {block.p} "
                        f"outside [1, {n_polarizations}]")
    if b_min is not None and self.used_channels < b_min:
      problems.append(f"beam {self.beam_id}: {self.used_channels} used channels < b_min={b_min}")
    if b_max is not None and self.used_channels > b_max:
      problems.append(f"beam {self.beam_id}: {self.used_channels} used channels > b_max={b_max}")
    if self.reserved_extra_channels < 0:
      problems.append(f"beam {self.beam_id}: negative reserved_extra_channels")
    return problems


class PlanPiece(NamedTuple):
  t_from: float
  t_to: float
  assignment: Union[FrequencyAssignment, str]

  @property
  def is_deactivated(self) -> bool:
    return isinstance(self.assignment, str) and self.assignment == DEACTIVATED

  def covers(self, t: float) -> bool:
    return self.t_from <= t < self.t_to


class FrequencyPlan:
  """ Per-beam, time-piecewise frequency assignments.

  Plans are immutable; `with_pieces` returns a new plan.
  """

  def __init__(self, pieces: Optional[Mapping[str, Sequence[PlanPiece]]] = None):
    pieces = pieces or {}
    self._pieces = MappingProxyType({beam_id: tuple(PlanPiece(*p) for p in beam_pieces)
                                     for beam_id, beam_pieces in sorted(pieces.items())})

  @classmethod
  def static(cls, windows: Mapping[str, Tuple[float, float]],
             assignments: Mapping[str, Union[FrequencyAssignment, str]]):
    """ One piece per beam spanning its whole window. """
    return cls({beam_id: [PlanPiece(t0, t1, assignments[beam_id])]
                for beam_id, (t0, t1) in windows.items()})

  @property
  def pieces(self) -> Mapping[str, Tuple[PlanPiece, ...]]:
    return self._pieces

  @property
  def beam_ids(self) -> Tuple[str, ...]:
    return tuple(self._pieces)

  def __len__(self):
    return len(self._pieces)

  def __contains__(self, beam_id):
    return beam_id in self._pieces

  def __getitem__(self, beam_id) -> Tuple[PlanPiece, ...]:
    return self._pieces[beam_id]

  def __eq__(self, other):
    if not isinstance(other, FrequencyPlan):
      return NotImplemented
    return dict(self._pieces) == dict(other._pieces)

  def __repr__(self):
    return f"<FrequencyPlan beams={len(self)} deactivated={len(self.deactivated_beams)}>"

  def assignment_at(self, beam_id: str, t: float) -> Union[FrequencyAssignment, str, None]:
    for piece in self._pieces.get(beam_id, ()):
      if piece.covers(t):
        return piece.assignment
    return None

  @property
  def deactivated_beams(self) -> Tuple[str, ...]:
    return tuple(beam_id for beam_id, pieces in self._pieces.items()
                 if any(p.is_deactivated for p in pieces))

  def with_pieces(self, beam_id: str, pieces: Iterable[PlanPiece]) -> "FrequencyPlan":
    updated: Dict[str, Sequence[PlanPiece]] = dict(self._pieces)
    updated[beam_id] = tuple(pieces)
    return FrequencyPlan(updated)

  def without(self, beam_id: str) -> "FrequencyPlan":
    return FrequencyPlan({k: v for k, v in self._pieces.items() if k != beam_id})

  def coverage_violations(self, windows: Mapping[str, Tuple[float, float]]) -> List[str]:
    """ Pieces must be contiguous, non-overlapping and cover each beam window exactly. """
    problems = []
    for beam_id, (t_start, t_end) in windows.items():
      pieces = self._pieces.get(beam_id)
      if not pieces:
        problems.append(f"beam {beam_id}: no plan pieces")
        continue
      if pieces[0].t_from != t_start or pieces[-1].t_to != t_end:
        problems.append(f"beam {beam_id}: pieces do not cover [{t_start}, {t_end})")
      for piece in pieces:
        if not piece.t_from < piece.t_to:
          problems.append(f"beam {beam_id}: empty piece at {piece.t_from}")
      for p1, p2 in zip(pieces, pieces[1:]):
        if p1.t_to != p2.t_from:
          problems.append(f"beam {beam_id}: pieces not contiguous at {p1.t_to}")
    return problems
