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

""" Chronological record of what the reactive stage did. """

import collections
import json
import logging
import pathlib
from typing import Dict, Iterator, List, NamedTuple, Optional, Union

import pandas as pd

from freqplan.core.plan import BackupSlot, FrequencyAssignment

logger = logging.getLogger(__name__)

__all__ = ("LogRecord", "OperationsLog", "KEPT", "WIDENED", "MOVED_TO_SLOT",
           "MOVED_TO_RESERVED_SPECTRUM", "RE_SOLVED", "DEACTIVATED", "ACTIONS",
           "REALLOCATING_ACTIONS")

KEPT = "kept"
WIDENED = "widened"
MOVED_TO_SLOT = "moved_to_slot"
MOVED_TO_RESERVED_SPECTRUM = "moved_to_reserved_spectrum"
RE_SOLVED = "re_solved"
DEACTIVATED = "deactivated"
ACTIONS = (KEPT, WIDENED, MOVED_TO_SLOT, MOVED_TO_RESERVED_SPECTRUM, RE_SOLVED, DEACTIVATED)

# actions that give a beam a new (f, b, g, p)
REALLOCATING_ACTIONS = frozenset({WIDENED, MOVED_TO_SLOT, MOVED_TO_RESERVED_SPECTRUM, RE_SOLVED})


class LogRecord(NamedTuple):
  t: float
  event: str
  user_id: str
  beam_id: str
  action: str
  assignment: Optional[FrequencyAssignment] = None

  @property
  def is_reallocation(self) -> bool:
    return self.action in REALLOCATING_ACTIONS

  def to_dict(self) -> Dict[str, object]:
    assignment = None
    if self.assignment is not None:
      a = self.assignment
      assignment = {"f": a.f, "b": a.b, "g": a.g, "p": a.p,
                    "reserved_extra_channels": a.reserved_extra_channels,
                    "backup_slots": [list(s) for s in a.backup_slots]}
    return {"t": self.t, "event": self.event, "user_id": self.user_id, "beam_id": self.beam_id,
            "action": self.action, "assignment": assignment}


class OperationsLog:
  """ Records appended in processing order. Reallocations are the records that moved a beam. """

  def __init__(self, records=()):
    self._records: List[LogRecord] = []
    for record in records:
      self.append(record)

  def append(self, record: LogRecord) -> None:
    if record.action not in ACTIONS:
      raise ValueError(f"unknown action '{record.action}'")
    if self._records and record.t < self._records[-1].t:
      raise ValueError(f"records must be chronological ({record.t} < {self._records[-1].t})")
    logger.debug("t=%s %s %s: %s", record.t, record.event, record.beam_id, record.action)
    self._records.append(record)

  @property
  def records(self):
    return tuple(self._records)

  def __len__(self):
    return len(self._records)

  def __iter__(self) -> Iterator[LogRecord]:
    return iter(self._records)

  @property
  def n_realloc(self) -> int:
    return sum(r.is_reallocation for r in self._records)

  @property
  def n_deactivations(self) -> int:
    return sum(r.action == DEACTIVATED for r in self._records)

  def action_counts(self) -> Dict[str, int]:
    counts = collections.Counter(r.action for r in self._records)
    return {action: counts.get(action, 0) for action in ACTIONS}

  def summary(self) -> Dict[str, object]:
    return {"n_records": len(self), "n_realloc": self.n_realloc,
            "n_deactivations": self.n_deactivations, "actions": self.action_counts()}

  def to_frame(self) -> pd.DataFrame:
    columns = ["t", "event", "user_id", "beam_id", "action"]
    return pd.DataFrame([[getattr(r, c) for c in columns] for r in self._records],
                        columns=columns)

  def to_ndjson(self) -> str:
    return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self._records)

  def write(self, ndjson_path: Union[str, pathlib.Path],
            summary_path: Union[str, pathlib.Path, None] = None) -> None:
    """ One JSON record per line, plus an optional summary JSON document. """
    ndjson_path = pathlib.Path(ndjson_path)
    ndjson_path.parent.mkdir(parents=True, exist_ok=True)
    ndjson_path.write_text(self.to_ndjson())
    if summary_path is not None:
      pathlib.Path(summary_path).write_text(json.dumps(self.summary(), sort_keys=True, indent=2))

  @classmethod
  def read_ndjson(cls, path: Union[str, pathlib.Path]) -> "OperationsLog":
    records = []
    for line in pathlib.Path(path).read_text().splitlines():
      if not line.strip():
        continue
      d = json.loads(line)
      a = d["assignment"]
      assignment = None
      if a is not None:
        assignment = FrequencyAssignment(d["beam_id"], a["f"], a["b"], a["g"], a["p"],
                                         a["reserved_extra_channels"],
                                         tuple(BackupSlot(*s) for s in a["backup_slots"]))
      records.append(LogRecord(d["t"], d["event"], d["user_id"], d["beam_id"], d["action"],
                               assignment))
    return cls(records)

  def __repr__(self):
    return f"<OperationsLog records={len(self)} n_realloc={self.n_realloc}>"
