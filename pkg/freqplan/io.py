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

""" JSON files for scenarios, plans and reports.

`to_dict` turns any domain value into plain JSON data; the `*_from_dict` parsers invert it. Files
are written with sorted keys so equal inputs give byte-identical files.
"""

import collections.abc
import functools
import json
import logging
import pathlib
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np
import traitlets as tl

from freqplan.core.events import Delay, Event, NewUser, TrajectoryChange
from freqplan.core.grid import GridConfig
from freqplan.core.plan import (DEACTIVATED, BackupSlot, FrequencyAssignment, FrequencyPlan,
                                PlanPiece)
from freqplan.core.scenario import Gateway, Scenario, UserTruth
from freqplan.core.trajectory import Position, Trajectory
from freqplan.core.users import UncertaintySpec, User
from freqplan.errors import InvalidSpec, ScenarioMismatch
from freqplan.geometry.orbits import Constellation
from freqplan.linkbudget.budget import PowerTable
from freqplan.solver.config import SolveReport
from freqplan.solver.validator import Violation
from freqplan.utils import content_hash

logger = logging.getLogger(__name__)

__all__ = ("to_dict", "dumps", "write_json", "read_json", "scenario_hash",
           "scenario_from_dict", "plan_from_dict", "assignment_from_dict", "user_from_dict",
           "save_scenario", "load_scenario", "save_plan", "load_plan")

PathLike = Union[str, pathlib.Path]


# --------------------------------------------------------------------------------------------------
# Emitters
# --------------------------------------------------------------------------------------------------

@functools.singledispatch
def to_dict(value) -> Any:
  raise TypeError(f"Cannot serialize {type(value).__name__}")


@to_dict.register(type(None))
@to_dict.register(bool)
@to_dict.register(int)
@to_dict.register(str)
def _(value):
  return value


@to_dict.register(float)
@to_dict.register(np.floating)
def _(value):
  return float(value)


@to_dict.register(np.integer)
def _(value):
  return int(value)


@to_dict.register(list)
@to_dict.register(tuple)
def _(value):
  if hasattr(value, "_fields"):
    return {name: to_dict(v) for name, v in zip(value._fields, value)}
  return [to_dict(v) for v in value]


@to_dict.register(dict)
@to_dict.register(collections.abc.Mapping)
def _(value):
  return {str(k): to_dict(v) for k, v in value.items()}


@to_dict.register(tl.HasTraits)
def _(value):
  return {name: to_dict(getattr(value, name)) for name in sorted(value.trait_names())}


@to_dict.register(Position)
def _(value):
  return [value.lat_deg, value.lon_deg, value.alt_m]


@to_dict.register(Trajectory)
def _(value):
  return [[s.t, to_dict(s.position)] for s in value.samples]


@to_dict.register(BackupSlot)
def _(value):
  return [value.f, value.g, value.p, value.b]


@to_dict.register(FrequencyAssignment)
def _(value):
  return {"f": value.f, "b": value.b, "g": value.g, "p": value.p,
          "reserved_extra_channels": value.reserved_extra_channels,
          "backup_slots": [to_dict(s) for s in value.backup_slots]}


@to_dict.register(PlanPiece)
def _(value):
  assignment = DEACTIVATED if value.is_deactivated else to_dict(value.assignment)
  return {"t_from": value.t_from, "t_to": value.t_to, "assignment": assignment}


@to_dict.register(FrequencyPlan)
def _(value):
  return {beam_id: [to_dict(p) for p in pieces] for beam_id, pieces in value.pieces.items()}


@to_dict.register(PowerTable)
def _(value):
  return {str(b): p for b, p in value.p_watts.items()}


@to_dict.register(Event)
def _(value):
  payload = value.payload
  data = {"t_reveal": value.t_reveal}
  if isinstance(payload, Delay):
    data.update(type="delay", user_id=payload.user_id, delay_s=payload.delay_s)
  elif isinstance(payload, TrajectoryChange):
    data.update(type="trajectory_change", user_id=payload.user_id,
                trajectory=to_dict(payload.trajectory))
  else:
    data.update(type="new_user", user=to_dict(payload.user))
  return data


@to_dict.register(Scenario)
def _(value):
  data = {"grid": to_dict(value.grid), "constellation": to_dict(value.constellation),
          "gateways": [to_dict(g) for g in value.gateways],
          "users": [to_dict(u) for u in value.users],
          "horizon_s": value.horizon_s, "seed": value.seed,
          "events": [to_dict(e) for e in value.events],
          "truth": {uid: to_dict(t) for uid, t in value.truth.items()}}
  if value.spec is not None:
    data["spec"] = to_dict(dict(value.spec))
  return data


@to_dict.register(SolveReport)
def _(value):
  # wall time stays out of files
  return {"objective_watts": value.objective_watts, "method": value.method,
          "served": list(value.served), "deactivated": list(value.deactivated),
          "served_fraction": value.served_fraction}


@to_dict.register(Violation)
def _(value):
  return {"kind": value.kind, "beam_i": value.beam_i, "beam_j": value.beam_j, "t": value.t,
          "detail": value.detail}


def dumps(value) -> str:
  return json.dumps(to_dict(value), sort_keys=True, indent=2) + "\n"


def write_json(path: PathLike, value) -> pathlib.Path:
  path = pathlib.Path(path)
  path.parent.mkdir(parents=True, exist_ok=True)
  path.write_text(dumps(value))
  return path


def read_json(path: PathLike):
  with open(path, "r") as f:
    return json.load(f)


# --------------------------------------------------------------------------------------------------
# Parsers
# --------------------------------------------------------------------------------------------------

def position_from_dict(data) -> Position:
  return Position(*(float(x) for x in data))


def trajectory_from_dict(data) -> Trajectory:
  return Trajectory.from_samples((t, position_from_dict(p)) for t, p in data)


def uncertainty_from_dict(data: Mapping) -> UncertaintySpec:
  area = data.get("operational_area")
  return UncertaintySpec(
      max_delay_s=float(data.get("max_delay_s", 0.)),
      alt_trajectories=tuple(trajectory_from_dict(t) for t in data.get("alt_trajectories", ())),
      operational_area=None if area is None else tuple(position_from_dict(p) for p in area))


def user_from_dict(data: Mapping) -> User:
  return User(id=data["id"], kind=data["kind"], demand_bps=float(data["demand_bps"]),
              t_start=float(data["t_start"]), t_end=float(data["t_end"]),
              trajectory=trajectory_from_dict(data["trajectory"]),
              known_a_priori=bool(data.get("known_a_priori", True)),
              uncertainty=uncertainty_from_dict(data.get("uncertainty", {})))


def event_from_dict(data: Mapping) -> Event:
  kind = data["type"]
  if kind == "delay":
    payload = Delay(data["user_id"], float(data["delay_s"]))
  elif kind == "trajectory_change":
    payload = TrajectoryChange(data["user_id"], trajectory_from_dict(data["trajectory"]))
  elif kind == "new_user":
    payload = NewUser(user_from_dict(data["user"]))
  else:
    raise InvalidSpec(f"unknown event type '{kind}'")
  return Event(float(data["t_reveal"]), payload)


def scenario_from_dict(data: Mapping) -> Scenario:
  try:
    constellation = dict(data.get("constellation", {}))
    return Scenario(
        grid=GridConfig(**data.get("grid", {})),
        constellation=Constellation(**constellation),
        gateways=tuple(Gateway(g["id"], position_from_dict(g["position"]))
                       for g in data.get("gateways", ())),
        users=tuple(user_from_dict(u) for u in data.get("users", ())),
        horizon_s=float(data["horizon_s"]),
        seed=int(data.get("seed", 0)),
        events=tuple(event_from_dict(e) for e in data.get("events", ())),
        truth={uid: UserTruth(float(t["delay_s"]), int(t["trajectory_index"]))
               for uid, t in data.get("truth", {}).items()},
        spec=data.get("spec"))
  except (KeyError, TypeError) as err:
    raise InvalidSpec(f"malformed scenario: {err!r}") from err


def assignment_from_dict(beam_id: str, data: Mapping) -> FrequencyAssignment:
  return FrequencyAssignment(beam_id, int(data["f"]), int(data["b"]), int(data["g"]),
                             int(data["p"]), int(data.get("reserved_extra_channels", 0)),
                             tuple(BackupSlot(*(int(x) for x in s))
                                   for s in data.get("backup_slots", ())))


def plan_from_dict(data: Mapping) -> FrequencyPlan:
  pieces = {}
  for beam_id, beam_pieces in data.items():
    pieces[beam_id] = [
        PlanPiece(float(p["t_from"]), float(p["t_to"]),
                  DEACTIVATED if p["assignment"] == DEACTIVATED
                  else assignment_from_dict(beam_id, p["assignment"]))
        for p in beam_pieces]
  return FrequencyPlan(pieces)


# --------------------------------------------------------------------------------------------------
# Files
# --------------------------------------------------------------------------------------------------

def scenario_hash(scenario: Scenario) -> str:
  return content_hash(to_dict(scenario))


def save_scenario(path: PathLike, scenario: Scenario) -> pathlib.Path:
  path = write_json(path, scenario)
  logger.info("wrote scenario with %d users to %s", len(scenario.users), path)
  return path


def load_scenario(path: PathLike) -> Scenario:
  return scenario_from_dict(read_json(path))


def save_plan(path: PathLike, plan: FrequencyPlan, scenario: Scenario,
              config: Optional[Mapping[str, Any]] = None, dt_s: float = 60.,
              seed: Optional[int] = None) -> pathlib.Path:
  data = {"scenario_hash": scenario_hash(scenario), "config": dict(config or {}),
          "seed": scenario.seed if seed is None else seed, "dt_s": dt_s,
          "beams": to_dict(plan)}
  path = write_json(path, data)
  logger.info("wrote plan for %d beams to %s", len(plan), path)
  return path


def load_plan(path: PathLike, scenario: Optional[Scenario] = None
              ) -> Tuple[FrequencyPlan, Dict[str, Any]]:
  """ The plan and its header; raises ScenarioMismatch when it was made for another scenario. """
  data = read_json(path)
  if scenario is not None and data.get("scenario_hash") != scenario_hash(scenario):
    raise ScenarioMismatch(f"{path} was planned for scenario {data.get('scenario_hash')}, "
                           f"not {scenario_hash(scenario)}")
  header = {k: v for k, v in data.items() if k != "beams"}
  return plan_from_dict(data.get("beams", {})), header
