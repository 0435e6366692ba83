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

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqplan.constraints import ConstraintConfig, RestrictionSets, build_restriction_sets
from freqplan.core.beams import Beam
from freqplan.core.grid import GridConfig, TimeGrid
from freqplan.core.plan import BackupSlot, Block, FrequencyAssignment, FrequencyPlan, PlanPiece
from freqplan.core.trajectory import Position, Trajectory
from freqplan.core.users import FIXED, LAND_MOBILE
from freqplan.errors import InconsistentInput, SearchSpaceTooLarge
from freqplan.geometry.orbits import Constellation
from freqplan.geometry.routing import build_handover_schedule
from freqplan.linkbudget import PowerTable
from freqplan.solver import ChannelMask, SolveConfig, solve_baseline, solve_exact, validate_plan
from freqplan.solver.heuristic import active_weights
from freqplan.solver.lp_writer import beam_names, lp_text, write_lp
from freqplan.solver.validator import (BOUNDS_VIOLATION, COVERAGE_VIOLATION, HANDOVER_VIOLATION,
                                       INTERFERENCE_VIOLATION, UNKNOWN_BEAM)

HORIZON_S = 1800.


def make_beam(beam_id, powers, kind=FIXED, position=(0., 0.), t_start=0., t_end=HORIZON_S):
  """ A beam whose feasible channel counts are the keys of `powers`. """
  return Beam(beam_id, (beam_id,), t_start, t_end, 10e6, min(powers), max(powers),
              Trajectory.static(Position(*position)), kind=kind,
              power_table=PowerTable.create(beam_id, powers))


def conflict_free(assignments, restriction_sets):
  for (i, ai), (j, aj) in itertools.combinations(sorted(assignments.items()), 2):
    for x in ai.blocks:
      for y in aj.blocks:
        if not (x.p == y.p and x.overlaps(y)):
          continue
        if restriction_sets.interferes(i, j):
          return False
        if restriction_sets.handover(i, j) and x.g == y.g:
          return False
  return True


# --- channel mask

def test_channel_mask_first_fit():
  grid = GridConfig(n_channels=10, n_reuses=2, n_polarizations=2)
  mask = ChannelMask(grid)
  mask.block_group(Block(1, 3, 1, 1))
  assert mask.first_fit(2, 1, 1) == 4
  assert mask.first_fit(2, 2, 1) == 1
  assert mask.first_fit(2, 1, 1, f_lo=6) == 6
  assert mask.first_fit(8, 1, 1) is None
  assert mask.place(2, grid.groups) == Block(1, 2, 1, 2)

  mask.block_polarization(Block(1, 4, 2, 2))
  assert mask.first_fit(2, 1, 2) == 5
  assert not mask.is_free(Block(4, 2, 2, 2))
  assert mask.is_free(Block(5, 2, 2, 2))
  assert not mask.is_free(Block(10, 2, 1, 1))


def test_channel_mask_copy_is_independent():
  mask = ChannelMask(GridConfig(n_channels=4, n_reuses=1, n_polarizations=1))
  other = mask.copy()
  other.block_group(Block(1, 4, 1, 1))
  assert mask.first_fit(4, 1, 1) == 1
  assert other.first_fit(1, 1, 1) is None


# --- config

def test_solve_config_reservations():
  grid = GridConfig(n_channels=80)
  fixed = make_beam("f", {2: 1., 3: 1.})
  mobile = make_beam("m", {2: 1., 3: 1.}, kind=LAND_MOBILE)
  config = SolveConfig(x_ch=2, x_slots=3, x_spec=0.1)
  assert config.reserved_extra(fixed) == 0
  assert config.reserved_extra(mobile) == 4
  assert config.n_backup_slots(fixed) == 0
  assert config.n_backup_slots(mobile) == 3
  assert config.channel_floor(grid) == 9
  assert SolveConfig().channel_floor(grid) == 1


def test_active_weights():
  beams = [make_beam("a", {1: 1.}), make_beam("b", {1: 1.}, t_start=90., t_end=900.)]
  assert active_weights(beams) == {"a": 1., "b": 1.}
  weights = active_weights(beams, TimeGrid.create(HORIZON_S, 60.))
  assert weights["a"] == 1.
  assert weights["b"] == pytest.approx(13 * 60. / HORIZON_S)


# --- heuristic

def test_single_beam_takes_cheapest_width():
  beam = make_beam("a", {1: 5., 2: 3., 3: 4.})
  plan, report = solve_baseline([beam], RestrictionSets(), GridConfig(n_channels=20))
  assert plan.assignment_at("a", 0.) == FrequencyAssignment("a", 1, 2, 1, 1)
  assert report.objective_watts == 3.
  assert report.served == ("a",)
  assert report.served_fraction == 1.


def test_emergency_spectrum_stays_free():
  beam = make_beam("a", {2: 1.})
  plan, _ = solve_baseline([beam], RestrictionSets(), GridConfig(n_channels=20),
                           SolveConfig(x_spec=0.1))
  assert plan.assignment_at("a", 0.).f == 3


def test_adjacent_reservation_for_mobile_beams():
  beams = [make_beam("m", {2: 3., 3: 2.}, kind=LAND_MOBILE), make_beam("f", {2: 3., 3: 2.})]
  plan, _ = solve_baseline(beams, RestrictionSets(), GridConfig(n_channels=20),
                           SolveConfig(x_ch=1))
  mobile = plan.assignment_at("m", 0.)
  assert (mobile.b, mobile.reserved_extra_channels, mobile.used_channels) == (5, 2, 3)
  assert plan.assignment_at("f", 0.).reserved_extra_channels == 0


def test_backup_slots_for_mobile_beams():
  beam = make_beam("m", {2: 1.}, kind=LAND_MOBILE)
  plan, _ = solve_baseline([beam], RestrictionSets(), GridConfig(n_channels=8, n_reuses=2),
                           SolveConfig(x_slots=2))
  assignment = plan.assignment_at("m", 0.)
  assert assignment.block == Block(1, 2, 1, 1)
  assert assignment.backup_slots == (BackupSlot(1, 1, 2, 2), BackupSlot(1, 2, 1, 2))


def test_interfering_beams_split_the_band():
  beams = [make_beam("a", {2: 1.}), make_beam("b", {2: 1.})]
  sets = RestrictionSets.create(r_a=[("a", "b")])
  plan, report = solve_baseline(beams, sets, GridConfig(n_channels=4, n_reuses=1,
                                                        n_polarizations=1))
  assert {plan.assignment_at("a", 0.).f, plan.assignment_at("b", 0.).f} == {1, 3}
  assert report.deactivated == ()


def test_handover_partners_share_channels_in_other_groups():
  beams = [make_beam("a", {2: 1.}), make_beam("b", {2: 1.})]
  sets = RestrictionSets.create(r_e=[("a", "b")])
  plan, _ = solve_baseline(beams, sets, GridConfig(n_channels=2, n_reuses=2, n_polarizations=1))
  a, b = plan.assignment_at("a", 0.), plan.assignment_at("b", 0.)
  assert a.f == b.f == 1
  assert a.g != b.g


def test_beams_that_do_not_fit_are_deactivated():
  beams = [make_beam("a", {2: 1.}), make_beam("b", {2: 1.})]
  sets = RestrictionSets.create(r_a=[("a", "b")])
  plan, report = solve_baseline(beams, sets, GridConfig(n_channels=2, n_reuses=2,
                                                        n_polarizations=1))
  assert report.deactivated == ("b",)
  assert plan["b"][0].is_deactivated
  assert plan.deactivated_beams == ("b",)
  assert report.served_fraction == 0.5
  assert report.objective_watts == 1.


def test_missing_power_table():
  beam = make_beam("a", {1: 1.})._replace(power_table=None)
  with pytest.raises(InconsistentInput):
    solve_baseline([beam], RestrictionSets(), GridConfig())


def test_solver_is_deterministic():
  beams = [make_beam(f"b{i}", {1: 3., 2: 2., 3: 2.5}) for i in range(6)]
  sets = RestrictionSets.create(r_a=[("b0", "b1"), ("b1", "b2"), ("b3", "b4")],
                                r_e=[("b0", "b5"), ("b2", "b3")])
  grid = GridConfig(n_channels=6, n_reuses=2, n_polarizations=1)
  config = SolveConfig(seed=3, restarts=3)
  assert solve_baseline(beams, sets, grid, config)[0] == solve_baseline(beams, sets, grid,
                                                                        config)[0]


def test_exact_search_when_small():
  beams = [make_beam("a", {1: 2., 2: 1.}), make_beam("b", {1: 2., 2: 1.})]
  sets = RestrictionSets.create(r_a=[("a", "b")])
  grid = GridConfig(n_channels=3, n_reuses=1, n_polarizations=1)
  _, report = solve_baseline(beams, sets, grid, SolveConfig(exact_search_limit=4))
  assert report.method == "exact"
  assert report.objective_watts == 3.
  _, report = solve_baseline(beams, sets, grid, SolveConfig(exact_search_limit=0))
  assert report.method == "heuristic"


@pytest.fixture
def crowded():
  """ Five beams on five channels under dense interference and handover restrictions. """
  wide = {2: 3., 3: 2.5, 4: 2.2, 5: 2.}
  beams = [make_beam("b0", {2: 3.}), make_beam("b1", wide), make_beam("b2", {1: 2., 2: 1.5}),
           make_beam("b3", wide), make_beam("b4", wide)]
  sets = RestrictionSets.create(
      r_a=[("b0", "b3"), ("b1", "b2"), ("b1", "b3"), ("b2", "b3"), ("b2", "b4")],
      r_e=[("b1", "b2"), ("b2", "b3"), ("b2", "b4"), ("b3", "b4")])
  return beams, sets, GridConfig(n_channels=5, n_reuses=2, n_polarizations=1)


def test_crowded_instance_serves_every_beam(crowded):
  beams, sets, grid = crowded
  exact = solve_exact(beams, sets, grid)
  assert exact.feasible
  plan, report = solve_baseline(beams, sets, grid)
  assert report.deactivated == ()
  assert report.method == "exact"
  assert report.objective_watts == pytest.approx(exact.objective_watts)
  assert conflict_free({b: plan.assignment_at(b, 0.) for b in report.served}, sets)


def test_known_feasible_plan_is_conflict_free(crowded):
  _, sets, _ = crowded
  blocks = {"b0": (3, 2, 1, 1), "b1": (3, 2, 1, 1), "b2": (5, 1, 1, 1), "b3": (1, 2, 1, 1),
            "b4": (1, 3, 2, 1)}
  assert conflict_free({b: FrequencyAssignment(b, *block) for b, block in blocks.items()}, sets)


# --- exact oracle

def test_exact_rejects_large_instances():
  beams = [make_beam(f"b{i}", {1: 1., 2: 1.}) for i in range(4)]
  with pytest.raises(SearchSpaceTooLarge):
    solve_exact(beams, RestrictionSets(), GridConfig(), SolveConfig(max_combinations=1000))


def test_exact_infeasible():
  beams = [make_beam("a", {2: 1.}), make_beam("b", {2: 1.})]
  result = solve_exact(beams, RestrictionSets.create(r_a=[("a", "b")]),
                       GridConfig(n_channels=3, n_reuses=1, n_polarizations=1))
  assert not result.feasible
  assert result.complete
  assert result.plan is None


def test_exact_without_beams_is_feasible():
  result = solve_exact([], RestrictionSets(), GridConfig())
  assert result.feasible
  assert result.objective_watts == 0.
  assert result.assignments == {}
  assert len(result.plan) == 0


def test_exact_upper_bound_and_node_limit(crowded):
  beams, sets, grid = crowded
  optimum = solve_exact(beams, sets, grid)
  bounded = solve_exact(beams, sets, grid, upper_bound=optimum.objective_watts)
  assert not bounded.feasible
  assert bounded.complete
  looser = solve_exact(beams, sets, grid, upper_bound=optimum.objective_watts + 1.)
  assert looser.objective_watts == pytest.approx(optimum.objective_watts)
  starved = solve_exact(beams, sets, grid, node_limit=1)
  assert not starved.complete
  assert starved.nodes == 1
  unchecked = solve_exact(beams, sets, grid, SolveConfig(max_combinations=10), node_limit=10 ** 8)
  assert unchecked.complete
  assert unchecked.objective_watts == pytest.approx(optimum.objective_watts)


@st.composite
def instances(draw):
  n_beams = draw(st.integers(2, 5))
  beams = []
  for i in range(n_beams):
    b_min = draw(st.integers(1, 2))
    b_max = draw(st.integers(b_min, 3))
    powers = {b: draw(st.floats(0.1, 10.)) for b in range(b_min, b_max + 1)}
    beams.append(make_beam(f"b{i}", powers))
  pairs = list(itertools.combinations([b.id for b in beams], 2))
  r_a = [p for p in pairs if draw(st.booleans())]
  r_e = [p for p in pairs if draw(st.booleans())]
  return beams, RestrictionSets.create(r_a, r_e)


@pytest.mark.parametrize("n_channels", [4, 5])
@settings(max_examples=60, deadline=None)
@given(instance=instances())
def test_heuristic_matches_the_exact_optimum(instance, n_channels):
  beams, sets = instance
  grid = GridConfig(n_channels=n_channels, n_reuses=2, n_polarizations=1)
  exact = solve_exact(beams, sets, grid)
  plan, report = solve_baseline(beams, sets, grid)
  heuristic = {b: plan.assignment_at(b, 0.) for b in report.served}
  assert conflict_free(heuristic, sets)
  assert exact.feasible == (report.deactivated == ())
  if exact.feasible:
    assert conflict_free(exact.assignments, sets)
    assert set(exact.assignments) == {b.id for b in beams}
    assert report.objective_watts >= exact.objective_watts - 1e-9
    assert report.objective_watts <= 1.10 * exact.objective_watts + 1e-9


# --- validator

@pytest.fixture
def geometric():
  constellation = Constellation()
  beams = [make_beam("a", {2: 1.}, position=(0., 0.)),
           make_beam("b", {2: 1.}, position=(0., 0.6)),
           make_beam("c", {2: 1.}, position=(0., 30.))]
  schedules = {b.id: build_handover_schedule(b, constellation, 60.) for b in beams}
  return beams, schedules, constellation


def static_plan(beams, blocks):
  return FrequencyPlan.static({b.id: (b.t_start, b.t_end) for b in beams},
                              {b.id: FrequencyAssignment(b.id, *blocks[b.id]) for b in beams})


def test_solved_plan_is_valid(geometric):
  beams, schedules, constellation = geometric
  grid = GridConfig(n_channels=4, n_reuses=2, n_polarizations=1)
  sets = build_restriction_sets(beams, schedules, ConstraintConfig(), constellation, HORIZON_S)
  plan, report = solve_baseline(beams, sets, grid)
  assert report.deactivated == ()
  assert validate_plan(plan, beams, schedules, grid, constellation, HORIZON_S) == []


@pytest.mark.parametrize("b_block, kinds", [
    ((1, 2, 1, 1), {HANDOVER_VIOLATION, INTERFERENCE_VIOLATION}),
    ((1, 2, 2, 1), {INTERFERENCE_VIOLATION}),
    ((2, 2, 2, 2), set()),
])
def test_overlapping_blocks(geometric, b_block, kinds):
  beams, schedules, constellation = geometric
  grid = GridConfig(n_channels=4, n_reuses=2, n_polarizations=2)
  plan = static_plan(beams, {"a": (1, 2, 1, 1), "b": b_block, "c": (3, 2, 1, 1)})
  violations = validate_plan(plan, beams, schedules, grid, constellation, HORIZON_S)
  assert {v.kind for v in violations} == kinds
  for violation in violations:
    assert (violation.beam_i, violation.beam_j, violation.t) == ("a", "b", 0.)


def test_bounds_coverage_and_unknown_beams(geometric):
  beams, schedules, constellation = geometric
  grid = GridConfig(n_channels=4, n_reuses=2, n_polarizations=1)
  plan = static_plan(beams, {"a": (1, 2, 1, 1), "b": (4, 2, 1, 1), "c": (1, 2, 2, 1)})
  plan = plan.with_pieces("c", [PlanPiece(0., 600., plan["c"][0].assignment)])
  plan = plan.with_pieces("z", [PlanPiece(0., 60., FrequencyAssignment("z", 1, 1, 1, 1))])
  violations = validate_plan(plan, beams, schedules, grid, constellation, HORIZON_S)
  assert {(v.kind, v.beam_i) for v in violations} == {
      (BOUNDS_VIOLATION, "b"), (COVERAGE_VIOLATION, "c"), (UNKNOWN_BEAM, "z")}


# --- LP export

def test_lp_text():
  beams = [make_beam("x/1", {1: 2., 2: 1.}), make_beam("y", {2: 1.}, kind=LAND_MOBILE)]
  sets = RestrictionSets.create(r_a=[("x/1", "y")], r_e=[("x/1", "y")])
  grid = GridConfig(n_channels=6, n_reuses=2, n_polarizations=2)
  text, names = lp_text(beams, sets, grid, SolveConfig(x_ch=1, x_spec=0.2))
  assert names == beam_names(["y", "x/1"])
  assert names.inverse["B2"] == "y"
  lines = text.splitlines()
  for section in ("Minimize", "Subject To", "Bounds", "Binaries", "Generals", "End"):
    assert section in lines
  assert "\\ B1 = x/1" in lines
  assert " 3 <= f_B1 <= 6" in lines
  assert sum(line.startswith(" interference_") for line in lines) == grid.n_polarizations
  assert sum(line.startswith(" handover_") for line in lines) == grid.n_groups
  assert any(line.startswith(" fits_B2:") and line.endswith("<= 5") for line in lines)


def test_write_lp(tmp_path):
  path = tmp_path / "out" / "baseline.lp"
  names = write_lp(path, [make_beam("a", {1: 1.})], RestrictionSets(), GridConfig(n_channels=2))
  assert dict(names) == {"a": "B1"}
  assert path.read_text().endswith("End\n")
