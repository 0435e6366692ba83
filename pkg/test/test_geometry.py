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

import numpy as np
import pytest
import traitlets as tl
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from freqplan.core.beams import Beam
from freqplan.core.grid import TimeGrid
from freqplan.core.scenario import Gateway
from freqplan.core.trajectory import Position, Trajectory
from freqplan.core.users import LAND_MOBILE
from freqplan.errors import NoVisibleSatellite
from freqplan.geometry.earth import (EARTH_RADIUS_M, course_and_distance, ground_distance_m,
                                     project, sample_disc, sample_polygon, to_ecef)
from freqplan.geometry.orbits import Constellation, max_slant_range, propagate
from freqplan.geometry.routing import (assign_satellite, build_handover_schedule,
                                       closest_gateway, gateway_intervals, sample_times)
from freqplan.geometry.separation import (angular_separation, chord_cutoff, set_separation,
                                          separation_lower_bound)
from freqplan.geometry.tracks import Ephemeris, build_track

latitudes = st.floats(-60., 60.)
longitudes = st.floats(-170., 170.)


def static_beam(beam_id="b", lat=0., lon=0., t_start=0., t_end=3600.):
  return Beam(beam_id, ("u",), t_start, t_end, 1e6, 1, 1,
              Trajectory.static(Position(lat, lon)))


# --- earth

def test_one_degree_on_the_equator():
  assert_allclose(ground_distance_m(Position(0., 0.), Position(0., 1.)),
                  EARTH_RADIUS_M * math.pi / 180., rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(latitudes, longitudes, st.floats(0., 360.), st.floats(1e3, 2e6))
def test_project_inverts_course_and_distance(lat, lon, course, distance):
  start = Position(lat, lon)
  end = project(start, course, distance)
  back_course, back_distance = course_and_distance(start, end)
  assert_allclose(back_distance, distance, rtol=1e-6)
  assert_allclose(math.cos(math.radians(back_course - course)), 1., atol=1e-6)


def test_sample_disc():
  center = Position(10., 10.)
  points = sample_disc(center, 50e3, n_boundary=8)
  assert len(points) == 9
  assert points[0] == center
  assert_allclose([ground_distance_m(center, p) for p in points[1:]], 50e3, rtol=1e-9)
  assert sample_disc(center, 0.) == (center,)


def test_sample_polygon_keeps_vertices():
  square = (Position(0., 0.), Position(0., 1.), Position(1., 1.), Position(1., 0.))
  points = sample_polygon(square, n_boundary=16)
  assert points[:4] == square
  assert len(points) >= 16


# --- orbits

def test_constellation_period_and_periodicity():
  constellation = Constellation()
  a = EARTH_RADIUS_M + 8062e3
  assert_allclose(constellation.period_s, 2 * math.pi * math.sqrt(a ** 3 / 3.986004418e14))
  assert_allclose(propagate(constellation, 1234.), propagate(constellation,
                                                             1234. + constellation.period_s),
                  atol=1e-2)


def test_constellation_is_evenly_phased():
  positions = propagate(Constellation(n_satellites=4), 0.)
  assert_allclose(np.linalg.norm(positions, axis=1), EARTH_RADIUS_M + 8062e3)
  assert_allclose(positions[1] / np.linalg.norm(positions[1]), [0., 1., 0.], atol=1e-12)


@pytest.mark.parametrize("kwargs", [dict(n_satellites=0), dict(altitude_m=-1.),
                                    dict(min_elevation_deg=90.),
                                    dict(n_satellites=3, phase_offsets_deg=[0., 10.])])
def test_constellation_rejects(kwargs):
  with pytest.raises(tl.TraitError):
    Constellation(**kwargs)


def test_max_slant_range_at_zero_mask_is_tangent():
  constellation = Constellation(min_elevation_deg=0.)
  a = constellation.semi_major_axis_m
  assert_allclose(max_slant_range(constellation), math.sqrt(a ** 2 - EARTH_RADIUS_M ** 2))


# --- routing

def test_sub_satellite_point_is_served_by_that_satellite():
  assert assign_satellite(Position(0., 0.), Constellation(), 0.) == 1
  assert assign_satellite(Position(0., 360. / 7), Constellation(), 0.) == 2


def test_equal_elevation_prefers_lowest_id():
  assert assign_satellite(Position(0., 180. / 7), Constellation(), 0.) == 1


def test_no_satellite_at_high_latitude():
  with pytest.raises(NoVisibleSatellite):
    assign_satellite(Position(80., 0.), Constellation(), 0.)


def test_sample_times():
  assert sample_times(0., 150., 60.) == [0., 60., 120.]
  assert sample_times(30., 130., 60.) == [30., 60., 120.]


def test_handover_schedule_over_one_period():
  constellation = Constellation()
  beam = static_beam(t_end=math.floor(constellation.period_s / 60.) * 60.)
  schedule = build_handover_schedule(beam, constellation, 60.)
  intervals = schedule.intervals
  assert intervals[0].t_from == beam.t_start
  assert intervals[-1].t_to == beam.t_end
  for first, second in zip(intervals, intervals[1:]):
    assert first.t_to == second.t_from
    assert first.satellite_id != second.satellite_id
  assert {iv.satellite_id for iv in intervals} == set(constellation.satellite_ids)
  assert schedule.satellite_at(0.) == 1
  assert schedule.satellite_at(beam.t_end) is None


def test_empty_window_has_empty_schedule():
  assert build_handover_schedule(static_beam(t_start=5., t_end=5.), Constellation(),
                                 60.).intervals == ()


def test_closest_gateway_first_on_ties():
  gateways = [Gateway("east", Position(0., 1.)), Gateway("west", Position(0., -1.))]
  assert closest_gateway(Position(0., 0.), gateways) == "east"
  assert closest_gateway(Position(0., -0.5), gateways) == "west"
  with pytest.raises(ValueError):
    closest_gateway(Position(0., 0.), [])


def test_gateway_intervals_along_a_route():
  gateways = [Gateway("west", Position(0., 0.)), Gateway("east", Position(0., 9.))]
  route = Trajectory.from_samples([(0., Position(0., 0.)), (1000., Position(0., 10.))])
  intervals = gateway_intervals(route, 0., 1000., gateways, 100.)
  assert [iv.satellite_id for iv in intervals] == ["west", "east"]
  assert intervals[0].t_to == intervals[1].t_from == 500.


# --- separation

def test_angular_separation_basics():
  sat = propagate(Constellation(), 0.)[0]
  p = Position(0., 0.)
  q = Position(0., 2.)
  assert angular_separation(sat, p, p) == 0.
  assert_allclose(angular_separation(sat, p, q), angular_separation(sat, q, p))
  # seen from straight above, 2 degrees of arc subtend about R * angle / altitude
  expected = math.atan(EARTH_RADIUS_M * math.sin(math.radians(2.))
                       / (EARTH_RADIUS_M + 8062e3 - EARTH_RADIUS_M * math.cos(math.radians(2.))))
  assert_allclose(angular_separation(sat, p, q), expected, rtol=1e-9)


def test_set_separation_is_at_most_centre_separation():
  sat = propagate(Constellation(), 0.)[0]
  p, q = Position(0., 0.), Position(0., 3.)
  areas = sample_disc(p, 100e3), sample_disc(q, 100e3)
  assert set_separation(*areas, sat) <= angular_separation(sat, p, q)
  with pytest.raises(ValueError):
    set_separation([], [q], sat)


@settings(max_examples=200, deadline=None)
@given(st.floats(0., 20.), st.floats(0.2, 5.))
def test_pruning_bounds_are_sound(lon_offset, threshold_deg):
  constellation = Constellation()
  sat = propagate(constellation, 0.)[0]
  p, q = Position(0., 0.), Position(0., lon_offset)
  chord = float(np.linalg.norm(to_ecef(p) - to_ecef(q)))
  threshold = math.radians(threshold_deg)
  angle = angular_separation(sat, p, q)
  if chord > chord_cutoff(threshold, max_slant_range(constellation)):
    assert angle > threshold
  if separation_lower_bound(chord, math.radians(constellation.min_elevation_deg),
                            max_slant_range(constellation), threshold):
    assert angle > threshold


# --- tracks

def test_track_uses_schedule_satellites():
  constellation = Constellation()
  grid = TimeGrid.create(7200., 60.)
  beam = static_beam(t_start=90., t_end=3600.)
  schedule = build_handover_schedule(beam, constellation, 60.)
  ephemeris = Ephemeris(constellation, grid)
  track = build_track(beam, grid, ephemeris, schedule)
  recomputed = build_track(beam, grid, ephemeris)
  assert (track.k0, track.k1) == (2, 60)
  assert track.centers.shape == (58, 3)
  assert track.points().shape == (58, 1, 3)
  assert track.area_radius_m() == 0.
  np.testing.assert_array_equal(track.satellites, recomputed.satellites)


def test_track_with_area_function():
  constellation = Constellation()
  grid = TimeGrid.create(600., 60.)
  route = Trajectory.from_samples([(0., Position(0., 0.)), (600., Position(0., 1.))])
  beam = Beam("m", ("u",), 0., 600., 1e6, 1, 1, route, kind=LAND_MOBILE)
  track = build_track(beam, grid, Ephemeris(constellation, grid),
                      area_fn=lambda b, t: sample_disc(b.position_at(t), 20e3, 4))
  assert track.areas.shape == (10, 5, 3)
  assert_allclose(track.area_radius_m(), 20e3, rtol=1e-3)
