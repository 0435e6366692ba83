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

from freqplan.geometry.earth import EARTH_RADIUS_M
from freqplan.geometry.earth import ground_distance_m
from freqplan.geometry.earth import sample_disc
from freqplan.geometry.earth import sample_polygon
from freqplan.geometry.earth import to_ecef

from freqplan.geometry.orbits import Constellation
from freqplan.geometry.orbits import elevation
from freqplan.geometry.orbits import max_slant_range
from freqplan.geometry.orbits import propagate

from freqplan.geometry.routing import HandoverInterval
from freqplan.geometry.routing import HandoverSchedule
from freqplan.geometry.routing import assign_satellite
from freqplan.geometry.routing import build_handover_schedule
from freqplan.geometry.routing import closest_gateway

from freqplan.geometry.separation import angular_separation
from freqplan.geometry.separation import set_separation

from freqplan.geometry.tracks import BeamTrack
from freqplan.geometry.tracks import Ephemeris
from freqplan.geometry.tracks import build_track
