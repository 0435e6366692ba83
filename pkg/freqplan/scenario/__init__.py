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

from freqplan.scenario.spec import PRESETS
from freqplan.scenario.spec import ScenarioSpec

from freqplan.scenario.generator import generate_scenario
from freqplan.scenario.generator import load_sites

from freqplan.scenario.percentiles import Percentiles
from freqplan.scenario.percentiles import compute_percentiles

from freqplan.scenario.grouping import FixedGroup
from freqplan.scenario.grouping import group_fixed_users

from freqplan.scenario.beams import BeamSet
from freqplan.scenario.beams import build_beams
