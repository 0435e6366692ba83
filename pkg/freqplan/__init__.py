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

"""Root of the freqplan module."""

from freqplan.core import *

from freqplan import constraints
from freqplan import geometry
from freqplan import linkbudget
from freqplan import reactive
from freqplan import scenario
from freqplan import solver

from freqplan.errors import FreqplanError
from freqplan.errors import InconsistentInput
from freqplan.errors import InfeasibleBeam
from freqplan.errors import InvalidSpec
from freqplan.errors import NoFeasibleModcod
from freqplan.errors import NoVisibleSatellite
from freqplan.errors import ScenarioMismatch
from freqplan.errors import SearchSpaceTooLarge

from freqplan.geometry import Constellation
from freqplan.linkbudget import LinkParams
from freqplan.linkbudget import ModcodTable
from freqplan.constraints import ConstraintConfig
from freqplan.constraints import build_restriction_sets
from freqplan.solver import SolveConfig
from freqplan.solver import solve_baseline
from freqplan.solver import solve_exact
from freqplan.solver import validate_plan
from freqplan.reactive import compute_metrics
from freqplan.reactive import simulate_operations
from freqplan.scenario import ScenarioSpec
from freqplan.scenario import build_beams
from freqplan.scenario import compute_percentiles
from freqplan.scenario import generate_scenario

from freqplan.pipeline import Settings

from freqplan.utils import ArgumentParser
from freqplan.utils import setup_logging
from freqplan.utils import log_my_flags

from freqplan.version import __version__
