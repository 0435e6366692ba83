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

from freqplan.solver.config import SolveConfig
from freqplan.solver.config import SolveReport

from freqplan.solver.occupancy import ChannelMask

from freqplan.solver.heuristic import Placer
from freqplan.solver.heuristic import solve_baseline

from freqplan.solver.exact import ExactResult
from freqplan.solver.exact import solve_exact

from freqplan.solver.validator import Violation
from freqplan.solver.validator import validate_plan

from freqplan.solver.lp_writer import write_lp
