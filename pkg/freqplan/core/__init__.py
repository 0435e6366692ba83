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

from freqplan.core import traits

from freqplan.core.grid import GridConfig
from freqplan.core.grid import TimeGrid

from freqplan.core.trajectory import Position
from freqplan.core.trajectory import Trajectory
from freqplan.core.trajectory import TrajectorySample

from freqplan.core.users import AERONAUTICAL
from freqplan.core.users import FIXED
from freqplan.core.users import LAND_MOBILE
from freqplan.core.users import MARITIME
from freqplan.core.users import USER_KINDS
from freqplan.core.users import UncertaintySpec
from freqplan.core.users import User

from freqplan.core.beams import Beam

from freqplan.core.plan import DEACTIVATED
from freqplan.core.plan import BackupSlot
from freqplan.core.plan import Block
from freqplan.core.plan import FrequencyAssignment
from freqplan.core.plan import FrequencyPlan
from freqplan.core.plan import PlanPiece

from freqplan.core.events import Delay
from freqplan.core.events import Event
from freqplan.core.events import NewUser
from freqplan.core.events import TrajectoryChange

from freqplan.core.scenario import Gateway
from freqplan.core.scenario import Scenario
from freqplan.core.scenario import UserTruth
from freqplan.core.scenario import validate_scenario
