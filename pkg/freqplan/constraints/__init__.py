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

from freqplan.constraints.config import ConstraintConfig
from freqplan.constraints.config import PROACTIVE_STRATEGIES

from freqplan.constraints.areas import possible_positions

from freqplan.constraints.restrictions import RestrictionSets
from freqplan.constraints.restrictions import alpha
from freqplan.constraints.restrictions import beta
from freqplan.constraints.restrictions import build_restriction_sets

from freqplan.constraints.instant import ConflictSteps
from freqplan.constraints.instant import InstantConflicts
