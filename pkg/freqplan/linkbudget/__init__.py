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

from freqplan.linkbudget.modcod import Modcod
from freqplan.linkbudget.modcod import ModcodTable
from freqplan.linkbudget.modcod import select_modcod

from freqplan.linkbudget.budget import LinkParams
from freqplan.linkbudget.budget import PowerTable
from freqplan.linkbudget.budget import build_power_table
from freqplan.linkbudget.budget import compute_b_range
from freqplan.linkbudget.budget import required_power
from freqplan.linkbudget.budget import required_spectral_efficiency
