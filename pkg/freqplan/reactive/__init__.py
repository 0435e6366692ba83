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

from freqplan.reactive.log import LogRecord
from freqplan.reactive.log import OperationsLog

from freqplan.reactive.engine import ReactiveEngine
from freqplan.reactive.engine import reallocate_beam
from freqplan.reactive.engine import realized_beams
from freqplan.reactive.engine import simulate_operations

from freqplan.reactive.metrics import compute_metrics
