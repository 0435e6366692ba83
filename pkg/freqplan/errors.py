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

""" Exceptions raised by freqplan.

Every error derives from FreqplanError and from the builtin exception closest to its meaning,
so callers can catch either.
"""

__all__ = ("FreqplanError", "NoVisibleSatellite", "NoFeasibleModcod", "InfeasibleBeam",
           "InconsistentInput", "SearchSpaceTooLarge", "InvalidSpec", "ScenarioMismatch")


class FreqplanError(Exception):
  pass


class NoVisibleSatellite(FreqplanError, RuntimeError):
  """ No satellite is above the elevation mask for a position and time. """


class NoFeasibleModcod(FreqplanError, ValueError):
  """ The required spectral efficiency exceeds every row of the MODCOD table. """


class InfeasibleBeam(FreqplanError, ValueError):
  """ No channel count in [1, N_ch] can carry the beam demand. """


class InconsistentInput(FreqplanError, ValueError):
  pass


class SearchSpaceTooLarge(FreqplanError, RuntimeError):
  pass


class InvalidSpec(FreqplanError, ValueError):
  pass


class ScenarioMismatch(FreqplanError, ValueError):
  """ A plan file was produced for a different scenario. """
