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

import traitlets as tl


__all__ = ("Fraction", "LatLonBox", "PositiveFloat")


class Fraction(tl.TraitType):
  """ A float strictly between 0 and 1. """
  default_value = None
  info_text = "a float in the open interval (0, 1)"

  def validate(self, obj, value):
    if value is None and self.allow_none:
      return value
    try:
      value = float(value)
    except (TypeError, ValueError):
      return self.error(obj, value)
    if not 0. < value < 1.:
      self.error(obj, value)
    return value


class PositiveFloat(tl.TraitType):
  default_value = 1.
  info_text = "a float > 0"

  def validate(self, obj, value):
    if value is None and self.allow_none:
      return value
    try:
      value = float(value)
    except (TypeError, ValueError):
      return self.error(obj, value)
    if not value > 0.:
      self.error(obj, value)
    return value


class LatLonBox(tl.TraitType):
  """ A geographic box given as (lat_min, lat_max, lon_min, lon_max) in degrees. """
  default_value = (-30., 30., -40., 20.)
  info_text = "a (lat_min, lat_max, lon_min, lon_max) tuple in degrees"

  def validate(self, obj, value):
    try:
      lat_min, lat_max, lon_min, lon_max = [float(x) for x in value]
    except (TypeError, ValueError):
      return self.error(obj, value)
    if not -90. <= lat_min < lat_max <= 90.:
      self.error(obj, value)
    if not -180. <= lon_min < lon_max <= 180.:
      self.error(obj, value)
    return lat_min, lat_max, lon_min, lon_max
