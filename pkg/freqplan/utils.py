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

import argparse
import json
import logging
import os
import pprint
from typing import Any

import sklearn.utils

logger = logging.getLogger(__name__)

__all__ = ("ArgumentParser", "setup_logging", "log_my_flags", "canonical_json", "content_hash",
           "worker_count")

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
WORKERS_ENV = "FREQPLAN_WORKERS"


class ArgumentParser(argparse.ArgumentParser):
  def __init__(self, *args, **kwargs):
    argparse.ArgumentParser.__init__(self, *args, **kwargs)

    # --- default arguments for freqplan
    self.add_argument("--logging_level", type=str, default="INFO")
    self.add_argument("--seed", type=int, default=None,
                      help="root seed of the run (default: the scenario seed)")


# --------------------------------------------------------------------------------------------------
# --------------------------------------------------------------------------------------------------
# --------------------------------------------------------------------------------------------------

def setup_logging(logging_level):
  logging.basicConfig(level=logging_level, format=LOG_FORMAT)


def log_my_flags(flags):
  flags_string = pprint.pformat(vars(flags), indent=2, width=100)
  logger.debug(flags_string)


def canonical_json(data: Any) -> str:
  return json.dumps(data, sort_keys=True, separators=(",", ":"))


def content_hash(data: Any) -> str:
  """ 64 bit hex digest of the canonical JSON text of `data`. """
  text = canonical_json(data)
  low = sklearn.utils.murmurhash3_32(text, seed=0, positive=True)
  high = sklearn.utils.murmurhash3_32(text, seed=1, positive=True)
  return f"{high:08x}{low:08x}"


def worker_count() -> int:
  value = os.environ.get(WORKERS_ENV)
  if not value:
    return os.cpu_count() or 1
  try:
    count = int(value)
  except ValueError:
    raise ValueError(f"{WORKERS_ENV} should be an integer, but was '{value}'") from None
  return max(1, count)
