# Copyright 2026 The indknn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Private kernel nearest-neighbor prediction with individual accounting."""

import json

from indknn._core import (
    ChargeRecord,
    EngineConfig,
    Error,
    FormatError,
    IngestionError,
    InvalidArgument,
    InvariantViolation,
    KernelKind,
    KernelSpec,
    Predictor,
    QueryOutcome,
    budget_for_dp,
    default_count_sigma,
    generate_synthetic,
    naive_knn_accounting,
    naive_knn_query_capacity,
    rdp_to_dp,
)

__all__ = [
    "ChargeRecord",
    "EngineConfig",
    "Error",
    "FormatError",
    "IngestionError",
    "InvalidArgument",
    "InvariantViolation",
    "KernelKind",
    "KernelSpec",
    "Predictor",
    "QueryOutcome",
    "budget_for_dp",
    "default_count_sigma",
    "generate_synthetic",
    "naive_knn_accounting",
    "naive_knn_query_capacity",
    "rdp_to_dp",
    "run_experiment",
    "sweep",
]

__version__ = "0.1.0"


def run_experiment(spec):
  """Runs an experiment spec (dict) and returns the report as a dict."""
  from indknn import _core
  return json.loads(_core._run_experiment(json.dumps(spec)))


def sweep(spec):
  """Runs the two-stage (sigma2, tau) search and returns the result dict."""
  from indknn import _core
  return json.loads(_core._sweep(json.dumps(spec)))
