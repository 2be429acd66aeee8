# Copyright 2026 The Omnirelay Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Omnidirectional relay rate analysis and protocol simulation."""

from ._omnirelay import (
    BinAssignment,
    OmnirelayError,
    Topology,
    allcast_rate_bound,
    build_binning,
    check_line_conditions,
    decodable_subset,
    general_line,
    mac_feasible,
    max_achievable_rate,
    parse_topology,
    peel_decodable_subset,
    regular_line,
    ring,
    run_cli,
    simulate,
    verify_regular_line,
)

__all__ = [
    "BinAssignment",
    "OmnirelayError",
    "Topology",
    "allcast_rate_bound",
    "build_binning",
    "check_line_conditions",
    "decodable_subset",
    "general_line",
    "mac_feasible",
    "max_achievable_rate",
    "parse_topology",
    "peel_decodable_subset",
    "regular_line",
    "ring",
    "run_cli",
    "simulate",
    "verify_regular_line",
]
