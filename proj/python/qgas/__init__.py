# Copyright 2026 The qgas Authors
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

"""Equilibration of free quantum gases."""

from ._core import (
    InputError,
    NumericalError,
    PreconditionError,
    __version__,
    bound,
    box_equilibration_time,
    box_series,
    box_time_average,
    central_mass,
    central_mass_numeric,
    erf_approx,
    pfaffian,
    pfaffian_wick,
    ring_correlator,
    ring_energies,
    truncated_dos,
    weighted_average,
)

__all__ = [
    "InputError",
    "NumericalError",
    "PreconditionError",
    "__version__",
    "bound",
    "box_equilibration_time",
    "box_series",
    "box_time_average",
    "central_mass",
    "central_mass_numeric",
    "erf_approx",
    "pfaffian",
    "pfaffian_wick",
    "ring_correlator",
    "ring_energies",
    "truncated_dos",
    "weighted_average",
]
