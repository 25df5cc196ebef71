# Copyright 2026 The PCS Authors
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

"""Projection congruent subset estimation of multivariate location and scatter."""

from ._core import (
    PcsError,
    __version__,
    breakdown_bound,
    breakdown_sweep,
    check_general_position,
    default_h,
    distant_cluster,
    equivariance_trial,
    fit,
    incongruence,
    robust_distances,
)

__all__ = [
    "PcsError",
    "__version__",
    "breakdown_bound",
    "breakdown_sweep",
    "check_general_position",
    "default_h",
    "distant_cluster",
    "equivariance_trial",
    "fit",
    "incongruence",
    "robust_distances",
]
