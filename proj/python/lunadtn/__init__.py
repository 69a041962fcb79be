# Copyright 2026 The lunadtn Authors
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

"""Lunar relay DTN simulator with Epidemic, PRoPHET and neural-gated PRoPHET routing."""

from ._core import (  # noqa: F401
    ConfigError,
    Error,
    MlpModel,
    ParseError,
    ShapeError,
    ValidationError,
    __version__,
    build_dataset,
    cli,
    epoch_of,
    gen_synthetic_orbits,
    mse,
    neuraluna_gate,
    node_name,
    node_numeric_id,
    prophet_age,
    prophet_direct_update,
    prophet_transitive_update,
    simulate,
    train,
)
