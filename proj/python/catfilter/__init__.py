# Copyright 2026 The catfilter Authors
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

"""Photon-subtracted squeezed light with narrowband filtering.

Thin wrapper over the compiled core. Density matrices are ``DensityMatrix``
objects; their elements are available as a complex NumPy array through
``.matrix``. Configurations are passed around as their text form.
"""

from ._core import (
    CatfilterError,
    ConvergenceError,
    DegenerateHerald,
    DensityMatrix,
    DomainError,
    IoError,
    ModelViolation,
    ParseError,
    ShapeMismatch,
    TruncationError,
    apply_loss,
    best_cat_fidelity,
    composite_mode,
    config_hash,
    density_matrix_from_json,
    density_matrix_to_json,
    design_lpf,
    even_sum,
    ica_mode,
    load_config,
    mix,
    mle_reconstruct,
    parse_config,
    pca_mode,
    photon_distribution,
    photon_subtract,
    predicted_even_sum,
    rotate,
    run_experiment,
    sample_quadratures,
    squeezed_vacuum,
    table_cavity_rates,
    uhlmann_fidelity,
    wavepacket_variances,
    wigner,
    wigner_origin,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
