// Copyright 2026 The catfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Recovery of the heralded temporal mode from raw homodyne traces.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "catfilter/temporal.h"

namespace catfilter {

/// Rows are events, columns are samples on `grid`.
struct TraceEnsemble {
    Eigen::MatrixXd traces;
    TimeGrid grid;
    double t0 = 0.0;

    void validate() const;
};

struct PcaResult {
    TemporalMode mode;
    std::vector<double> leading_eigenvalues;  // descending, up to 5
    bool ambiguous = false;                   // leading gap below 1% of the leading eigenvalue
};

/// Leading eigenvector of the mean-subtracted trace covariance. Requires at
/// least 1000 traces.
PcaResult pca_mode(const TraceEnsemble &ens);

struct IcaResult {
    TemporalMode mode;
    double excess_kurtosis = 0.0;
    int iterations = 0;
};

/// Whitens onto the top-K principal components and runs a kurtosis fixed-point
/// search (5 restarts, 500 iterations each). Throws ConvergenceError when no
/// restart converges or the best direction is not significantly non-Gaussian
/// (|excess kurtosis| below 3.5 sqrt(24 K / n)).
IcaResult ica_mode(const TraceEnsemble &ens, std::size_t k = 20, std::uint64_t seed = 1);

/// Normalizes `values` on `grid` as a mode with peak-positive sign.
TemporalMode mode_from_pattern(const Eigen::VectorXd &values, const TimeGrid &grid, double t0);

}  // namespace catfilter
