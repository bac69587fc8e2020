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

// Unbinned maximum-likelihood homodyne tomography with the iterative R rho R
// scheme.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "catfilter/fock.h"
#include "catfilter/simulate.h"

namespace catfilter {

inline constexpr std::size_t kTomographyCutoff = 15;

enum class Channel { kPost, kRealtime };

/// Oscillator eigenfunctions psi_n(x_k), n <= cutoff, for every sample, grouped
/// by distinct LO phase. |x, theta> = sum_n psi_n(x) e^{i n theta} |n>.
class ProjectorCache {
   public:
    ProjectorCache(const std::vector<double> &theta, const std::vector<double> &x, std::size_t cutoff);

    struct Group {
        double theta;
        Eigen::MatrixXd psi;  // samples x (cutoff + 1)
    };

    std::size_t cutoff() const { return cutoff_; }
    std::size_t samples() const { return samples_; }
    const std::vector<Group> &groups() const { return groups_; }
    /// max - min of the distinct phases, radians.
    double phase_span() const;

   private:
    std::size_t cutoff_;
    std::size_t samples_ = 0;
    std::vector<Group> groups_;
};

/// sum_k log tr(Pi_k rho). Probabilities are floored at 1e-300; the number of
/// floored samples is reported through `floored` when given.
double loglikelihood(const DensityMatrix &rho, const ProjectorCache &cache, std::size_t *floored = nullptr);

struct MleOptions {
    std::size_t cutoff = kTomographyCutoff;
    int max_iter = 2000;
    double tol = 1e-8;  // relative log-likelihood gain
};

struct MleResult {
    DensityMatrix rho;
    double loglikelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    std::size_t floored_samples = 0;
    std::vector<double> trace;  // log-likelihood after each accepted step
};

/// Requires at least two distinct phases spanning more than 90 degrees and
/// finite samples. A step that lowers the likelihood is retried with diluted
/// updates (I + eps R) rho (I + eps R); ConvergenceError if none helps.
MleResult mle_reconstruct(const ProjectorCache &cache, const MleOptions &opts = {});
MleResult mle_reconstruct(const std::vector<double> &theta, const std::vector<double> &x,
                          const MleOptions &opts = {});
MleResult mle_reconstruct(const QuadratureDataset &data, Channel channel, const MleOptions &opts = {});

}  // namespace catfilter
