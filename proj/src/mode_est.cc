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

#include "catfilter/mode_est.h"

#include <cmath>
#include <random>
#include <string>

#include "catfilter/errors.h"

namespace catfilter {

namespace {

constexpr int kIcaRestarts = 5;
constexpr int kIcaIterations = 500;

struct Covariance {
    Eigen::VectorXd mean;
    Eigen::MatrixXd centered;
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // matching columns
};

Covariance covariance_of(const TraceEnsemble &ens) {
    Covariance c;
    c.mean = ens.traces.colwise().mean().transpose();
    c.centered = ens.traces.rowwise() - c.mean.transpose();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(ens.traces.cols(), ens.traces.cols());
    cov.selfadjointView<Eigen::Lower>().rankUpdate(c.centered.transpose());
    cov = cov.selfadjointView<Eigen::Lower>();
    cov /= static_cast<double>(ens.traces.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    c.values = es.eigenvalues().reverse();
    c.vectors = es.eigenvectors().rowwise().reverse();
    return c;
}

}  // namespace

void TraceEnsemble::validate() const {
    if (traces.rows() == 0 || traces.cols() == 0) {
        throw DomainError("empty trace ensemble");
    }
    if (static_cast<std::size_t>(traces.cols()) != grid.samples) {
        throw ShapeMismatch("trace length does not match the time grid");
    }
    if (!traces.allFinite()) {
        throw DomainError("trace ensemble contains non-finite samples");
    }
}

TemporalMode mode_from_pattern(const Eigen::VectorXd &values, const TimeGrid &grid, double t0) {
    TemporalMode m{grid, std::vector<double>(values.data(), values.data() + values.size()), t0, std::nullopt};
    const double n = m.norm();
    if (!(n > 0.0)) {
        throw DomainError("estimated mode vanishes");
    }
    Eigen::Index peak = 0;
    values.cwiseAbs().maxCoeff(&peak);
    const double sign = values(peak) < 0.0 ? -1.0 : 1.0;
    for (double &v : m.values) {
        v *= sign / n;
    }
    return m;
}

PcaResult pca_mode(const TraceEnsemble &ens) {
    ens.validate();
    if (ens.traces.rows() < 1000) {
        throw DomainError("PCA mode estimation needs at least 1000 traces, got " + std::to_string(ens.traces.rows()));
    }
    const Covariance c = covariance_of(ens);
    PcaResult r{mode_from_pattern(c.vectors.col(0), ens.grid, ens.t0), {}, false};
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(5, c.values.size()); ++i) {
        r.leading_eigenvalues.push_back(c.values(i));
    }
    r.ambiguous = c.values.size() < 2 || (c.values(0) - c.values(1)) < 0.01 * c.values(0);
    return r;
}

IcaResult ica_mode(const TraceEnsemble &ens, std::size_t k, std::uint64_t seed) {
    ens.validate();
    if (k < 1 || k > 50 || k > static_cast<std::size_t>(ens.traces.cols())) {
        throw DomainError("ICA subspace dimension must lie in [1, 50] and not exceed the trace length");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    const Covariance c = covariance_of(ens);
    if (!(c.values(kk - 1) > 0.0)) {
        throw DomainError("ICA subspace contains zero-variance directions");
    }
    const Eigen::VectorXd scale = c.values.head(kk).cwiseSqrt();
    // z = Lambda^{-1/2} E^T (x - mean), one row per trace.
    const Eigen::MatrixXd z = (c.centered * c.vectors.leftCols(kk)) * scale.cwiseInverse().asDiagonal();
    const double n = static_cast<double>(z.rows());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double best_kurt = 0.0;
    Eigen::VectorXd best_w;
    int best_iter = 0;
    bool any_converged = false;
    for (int restart = 0; restart < kIcaRestarts; ++restart) {
        Eigen::VectorXd w(kk);
        for (Eigen::Index i = 0; i < kk; ++i) {
            w(i) = normal(rng);
        }
        w.normalize();
        bool converged = false;
        int iter = 0;
        for (; iter < kIcaIterations; ++iter) {
            const Eigen::VectorXd y = z * w;
            const Eigen::VectorXd cube = y.array().cube();
            Eigen::VectorXd next = z.transpose() * cube / n - 3.0 * w;
            const double len = next.norm();
            if (!(len > 0.0)) {
                break;
            }
            next /= len;
            const double change = std::abs(next.dot(w));
            w = next;
            if (change > 1.0 - 1e-10) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            continue;
        }
        any_converged = true;
        const Eigen::VectorXd y = z * w;
        const double m2 = y.squaredNorm() / n;
        const double kurt = y.array().pow(4).sum() / n / (m2 * m2) - 3.0;
        if (std::abs(kurt) > std::abs(best_kurt)) {
            best_kurt = kurt;
            best_w = w;
            best_iter = iter + 1;
        }
    }
    if (!any_converged) {
        throw ConvergenceError("ICA fixed-point iteration did not converge in 5 restarts of 500 iterations");
    }
    // Sample kurtosis maximized over a K-sphere of Gaussian data reaches
    // roughly 2.5 sqrt(24 K / n); require a margin above that.
    const double threshold = 3.5 * std::sqrt(24.0 * static_cast<double>(k) / n);
    if (std::abs(best_kurt) < threshold) {
        throw ConvergenceError("no significantly non-Gaussian direction (|excess kurtosis| " +
                               std::to_string(std::abs(best_kurt)) + " < " + std::to_string(threshold) + ")");
    }
    const Eigen::VectorXd pattern = c.vectors.leftCols(kk) * (scale.asDiagonal() * best_w);
    return {mode_from_pattern(pattern, ens.grid, ens.t0), best_kurt, best_iter};
}

}  // namespace catfilter
