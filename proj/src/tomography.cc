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

#include "catfilter/tomography.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>

#include "catfilter/errors.h"

namespace catfilter {

namespace {

constexpr double kProbabilityFloor = 1e-300;
constexpr double kMonotoneSlack = 1e-9;

ComplexVector phase_factors(double theta, std::size_t dim) {
    ComplexVector d(static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
        d(static_cast<Eigen::Index>(n)) = std::polar(1.0, static_cast<double>(n) * theta);
    }
    return d;
}

// Per-sample probabilities of one phase group: p = psi^T Re(rho_theta) psi.
Eigen::VectorXd group_probabilities(const ComplexMatrix &rho, const ProjectorCache::Group &g) {
    const ComplexVector d = phase_factors(g.theta, static_cast<std::size_t>(rho.rows()));
    const Eigen::MatrixXd m = (d.conjugate().asDiagonal() * rho * d.asDiagonal()).real();
    return (g.psi * m).cwiseProduct(g.psi).rowwise().sum();
}

struct Evaluation {
    double loglik = 0.0;
    std::size_t floored = 0;
    ComplexMatrix r;
};

Evaluation evaluate(const ComplexMatrix &rho, const ProjectorCache &cache, bool with_r) {
    const auto dim = static_cast<Eigen::Index>(cache.cutoff() + 1);
    Evaluation ev;
    if (with_r) {
        ev.r = ComplexMatrix::Zero(dim, dim);
    }
    for (const auto &g : cache.groups()) {
        Eigen::VectorXd p = group_probabilities(rho, g);
        for (Eigen::Index k = 0; k < p.size(); ++k) {
            if (p(k) < kProbabilityFloor) {
                p(k) = kProbabilityFloor;
                ++ev.floored;
            }
            ev.loglik += std::log(p(k));
        }
        if (with_r) {
            const Eigen::MatrixXd weighted = g.psi.transpose() * (p.cwiseInverse().asDiagonal() * g.psi);
            const ComplexVector d = phase_factors(g.theta, static_cast<std::size_t>(dim));
            ev.r += d.asDiagonal() * weighted.cast<std::complex<double>>() * d.conjugate().asDiagonal();
        }
    }
    if (with_r) {
        ev.r /= static_cast<double>(cache.samples());
    }
    return ev;
}

ComplexMatrix normalized_hermitian(const ComplexMatrix &m) {
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    return h / h.trace().real();
}

}  // namespace

ProjectorCache::ProjectorCache(const std::vector<double> &theta, const std::vector<double> &x, std::size_t cutoff)
    : cutoff_(cutoff) {
    if (theta.size() != x.size()) {
        throw ShapeMismatch("phase and quadrature arrays differ in length");
    }
    if (cutoff < 1) {
        throw DomainError("tomography cutoff must be at least 1");
    }
    std::map<double, std::vector<double>> by_phase;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(x[k]) || !std::isfinite(theta[k])) {
            throw DomainError("non-finite quadrature sample");
        }
        by_phase[theta[k]].push_back(x[k]);
    }
    const std::size_t dim = cutoff + 1;
    for (const auto &[th, xs] : by_phase) {
        Group g{th, Eigen::MatrixXd(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(dim))};
        std::vector<double> row(dim);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            oscillator_eigenfunctions(xs[k], row);
            for (std::size_t n = 0; n < dim; ++n) {
                g.psi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = row[n];
            }
        }
        samples_ += xs.size();
        groups_.push_back(std::move(g));
    }
}

double ProjectorCache::phase_span() const {
    if (groups_.empty()) {
        return 0.0;
    }
    return groups_.back().theta - groups_.front().theta;
}

double loglikelihood(const DensityMatrix &rho, const ProjectorCache &cache, std::size_t *floored) {
    if (rho.cutoff() != cache.cutoff()) {
        throw ShapeMismatch("density matrix and projector cache cutoffs differ");
    }
    const Evaluation ev = evaluate(rho.matrix(), cache, false);
    if (floored != nullptr) {
        *floored = ev.floored;
    }
    return ev.loglik;
}

MleResult mle_reconstruct(const ProjectorCache &cache, const MleOptions &opts) {
    if (cache.groups().size() < 2 || !(cache.phase_span() > std::numbers::pi / 2.0)) {
        throw DomainError("tomography needs at least two phases spanning more than 90 degrees");
    }
    if (opts.max_iter < 1 || !(opts.tol > 0.0)) {
        throw DomainError("max_iter must be positive and tol > 0");
    }
    const auto dim = static_cast<Eigen::Index>(cache.cutoff() + 1);
    const ComplexMatrix identity = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix rho = identity / static_cast<double>(dim);
    Evaluation ev = evaluate(rho, cache, true);
    MleResult out{DensityMatrix::vacuum(cache.cutoff()), 0.0, 0, false, 0, {}};
    out.trace.push_back(ev.loglik);
    for (int it = 1; it <= opts.max_iter; ++it) {
        ComplexMatrix next = normalized_hermitian(ev.r * rho * ev.r);
        Evaluation trial = evaluate(next, cache, true);
        // Diluted fallback when the plain step goes downhill.
        double eps = 1.0;
        while (trial.loglik < ev.loglik - kMonotoneSlack * std::abs(ev.loglik)) {
            if (eps < 1e-6) {
                throw ConvergenceError("likelihood decreased at iteration " + std::to_string(it) + " (" +
                                       std::to_string(ev.loglik) + " -> " + std::to_string(trial.loglik) + ")");
            }
            const ComplexMatrix step = identity + eps * ev.r;
            next = normalized_hermitian(step * rho * step);
            trial = evaluate(next, cache, true);
            eps *= 0.5;
        }
        const double gain = trial.loglik - ev.loglik;
        rho = next;
        ev = std::move(trial);
        out.trace.push_back(ev.loglik);
        out.iterations = it;
        if (gain < opts.tol * std::abs(ev.loglik)) {
            out.converged = true;
            break;
        }
    }
    out.rho = DensityMatrix(rho);
    out.loglikelihood = ev.loglik;
    out.floored_samples = ev.floored;
    return out;
}

MleResult mle_reconstruct(const std::vector<double> &theta, const std::vector<double> &x, const MleOptions &opts) {
    return mle_reconstruct(ProjectorCache(theta, x, opts.cutoff), opts);
}

MleResult mle_reconstruct(const QuadratureDataset &data, Channel channel, const MleOptions &opts) {
    data.validate();
    std::vector<double> theta;
    theta.reserve(data.size());
    for (double deg : data.phases_deg) {
        theta.insert(theta.end(), data.events_per_phase, deg * std::numbers::pi / 180.0);
    }
    return mle_reconstruct(theta, channel == Channel::kPost ? data.x_post : data.x_realtime, opts);
}

}  // namespace catfilter
