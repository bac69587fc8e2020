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

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "catfilter/errors.h"
#include "catfilter/simulate.h"

namespace catfilter {
namespace {

const TimeGrid kGrid = TimeGrid::centered(1e-9, 256);

TemporalMode truth() { return filter_mode(5e7, 0.0, kGrid); }

Eigen::VectorXd unit_truth() {
    const TemporalMode m = truth();
    Eigen::VectorXd e(kGrid.samples);
    for (std::size_t j = 0; j < kGrid.samples; ++j) {
        e(static_cast<Eigen::Index>(j)) = m.values[j] * std::sqrt(kGrid.dt);
    }
    return e;
}

// Unit-variance white noise per sample with the component along the true mode
// replaced by a Gaussian of the given variance.
TraceEnsemble injected(std::size_t n, double variance, std::uint64_t seed) {
    const Eigen::VectorXd e = unit_truth();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    TraceEnsemble ens{Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kGrid.samples)), kGrid,
                      0.0};
    for (Eigen::Index i = 0; i < ens.traces.rows(); ++i) {
        for (Eigen::Index j = 0; j < ens.traces.cols(); ++j) {
            ens.traces(i, j) = normal(rng);
        }
        const double along = ens.traces.row(i).dot(e);
        ens.traces.row(i) += (std::sqrt(variance) * normal(rng) - along) * e.transpose();
    }
    return ens;
}

// Ten-dimensional isotropic background that contains the true mode, plus weak
// white noise. Along the mode the coefficient is +-1: same variance as every
// other background direction, excess kurtosis -2.
TraceEnsemble equal_variance(std::size_t n, std::uint64_t seed) {
    const Eigen::Index p = static_cast<Eigen::Index>(kGrid.samples);
    Eigen::MatrixXd basis(p, 10);
    basis.col(0) = unit_truth();
    for (Eigen::Index c = 1; c < 10; ++c) {
        const TemporalMode m = filter_mode(5e7 + 1e7 * static_cast<double>(c), 8e-9 * static_cast<double>(c), kGrid);
        for (Eigen::Index j = 0; j < p; ++j) {
            basis(j, c) = m.values[static_cast<std::size_t>(j)];
        }
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(basis).householderQ() * Eigen::MatrixXd::Identity(p, 10);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::bernoulli_distribution coin(0.5);
    TraceEnsemble ens{Eigen::MatrixXd(static_cast<Eigen::Index>(n), p), kGrid, 0.0};
    for (Eigen::Index i = 0; i < ens.traces.rows(); ++i) {
        Eigen::VectorXd coeff(10);
        coeff(0) = coin(rng) ? 1.0 : -1.0;
        for (Eigen::Index c = 1; c < 10; ++c) {
            coeff(c) = normal(rng);
        }
        Eigen::VectorXd row = q * coeff;
        for (Eigen::Index j = 0; j < p; ++j) {
            row(j) += 0.05 * normal(rng);
        }
        ens.traces.row(i) = row.transpose();
    }
    return ens;
}

// Rows +-sqrt(p) e_j: the sample covariance is exactly proportional to I.
TraceEnsemble isotropic() {
    const Eigen::Index p = static_cast<Eigen::Index>(kGrid.samples);
    TraceEnsemble ens{Eigen::MatrixXd::Zero(4 * p, p), kGrid, 0.0};
    for (Eigen::Index r = 0; r < 4 * p; ++r) {
        ens.traces(r, r % p) = (r / p) % 2 == 0 ? 1.0 : -1.0;
    }
    return ens;
}

double overlap_with_truth(const TemporalMode &m) { return std::abs(inner_product(m, truth())); }

TEST(Pca, RecoversInjectedMode) {
    const PcaResult r = pca_mode(injected(10000, 5.0, 1));
    EXPECT_GT(overlap_with_truth(r.mode), 0.99);
    EXPECT_FALSE(r.ambiguous);
    EXPECT_NEAR(r.mode.norm(), 1.0, 1e-9);
    EXPECT_GT(r.mode.peak(), 0.0);
}

TEST(Pca, WhiteNoiseIsAmbiguous) {
    const PcaResult r = pca_mode(isotropic());
    EXPECT_TRUE(r.ambiguous);
}

TEST(Pca, NeedsThousandTraces) { EXPECT_THROW(pca_mode(injected(999, 1.0, 3)), DomainError); }

TEST(Pca, InvariantUnderReorderingAndScaling) {
    const TraceEnsemble ens = injected(3000, 5.0, 4);
    TraceEnsemble reordered = ens;
    reordered.traces = ens.traces.colwise().reverse();
    TraceEnsemble scaled = ens;
    scaled.traces *= 7.5;
    const TemporalMode base = pca_mode(ens).mode;
    EXPECT_NEAR(inner_product(base, pca_mode(reordered).mode), 1.0, 1e-9);
    EXPECT_NEAR(inner_product(base, pca_mode(scaled).mode), 1.0, 1e-9);
}

TEST(Pca, OverlapGrowsWithEnsembleSize) {
    std::vector<double> medians;
    for (std::size_t n : {1000u, 3000u, 10000u}) {
        std::vector<double> ov;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ov.push_back(overlap_with_truth(pca_mode(injected(n, 2.0, 100 + seed)).mode));
        }
        std::nth_element(ov.begin(), ov.begin() + 2, ov.end());
        medians.push_back(ov[2]);
    }
    EXPECT_LE(medians[0], medians[1]);
    EXPECT_LE(medians[1], medians[2]);
}

TEST(Ica, FindsEqualVarianceNonGaussianMode) {
    const TraceEnsemble ens = equal_variance(10000, 5);
    const IcaResult ica = ica_mode(ens);
    EXPECT_GT(overlap_with_truth(ica.mode), 0.98);
    EXPECT_LT(ica.excess_kurtosis, -1.0);
    EXPECT_LT(overlap_with_truth(pca_mode(ens).mode), 0.9);
}

TEST(Ica, GaussianEnsembleFails) {
    EXPECT_THROW(ica_mode(injected(5000, 5.0, 6)), ConvergenceError);
}

TEST(Ica, RejectsBadSubspace) {
    const TraceEnsemble ens = injected(1000, 1.0, 7);
    EXPECT_THROW(ica_mode(ens, 0), DomainError);
    EXPECT_THROW(ica_mode(ens, 51), DomainError);
}

TEST(Ica, DeterministicForSeed) {
    const TraceEnsemble ens = equal_variance(4000, 8);
    EXPECT_EQ(ica_mode(ens, 20, 3).mode.values, ica_mode(ens, 20, 3).mode.values);
}

TEST(ModeEstimation, SimulatedHeraldsAgreeWithTheory) {
    ExperimentConfig cfg;
    const TimeGrid grid = cfg.time_grid();
    const TemporalMode theory = composite_mode(cfg.cavity_rates(), 0.0, grid);
    const HeraldModel model = build_herald_model(cfg, theory);
    const auto [first, width] = estimation_window(grid, 0.0, cfg.cavity_rates());
    const TraceEnsemble ens = simulate_traces(cfg, model, theory, 0, 10000, first, width, 7);
    const TemporalMode pca = place_on_grid(pca_mode(ens).mode, grid);
    const TemporalMode ica = place_on_grid(ica_mode(ens).mode, grid);
    EXPECT_GT(inner_product(pca, theory), 0.99);
    EXPECT_GT(inner_product(ica, theory), 0.99);
    EXPECT_GT(inner_product(pca, ica), 0.99);
}

}  // namespace
}  // namespace catfilter
