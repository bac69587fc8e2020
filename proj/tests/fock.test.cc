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

#include "catfilter/fock.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "catfilter/errors.h"

namespace catfilter {
namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form squeezed-vacuum amplitudes c_{2n} = (-tanh r)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh r).
double squeezed_amplitude(double r, int n) {
    if (n % 2 != 0) {
        return 0.0;
    }
    const int k = n / 2;
    const double log_mag = 0.5 * std::lgamma(n + 1.0) - k * std::log(2.0) - std::lgamma(k + 1.0);
    return std::pow(-std::tanh(r), k) * std::exp(log_mag) / std::sqrt(std::cosh(r));
}

DensityMatrix random_density_matrix(std::mt19937_64 &rng, std::size_t cutoff) {
    std::normal_distribution<double> g;
    const auto d = static_cast<Eigen::Index>(cutoff + 1);
    ComplexMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = {g(rng), g(rng)};
        }
    }
    return DensityMatrix::normalized(a * a.adjoint());
}

TEST(DensityMatrix, RejectsNonHermitian) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix{m}, DomainError);
}

TEST(DensityMatrix, RejectsWrongTraceAndNegativeEigenvalue) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.5;
    EXPECT_THROW(DensityMatrix{m}, DomainError);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix{m}, DomainError);
}

TEST(SqueezedVacuum, ZeroSqueezingIsVacuum) {
    const DensityMatrix rho = squeezed_vacuum(GaussianInModeState{}, 20);
    EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-14);
}

TEST(SqueezedVacuum, FullLossIsVacuum) {
    const DensityMatrix rho = squeezed_vacuum(GaussianInModeState::from_effective(0.7, 1.0), 20);
    EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-14);
}

TEST(SqueezedVacuum, MatchesClosedFormAmplitudes) {
    const double r = 0.3;
    const DensityMatrix rho = squeezed_vacuum(GaussianInModeState::from_effective(r, 0.0), 20);
    for (int m = 0; m <= 20; ++m) {
        for (int n = 0; n <= 20; ++n) {
            // Our squeezing axis is rotated by pi/2 relative to the oracle's, which
            // flips the sign of every other amplitude; magnitudes must agree.
            const double expect = std::abs(squeezed_amplitude(r, m) * squeezed_amplitude(r, n));
            EXPECT_NEAR(std::abs(rho(m, n)), expect, 1e-12) << m << "," << n;
        }
    }
    EXPECT_NEAR(rho(2, 2).real() / rho(0, 0).real(), std::pow(std::tanh(r), 2) / 2.0, 1e-12);
}

TEST(SqueezedVacuum, LosslessHasOnlyEvenPhotons) {
    const DensityMatrix rho = squeezed_vacuum(GaussianInModeState::from_effective(0.5, 0.0), 20);
    double odd = 0.0;
    for (std::size_t n = 1; n <= 20; n += 2) {
        odd += rho(n, n).real();
    }
    EXPECT_LT(odd, 1e-14);
}

TEST(SqueezedVacuum, QuadratureVariancesMatchGaussianModel) {
    const auto state = GaussianInModeState::from_effective(0.4, 0.15);
    const DensityMatrix rho = squeezed_vacuum(state, 30);
    EXPECT_NEAR(quadrature_second_moment(rho, 0.0), state.v_plus, 1e-6);
    EXPECT_NEAR(quadrature_second_moment(rho, kPi / 2), state.v_minus, 1e-6);
}

TEST(SqueezedVacuum, RejectsTruncation) {
    EXPECT_THROW(squeezed_vacuum(GaussianInModeState::from_effective(1.5, 0.0), 10), TruncationError);
    EXPECT_THROW(squeezed_vacuum(GaussianInModeState{}, 5), DomainError);
}

TEST(Loss, IdentityAtUnitTransmission) {
    std::mt19937_64 rng(3);
    const DensityMatrix rho = random_density_matrix(rng, 8);
    EXPECT_LT((apply_loss(rho, 1.0).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Loss, SinglePhoton) {
    const DensityMatrix out = apply_loss(DensityMatrix::fock(1, 5), 0.917);
    EXPECT_NEAR(out(0, 0).real(), 0.083, 1e-14);
    EXPECT_NEAR(out(1, 1).real(), 0.917, 1e-14);
}

TEST(Loss, TwoPhotonBinomial) {
    const auto p = photon_distribution(apply_loss(DensityMatrix::fock(2, 5), 0.9));
    EXPECT_NEAR(p[0], 0.01, 1e-14);
    EXPECT_NEAR(p[1], 0.18, 1e-14);
    EXPECT_NEAR(p[2], 0.81, 1e-14);
}

TEST(Loss, Composition) {
    for (int seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed);
        const DensityMatrix rho = random_density_matrix(rng, 10);
        const DensityMatrix a = apply_loss(apply_loss(rho, 0.8), 0.7);
        const DensityMatrix b = apply_loss(rho, 0.56);
        EXPECT_LT((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Loss, RejectsOutOfRange) {
    EXPECT_THROW(apply_loss(DensityMatrix::vacuum(4), 1.2), DomainError);
    EXPECT_THROW(apply_loss_one_photon_approx(DensityMatrix::vacuum(4), -0.1), DomainError);
}

TEST(OnePhotonLoss, ZeroIsIdentityAndSinglePhotonAgrees) {
    const DensityMatrix one = DensityMatrix::fock(1, 6);
    EXPECT_LT((apply_loss_one_photon_approx(one, 0.0).matrix() - one.matrix()).norm(), 1e-15);
    const DensityMatrix out = apply_loss_one_photon_approx(one, 0.1);
    EXPECT_NEAR(out(0, 0).real(), 0.1, 1e-14);
    EXPECT_NEAR(out(1, 1).real(), 0.9, 1e-14);
}

TEST(Subtraction, VacuumHasZeroProbability) {
    const DensityMatrix vac = DensityMatrix::vacuum(10);
    EXPECT_EQ(herald_probability(vac, 0.97, 1), 0.0);
    EXPECT_THROW(photon_subtract(vac, 0.97, 1), DegenerateHerald);
}

TEST(Subtraction, WeakSqueezingGivesSinglePhoton) {
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.05, 0.0), 20);
    const HeraldResult h = photon_subtract(anc, 0.97, 1);
    EXPECT_GT(h.state(1, 1).real(), 0.99);
}

TEST(Subtraction, LosslessSingleSubtractionIsOdd) {
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.6, 0.0), 25);
    const HeraldResult h = photon_subtract(anc, 0.97, 1);
    EXPECT_LT(even_sum(h.state), 1e-10);
    EXPECT_NEAR(wigner_origin(h.state), -1.0 / kPi, 1e-10);
}

TEST(Subtraction, ProbabilityMatchesBruteForceBeamsplitter) {
    // Two-mode brute force: |n> -> sum_k sqrt(C(n,k) R^{n-k} (1-R)^k) |n-k>|k>.
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.4, 0.1), 20);
    const double refl = 0.9;
    for (int k : {1, 2}) {
        double p = 0.0;
        for (int n = k; n <= 20; ++n) {
            p += anc(n, n).real() * std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) *
                 std::pow(refl, n - k) * std::pow(1.0 - refl, k);
        }
        EXPECT_NEAR(herald_probability(anc, refl, k), p, 1e-14);
    }
}

TEST(Subtraction, RejectsBadArguments) {
    const DensityMatrix one = DensityMatrix::fock(1, 5);
    EXPECT_THROW(photon_subtract(one, 1.0, 1), DomainError);
    EXPECT_THROW(photon_subtract(one, 0.5, 3), DomainError);
}

TEST(Mix, EndpointsAndLinearEvenSum) {
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.5, 0.05), 20);
    const DensityMatrix cat = photon_subtract(anc, 0.97, 1).state;
    EXPECT_LT((mix(cat, anc, 0.0).matrix() - cat.matrix()).norm(), 1e-15);
    EXPECT_LT((mix(cat, anc, 1.0).matrix() - anc.matrix()).norm(), 1e-15);
    const double w = 0.034;
    EXPECT_NEAR(even_sum(mix(cat, anc, w)) - even_sum(cat), w * (even_sum(anc) - even_sum(cat)), 1e-14);
    EXPECT_THROW(mix(cat, DensityMatrix::vacuum(5), 0.5), ShapeMismatch);
}

TEST(Mix, NegativityRisesMonotonicallyWithAncestorWeight) {
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.5, 0.05), 20);
    const DensityMatrix cat = photon_subtract(anc, 0.97, 1).state;
    double last = -1.0;
    for (int i = 0; i <= 10; ++i) {
        const double w0 = wigner_origin(mix(cat, anc, i / 10.0));
        EXPECT_GT(w0, last);
        last = w0;
    }
}

TEST(Wigner, OriginValues) {
    EXPECT_NEAR(wigner_origin(DensityMatrix::fock(1, 5)), -1.0 / kPi, 1e-15);
    EXPECT_NEAR(wigner_origin(DensityMatrix::vacuum(5)), 1.0 / kPi, 1e-15);
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = 0.212;
    m(1, 1) = 0.788;
    EXPECT_NEAR(wigner_origin(DensityMatrix(m)), -0.1834, 1e-4);
}

TEST(Wigner, SinglePhotonClosedForm) {
    const DensityMatrix one = DensityMatrix::fock(1, 6);
    for (double x : {-1.3, 0.0, 0.4, 2.0}) {
        for (double p : {-0.7, 0.0, 1.1}) {
            const double r2 = x * x + p * p;
            const double expect = (2.0 * r2 - 1.0) * std::exp(-r2) / kPi;
            EXPECT_NEAR(wigner(one, x, p), expect, 1e-13);
        }
    }
    EXPECT_NEAR(wigner(one, 1.0 / std::sqrt(2.0), 0.0), 0.0, 1e-15);
    EXPECT_NEAR(wigner(DensityMatrix::vacuum(4), 0.0, 0.0), 1.0 / kPi, 1e-15);
}

TEST(Wigner, OriginMatchesSeries) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5; ++i) {
        const DensityMatrix rho = random_density_matrix(rng, 12);
        EXPECT_NEAR(wigner(rho, 0.0, 0.0), wigner_origin(rho), 1e-8);
    }
}

TEST(Wigner, SurfaceIntegratesToOne) {
    const WignerSurface s = wigner_surface(cat_state(1.0, CatParity::kMinus, 20));
    EXPECT_NEAR(s.integral(), 1.0, 1e-3);
    EXPECT_FALSE(s.truncation_warning);
}

TEST(Wigner, MarginalsMatchQuadratureDistribution) {
    // Integrating W over the conjugate variable must reproduce Pr(x | theta) at
    // theta = 0 (x marginal) and theta = pi/2 (p marginal).
    ComplexVector psi(4);
    psi << 0.6, std::complex<double>(0.3, 0.5), std::complex<double>(-0.2, 0.1), 0.4;
    const DensityMatrix rho = DensityMatrix::pure(psi);
    const UniformGrid grid{-8.0, 8.0, 401};
    const auto px = quadrature_marginal(rho, 0.0, grid);
    const auto pp = quadrature_marginal(rho, kPi / 2, grid);
    const int n = 801;
    const double h = 10.0 / (n - 1);
    for (double u : {-1.2, -0.32, 0.52, 1.72}) {
        double ix = 0.0, ip = 0.0;
        for (int k = 0; k < n; ++k) {
            const double v = -5.0 + h * k;
            const double wk = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            ix += wk * wigner(rho, u, v);
            ip += wk * wigner(rho, v, u);
        }
        ix *= h;
        ip *= h;
        const auto idx = static_cast<std::size_t>(std::lround((u - grid.lo) / grid.step()));
        ASSERT_NEAR(grid.at(idx), u, 1e-12);
        EXPECT_NEAR(ix, px[idx], 1e-6);
        EXPECT_NEAR(ip, pp[idx], 1e-6);
    }
}

TEST(Wigner, RejectsOutOfBounds) { EXPECT_THROW(wigner(DensityMatrix::vacuum(3), 6.0, 0.0), DomainError); }

TEST(Parity, WignerOriginIdentity) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const DensityMatrix rho = random_density_matrix(rng, 10);
        EXPECT_NEAR(wigner_origin(rho), (2.0 * even_sum(rho) - 1.0) / kPi, 1e-10);
    }
}

TEST(Cat, SmallAlphaMinusCatIsSinglePhoton) {
    EXPECT_NEAR(fidelity_to_cat(DensityMatrix::fock(1, 10), 1e-4, CatParity::kMinus), 1.0, 1e-7);
}

TEST(Cat, SelfFidelityAndSymmetry) {
    const DensityMatrix cat = cat_state(1.2, CatParity::kMinus, 20);
    EXPECT_NEAR(fidelity_to_cat(cat, 1.2), 1.0, 1e-12);
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.5, 0.05), 20);
    const DensityMatrix sub = photon_subtract(anc, 0.97, 1).state;
    for (double a : {0.3, 0.8, 1.5}) {
        EXPECT_NEAR(fidelity_to_cat(sub, a), fidelity_to_cat(sub, -a), 1e-12);
    }
}

TEST(Cat, BestFitRecoversAmplitude) {
    const CatFit fit = best_cat_fidelity(cat_state(1.2, CatParity::kMinus, 20));
    EXPECT_NEAR(fit.alpha, 1.2, 2e-4);
    EXPECT_NEAR(fit.fidelity, 1.0, 1e-7);
}

TEST(Cat, FidelityBoundedByOddPopulation) {
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.5, 0.1), 20);
    const DensityMatrix sub = mix(apply_loss(photon_subtract(anc, 0.97, 1).state, 0.9), anc, 0.03);
    const CatFit fit = best_cat_fidelity(sub);
    EXPECT_LE(fit.fidelity, 1.0 - even_sum(sub) + 1e-12);
}

TEST(Cat, RejectsLargeAmplitude) { EXPECT_THROW(cat_state(3.0, CatParity::kPlus, 20), DomainError); }

TEST(Fidelity, PureStatesOverlap) {
    ComplexVector a(3), b(3);
    a << 1.0, 0.0, 0.0;
    b << std::sqrt(0.3), std::sqrt(0.7), 0.0;
    EXPECT_NEAR(uhlmann_fidelity(DensityMatrix::pure(a), DensityMatrix::pure(b)), 0.3, 1e-7);
    std::mt19937_64 rng(2);
    const DensityMatrix rho = random_density_matrix(rng, 6);
    EXPECT_NEAR(uhlmann_fidelity(rho, rho), 1.0, 1e-8);
}

TEST(Eigenfunctions, OrthonormalAndStable) {
    const int nmax = 30;
    const int points = 4001;
    const double lo = -12.0, h = 24.0 / (points - 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nmax + 1, nmax + 1);
    std::vector<double> psi(nmax + 1);
    for (int i = 0; i < points; ++i) {
        oscillator_eigenfunctions(lo + h * i, psi);
        const Eigen::Map<Eigen::VectorXd> v(psi.data(), nmax + 1);
        gram += h * v * v.transpose();
    }
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff(), 1e-10);
    oscillator_eigenfunctions(40.0, psi);
    for (double v : psi) {
        EXPECT_TRUE(std::isfinite(v));
    }
}

TEST(Marginal, VacuumAndSinglePhoton) {
    const UniformGrid grid{-8.0, 8.0, 1601};
    const auto vac = quadrature_marginal(DensityMatrix::vacuum(6), 0.7, grid);
    const auto one = quadrature_marginal(DensityMatrix::fock(1, 6), 1.9, grid);
    double norm = 0.0;
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double x = grid.at(i);
        EXPECT_NEAR(vac[i], std::exp(-x * x) / std::sqrt(kPi), 1e-14);
        EXPECT_NEAR(one[i], 2.0 * x * x * std::exp(-x * x) / std::sqrt(kPi), 1e-14);
        norm += one[i] * grid.step();
    }
    EXPECT_NEAR(norm, 1.0, 1e-6);
}

TEST(Marginal, MinusCatShowsDipAtSqueezedPhase) {
    const DensityMatrix cat = cat_state(1.0, CatParity::kMinus, 20);
    const UniformGrid grid = marginal_grid_for(cat);
    const auto m = quadrature_marginal(cat, 0.0, grid);
    const std::size_t mid = grid.points / 2;
    EXPECT_NEAR(m[mid], 0.0, 1e-12);
    EXPECT_GT(*std::max_element(m.begin(), m.end()), 0.3);
}

TEST(Marginal, RejectsNarrowGrid) {
    EXPECT_THROW(quadrature_marginal(DensityMatrix::fock(3, 6), 0.0, UniformGrid{-2.0, 2.0, 101}), DomainError);
}

TEST(Rotation, ShiftsMarginalPhase) {
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(0.5, 0.05), 20);
    const DensityMatrix rot = rotate(anc, 0.4);
    EXPECT_NEAR(quadrature_second_moment(rot, 0.1), quadrature_second_moment(anc, 0.5), 1e-12);
}

}  // namespace
}  // namespace catfilter
