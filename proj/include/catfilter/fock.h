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

// Truncated Fock-space state algebra.
//
// Quadrature convention: x = (a + a^dagger) / sqrt(2), so the vacuum has
// quadrature variance 1/2 and W_vacuum(0, 0) = 1 / pi. The quadrature measured
// at local-oscillator phase theta has the marginal
//
//     Pr(x | theta) = sum_{m,n} rho_mn psi_m(x) psi_n(x) exp(i (n - m) theta),
//
// and squeezed vacua built here are anti-squeezed along theta = 0.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace catfilter {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultCutoff = 20;

/// Hermitian, unit-trace, positive semidefinite operator on span{|0>, ..., |N_cut>}.
///
/// Every constructor validates the invariants (Hermitian to 1e-12 elementwise,
/// trace 1 to 1e-10, eigenvalues >= -1e-10) and throws DomainError otherwise.
class DensityMatrix {
   public:
    explicit DensityMatrix(ComplexMatrix elements);

    static DensityMatrix vacuum(std::size_t cutoff = kDefaultCutoff);
    static DensityMatrix fock(std::size_t n, std::size_t cutoff = kDefaultCutoff);
    /// |psi><psi| / <psi|psi>.
    static DensityMatrix pure(const ComplexVector &psi);
    /// Divides by the trace and symmetrizes before validating. Used by channels
    /// whose output is only proportional to a density matrix.
    static DensityMatrix normalized(ComplexMatrix unnormalized);

    std::size_t cutoff() const { return static_cast<std::size_t>(m_.rows()) - 1; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const ComplexMatrix &matrix() const { return m_; }
    std::complex<double> operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

    double trace() const { return m_.trace().real(); }
    double mean_photon_number() const;
    double purity() const;
    double min_eigenvalue() const;

   private:
    ComplexMatrix m_;
};

/// Single-mode Gaussian state with zero mean, described by its two principal
/// quadrature variances (vacuum = 1/2) and the equivalent pure squeezing r_eff
/// followed by a loss L_eff:  V_-+ = (1 - L_eff) e^{-+2 r_eff} / 2 + L_eff / 2.
struct GaussianInModeState {
    double v_minus = 0.5;
    double v_plus = 0.5;
    double r_eff = 0.0;
    double l_eff = 0.0;

    static GaussianInModeState from_effective(double r_eff, double l_eff);
};

/// Pure squeezed vacuum S|0> with parameter r_eff (anti-squeezed along theta = 0)
/// sent through a loss channel of transmissivity 1 - L_eff. Throws
/// TruncationError when more than 1e-4 of the population lies above the cutoff.
DensityMatrix squeezed_vacuum(const GaussianInModeState &state, std::size_t cutoff = kDefaultCutoff);

/// Full Kraus-sum bosonic loss channel with transmissivity eta.
DensityMatrix apply_loss(const DensityMatrix &rho, double eta);

/// Single-photon loss approximation: rho -> (1 - w) rho + w a rho a^dagger / tr(a rho a^dagger)
/// with w = min(L <n>, 1).
DensityMatrix apply_loss_one_photon_approx(const DensityMatrix &rho, double loss);

struct HeraldResult {
    DensityMatrix state;
    double probability;
};

/// Probability that a beamsplitter of transmissivity `reflectivity` toward the
/// signal arm sends exactly `n_sub` photons into the tap arm.
double herald_probability(const DensityMatrix &rho, double reflectivity, int n_sub);

/// Conditional signal state after the tap registers exactly `n_sub` photons.
/// Throws DegenerateHerald when the herald probability is below 1e-15.
HeraldResult photon_subtract(const DensityMatrix &rho, double reflectivity, int n_sub);

/// (1 - w) rho_a + w rho_b.
DensityMatrix mix(const DensityMatrix &rho_a, const DensityMatrix &rho_b, double w);

/// e^{-i delta n} rho e^{i delta n}.
DensityMatrix rotate(const DensityMatrix &rho, double delta);

std::vector<double> photon_distribution(const DensityMatrix &rho);
double even_sum(const DensityMatrix &rho);

/// W(0, 0) = (1 / pi) sum_n (-1)^n rho_nn.
double wigner_origin(const DensityMatrix &rho);

/// Default phase-space window for Wigner evaluation.
inline constexpr double kWignerBound = 5.0;
inline constexpr std::size_t kWignerPoints = 201;

/// Wigner function at (x, p) from the Laguerre series over Fock elements.
/// Throws DomainError when |x| or |p| exceed `bound`.
double wigner(const DensityMatrix &rho, double x, double p, double bound = kWignerBound);

/// Population in the two highest Fock levels; the Wigner series is flagged as
/// unreliable when this exceeds 1e-6.
double wigner_tail_estimate(const DensityMatrix &rho);

struct WignerSurface {
    std::vector<double> axis;   // shared by x and p
    Eigen::MatrixXd values;     // values(i, j) = W(axis[i], axis[j]) with i -> x, j -> p
    double tail_estimate = 0.0;
    bool truncation_warning = false;

    /// Trapezoid integral of the surface.
    double integral() const;
};

WignerSurface wigner_surface(const DensityMatrix &rho, double bound = kWignerBound,
                             std::size_t points = kWignerPoints);

enum class CatParity { kPlus = +1, kMinus = -1 };

/// Normalized |alpha> + parity |-alpha>. Requires |alpha|^2 <= N_cut / 4.
DensityMatrix cat_state(std::complex<double> alpha, CatParity parity, std::size_t cutoff = kDefaultCutoff);
ComplexVector cat_vector(std::complex<double> alpha, CatParity parity, std::size_t cutoff);

/// <cat|rho|cat> for the cat state of the given parity (minus by default).
double fidelity_to_cat(const DensityMatrix &rho, std::complex<double> alpha, CatParity parity = CatParity::kMinus);

struct CatFit {
    double fidelity = 0.0;
    double alpha = 0.0;  // real, positive
};

/// Maximizes fidelity_to_cat over real alpha in [0.1, min(3, sqrt(N_cut / 4))]
/// by golden-section search (tolerance 1e-4) after a coarse bracketing scan.
CatFit best_cat_fidelity(const DensityMatrix &rho, CatParity parity = CatParity::kMinus);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double uhlmann_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Harmonic-oscillator eigenfunctions psi_0(x) .. psi_{out.size()-1}(x) by the
/// upward three-term recursion.
void oscillator_eigenfunctions(double x, std::span<double> out);

/// Uniform grid on [lo, hi] with `points` samples.
struct UniformGrid {
    double lo = -8.0;
    double hi = 8.0;
    std::size_t points = 1601;

    double step() const { return (hi - lo) / static_cast<double>(points - 1); }
    double at(std::size_t i) const { return lo + step() * static_cast<double>(i); }
    std::vector<double> values() const;
};

/// <x_theta^2> for the quadrature at phase theta.
double quadrature_second_moment(const DensityMatrix &rho, double theta);

/// Marginal Pr(x | theta) sampled on `grid`. Throws DomainError when the grid
/// covers fewer than 6 standard deviations on either side, or when the density
/// goes negative beyond tolerance.
std::vector<double> quadrature_marginal(const DensityMatrix &rho, double theta, const UniformGrid &grid);

/// A grid wide enough for quadrature_marginal on every phase of `rho`.
UniformGrid marginal_grid_for(const DensityMatrix &rho, std::size_t points = 2001);

}  // namespace catfilter
