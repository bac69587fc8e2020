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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>

#include "catfilter/errors.h"

namespace catfilter {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kEigenTol = 1e-10;

/// sqrt(C(n, k)) for n, k < size, built from Pascal's triangle.
class SqrtBinomial {
   public:
    explicit SqrtBinomial(std::size_t size) : size_(size), table_(size * size, 0.0) {
        std::vector<double> row(size, 0.0);
        for (std::size_t n = 0; n < size; ++n) {
            row[n] = 1.0;
            for (std::size_t k = n - (n > 0); k > 0; --k) {
                row[k] += row[k - 1];
            }
            for (std::size_t k = 0; k <= n; ++k) {
                table_[n * size + k] = std::sqrt(row[k]);
            }
        }
    }
    double operator()(std::size_t n, std::size_t k) const { return table_[n * size_ + k]; }

   private:
    std::size_t size_;
    std::vector<double> table_;
};

/// A_k rho A_k^dagger for the k-th Kraus operator of a loss channel with
/// transmissivity eta:  A_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>.
ComplexMatrix kraus_term(const ComplexMatrix &rho, double eta, std::size_t k, const SqrtBinomial &binom) {
    const auto d = static_cast<std::size_t>(rho.rows());
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    if (k >= d) {
        return out;
    }
    const double sqrt_eta = std::sqrt(eta);
    const double lost = std::pow(1.0 - eta, static_cast<double>(k));
    std::vector<double> amp(d, 0.0);
    for (std::size_t n = k; n < d; ++n) {
        amp[n] = binom(n, k) * std::pow(sqrt_eta, static_cast<double>(n - k));
    }
    for (std::size_t m = k; m < d; ++m) {
        for (std::size_t n = k; n < d; ++n) {
            out(m - k, n - k) = amp[m] * amp[n] * lost * rho(m, n);
        }
    }
    return out;
}

ComplexMatrix loss_matrix(const ComplexMatrix &rho, double eta) {
    const auto d = static_cast<std::size_t>(rho.rows());
    SqrtBinomial binom(d);
    if (eta == 1.0) {
        return rho;
    }
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (std::size_t k = 0; k < d; ++k) {
        out += kraus_term(rho, eta, k, binom);
    }
    return out;
}

void require_probability(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
    }
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix elements) : m_(std::move(elements)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
        throw DomainError("density matrix must be square and non-empty");
    }
    const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTol) {
        throw DomainError("density matrix is not Hermitian (max deviation " + std::to_string(asym) + ")");
    }
    m_ = (0.5 * (m_ + m_.adjoint())).eval();
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw DomainError("density matrix trace is " + std::to_string(tr));
    }
    const double lowest = min_eigenvalue();
    if (lowest < -kEigenTol) {
        throw DomainError("density matrix has negative eigenvalue " + std::to_string(lowest));
    }
}

DensityMatrix DensityMatrix::vacuum(std::size_t cutoff) { return fock(0, cutoff); }

DensityMatrix DensityMatrix::fock(std::size_t n, std::size_t cutoff) {
    if (n > cutoff) {
        throw DomainError("Fock level exceeds cutoff");
    }
    ComplexMatrix m = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    m(n, n) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector &psi) {
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0)) {
        throw DomainError("cannot build a pure state from a zero vector");
    }
    return normalized(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::normalized(ComplexMatrix unnormalized) {
    ComplexMatrix m = 0.5 * (unnormalized + unnormalized.adjoint());
    const double tr = m.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
        throw DomainError("cannot normalize an operator with trace " + std::to_string(tr));
    }
    m /= tr;
    return DensityMatrix(std::move(m));
}

double DensityMatrix::mean_photon_number() const {
    double n = 0.0;
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        n += static_cast<double>(i) * m_(i, i).real();
    }
    return n;
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

GaussianInModeState GaussianInModeState::from_effective(double r_eff, double l_eff) {
    require_probability(l_eff, "L_eff");
    if (!std::isfinite(r_eff)) {
        throw DomainError("r_eff must be finite");
    }
    GaussianInModeState s;
    s.r_eff = r_eff;
    s.l_eff = l_eff;
    s.v_minus = 0.5 * ((1.0 - l_eff) * std::exp(-2.0 * r_eff) + l_eff);
    s.v_plus = 0.5 * ((1.0 - l_eff) * std::exp(2.0 * r_eff) + l_eff);
    return s;
}

DensityMatrix squeezed_vacuum(const GaussianInModeState &state, std::size_t cutoff) {
    if (cutoff < 10) {
        throw DomainError("squeezed_vacuum requires cutoff >= 10");
    }
    require_probability(state.l_eff, "L_eff");
    if (state.v_minus * state.v_plus < 0.25 - 1e-12) {
        throw DomainError("Gaussian state violates the uncertainty bound V_- V_+ >= 1/4");
    }
    const double r = std::abs(state.r_eff);
    if (r == 0.0 || state.l_eff == 1.0) {
        return DensityMatrix::vacuum(cutoff);
    }
    // Build the pure state in an enlarged basis so the loss channel sees the
    // high-photon tail before truncation.
    const std::size_t big = std::max<std::size_t>(2 * cutoff, cutoff + 80);
    const double t = std::tanh(r);
    ComplexVector psi = ComplexVector::Zero(big + 1);
    double c = 1.0 / std::sqrt(std::cosh(r));
    double kept = 0.0;
    for (std::size_t n = 0; 2 * n <= big; ++n) {
        psi(2 * n) = c;
        kept += c * c;
        const double two_n = 2.0 * static_cast<double>(n);
        c *= t * std::sqrt((two_n + 1.0) / (two_n + 2.0));
    }
    if (1.0 - kept > 1e-12) {
        throw TruncationError("squeezing r_eff = " + std::to_string(r) + " too large for the internal basis");
    }
    ComplexMatrix rho = loss_matrix(psi * psi.adjoint(), 1.0 - state.l_eff);
    ComplexMatrix truncated = rho.topLeftCorner(cutoff + 1, cutoff + 1);
    const double tail = 1.0 - truncated.trace().real();
    if (tail > 1e-4) {
        throw TruncationError("squeezed vacuum leaves " + std::to_string(tail) + " of its population above cutoff " +
                              std::to_string(cutoff));
    }
    return DensityMatrix::normalized(std::move(truncated));
}

DensityMatrix apply_loss(const DensityMatrix &rho, double eta) {
    require_probability(eta, "transmissivity");
    return DensityMatrix::normalized(loss_matrix(rho.matrix(), eta));
}

DensityMatrix apply_loss_one_photon_approx(const DensityMatrix &rho, double loss) {
    require_probability(loss, "loss");
    const double nbar = rho.mean_photon_number();
    if (loss == 0.0 || nbar <= 0.0) {
        return rho;
    }
    const double w = std::min(loss * nbar, 1.0);
    const auto d = static_cast<Eigen::Index>(rho.dim());
    ComplexMatrix lowered = ComplexMatrix::Zero(d, d);
    for (Eigen::Index m = 0; m + 1 < d; ++m) {
        for (Eigen::Index n = 0; n + 1 < d; ++n) {
            lowered(m, n) = std::sqrt(static_cast<double>((m + 1) * (n + 1))) * rho(m + 1, n + 1);
        }
    }
    return DensityMatrix::normalized((1.0 - w) * rho.matrix() + (w / nbar) * lowered);
}

namespace {

void check_subtraction_args(double reflectivity, int n_sub) {
    if (!(reflectivity > 0.0 && reflectivity < 1.0)) {
        throw DomainError("beamsplitter reflectivity must lie in (0, 1)");
    }
    if (n_sub != 1 && n_sub != 2) {
        throw DomainError("n_sub must be 1 or 2");
    }
}

}  // namespace

double herald_probability(const DensityMatrix &rho, double reflectivity, int n_sub) {
    check_subtraction_args(reflectivity, n_sub);
    SqrtBinomial binom(rho.dim());
    return kraus_term(rho.matrix(), reflectivity, static_cast<std::size_t>(n_sub), binom).trace().real();
}

HeraldResult photon_subtract(const DensityMatrix &rho, double reflectivity, int n_sub) {
    check_subtraction_args(reflectivity, n_sub);
    SqrtBinomial binom(rho.dim());
    ComplexMatrix term = kraus_term(rho.matrix(), reflectivity, static_cast<std::size_t>(n_sub), binom);
    const double p = term.trace().real();
    if (!(p >= 1e-15)) {
        throw DegenerateHerald("herald probability " + std::to_string(p) + " is below 1e-15", p);
    }
    return {DensityMatrix::normalized(std::move(term)), p};
}

DensityMatrix mix(const DensityMatrix &rho_a, const DensityMatrix &rho_b, double w) {
    require_probability(w, "mixing weight");
    if (rho_a.dim() != rho_b.dim()) {
        throw ShapeMismatch("cannot mix density matrices with cutoffs " + std::to_string(rho_a.cutoff()) + " and " +
                            std::to_string(rho_b.cutoff()));
    }
    return DensityMatrix::normalized((1.0 - w) * rho_a.matrix() + w * rho_b.matrix());
}

DensityMatrix rotate(const DensityMatrix &rho, double delta) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    ComplexMatrix out(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            out(m, n) = rho(m, n) * std::polar(1.0, static_cast<double>(n - m) * delta);
        }
    }
    return DensityMatrix(std::move(out));
}

std::vector<double> photon_distribution(const DensityMatrix &rho) {
    std::vector<double> p(rho.dim());
    for (std::size_t n = 0; n < p.size(); ++n) {
        p[n] = rho(n, n).real();
    }
    return p;
}

double even_sum(const DensityMatrix &rho) {
    double s = 0.0;
    for (std::size_t n = 0; n < rho.dim(); n += 2) {
        s += rho(n, n).real();
    }
    return s;
}

double wigner_origin(const DensityMatrix &rho) {
    double s = 0.0;
    for (std::size_t n = 0; n < rho.dim(); ++n) {
        s += (n % 2 == 0 ? 1.0 : -1.0) * rho(n, n).real();
    }
    return s / std::numbers::pi;
}

namespace {

// W_{|m><n|}(x, p) = ((-1)^n / pi) sqrt(n!/m!) (sqrt(2) (x - i p))^(m-n)
//                    e^{-(x^2+p^2)} L_n^{(m-n)}(2 (x^2 + p^2)),   m >= n.
double wigner_point(const ComplexMatrix &rho, double x, double p, std::vector<double> &laguerre) {
    const auto d = static_cast<std::size_t>(rho.rows());
    const double r2 = x * x + p * p;
    const double y = 2.0 * r2;
    const double gauss = std::exp(-r2) / std::numbers::pi;
    const std::complex<double> z = std::sqrt(2.0) * std::complex<double>(x, -p);
    double total = 0.0;
    std::complex<double> zk = 1.0;
    laguerre.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double kk = static_cast<double>(k);
        // L_n^{(k)}(y) for n = 0 .. d-1-k.
        const std::size_t count = d - k;
        laguerre[0] = 1.0;
        if (count > 1) {
            laguerre[1] = 1.0 + kk - y;
        }
        for (std::size_t n = 1; n + 1 < count; ++n) {
            const double nn = static_cast<double>(n);
            laguerre[n + 1] = ((2.0 * nn + 1.0 + kk - y) * laguerre[n] - (nn + kk) * laguerre[n - 1]) / (nn + 1.0);
        }
        for (std::size_t n = 0; n < count; ++n) {
            const std::size_t m = n + k;
            const double nn = static_cast<double>(n);
            const double ratio = std::exp(0.5 * (std::lgamma(nn + 1.0) - std::lgamma(nn + kk + 1.0)));
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            const std::complex<double> w = sign * ratio * zk * laguerre[n];
            if (k == 0) {
                total += rho(m, n).real() * w.real();
            } else {
                total += 2.0 * (rho(m, n) * w).real();
            }
        }
        zk *= z;
    }
    return gauss * total;
}

}  // namespace

double wigner(const DensityMatrix &rho, double x, double p, double bound) {
    if (std::abs(x) > bound || std::abs(p) > bound) {
        throw DomainError("Wigner evaluation point outside [-" + std::to_string(bound) + ", " + std::to_string(bound) +
                          "]");
    }
    std::vector<double> scratch;
    return wigner_point(rho.matrix(), x, p, scratch);
}

double wigner_tail_estimate(const DensityMatrix &rho) {
    const std::size_t n = rho.cutoff();
    double tail = rho(n, n).real();
    if (n > 0) {
        tail += rho(n - 1, n - 1).real();
    }
    return tail;
}

double WignerSurface::integral() const {
    const std::size_t n = axis.size();
    if (n < 2) {
        return 0.0;
    }
    const double h = axis[1] - axis[0];
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double wj = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
            s += wi * wj * values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return s * h * h;
}

WignerSurface wigner_surface(const DensityMatrix &rho, double bound, std::size_t points) {
    if (points < 2 || !(bound > 0.0)) {
        throw DomainError("Wigner grid needs at least two points and a positive bound");
    }
    WignerSurface s;
    s.axis.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        s.axis[i] = -bound + 2.0 * bound * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    s.values.resize(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(points));
    std::vector<double> scratch;
    for (std::size_t i = 0; i < points; ++i) {
        for (std::size_t j = 0; j < points; ++j) {
            s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                wigner_point(rho.matrix(), s.axis[i], s.axis[j], scratch);
        }
    }
    s.tail_estimate = wigner_tail_estimate(rho);
    s.truncation_warning = s.tail_estimate > 1e-6;
    return s;
}

ComplexVector cat_vector(std::complex<double> alpha, CatParity parity, std::size_t cutoff) {
    if (std::norm(alpha) > static_cast<double>(cutoff) / 4.0 + 1e-12) {
        throw DomainError("|alpha|^2 exceeds cutoff / 4");
    }
    const double sign = parity == CatParity::kPlus ? 1.0 : -1.0;
    ComplexVector psi = ComplexVector::Zero(cutoff + 1);
    std::complex<double> term = 1.0;  // alpha^n / sqrt(n!)
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double parity_factor = 1.0 + sign * ((n % 2 == 0) ? 1.0 : -1.0);
        psi(n) = parity_factor * term;
        term *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    const double norm = psi.norm();
    if (!(norm > 0.0)) {
        throw DomainError("cat state with this amplitude and parity vanishes");
    }
    return psi / norm;
}

DensityMatrix cat_state(std::complex<double> alpha, CatParity parity, std::size_t cutoff) {
    return DensityMatrix::pure(cat_vector(alpha, parity, cutoff));
}

double fidelity_to_cat(const DensityMatrix &rho, std::complex<double> alpha, CatParity parity) {
    const ComplexVector psi = cat_vector(alpha, parity, rho.cutoff());
    return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

CatFit best_cat_fidelity(const DensityMatrix &rho, CatParity parity) {
    const double lo = 0.1;
    const double hi = std::min(3.0, std::sqrt(static_cast<double>(rho.cutoff()) / 4.0));
    auto fid = [&](double a) { return fidelity_to_cat(rho, a, parity); };

    constexpr int kScan = 48;
    std::vector<double> grid(kScan + 1), values(kScan + 1);
    std::size_t best = 0;
    for (int i = 0; i <= kScan; ++i) {
        grid[i] = lo + (hi - lo) * i / kScan;
        values[i] = fid(grid[i]);
        if (values[i] > values[best]) {
            best = static_cast<std::size_t>(i);
        }
    }
    if (best == 0 || best == static_cast<std::size_t>(kScan)) {
        return {values[best], grid[best]};
    }

    struct Ctx {
        const decltype(fid) *f;
    } ctx{&fid};
    gsl_function F;
    F.function = [](double a, void *p) { return -(*static_cast<Ctx *>(p)->f)(a); };
    F.params = &ctx;

    gsl_set_error_handler_off();
    gsl_min_fminimizer *s = gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection);
    gsl_min_fminimizer_set_with_values(s, &F, grid[best], -values[best], grid[best - 1], -values[best - 1],
                                       grid[best + 1], -values[best + 1]);
    int status = GSL_CONTINUE;
    for (int iter = 0; iter < 200 && status == GSL_CONTINUE; ++iter) {
        gsl_min_fminimizer_iterate(s);
        status = gsl_min_test_interval(gsl_min_fminimizer_x_lower(s), gsl_min_fminimizer_x_upper(s), 1e-4, 0.0);
    }
    const double alpha = gsl_min_fminimizer_x_minimum(s);
    const double f = -gsl_min_fminimizer_f_minimum(s);
    gsl_min_fminimizer_free(s);
    if (status != GSL_SUCCESS) {
        throw ConvergenceError("cat fidelity search did not converge");
    }
    return {f, alpha};
}

double uhlmann_fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ShapeMismatch("fidelity between density matrices of different cutoffs");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const ComplexMatrix sqrt_rho = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
    ComplexMatrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
    inner = 0.5 * (inner + inner.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> inner_es(inner, Eigen::EigenvaluesOnly);
    const double tr = inner_es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

void oscillator_eigenfunctions(double x, std::span<double> out) {
    if (out.empty()) {
        return;
    }
    // Run the recursion on a rescaled sequence and carry the scale in log form
    // so large |x| neither overflows nor underflows before the last step.
    double log_scale = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
    double prev = 0.0;
    double cur = 1.0;
    std::vector<double> raw(out.size());
    std::vector<double> logs(out.size());
    raw[0] = cur;
    logs[0] = log_scale;
    for (std::size_t n = 0; n + 1 < out.size(); ++n) {
        const double nn = static_cast<double>(n);
        const double next = std::sqrt(2.0 / (nn + 1.0)) * x * cur - std::sqrt(nn / (nn + 1.0)) * prev;
        prev = cur;
        cur = next;
        const double mag = std::abs(cur);
        if (mag > 1e100) {
            prev /= mag;
            cur /= mag;
            log_scale += std::log(mag);
        }
        raw[n + 1] = cur;
        logs[n + 1] = log_scale;
    }
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = raw[n] * std::exp(logs[n]);
    }
}

std::vector<double> UniformGrid::values() const {
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        v[i] = at(i);
    }
    return v;
}

namespace {

std::complex<double> expect_a(const DensityMatrix &rho) {
    std::complex<double> s = 0.0;
    for (std::size_t n = 1; n < rho.dim(); ++n) {
        s += std::sqrt(static_cast<double>(n)) * rho(n, n - 1);
    }
    return s;
}

std::complex<double> expect_a2(const DensityMatrix &rho) {
    std::complex<double> s = 0.0;
    for (std::size_t n = 2; n < rho.dim(); ++n) {
        s += std::sqrt(static_cast<double>(n * (n - 1))) * rho(n, n - 2);
    }
    return s;
}

double quadrature_mean(const DensityMatrix &rho, double theta) {
    return std::sqrt(2.0) * (expect_a(rho) * std::polar(1.0, -theta)).real();
}

}  // namespace

double quadrature_second_moment(const DensityMatrix &rho, double theta) {
    return (expect_a2(rho) * std::polar(1.0, -2.0 * theta)).real() + rho.mean_photon_number() + 0.5;
}

std::vector<double> quadrature_marginal(const DensityMatrix &rho, double theta, const UniformGrid &grid) {
    if (grid.points < 3 || !(grid.hi > grid.lo)) {
        throw DomainError("quadrature grid needs at least three points on a non-empty interval");
    }
    const double mean = quadrature_mean(rho, theta);
    const double sd = std::sqrt(std::max(quadrature_second_moment(rho, theta) - mean * mean, 0.0));
    if (grid.lo > mean - 6.0 * sd || grid.hi < mean + 6.0 * sd) {
        throw DomainError("quadrature grid covers fewer than 6 standard deviations");
    }
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXd kernel(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            kernel(m, n) = (rho(m, n) * std::polar(1.0, static_cast<double>(n - m) * theta)).real();
        }
    }
    std::vector<double> out(grid.points);
    Eigen::VectorXd psi(d);
    for (std::size_t i = 0; i < grid.points; ++i) {
        oscillator_eigenfunctions(grid.at(i), std::span<double>(psi.data(), static_cast<std::size_t>(d)));
        const double v = psi.dot(kernel * psi);
        if (v < -1e-10) {
            throw DomainError("quadrature marginal is negative (" + std::to_string(v) + "); density matrix is broken");
        }
        out[i] = std::max(v, 0.0);
    }
    return out;
}

UniformGrid marginal_grid_for(const DensityMatrix &rho, std::size_t points) {
    double reach = 6.0;
    for (int k = 0; k < 36; ++k) {
        const double theta = std::numbers::pi * k / 36.0;
        const double mean = quadrature_mean(rho, theta);
        const double sd = std::sqrt(std::max(quadrature_second_moment(rho, theta) - mean * mean, 0.0));
        reach = std::max(reach, std::abs(mean) + 7.0 * sd);
    }
    return UniformGrid{-reach, reach, points};
}

}  // namespace catfilter
