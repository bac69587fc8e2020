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

#include "catfilter/temporal.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <fftw3.h>
#include <gsl/gsl_multimin.h>
#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "catfilter/errors.h"

namespace catfilter {

namespace {

constexpr double kDecayMargin = 5.0;
constexpr double kCoincidentRates = 1e-6;

void require_rate(double gamma, const char *what) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw DomainError(std::string(what) + " must be positive");
    }
}

void require_room(const TimeGrid &grid, double t0, double left, double right) {
    if (t0 - grid.start < left * (1.0 - 1e-12) || grid.end() - t0 < right * (1.0 - 1e-12)) {
        throw DomainError("time grid too short to hold 5 decay constants around t0");
    }
}

// Unit norm with the largest-magnitude sample positive.
void normalize_in_place(TemporalMode &m) {
    double n = m.norm();
    const auto peak = std::max_element(m.values.begin(), m.values.end(),
                                       [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (peak != m.values.end() && *peak < 0.0) {
        n = -n;
        if (m.descriptor) {
            for (double &c : m.descriptor->c) {
                c = -c;
            }
        }
    }
    if (n == 0.0 || !std::isfinite(n)) {
        throw DomainError("mode vanishes on its grid");
    }
    for (double &v : m.values) {
        v /= n;
    }
}

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

Mat3 cascade_matrix(const std::array<double, 3> &tau) {
    Mat3 a = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
        a(i, i) = -1.0 / tau[i];
        if (i > 0) {
            a(i, i - 1) = 1.0 / tau[i];
        }
    }
    return a;
}

Vec3 cascade_input(const std::array<double, 3> &tau) { return Vec3(1.0 / tau[0], 0.0, 0.0); }

void require_sampling(const FilterCoefficients &coeffs, double dt) {
    const double tau_min = *std::min_element(coeffs.tau.begin(), coeffs.tau.end());
    if (!(dt > 0.0) || dt > tau_min / 10.0 * (1.0 + 1e-9)) {
        throw DomainError("sampling interval " + std::to_string(dt) + " s exceeds min(tau)/10 = " +
                          std::to_string(tau_min / 10.0) + " s");
    }
}

}  // namespace

TimeGrid TimeGrid::centered(double dt, std::size_t samples) {
    if (!(dt > 0.0) || samples < 2) {
        throw DomainError("time grid needs dt > 0 and at least two samples");
    }
    return TimeGrid{dt, samples, -dt * static_cast<double>(samples / 2)};
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = std::round((t - start) / dt);
    return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(samples - 1)));
}

bool TimeGrid::same_as(const TimeGrid &other) const {
    return samples == other.samples && std::abs(dt - other.dt) <= 1e-12 * dt &&
           std::abs(start - other.start) <= 1e-6 * dt;
}

TimeGrid default_time_grid() { return TimeGrid::centered(0.5e-9, 2048); }

double ModeDescriptor::bracket(double tau) const {
    if (tau <= 0.0) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) {
            s += c[i] * std::exp(gamma[i] * tau);
        }
        return s;
    }
    return (c[0] + c[1] + c[2] + c[3]) * std::exp(-gamma[3] * tau);
}

ModeDescriptor cascade_descriptor(const std::array<double, 4> &g) {
    for (double v : g) {
        require_rate(v, "cavity rate");
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (std::abs(g[i] - g[j]) / g[j] < kCoincidentRates) {
                throw DomainError("cascade rates coincide; no closed form");
            }
        }
    }
    ModeDescriptor d;
    d.gamma = g;
    const double g1 = g[0], g2 = g[1], g3 = g[2], g4 = g[3];
    d.c[0] = 2.0 * g4 * (g3 - g2) / (g4 * g4 - g1 * g1);
    d.c[1] = 2.0 * g4 * (g1 - g3) / (g4 * g4 - g2 * g2);
    d.c[2] = 2.0 * g4 * (g2 - g1) / (g4 * g4 - g3 * g3);
    d.c[3] = (g1 - g2) / (g4 - g3) + (g2 - g3) / (g4 - g1) + (g3 - g1) / (g4 - g2);
    double s = 0.0;
    double sum_c = 0.0;
    for (int i = 0; i < 4; ++i) {
        sum_c += d.c[i];
        for (int j = 0; j < 4; ++j) {
            s += d.c[i] * d.c[j] / (g[i] + g[j]);
        }
    }
    s += sum_c * sum_c / (2.0 * g4);
    if (!(s > 0.0)) {
        throw DomainError("cascade mode has non-positive norm");
    }
    d.norm = 1.0 / std::sqrt(s);
    return d;
}

double TemporalMode::norm() const {
    double s = 0.0;
    for (double v : values) {
        s += v * v;
    }
    return std::sqrt(s * grid.dt);
}

double TemporalMode::peak() const {
    double p = 0.0;
    for (double v : values) {
        p = std::max(p, std::abs(v));
    }
    return p;
}

TemporalMode opo_mode(double gamma, double t0, const TimeGrid &grid) {
    require_rate(gamma, "OPO rate");
    require_room(grid, t0, kDecayMargin / gamma, kDecayMargin / gamma);
    TemporalMode m{grid, std::vector<double>(grid.samples), t0, std::nullopt};
    for (std::size_t i = 0; i < grid.samples; ++i) {
        m.values[i] = std::sqrt(gamma) * std::exp(-gamma * std::abs(grid.at(i) - t0));
    }
    normalize_in_place(m);
    return m;
}

TemporalMode filter_mode(double gamma, double t0, const TimeGrid &grid) {
    require_rate(gamma, "filter rate");
    require_room(grid, t0, kDecayMargin / gamma, 0.0);
    TemporalMode m{grid, std::vector<double>(grid.samples, 0.0), t0, std::nullopt};
    for (std::size_t i = 0; i < grid.samples; ++i) {
        const double tau = grid.at(i) - t0;
        if (tau <= 0.0) {
            m.values[i] = std::sqrt(2.0 * gamma) * std::exp(gamma * tau);
        }
    }
    normalize_in_place(m);
    return m;
}

namespace {

void require_cascade_room(const std::array<double, 4> &g, double t0, const TimeGrid &grid) {
    for (double v : g) {
        require_rate(v, "cavity rate");
    }
    const double slowest = *std::min_element(g.begin(), g.end());
    require_room(grid, t0, kDecayMargin / slowest, kDecayMargin / g[3]);
}

bool rates_coincide(const std::array<double, 4> &g) {
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (std::abs(g[i] - g[j]) / g[j] < kCoincidentRates) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

TemporalMode composite_mode(const std::array<double, 4> &g, double t0, const TimeGrid &grid) {
    require_cascade_room(g, t0, grid);
    if (rates_coincide(g)) {
        return composite_mode_by_convolution(g, t0, grid);
    }
    const ModeDescriptor d = cascade_descriptor(g);
    TemporalMode m{grid, std::vector<double>(grid.samples), t0, d};
    for (std::size_t i = 0; i < grid.samples; ++i) {
        m.values[i] = d.norm * d.bracket(grid.at(i) - t0);
    }
    normalize_in_place(m);
    return m;
}

TemporalMode composite_mode_by_convolution(const std::array<double, 4> &g, double t0, const TimeGrid &grid) {
    require_cascade_room(g, t0, grid);
    const double fastest = *std::max_element(g.begin(), g.end());
    const auto sub = static_cast<std::size_t>(std::max(1.0, std::ceil(grid.dt * 200.0 * fastest)));
    const double h = grid.dt / static_cast<double>(sub);
    const std::size_t n = (grid.samples - 1) * sub + 1;

    // OPO response on the refined grid, then each anti-causal Lorentzian filter
    //   y(t) = sqrt(2 gamma) int_t^inf e^{-gamma (s - t)} x(s) ds
    // by a backward recursion that integrates piecewise-linear x exactly.
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = std::sqrt(g[3]) * std::exp(-g[3] * std::abs(grid.start + h * static_cast<double>(k) - t0));
    }
    std::vector<double> y(n);
    for (int f = 0; f < 3; ++f) {
        const double gm = g[f];
        const double decay = std::exp(-gm * h);
        const double a = -std::expm1(-gm * h) / gm;
        const double b = (a - h * decay) / (gm * h);
        const double scale = std::sqrt(2.0 * gm);
        y[n - 1] = 0.0;
        for (std::size_t k = n - 1; k-- > 0;) {
            y[k] = decay * y[k + 1] + scale * (x[k] * (a - b) + x[k + 1] * b);
        }
        x.swap(y);
    }
    TemporalMode m{grid, std::vector<double>(grid.samples), t0, std::nullopt};
    for (std::size_t i = 0; i < grid.samples; ++i) {
        m.values[i] = x[i * sub];
    }
    normalize_in_place(m);
    return m;
}

TemporalMode place_on_grid(const TemporalMode &m, const TimeGrid &target) {
    if (std::abs(m.grid.dt - target.dt) > 1e-12 * target.dt) {
        throw ShapeMismatch("cannot place a mode on a grid with a different spacing");
    }
    const double shift = (m.grid.start - target.start) / target.dt;
    const double rounded = std::round(shift);
    if (std::abs(shift - rounded) > 1e-6) {
        throw ShapeMismatch("grids are not sample-aligned");
    }
    const auto offset = static_cast<std::ptrdiff_t>(rounded);
    TemporalMode out{target, std::vector<double>(target.samples, 0.0), m.t0, std::nullopt};
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + offset;
        if (j >= 0 && j < static_cast<std::ptrdiff_t>(target.samples)) {
            out.values[static_cast<std::size_t>(j)] = m.values[i];
        }
    }
    normalize_in_place(out);
    return out;
}

TemporalMode window_of(const TemporalMode &m, std::size_t first, std::size_t count) {
    if (first + count > m.values.size() || count < 2) {
        throw DomainError("window exceeds the mode's grid");
    }
    TimeGrid g{m.grid.dt, count, m.grid.at(first)};
    TemporalMode out{g, std::vector<double>(m.values.begin() + static_cast<std::ptrdiff_t>(first),
                                            m.values.begin() + static_cast<std::ptrdiff_t>(first + count)),
                     m.t0, std::nullopt};
    return out;
}

double inner_product(const TemporalMode &f, const TemporalMode &g) {
    if (!f.grid.same_as(g.grid) || f.values.size() != g.values.size()) {
        throw ShapeMismatch("inner product of modes on different time grids");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        s += f.values[i] * g.values[i];
    }
    return s * f.grid.dt;
}

ModeSpectrum mode_power_spectrum(const TemporalMode &f) {
    const std::size_t n = f.values.size();
    if (n < 4) {
        throw DomainError("mode grid too short for a spectrum");
    }
    ModeSpectrum out;
    const double peak = f.peak();
    out.leakage_warning = std::abs(f.values.front()) > 1e-3 * peak || std::abs(f.values.back()) > 1e-3 * peak;

    std::vector<double> in(f.values);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                          reinterpret_cast<fftw_complex *>(spec.data()), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    out.d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * f.grid.dt);
    out.omega.resize(n);
    out.power.resize(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(j) - half;
        const auto idx = static_cast<std::size_t>(k < 0 ? -k : k);
        out.omega[j] = out.d_omega * static_cast<double>(k);
        out.power[j] = std::norm(spec[std::min(idx, n / 2)]) * f.grid.dt * f.grid.dt;
        total += out.power[j];
    }
    total *= out.d_omega / (2.0 * std::numbers::pi);
    for (double &p : out.power) {
        p /= total;
    }
    return out;
}

FilterCoefficients make_filter(const std::array<double, 3> &tau) {
    for (double t : tau) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw DomainError("filter time constants must be positive");
        }
    }
    // Energy of the unit-DC cascade, int h^2 dt = c P c^T with A P + P A^T + b b^T = 0.
    const Mat3 a = cascade_matrix(tau);
    const Vec3 b = cascade_input(tau);
    const Mat3 id = Mat3::Identity();
    Eigen::Matrix<double, 9, 9> kron;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            kron.block<3, 3>(3 * i, 3 * j) = id(i, j) * a + a(i, j) * id;
        }
    }
    const Mat3 q = b * b.transpose();
    const Eigen::Matrix<double, 9, 1> rhs = -Eigen::Map<const Eigen::Matrix<double, 9, 1>>(q.data());
    const Eigen::Matrix<double, 9, 1> p = kron.partialPivLu().solve(rhs);
    const double energy = p(8);
    FilterCoefficients c;
    c.tau = tau;
    c.gain = 1.0 / std::sqrt(energy);
    return c;
}

double lpf_impulse_response(const FilterCoefficients &coeffs, double t) {
    if (t < 0.0) {
        return 0.0;
    }
    const Mat3 a = cascade_matrix(coeffs.tau);
    const Mat3 e = (a * t).exp();
    return coeffs.gain * (e * cascade_input(coeffs.tau))(2);
}

std::vector<double> lpf_sampled_response(const FilterCoefficients &coeffs, double dt, std::size_t n) {
    const Mat3 phi = (cascade_matrix(coeffs.tau) * dt).exp();
    Vec3 x = cascade_input(coeffs.tau);
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) {
        h[k] = coeffs.gain * x(2);
        x = phi * x;
    }
    return h;
}

std::vector<double> lpf_apply(const FilterCoefficients &coeffs, const std::vector<double> &trace, double dt) {
    require_sampling(coeffs, dt);
    const Mat3 phi = (cascade_matrix(coeffs.tau) * dt).exp();
    const Vec3 b = cascade_input(coeffs.tau) * dt;
    Vec3 x = Vec3::Zero();
    std::vector<double> y(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        x = phi * x + b * trace[k];
        y[k] = coeffs.gain * x(2);
    }
    return y;
}

double lpf_output_at(const FilterCoefficients &coeffs, const std::vector<double> &trace, double dt,
                     std::size_t index) {
    require_sampling(coeffs, dt);
    if (index >= trace.size()) {
        throw DomainError("readout index beyond the trace");
    }
    const std::vector<double> h = lpf_sampled_response(coeffs, dt, index + 1);
    double s = 0.0;
    for (std::size_t j = 0; j <= index; ++j) {
        s += h[index - j] * trace[j];
    }
    return s * dt;
}

TemporalMode lpf_mode(const FilterCoefficients &coeffs, double t0, const TimeGrid &grid) {
    const std::size_t anchor = grid.index_of(t0);
    const std::vector<double> h = lpf_sampled_response(coeffs, grid.dt, anchor + 1);
    TemporalMode m{grid, std::vector<double>(grid.samples, 0.0), t0, std::nullopt};
    for (std::size_t j = 0; j <= anchor; ++j) {
        m.values[j] = h[anchor - j];
    }
    normalize_in_place(m);
    return m;
}

namespace {

struct DesignContext {
    const TemporalMode *target;
    double tau_min;
    std::size_t anchor;
    double target_norm;
};

// tau = tau_min + e^p, saturating once the excess is negligible so the simplex
// can contract onto the boundary instead of drifting toward p = -inf.
std::array<double, 3> taus_from(const gsl_vector *p, double tau_min) {
    const double floor = std::log(1e-4 * tau_min);
    std::array<double, 3> tau{};
    for (int i = 0; i < 3; ++i) {
        tau[i] = tau_min + std::exp(std::max(gsl_vector_get(p, i), floor));
    }
    return tau;
}

double design_overlap(const std::array<double, 3> &tau, const DesignContext &ctx) {
    const FilterCoefficients c = make_filter(tau);
    const std::vector<double> h = lpf_sampled_response(c, ctx.target->grid.dt, ctx.anchor + 1);
    double dot = 0.0;
    double hh = 0.0;
    for (std::size_t j = 0; j <= ctx.anchor; ++j) {
        const double v = h[ctx.anchor - j];
        dot += v * ctx.target->values[j];
        hh += v * v;
    }
    return dot / (std::sqrt(hh) * ctx.target_norm);
}

double design_objective(const gsl_vector *p, void *params) {
    const auto *ctx = static_cast<const DesignContext *>(params);
    for (int i = 0; i < 3; ++i) {
        if (std::abs(gsl_vector_get(p, i)) > 700.0) {
            return 1.0;
        }
    }
    return -design_overlap(taus_from(p, ctx->tau_min), *ctx);
}

}  // namespace

FilterCoefficients design_lpf(const TemporalMode &target) {
    const TimeGrid &grid = target.grid;
    const std::size_t anchor = grid.index_of(target.t0);
    double before = 0.0, after = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < grid.samples; ++i) {
        const double w = target.values[i] * target.values[i];
        if (i <= anchor) {
            before += w;
            moment += w * (target.t0 - grid.at(i));
        } else {
            after += w;
        }
    }
    if (!(before > 0.0) || after > 1e-2 * (before + after)) {
        throw DomainError("LPF design target must be causal-rising (vanish after t0)");
    }
    DesignContext ctx{&target, 10.0 * grid.dt, anchor, std::sqrt(before + after)};

    // A one-sided exponential of rate gamma has sum w (t0 - t) / sum w = 1 / (2 gamma).
    const double scale = 2.0 * moment / before;
    const std::array<std::array<double, 3>, 3> starts = {{
        {scale, 0.7 * scale, 0.6 * scale},
        {0.6 * scale, 0.35 * scale, 0.3 * scale},
        {1.2 * scale, 0.25 * scale, 0.12 * scale},
    }};

    gsl_multimin_function fn{&design_objective, 3, &ctx};
    gsl_vector *x = gsl_vector_alloc(3);
    gsl_vector *step = gsl_vector_alloc(3);
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);

    double best = -2.0;
    std::array<double, 3> best_tau{};
    for (const auto &start : starts) {
        for (int i = 0; i < 3; ++i) {
            gsl_vector_set(x, i, std::log(std::max(start[i] - ctx.tau_min, 0.1 * ctx.tau_min)));
        }
        gsl_vector_set_all(step, 0.5);
        gsl_multimin_fminimizer_set(s, &fn, x, step);
        int status = GSL_CONTINUE;
        for (int iter = 0; iter < 3000 && status == GSL_CONTINUE; ++iter) {
            if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) {
                break;
            }
            status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-5);
        }
        const double overlap = -gsl_multimin_fminimizer_minimum(s);
        if (overlap > best) {
            best = overlap;
            best_tau = taus_from(gsl_multimin_fminimizer_x(s), ctx.tau_min);
        }
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);

    if (best < 0.95) {
        throw ConvergenceError("LPF design stagnated at overlap " + std::to_string(best));
    }
    std::sort(best_tau.begin(), best_tau.end(), std::greater<>());
    FilterCoefficients c = make_filter(best_tau);
    c.overlap = best;
    return c;
}

double rate_from_fwhm(double fwhm_hz) { return std::numbers::pi * fwhm_hz; }

std::array<double, 4> table_cavity_rates() {
    return {rate_from_fwhm(136e6), rate_from_fwhm(18.7e6), rate_from_fwhm(94e6), rate_from_fwhm(130e6)};
}

}  // namespace catfilter
