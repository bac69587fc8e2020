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

// Temporal modes of the heralded wave packet and the real-time low-pass filter.
//
// Rates are angular (rad/s) and half-width based: a cavity with full linewidth
// FWHM has gamma = 2 pi FWHM / 2. Modes are real amplitudes in s^{-1/2},
// normalized so that sum_i f_i^2 dt = 1 on their grid.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace catfilter {

/// Uniform time samples t_i = start + i dt.
struct TimeGrid {
    double dt = 0.5e-9;
    std::size_t samples = 2048;
    double start = -512e-9;

    /// Grid of `samples` points centred on zero: t_{samples/2} = 0.
    static TimeGrid centered(double dt, std::size_t samples);

    double at(std::size_t i) const { return start + dt * static_cast<double>(i); }
    double end() const { return at(samples - 1); }
    /// Index of the sample nearest to t (clamped to the grid).
    std::size_t index_of(double t) const;
    bool same_as(const TimeGrid &other) const;
};

/// Default acquisition grid: 2048 samples at 0.5 ns.
TimeGrid default_time_grid();

/// Rates and coefficients of the analytic cascade mode
///   f(t) = N sum_{i<=4} c_i e^{gamma_i (t - t0)}        t <= t0
///   f(t) = N (sum_i c_i) e^{-gamma_4 (t - t0)}          t >  t0
/// where gamma_1..3 are the filter cavities and gamma_4 the OPO.
struct ModeDescriptor {
    std::array<double, 4> gamma{};
    std::array<double, 4> c{};
    double norm = 0.0;

    /// Unnormalized bracket (without N) at time offset t - t0.
    double bracket(double tau) const;
};

/// Computes c_1..c_4 and N for the given rates. Requires distinct rates.
ModeDescriptor cascade_descriptor(const std::array<double, 4> &gammas);

struct TemporalMode {
    TimeGrid grid;
    std::vector<double> values;
    double t0 = 0.0;
    std::optional<ModeDescriptor> descriptor;

    double norm() const;
    double peak() const;
};

/// Double-sided exponential sqrt(gamma) e^{-gamma |t - t0|} of a bare OPO.
TemporalMode opo_mode(double gamma_opo, double t0 = 0.0, const TimeGrid &grid = default_time_grid());

/// One-sided rising exponential sqrt(2 gamma) e^{gamma (t - t0)} for t <= t0, zero after.
TemporalMode filter_mode(double gamma_filter, double t0 = 0.0, const TimeGrid &grid = default_time_grid());

/// OPO mode passed through three Lorentzian filter cavities. gammas = {FC-1, FC-2,
/// FC-3, OPO}. Uses the closed form when the rates are distinct and falls back
/// to numerical convolution when two rates coincide to 1e-6 relative.
TemporalMode composite_mode(const std::array<double, 4> &gammas, double t0 = 0.0,
                            const TimeGrid &grid = default_time_grid());

/// The same cascade computed by direct numerical convolution of the OPO
/// response with each filter response on a refined grid.
TemporalMode composite_mode_by_convolution(const std::array<double, 4> &gammas, double t0 = 0.0,
                                           const TimeGrid &grid = default_time_grid());

/// Copies a mode onto another grid with the same spacing whose samples are
/// aligned with it; samples outside the source are zero. Renormalizes.
TemporalMode place_on_grid(const TemporalMode &m, const TimeGrid &target);

/// Restriction of a mode to the window [first, first + count) of its grid (not renormalized).
TemporalMode window_of(const TemporalMode &m, std::size_t first, std::size_t count);

/// Discrete integral of f g dt. Throws ShapeMismatch on different grids.
double inner_product(const TemporalMode &f, const TemporalMode &g);

struct ModeSpectrum {
    std::vector<double> omega;  // ascending angular frequencies, rad/s
    std::vector<double> power;  // |F(omega)|^2, normalized to sum power d_omega / 2 pi = 1
    double d_omega = 0.0;
    bool leakage_warning = false;
};

/// Power spectrum of a mode from its DFT. Flags leakage when either grid edge
/// carries more than 1e-3 of the peak amplitude.
ModeSpectrum mode_power_spectrum(const TemporalMode &f);

/// Three cascaded first-order low-pass sections. `gain` scales the cascade so its
/// impulse response has unit L2 norm; it equals the filter's DC gain.
struct FilterCoefficients {
    std::array<double, 3> tau{};
    double gain = 1.0;
    double overlap = 0.0;  // achieved overlap with the design target, if any
};

/// Builds coefficients for the given time constants with the unit-L2 gain.
FilterCoefficients make_filter(const std::array<double, 3> &tau);

/// Continuous impulse response h(t) (zero for t < 0).
double lpf_impulse_response(const FilterCoefficients &coeffs, double t);

/// Sampled impulse response h(k dt), k = 0 .. n-1.
std::vector<double> lpf_sampled_response(const FilterCoefficients &coeffs, double dt, std::size_t n);

/// Filters a sampled signal: y[k] = sum_{j<=k} h((k-j) dt) u[j] dt, evaluated
/// recursively with the exact state transition of the cascade.
/// Requires dt <= min(tau) / 10.
std::vector<double> lpf_apply(const FilterCoefficients &coeffs, const std::vector<double> &trace, double dt);

/// y[index] of lpf_apply computed as a single dot product.
double lpf_output_at(const FilterCoefficients &coeffs, const std::vector<double> &trace, double dt,
                     std::size_t index);

/// Time-reversed impulse response anchored at t0, as a normalized mode. Its
/// inner product with a trace equals the filter output at t0 up to the norm.
TemporalMode lpf_mode(const FilterCoefficients &coeffs, double t0, const TimeGrid &grid);

/// Optimizes the three time constants (each at least 10 grid steps) to maximize
/// the overlap between lpf_mode and the target. Requires a target with less than
/// 1% of its norm after t0; throws ConvergenceError below overlap 0.95.
FilterCoefficients design_lpf(const TemporalMode &target);

/// Table-1 cavity rates {FC-1, FC-2, FC-3, OPO} in rad/s.
std::array<double, 4> table_cavity_rates();

/// gamma = 2 pi FWHM / 2.
double rate_from_fwhm(double fwhm_hz);

}  // namespace catfilter
