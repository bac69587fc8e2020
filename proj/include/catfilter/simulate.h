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

// Synthetic CW homodyne acquisition: squeezed-vacuum background traces with
// heralded events embedded in the temporal mode, read out by mode integration
// (post-processing) and by the low-pass filter (real time).

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "catfilter/config.h"
#include "catfilter/fock.h"
#include "catfilter/mode_est.h"
#include "catfilter/spectra.h"
#include "catfilter/temporal.h"

namespace catfilter {

enum class EventLabel { kSingle, kTwoPhoton, kFake };

std::string_view label_name(EventLabel label);
/// Inverse of label_name; throws ParseError on unknown names.
EventLabel parse_label(std::string_view name);

/// Heralded states per event label, all after the tap and the loss budget.
struct HeraldModel {
    GaussianInModeState in_mode;  // ancestor squeezing seen by the temporal mode
    DensityMatrix ancestor;
    DensityMatrix single;
    DensityMatrix two_photon;
    DensityMatrix fake;
    double p_single = 0.0;
    double p_two = 0.0;

    const DensityMatrix &state(EventLabel label) const;
    /// Ensemble state for the given label fractions.
    DensityMatrix mixture(double fake_fraction, double two_photon_fraction) const;
};

/// Ancestor = squeezed vacuum from the lossless spectrum projected on `mode`;
/// single / two-photon = 1- / 2-photon subtraction at the tap; fake = ancestor
/// through the tap. Each is then sent through the loss items.
HeraldModel build_herald_model(const ExperimentConfig &cfg, const TemporalMode &mode);

/// P(2) / (P(1) + P(2)) at the tap for the lossless DC squeezing of pump xi.
double predicted_two_photon_fraction(double xi, double reflectivity, std::size_t cutoff = kDefaultCutoff);

/// Even-photon budget: DC-squeezed ancestor (spectrum loss included),
/// single-photon subtraction, one-photon loss approximation of the loss items
/// on both the subtracted state and the ancestor, then mixing with the
/// ancestor at the total mixedness.
DensityMatrix even_budget_state(const ExperimentConfig &cfg);
double predicted_even_sum(const ExperimentConfig &cfg);

/// Inverse-CDF sampler of Pr(x | theta) with linear interpolation.
class QuadratureSampler {
   public:
    QuadratureSampler(const DensityMatrix &rho, double theta, std::size_t points = 4001);
    /// Quantile at u in [0, 1].
    double quantile(double u) const;
    double draw(std::mt19937_64 &rng) const;

   private:
    std::vector<double> x_;
    std::vector<double> cdf_;
};

double sample_heralded_quadrature(const DensityMatrix &rho, double theta, std::mt19937_64 &rng);

/// Stationary Gaussian noise with two-sided PSD S_theta(f) / 2 (vacuum = 1/2),
/// S_theta = S_+ cos^2 theta + S_- sin^2 theta, by colouring white noise in the
/// frequency domain. Samples are periodic over the grid length. Requires a
/// sample rate of at least 10x the OPO full width and a frequency resolution
/// finer than f_HWHM / 10.
class BackgroundSynthesizer {
   public:
    BackgroundSynthesizer(const SqueezingSpectrum &s, double theta, const TimeGrid &grid);
    ~BackgroundSynthesizer();
    BackgroundSynthesizer(const BackgroundSynthesizer &) = delete;
    BackgroundSynthesizer &operator=(const BackgroundSynthesizer &) = delete;

    void draw(std::mt19937_64 &rng, std::vector<double> &out);

   private:
    struct Plan;
    std::size_t n_;
    std::vector<double> amplitude_;
    std::unique_ptr<Plan> plan_;
};

std::vector<double> background_trace(const SqueezingSpectrum &s, double theta, const TimeGrid &grid,
                                     std::uint64_t seed);

/// trace <- trace + (x_h - <trace, f>) f, so that <trace, f> = x_h. The mode must
/// be negligible (< 1e-3 of its peak) at both ends of the trace.
void embed_event(std::vector<double> &trace, const TemporalMode &mode, double x_h);

/// Post-processing readout <trace, f> on the mode's grid.
double mode_readout(const std::vector<double> &trace, const TemporalMode &mode);

/// Real-time readout: the LPF output sampled at t0, with the gain calibrated
/// so the sampled impulse response has unit norm on the grid (vacuum input
/// reads variance 1/2).
class RealtimeReadout {
   public:
    RealtimeReadout(const FilterCoefficients &coeffs, const TimeGrid &grid, double t0);
    double operator()(const std::vector<double> &trace) const;

   private:
    std::vector<double> kernel_;  // kernel_[j] multiplies trace[j]
    double dt_;
};

/// Per-event generator seeded from (seed, phase, event, stream).
std::mt19937_64 event_rng(std::uint64_t seed, std::size_t phase, std::size_t event, std::uint32_t stream);

struct QuadratureDataset {
    std::string name;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<double> phases_deg;
    std::size_t events_per_phase = 0;
    // Phase-major: event e of phase k sits at k * events_per_phase + e.
    std::vector<double> x_post;
    std::vector<double> x_realtime;
    std::vector<EventLabel> labels;

    std::size_t size() const { return x_post.size(); }
    void validate() const;
    /// Pearson correlation of the two channels for each phase.
    std::vector<double> channel_correlations() const;
};

struct ExperimentResult {
    QuadratureDataset data;
    TemporalMode theory_mode;
    TemporalMode estimated_mode;
    FilterCoefficients lpf;
    double overlap_theory = 0.0;  // estimated vs theory mode
    double overlap_lpf = 0.0;     // LPF response vs estimated mode
    bool pca_ambiguous = false;
};

/// Traces at phase theta with heralded events drawn per the label fractions.
/// Returns the window [first, first + count) of every trace.
TraceEnsemble simulate_traces(const ExperimentConfig &cfg, const HeraldModel &model, const TemporalMode &mode,
                              std::size_t phase_index, std::size_t count, std::size_t first, std::size_t width,
                              std::uint32_t stream);

/// Mode-estimation window {first, count}: five decay constants of the slowest
/// cavity before the herald and five OPO decay constants after it.
std::pair<std::size_t, std::size_t> estimation_window(const TimeGrid &grid, double t0,
                                                     const std::array<double, 4> &rates);

/// Full pipeline: PCA mode estimate on the anti-squeezed phase, LPF design on
/// the theory mode, then every phase and event through both readouts.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

}  // namespace catfilter
