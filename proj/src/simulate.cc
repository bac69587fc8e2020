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

#include "catfilter/simulate.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "catfilter/errors.h"

namespace catfilter {

std::string_view label_name(EventLabel label) {
    switch (label) {
        case EventLabel::kSingle:
            return "single";
        case EventLabel::kTwoPhoton:
            return "two_photon";
        case EventLabel::kFake:
            return "fake";
    }
    return "single";
}

EventLabel parse_label(std::string_view name) {
    for (EventLabel l : {EventLabel::kSingle, EventLabel::kTwoPhoton, EventLabel::kFake}) {
        if (label_name(l) == name) {
            return l;
        }
    }
    throw ParseError("unknown event label '" + std::string(name) + "'", 0);
}

const DensityMatrix &HeraldModel::state(EventLabel label) const {
    switch (label) {
        case EventLabel::kTwoPhoton:
            return two_photon;
        case EventLabel::kFake:
            return fake;
        case EventLabel::kSingle:
            break;
    }
    return single;
}

DensityMatrix HeraldModel::mixture(double fake_fraction, double two_photon_fraction) const {
    if (fake_fraction < 0.0 || two_photon_fraction < 0.0 || fake_fraction + two_photon_fraction > 1.0) {
        throw DomainError("label fractions must be non-negative and sum to at most 1");
    }
    const double single_fraction = 1.0 - fake_fraction - two_photon_fraction;
    return DensityMatrix::normalized(single_fraction * single.matrix() + two_photon_fraction * two_photon.matrix() +
                                     fake_fraction * fake.matrix());
}

HeraldModel build_herald_model(const ExperimentConfig &cfg, const TemporalMode &mode) {
    cfg.validate();
    const auto cutoff = static_cast<std::size_t>(cfg.fock_cutoff);
    const double r = cfg.tap_reflectivity;
    const double eta = 1.0 - cfg.total_loss();
    HeraldModel m{wavepacket_variances(mode, cfg.spectrum(0.0)), DensityMatrix::vacuum(cutoff),
                  DensityMatrix::vacuum(cutoff), DensityMatrix::vacuum(cutoff), DensityMatrix::vacuum(cutoff)};
    m.ancestor = squeezed_vacuum(m.in_mode, cutoff);
    const HeraldResult one = photon_subtract(m.ancestor, r, 1);
    const HeraldResult two = photon_subtract(m.ancestor, r, 2);
    m.p_single = one.probability;
    m.p_two = two.probability;
    m.single = apply_loss(one.state, eta);
    m.two_photon = apply_loss(two.state, eta);
    m.fake = apply_loss(m.ancestor, r * eta);
    return m;
}

double predicted_two_photon_fraction(double xi, double reflectivity, std::size_t cutoff) {
    if (!(xi > 0.0 && xi < 1.0)) {
        throw DomainError("xi must lie in (0, 1)");
    }
    const double r_dc = std::log((1.0 + xi) / (1.0 - xi));
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(r_dc, 0.0), cutoff);
    const double p1 = herald_probability(anc, reflectivity, 1);
    const double p2 = herald_probability(anc, reflectivity, 2);
    return p2 / (p1 + p2);
}

DensityMatrix even_budget_state(const ExperimentConfig &cfg) {
    cfg.validate();
    const auto cutoff = static_cast<std::size_t>(cfg.fock_cutoff);
    const double s_minus = squeezing_spectrum(cfg.spectrum(cfg.spectrum_loss()), 0.0, Quadrature::kSqueezed);
    const double r = -0.5 * std::log(s_minus);
    const DensityMatrix anc = squeezed_vacuum(GaussianInModeState::from_effective(r, 0.0), cutoff);
    const DensityMatrix sub = photon_subtract(anc, cfg.tap_reflectivity, 1).state;
    const double loss = cfg.total_loss();
    return mix(apply_loss_one_photon_approx(sub, loss), apply_loss_one_photon_approx(anc, loss),
               cfg.fake_counts + cfg.two_photon);
}

double predicted_even_sum(const ExperimentConfig &cfg) { return even_sum(even_budget_state(cfg)); }

QuadratureSampler::QuadratureSampler(const DensityMatrix &rho, double theta, std::size_t points) {
    const UniformGrid grid = marginal_grid_for(rho, points);
    x_ = grid.values();
    const std::vector<double> p = quadrature_marginal(rho, theta, grid);
    cdf_.assign(p.size(), 0.0);
    const double h = grid.step();
    for (std::size_t i = 1; i < p.size(); ++i) {
        cdf_[i] = cdf_[i - 1] + 0.5 * h * (std::max(p[i - 1], 0.0) + std::max(p[i], 0.0));
    }
    const double total = cdf_.back();
    if (!(total > 0.0)) {
        throw DomainError("quadrature marginal has no mass");
    }
    for (double &c : cdf_) {
        c /= total;
    }
}

double QuadratureSampler::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) {
        // Skip the flat zero-mass head.
        it = std::upper_bound(cdf_.begin(), cdf_.end(), 0.0);
        return x_[static_cast<std::size_t>(it - cdf_.begin()) - 1];
    }
    if (it == cdf_.end()) {
        return x_.back();
    }
    const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[i - 1];
    const double c1 = cdf_[i];
    const double w = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return x_[i - 1] + w * (x_[i] - x_[i - 1]);
}

double QuadratureSampler::draw(std::mt19937_64 &rng) const {
    return quantile(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

double sample_heralded_quadrature(const DensityMatrix &rho, double theta, std::mt19937_64 &rng) {
    return QuadratureSampler(rho, theta).draw(rng);
}

struct BackgroundSynthesizer::Plan {
    fftw_complex *spectrum = nullptr;
    double *signal = nullptr;
    fftw_plan plan = nullptr;

    ~Plan() {
        if (plan != nullptr) {
            fftw_destroy_plan(plan);
        }
        fftw_free(spectrum);
        fftw_free(signal);
    }
};

BackgroundSynthesizer::BackgroundSynthesizer(const SqueezingSpectrum &s, double theta, const TimeGrid &grid)
    : n_(grid.samples), plan_(std::make_unique<Plan>()) {
    s.validate();
    const double fs = 1.0 / grid.dt;
    const double df = fs / static_cast<double>(n_);
    std::string problem;
    if (n_ < 4 || n_ % 2 != 0) {
        problem = "background synthesis needs an even number of samples >= 4";
    } else if (fs < 20.0 * s.f_hwhm) {
        problem = "sample rate must be at least 10x the OPO full width";
    } else if (df >= s.f_hwhm / 10.0) {
        problem = "trace too short: frequency resolution must be below f_HWHM / 10";
    }
    if (!problem.empty()) {
        throw DomainError(problem);
    }
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = 1.0 - c2;
    const std::size_t bins = n_ / 2 + 1;
    amplitude_.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double f = static_cast<double>(k) * df;
        const double st = squeezing_spectrum(s, f, Quadrature::kAntiSqueezed) * c2 +
                          squeezing_spectrum(s, f, Quadrature::kSqueezed) * s2;
        amplitude_[k] = std::sqrt(static_cast<double>(n_) * st / (2.0 * grid.dt));
    }
    plan_->spectrum = fftw_alloc_complex(bins);
    plan_->signal = fftw_alloc_real(n_);
    plan_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(n_), plan_->spectrum, plan_->signal, FFTW_ESTIMATE);
}

BackgroundSynthesizer::~BackgroundSynthesizer() = default;

void BackgroundSynthesizer::draw(std::mt19937_64 &rng, std::vector<double> &out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t bins = amplitude_.size();
    const double half = std::sqrt(0.5);
    for (std::size_t k = 0; k < bins; ++k) {
        if (k == 0 || k == bins - 1) {
            plan_->spectrum[k][0] = amplitude_[k] * normal(rng);
            plan_->spectrum[k][1] = 0.0;
        } else {
            plan_->spectrum[k][0] = amplitude_[k] * half * normal(rng);
            plan_->spectrum[k][1] = amplitude_[k] * half * normal(rng);
        }
    }
    fftw_execute(plan_->plan);
    out.resize(n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        out[j] = plan_->signal[j] * scale;
    }
}

std::vector<double> background_trace(const SqueezingSpectrum &s, double theta, const TimeGrid &grid,
                                     std::uint64_t seed) {
    BackgroundSynthesizer synth(s, theta, grid);
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    synth.draw(rng, out);
    return out;
}

void embed_event(std::vector<double> &trace, const TemporalMode &mode, double x_h) {
    if (trace.size() != mode.values.size()) {
        throw ShapeMismatch("trace and mode lengths differ");
    }
    const double peak = std::abs(mode.peak());
    if (std::abs(mode.values.front()) > 1e-3 * peak || std::abs(mode.values.back()) > 1e-3 * peak) {
        throw DomainError("event mode reaches the trace edge");
    }
    const double dt = mode.grid.dt;
    double proj = 0.0;
    double norm2 = 0.0;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        proj += trace[j] * mode.values[j];
        norm2 += mode.values[j] * mode.values[j];
    }
    proj *= dt;
    norm2 *= dt;
    const double shift = (x_h - proj) / norm2;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        trace[j] += shift * mode.values[j];
    }
}

double mode_readout(const std::vector<double> &trace, const TemporalMode &mode) {
    if (trace.size() != mode.values.size()) {
        throw ShapeMismatch("trace and mode lengths differ");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        s += trace[j] * mode.values[j];
    }
    return s * mode.grid.dt;
}

RealtimeReadout::RealtimeReadout(const FilterCoefficients &coeffs, const TimeGrid &grid, double t0)
    : kernel_(lpf_mode(coeffs, t0, grid).values), dt_(grid.dt) {
    // lpf_apply checks the sampling condition; run it once on a short impulse.
    lpf_apply(coeffs, {1.0}, grid.dt);
}

double RealtimeReadout::operator()(const std::vector<double> &trace) const {
    if (trace.size() != kernel_.size()) {
        throw ShapeMismatch("trace length does not match the readout grid");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        s += kernel_[j] * trace[j];
    }
    return s * dt_;
}

std::mt19937_64 event_rng(std::uint64_t seed, std::size_t phase, std::size_t event, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(phase), static_cast<std::uint32_t>(event), stream};
    return std::mt19937_64(seq);
}

void QuadratureDataset::validate() const {
    if (phases_deg.empty() || events_per_phase == 0) {
        throw DomainError("dataset has no phases or events");
    }
    const std::size_t n = phases_deg.size() * events_per_phase;
    if (x_post.size() != n || x_realtime.size() != n || labels.size() != n) {
        throw ShapeMismatch("dataset columns do not match phases x events_per_phase");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x_post[i]) || !std::isfinite(x_realtime[i])) {
            throw DomainError("dataset holds a non-finite quadrature");
        }
    }
}

std::vector<double> QuadratureDataset::channel_correlations() const {
    validate();
    std::vector<double> out(phases_deg.size());
    for (std::size_t k = 0; k < phases_deg.size(); ++k) {
        const std::size_t first = k * events_per_phase;
        double ma = 0.0;
        double mb = 0.0;
        for (std::size_t e = 0; e < events_per_phase; ++e) {
            ma += x_post[first + e];
            mb += x_realtime[first + e];
        }
        ma /= static_cast<double>(events_per_phase);
        mb /= static_cast<double>(events_per_phase);
        double sab = 0.0;
        double saa = 0.0;
        double sbb = 0.0;
        for (std::size_t e = 0; e < events_per_phase; ++e) {
            const double a = x_post[first + e] - ma;
            const double b = x_realtime[first + e] - mb;
            sab += a * b;
            saa += a * a;
            sbb += b * b;
        }
        out[k] = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;
    }
    return out;
}

namespace {

constexpr std::uint32_t kEstimationStream = 0;
constexpr std::uint32_t kAcquisitionStream = 1;

EventLabel draw_label(const ExperimentConfig &cfg, std::mt19937_64 &rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u < cfg.fake_counts) {
        return EventLabel::kFake;
    }
    if (u < cfg.fake_counts + cfg.two_photon) {
        return EventLabel::kTwoPhoton;
    }
    return EventLabel::kSingle;
}

struct PhaseSamplers {
    QuadratureSampler single;
    QuadratureSampler two;
    QuadratureSampler fake;

    PhaseSamplers(const HeraldModel &m, double theta)
        : single(m.single, theta), two(m.two_photon, theta), fake(m.fake, theta) {}

    const QuadratureSampler &get(EventLabel l) const {
        return l == EventLabel::kFake ? fake : (l == EventLabel::kTwoPhoton ? two : single);
    }
};

}  // namespace

std::pair<std::size_t, std::size_t> estimation_window(const TimeGrid &grid, double t0,
                                                     const std::array<double, 4> &rates) {
    const double slowest = *std::min_element(rates.begin(), rates.end());
    const auto before = static_cast<std::size_t>(std::ceil(5.0 / slowest / grid.dt));
    const auto after = static_cast<std::size_t>(std::ceil(5.0 / rates[3] / grid.dt));
    const std::size_t anchor = grid.index_of(t0);
    const std::size_t first = anchor > before ? anchor - before : 0;
    const std::size_t last = std::min(grid.samples, anchor + after + 1);
    return {first, last - first};
}

TraceEnsemble simulate_traces(const ExperimentConfig &cfg, const HeraldModel &model, const TemporalMode &mode,
                              std::size_t phase_index, std::size_t count, std::size_t first, std::size_t width,
                              std::uint32_t stream) {
    const TimeGrid grid = cfg.time_grid();
    if (!grid.same_as(mode.grid)) {
        throw ShapeMismatch("mode is not on the configured grid");
    }
    if (first + width > grid.samples || width == 0) {
        throw DomainError("trace window outside the grid");
    }
    const std::vector<double> angles = cfg.phase_angles();
    if (phase_index >= angles.size()) {
        throw DomainError("phase index out of range");
    }
    const double theta = angles[phase_index];
    BackgroundSynthesizer synth(cfg.spectrum(cfg.spectrum_loss()), theta, grid);
    const PhaseSamplers samplers(model, theta);
    TraceEnsemble ens{Eigen::MatrixXd(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(width)),
                      TimeGrid{grid.dt, width, grid.at(first)}, mode.t0};
    std::vector<double> trace;
    for (std::size_t e = 0; e < count; ++e) {
        std::mt19937_64 rng = event_rng(cfg.seed, phase_index, e, stream);
        const EventLabel label = draw_label(cfg, rng);
        const double x_h = samplers.get(label).draw(rng);
        synth.draw(rng, trace);
        embed_event(trace, mode, x_h);
        for (std::size_t j = 0; j < width; ++j) {
            ens.traces(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(j)) = trace[first + j];
        }
    }
    return ens;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    const TimeGrid grid = cfg.time_grid();
    const TemporalMode theory = composite_mode(cfg.cavity_rates(), 0.0, grid);
    const HeraldModel model = build_herald_model(cfg, theory);

    // Pass 1: mode estimate from the anti-squeezed phase.
    const auto [first, width] = estimation_window(grid, theory.t0, cfg.cavity_rates());
    const std::size_t n_est = std::max<std::size_t>(static_cast<std::size_t>(cfg.events_per_phase), 1000);
    const TraceEnsemble ens = simulate_traces(cfg, model, theory, 0, n_est, first, width, kEstimationStream);
    const PcaResult pca = pca_mode(ens);
    TemporalMode estimated = pca.ambiguous ? theory : place_on_grid(pca.mode, grid);
    estimated.t0 = theory.t0;

    ExperimentResult out{QuadratureDataset{}, theory, estimated, design_lpf(theory), 0.0, 0.0, pca.ambiguous};
    out.overlap_theory = inner_product(estimated, theory);
    out.overlap_lpf = inner_product(lpf_mode(out.lpf, theory.t0, grid), estimated);

    // Pass 2: every phase through both readouts.
    QuadratureDataset &data = out.data;
    data.name = cfg.name;
    data.config_hash = config_hash(cfg);
    data.seed = cfg.seed;
    data.events_per_phase = static_cast<std::size_t>(cfg.events_per_phase);
    const std::vector<double> angles = cfg.phase_angles();
    for (double a : angles) {
        data.phases_deg.push_back(a * 180.0 / std::numbers::pi);
    }
    const std::size_t total = angles.size() * data.events_per_phase;
    data.x_post.reserve(total);
    data.x_realtime.reserve(total);
    data.labels.reserve(total);

    const RealtimeReadout realtime(out.lpf, grid, theory.t0);
    const SqueezingSpectrum background = cfg.spectrum(cfg.spectrum_loss());
    std::vector<double> trace;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        BackgroundSynthesizer synth(background, angles[k], grid);
        const PhaseSamplers samplers(model, angles[k]);
        for (std::size_t e = 0; e < data.events_per_phase; ++e) {
            std::mt19937_64 rng = event_rng(cfg.seed, k, e, kAcquisitionStream);
            const EventLabel label = draw_label(cfg, rng);
            const double x_h = samplers.get(label).draw(rng);
            synth.draw(rng, trace);
            embed_event(trace, theory, x_h);
            data.x_post.push_back(mode_readout(trace, estimated));
            data.x_realtime.push_back(realtime(trace));
            data.labels.push_back(label);
        }
    }
    return out;
}

}  // namespace catfilter
