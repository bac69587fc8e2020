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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <fftw3.h>
#include <gtest/gtest.h>

#include "catfilter/errors.h"

namespace catfilter {
namespace {

constexpr double kPi = std::numbers::pi;

// Linear convolution through FFTW with zero padding: out[i] = sum_j x[i - j + c] k[j] dt
// where both signals live on the same grid with t = 0 at index c.
std::vector<double> fft_convolve(const std::vector<double> &x, const std::vector<double> &k, std::size_t c, double dt) {
    const std::size_t n = x.size();
    const std::size_t m = 2 * n;
    std::vector<double> a(m, 0.0), b(m, 0.0), out(m);
    std::copy(x.begin(), x.end(), a.begin());
    std::copy(k.begin(), k.end(), b.begin());
    std::vector<std::complex<double>> fa(m / 2 + 1), fb(m / 2 + 1);
    auto *pa = reinterpret_cast<fftw_complex *>(fa.data());
    auto *pb = reinterpret_cast<fftw_complex *>(fb.data());
    fftw_plan p1 = fftw_plan_dft_r2c_1d(static_cast<int>(m), a.data(), pa, FFTW_ESTIMATE);
    fftw_plan p2 = fftw_plan_dft_r2c_1d(static_cast<int>(m), b.data(), pb, FFTW_ESTIMATE);
    fftw_execute(p1);
    fftw_execute(p2);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        fa[i] *= fb[i];
    }
    fftw_plan p3 = fftw_plan_dft_c2r_1d(static_cast<int>(m), pa, out.data(), FFTW_ESTIMATE);
    fftw_execute(p3);
    fftw_destroy_plan(p1);
    fftw_destroy_plan(p2);
    fftw_destroy_plan(p3);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = out[i + c] / static_cast<double>(m) * dt;
    }
    return r;
}

// Independent oracle: OPO response convolved with three anti-causal Lorentzian responses.
std::vector<double> convolution_oracle(const std::array<double, 4> &g, const TimeGrid &grid) {
    const std::size_t c = grid.samples / 2;
    std::vector<double> h(grid.samples);
    for (std::size_t i = 0; i < grid.samples; ++i) {
        h[i] = std::sqrt(g[3]) * std::exp(-g[3] * std::abs(grid.at(i)));
    }
    for (int f = 0; f < 3; ++f) {
        std::vector<double> k(grid.samples, 0.0);
        for (std::size_t i = 0; i < grid.samples; ++i) {
            const double t = grid.at(i);
            if (t <= 0.0) {
                k[i] = std::sqrt(2.0 * g[f]) * std::exp(g[f] * t) * (i == c ? 0.5 : 1.0);
            }
        }
        h = fft_convolve(h, k, c, grid.dt);
    }
    double n = 0.0;
    for (double v : h) {
        n += v * v * grid.dt;
    }
    for (double &v : h) {
        v /= std::sqrt(n);
    }
    return h;
}

// Hypoexponential density for distinct rates: the unit-DC cascade impulse response.
double cascade_oracle(const std::array<double, 3> &tau, double t) {
    if (t < 0.0) {
        return 0.0;
    }
    const double l[3] = {1.0 / tau[0], 1.0 / tau[1], 1.0 / tau[2]};
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        double den = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) {
                den *= l[j] - l[i];
            }
        }
        s += l[0] * l[1] * l[2] * std::exp(-l[i] * t) / den;
    }
    return s;
}

TEST(TimeGrid, DefaultIsCentered) {
    const TimeGrid g = default_time_grid();
    EXPECT_EQ(g.samples, 2048u);
    EXPECT_DOUBLE_EQ(g.at(1024), 0.0);
    EXPECT_EQ(g.index_of(0.0), 1024u);
}

TEST(Rates, HalfWidthConversion) {
    EXPECT_NEAR(rate_from_fwhm(18.7e6), 2.0 * kPi * 9.35e6, 1e-6);
    EXPECT_NEAR(rate_from_fwhm(130e6), 2.0 * kPi * 65e6, 1e-6);
}

TEST(OpoMode, NormAndDecay) {
    const TimeGrid grid = TimeGrid::centered(0.1e-9, 4096);
    const double gamma = 1.0 / (20 * grid.dt);
    const TemporalMode m = opo_mode(gamma, 0.0, grid);
    EXPECT_NEAR(m.norm(), 1.0, 1e-12);
    const std::size_t c = grid.index_of(0.0);
    EXPECT_NEAR(m.values[c + 20] / m.values[c], std::exp(-1.0), 1e-12);
    EXPECT_NEAR(m.values[c - 20] / m.values[c], std::exp(-1.0), 1e-12);
}

TEST(OpoMode, RejectsShortGrid) {
    EXPECT_THROW(opo_mode(1e7, 0.0, TimeGrid::centered(1e-9, 512)), DomainError);
    EXPECT_THROW(opo_mode(-1.0), DomainError);
}

TEST(FilterMode, CausalAndNormalized) {
    const TemporalMode m = filter_mode(rate_from_fwhm(18.7e6));
    EXPECT_NEAR(m.norm(), 1.0, 1e-12);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        if (m.grid.at(i) > 0.0) {
            EXPECT_EQ(m.values[i], 0.0);
        }
    }
}

TEST(CompositeMode, WidebandFiltersGiveOpoMode) {
    const TimeGrid grid = TimeGrid::centered(0.05e-9, 8192);
    const double g4 = rate_from_fwhm(130e6);
    const TemporalMode m = composite_mode({1000 * g4, 1300 * g4, 1700 * g4, g4}, 0.0, grid);
    EXPECT_GT(inner_product(m, opo_mode(g4, 0.0, grid)), 0.999);
}

TEST(CompositeMode, NarrowFilterGivesRisingExponential) {
    const double g4 = rate_from_fwhm(130e6);
    const double gf = g4 / 40.0;
    const TimeGrid grid = TimeGrid::centered(0.5e-9, 8192);
    const TemporalMode m = composite_mode({gf, 300 * g4, 500 * g4, g4}, 0.0, grid);
    EXPECT_GT(inner_product(m, filter_mode(gf, 0.0, grid)), 0.99);
}

TEST(CompositeMode, MatchesFftConvolutionOracle) {
    const TimeGrid grid = TimeGrid::centered(2e-11, 40000);
    const auto rates = table_cavity_rates();
    const TemporalMode m = composite_mode(rates, 0.0, grid);
    const std::vector<double> oracle = convolution_oracle(rates, grid);
    double s = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        s += oracle[i] * m.values[i] * grid.dt;
    }
    EXPECT_GT(s, 0.9999);
}

TEST(CompositeMode, ContinuousAtHeraldTime) {
    const ModeDescriptor d = cascade_descriptor(table_cavity_rates());
    const double left = d.norm * d.bracket(0.0);
    const double right = d.norm * d.bracket(1e-300);
    const TemporalMode m = composite_mode(table_cavity_rates());
    EXPECT_LT(std::abs(left - right), 1e-9 * m.peak());
}

TEST(CompositeMode, NormalizationConstant) {
    const TimeGrid grid = TimeGrid::centered(5e-12, 200000);
    const ModeDescriptor d = cascade_descriptor(table_cavity_rates());
    double s = 0.0;
    for (std::size_t i = 0; i < grid.samples; ++i) {
        const double v = d.norm * d.bracket(grid.at(i));
        s += v * v * grid.dt;
    }
    EXPECT_NEAR(s, 1.0, 1e-4);
}

TEST(CompositeMode, NarrowbandTailVanishes) {
    const auto rates = table_cavity_rates();
    const TemporalMode m = composite_mode(rates);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        if (m.grid.at(i) > 5.0 / rates[3]) {
            EXPECT_LT(std::abs(m.values[i]), 1e-3 * m.peak());
        }
    }
}

TEST(CompositeMode, ConvolutionMatchesClosedForm) {
    const auto rates = table_cavity_rates();
    EXPECT_GT(inner_product(composite_mode(rates), composite_mode_by_convolution(rates)), 0.99999);
}

TEST(CompositeMode, CoincidentRatesFallBack) {
    const double g = rate_from_fwhm(50e6);
    const std::array<double, 4> equal{g, rate_from_fwhm(20e6), g, rate_from_fwhm(130e6)};
    std::array<double, 4> nudged = equal;
    nudged[2] *= 1.001;
    const TemporalMode a = composite_mode(equal);
    EXPECT_FALSE(a.descriptor.has_value());
    EXPECT_GT(inner_product(a, composite_mode(nudged)), 0.9999);
    EXPECT_THROW(cascade_descriptor(equal), DomainError);
}

TEST(InnerProduct, ShiftedOpoModes) {
    const TimeGrid grid = TimeGrid::centered(0.02e-9, 20000);
    const double gamma = rate_from_fwhm(130e6);
    const double ip = inner_product(opo_mode(gamma, 0.0, grid), opo_mode(gamma, 1.0 / gamma, grid));
    EXPECT_NEAR(ip, 2.0 / std::exp(1.0), 1e-3);
}

TEST(InnerProduct, SelfAndMismatch) {
    const TemporalMode a = composite_mode(table_cavity_rates());
    EXPECT_NEAR(inner_product(a, a), 1.0, 1e-12);
    const TemporalMode b = opo_mode(rate_from_fwhm(130e6), 0.0, TimeGrid::centered(1e-9, 2048));
    EXPECT_THROW(inner_product(a, b), ShapeMismatch);
}

TEST(Spectrum, OpoModeIsLorentzianSquared) {
    const TimeGrid grid = TimeGrid::centered(0.05e-9, 16384);
    const double g = rate_from_fwhm(130e6);
    const ModeSpectrum s = mode_power_spectrum(opo_mode(g, 0.0, grid));
    EXPECT_FALSE(s.leakage_warning);
    for (std::size_t j = 0; j < s.omega.size(); ++j) {
        const double w = s.omega[j];
        if (std::abs(w) < 3.0 * g) {
            const double expect = 4.0 * g * g * g / std::pow(g * g + w * w, 2);
            EXPECT_NEAR(s.power[j] / expect, 1.0, 1e-2) << w;
        }
    }
}

TEST(Spectrum, FilterModeIsLorentzian) {
    const TimeGrid grid = TimeGrid::centered(0.05e-9, 32768);
    const double g = rate_from_fwhm(18.7e6);
    const ModeSpectrum s = mode_power_spectrum(filter_mode(g, 0.0, grid));
    for (std::size_t j = 0; j < s.omega.size(); ++j) {
        const double w = s.omega[j];
        if (std::abs(w) < 5.0 * g) {
            EXPECT_NEAR(s.power[j] / (2.0 * g / (g * g + w * w)), 1.0, 1e-2) << w;
        }
    }
}

TEST(Spectrum, ParsevalAndLeakage) {
    const ModeSpectrum s = mode_power_spectrum(composite_mode(table_cavity_rates()));
    double total = 0.0;
    for (double p : s.power) {
        total += p * s.d_omega / (2.0 * kPi);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    TemporalMode cut = opo_mode(rate_from_fwhm(130e6));
    cut.values.front() = cut.peak();
    EXPECT_TRUE(mode_power_spectrum(cut).leakage_warning);
}

TEST(Lpf, ImpulseMatchesAnalyticCascade) {
    const FilterCoefficients c = make_filter({12e-9, 7e-9, 4e-9});
    const double dt = 0.2e-9;
    std::vector<double> u(1000, 0.0);
    u[0] = 1.0 / dt;
    const std::vector<double> y = lpf_apply(c, u, dt);
    double err = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double expect = c.gain * cascade_oracle(c.tau, k * dt);
        err += (y[k] - expect) * (y[k] - expect);
        peak = std::max(peak, expect);
        EXPECT_NEAR(lpf_impulse_response(c, k * dt), expect, 1e-9 * c.gain / 4e-9);
    }
    EXPECT_LT(std::sqrt(err / y.size()) / peak, 1e-3);
}

TEST(Lpf, UnitEnergyAndDcGain) {
    const FilterCoefficients c = make_filter({12e-9, 7e-9, 4e-9});
    const double h = 1e-11;
    double area = 0.0, energy = 0.0;
    for (int k = 0; k < 40000; ++k) {
        const double v = c.gain * cascade_oracle(c.tau, (k + 0.5) * h);
        area += v * h;
        energy += v * v * h;
    }
    EXPECT_NEAR(energy, 1.0, 1e-6);
    EXPECT_NEAR(area, c.gain, 1e-6 * c.gain);
    const std::vector<double> y = lpf_apply(c, std::vector<double>(2000, 1.0), 0.2e-9);
    EXPECT_NEAR(y.back(), c.gain, 1e-6 * c.gain);
}

TEST(Lpf, WhiteNoiseVariance) {
    const FilterCoefficients c = make_filter({12e-9, 7e-9, 4e-9});
    const double dt = 0.2e-9;
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> u(400000);
    for (double &v : u) {
        v = g(rng);
    }
    const std::vector<double> y = lpf_apply(c, u, dt);
    double s = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 1000; k < y.size(); ++k) {
        s += y[k] * y[k];
        ++count;
    }
    // Two-sided PSD of unit-variance samples is dt; int |H|^2 dw / 2 pi = int h^2 dt = 1.
    EXPECT_NEAR(s / count / dt, 1.0, 0.02);
}

TEST(Lpf, ReadoutMatchesRecursion) {
    const FilterCoefficients c = make_filter({12e-9, 7e-9, 4e-9});
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> u(600);
    for (double &v : u) {
        v = g(rng);
    }
    const double dt = 0.4e-9;
    EXPECT_NEAR(lpf_output_at(c, u, dt, 450), lpf_apply(c, u, dt)[450], 1e-9 * c.gain);
}

TEST(Lpf, RejectsUndersampling) {
    const FilterCoefficients c = make_filter({12e-9, 7e-9, 4e-9});
    EXPECT_THROW(lpf_apply(c, std::vector<double>(10, 0.0), 1e-9), DomainError);
}

TEST(Lpf, ImpulseResponseNonnegativeAndCausal) {
    const FilterCoefficients c = make_filter({20e-9, 5e-9, 5.0001e-9});
    EXPECT_EQ(lpf_impulse_response(c, -1e-9), 0.0);
    for (double v : lpf_sampled_response(c, 0.5e-9, 500)) {
        EXPECT_GE(v, 0.0);
    }
}

TEST(DesignLpf, SingleExponentialTarget) {
    // The cascade starts from zero, so the jump at t0 limits the overlap to about
    // 1 - sqrt(tau_min gamma); resolve it with a fine grid.
    const TimeGrid grid = TimeGrid::centered(0.005e-9, 36000);
    const double g = rate_from_fwhm(18.7e6);
    const FilterCoefficients c = design_lpf(filter_mode(g, 0.0, grid));
    EXPECT_GT(c.overlap, 0.99);
    EXPECT_NEAR(c.tau[0] * g, 1.0, 0.25);
}

TEST(DesignLpf, TableCompositeTarget) {
    const TemporalMode target = composite_mode(table_cavity_rates());
    const FilterCoefficients c = design_lpf(target);
    EXPECT_GE(c.overlap, 0.988);
    EXPECT_NEAR(inner_product(lpf_mode(c, target.t0, target.grid), target), c.overlap, 1e-9);
    for (double t : c.tau) {
        EXPECT_GE(t, 10.0 * target.grid.dt);
    }
}

TEST(DesignLpf, TranslationInvariant) {
    const auto rates = table_cavity_rates();
    const TimeGrid grid = default_time_grid();
    const double a = design_lpf(composite_mode(rates, 0.0, grid)).overlap;
    const double b = design_lpf(composite_mode(rates, 40 * grid.dt, grid)).overlap;
    EXPECT_NEAR(a, b, 1e-6);
}

TEST(DesignLpf, RejectsTwoSidedTarget) { EXPECT_THROW(design_lpf(opo_mode(rate_from_fwhm(130e6))), DomainError); }

}  // namespace
}  // namespace catfilter
