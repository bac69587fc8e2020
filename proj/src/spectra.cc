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

#include "catfilter/spectra.h"

#include <cmath>
#include <numbers>
#include <string>

#include "catfilter/errors.h"

namespace catfilter {

void SqueezingSpectrum::validate() const {
    if (!(xi >= 0.0 && xi < 1.0)) {
        throw DomainError("pump parameter xi must lie in [0, 1), got " + std::to_string(xi));
    }
    if (!(loss >= 0.0 && loss <= 1.0)) {
        throw DomainError("spectrum loss must lie in [0, 1], got " + std::to_string(loss));
    }
    if (!(f_hwhm > 0.0)) {
        throw DomainError("OPO half bandwidth must be positive");
    }
}

double squeezing_spectrum(const SqueezingSpectrum &s, double f, Quadrature q) {
    s.validate();
    const double u = f / s.f_hwhm;
    const double gain = (1.0 - s.loss) * 4.0 * s.xi;
    if (q == Quadrature::kSqueezed) {
        return 1.0 - gain / ((1.0 + s.xi) * (1.0 + s.xi) + u * u);
    }
    return 1.0 + gain / ((1.0 - s.xi) * (1.0 - s.xi) + u * u);
}

double pump_to_xi(double pump_mw, double threshold_mw) {
    if (!(threshold_mw > 0.0) || !(pump_mw >= 0.0)) {
        throw DomainError("pump power must be non-negative and threshold positive");
    }
    if (pump_mw >= threshold_mw) {
        throw DomainError("pump power " + std::to_string(pump_mw) + " mW is at or above threshold");
    }
    return std::sqrt(pump_mw / threshold_mw);
}

double threshold_from(double pump_mw, double xi) {
    if (!(xi > 0.0 && xi < 1.0) || !(pump_mw > 0.0)) {
        throw DomainError("threshold calibration needs 0 < xi < 1 and positive pump power");
    }
    return pump_mw / (xi * xi);
}

GaussianInModeState wavepacket_variances(const TemporalMode &mode, const SqueezingSpectrum &s) {
    s.validate();
    const ModeSpectrum spec = mode_power_spectrum(mode);
    const double omega_max = std::abs(spec.omega.front());
    double vm = 0.0, vp = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < spec.omega.size(); ++j) {
        const double f = std::abs(spec.omega[j]) / (2.0 * std::numbers::pi);
        const double sm = squeezing_spectrum(s, f, Quadrature::kSqueezed);
        const double sp = squeezing_spectrum(s, f, Quadrature::kAntiSqueezed);
        vm += spec.power[j] * sm;
        vp += spec.power[j] * sp;
        if (std::abs(spec.omega[j]) > 0.95 * omega_max) {
            tail += spec.power[j] * sp;
        }
    }
    if (tail > 1e-4 * vp) {
        throw DomainError("mode spectrum is not contained in the sampled band (tail fraction " +
                          std::to_string(tail / vp) + ")");
    }
    const double w = 0.5 * spec.d_omega / (2.0 * std::numbers::pi);
    return effective_params(w * vm, w * vp);
}

GaussianInModeState effective_params(double v_minus, double v_plus) {
    if (!(v_minus > 0.0) || !(v_plus > 0.0) || !std::isfinite(v_minus) || !std::isfinite(v_plus)) {
        throw ModelViolation("quadrature variances must be positive and finite");
    }
    const double u = 2.0 * std::min(v_minus, v_plus);
    const double v = 2.0 * std::max(v_minus, v_plus);
    GaussianInModeState g;
    g.v_minus = 0.5 * u;
    g.v_plus = 0.5 * v;
    if (std::abs(u - 1.0) < 1e-14 && std::abs(v - 1.0) < 1e-14) {
        return g;
    }
    double excess = u * v - 1.0;
    if (excess < 0.0 && excess > -1e-12) {
        excess = 0.0;
    }
    if (excess < 0.0) {
        throw ModelViolation("variances violate the uncertainty bound: V_- V_+ = " + std::to_string(u * v / 4.0));
    }
    // (u - L)(v - L) = (1 - L)^2 is linear in L.
    const double loss = excess / (u + v - 2.0);
    if (!(loss >= 0.0 && loss <= 1.0)) {
        throw ModelViolation("no equivalent loss in [0, 1] for V_- = " + std::to_string(v_minus) +
                             ", V_+ = " + std::to_string(v_plus));
    }
    g.l_eff = loss;
    g.r_eff = loss < 1.0 ? 0.25 * std::log((v - loss) / (u - loss)) : 0.0;
    return g;
}

}  // namespace catfilter
