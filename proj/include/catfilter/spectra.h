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

// Below-threshold OPO squeezing spectra and the single-mode Gaussian state they
// induce in a given temporal mode.

#include "catfilter/fock.h"
#include "catfilter/temporal.h"

namespace catfilter {

enum class Quadrature { kSqueezed, kAntiSqueezed };

/// Pump parameter xi (0 <= xi < 1), external loss L and OPO half bandwidth (Hz).
struct SqueezingSpectrum {
    double xi = 0.0;
    double loss = 0.0;
    double f_hwhm = 65e6;

    void validate() const;
};

/// Shot-noise-normalized quadrature noise power
///   S_-+(f) = 1 -+ (1 - L) 4 xi / ((1 +- xi)^2 + (f / f_hwhm)^2).
double squeezing_spectrum(const SqueezingSpectrum &s, double f, Quadrature q);

/// xi = sqrt(P / P_th).
double pump_to_xi(double pump_mw, double threshold_mw);

/// Threshold that maps `pump_mw` onto `xi`.
double threshold_from(double pump_mw, double xi);

/// V_-+ = (1/2) int |F(omega)|^2 S_-+(omega) d omega / 2 pi over the mode's own
/// spectrum. Throws DomainError when the outer 5% of the band carries more than
/// 1e-4 of the integral.
GaussianInModeState wavepacket_variances(const TemporalMode &mode, const SqueezingSpectrum &s);

/// Inverts V_-+ = (1 - L) e^{-+2 r} / 2 + L / 2 in closed form. Vacuum maps to
/// (0, 0). Throws ModelViolation when V_- V_+ < 1/4 or L falls outside [0, 1].
GaussianInModeState effective_params(double v_minus, double v_plus);

}  // namespace catfilter
