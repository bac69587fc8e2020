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

// Scenario description read from a small sectioned key = value file:
//
//   [scenario]    name
//   [cavities]    opo_fwhm_mhz fc1_fwhm_mhz fc2_fwhm_mhz fc3_fwhm_mhz
//   [pump]        xi | power_mw + threshold_mw, tap_reflectivity
//   [losses]      one key per loss item (fractions)
//   [mixedness]   fake_counts two_photon
//   [acquisition] phases phase_step_deg events_per_phase sample_interval_ns
//                 samples seed fock_cutoff
//
// Values are numbers or double-quoted strings; '#' starts a comment.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catfilter/spectra.h"
#include "catfilter/temporal.h"

namespace catfilter {

struct ExperimentConfig {
    std::string name = "scenario";

    double opo_fwhm_mhz = 130.0;
    double fc1_fwhm_mhz = 136.0;
    double fc2_fwhm_mhz = 18.7;
    double fc3_fwhm_mhz = 94.0;

    std::optional<double> xi = 0.25;
    std::optional<double> power_mw;
    std::optional<double> threshold_mw;
    double tap_reflectivity = 0.97;

    std::vector<std::pair<std::string, double>> losses = {
        {"propagation", 0.012}, {"photodiode_efficiency", 0.02}, {"circuit_noise", 0.01},
        {"visibility", 0.02},   {"opo_escape", 0.021},
    };

    double fake_counts = 0.007;
    double two_photon = 0.027;

    int phases = 37;
    double phase_step_deg = 5.0;
    int events_per_phase = 10000;
    double sample_interval_ns = 0.5;
    int samples = 2048;
    std::uint64_t seed = 1;
    int fock_cutoff = 20;

    /// Pump parameter, from `xi` or from the pump power and threshold.
    double pump_xi() const;
    /// Sum of the loss items.
    double total_loss() const;
    /// External loss of the squeezing spectrum: the loss items plus the 1 - R
    /// tap, added linearly and capped at 1.
    double spectrum_loss() const;
    /// {FC-1, FC-2, FC-3, OPO} in rad/s.
    std::array<double, 4> cavity_rates() const;
    TimeGrid time_grid() const;
    /// Phase angles in radians.
    std::vector<double> phase_angles() const;
    /// Squeezing spectrum with the given external loss.
    SqueezingSpectrum spectrum(double loss) const;

    /// Throws DomainError describing the first invalid field.
    void validate() const;
    bool operator==(const ExperimentConfig &) const = default;
};

/// Parses and validates a configuration. Errors carry the offending line.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig &cfg);

/// FNV-1a 64 of the canonical text with the seed removed, as 16 hex digits.
std::string config_hash(const ExperimentConfig &cfg);

}  // namespace catfilter
