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

// Scenario metrics from a simulated dataset, consolidated reports and
// plot-ready tables.

#include <string>
#include <vector>

#include "catfilter/config.h"
#include "catfilter/fock.h"
#include "catfilter/io.h"
#include "catfilter/tomography.h"

namespace catfilter {

struct ChannelMetrics {
    double w00 = 0.0;
    double even_sum = 0.0;
    double best_cat_f = 0.0;
    double best_alpha_sq = 0.0;
    std::vector<double> photon_probs;
    int iterations = 0;
    bool converged = false;
};

/// Quadrature histogram (probability density) of both channels at one phase.
struct MarginalTable {
    double phase_deg = 0.0;
    std::vector<double> x;  // bin centres
    std::vector<double> post;
    std::vector<double> realtime;
};

struct ScenarioReport {
    std::string name;
    std::string config_hash;
    std::string config_text;
    std::uint64_t seed = 0;
    double xi = 0.0;
    ChannelMetrics post;
    ChannelMetrics realtime;
    double even_sum_predicted = 0.0;
    double two_photon_predicted = 0.0;
    double mode_overlap_theory = 0.0;
    double lpf_overlap = 0.0;
    std::vector<double> phases_deg;
    std::vector<double> correlations;
    std::vector<MarginalTable> marginals;

    double negativity_gap() const { return realtime.w00 - post.w00; }
    void validate() const;
};

struct Analysis {
    ScenarioReport report;
    DensityMatrix rho_post;
    DensityMatrix rho_realtime;
};

ChannelMetrics channel_metrics(const MleResult &mle);

/// Tomography of both channels plus the budget predictions for the dataset's
/// configuration.
Analysis analyze_dataset(const QuadratureDataset &data, const DatasetMeta &meta, const MleOptions &opts = {});

std::string report_to_json(const ScenarioReport &r);
ScenarioReport report_from_json(const std::string &text);

/// Merges fragments sorted by (xi, name). Identical duplicates collapse;
/// fragments naming the same scenario with different config hashes throw
/// ModelViolation.
std::vector<ScenarioReport> merge_reports(const std::vector<ScenarioReport> &fragments);
std::string merged_report_json(const std::vector<ScenarioReport> &reports);
std::string summary_csv(const std::vector<ScenarioReport> &reports);
/// phase_deg plus one correlation column per scenario.
std::string correlations_csv(const std::vector<ScenarioReport> &reports);
std::string marginals_csv(const ScenarioReport &r);

/// t, opo, filter (narrowest cavity), composite and LPF response columns.
std::string modes_csv(const ExperimentConfig &cfg, const FilterCoefficients &lpf);
/// f_hz, s_minus, s_plus with the configured loss, then the lossless pair.
std::string spectra_csv(const ExperimentConfig &cfg, std::size_t points = 401);

}  // namespace catfilter
