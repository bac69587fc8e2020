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

#include "catfilter/report.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "catfilter/errors.h"
#include "json.hpp"

namespace catfilter {

using nlohmann::json;

namespace {

constexpr std::size_t kMarginalBins = 60;

MarginalTable marginal_at(const QuadratureDataset &data, double target_deg) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < data.phases_deg.size(); ++k) {
        if (std::abs(data.phases_deg[k] - target_deg) < std::abs(data.phases_deg[best] - target_deg)) {
            best = k;
        }
    }
    const std::size_t first = best * data.events_per_phase;
    double reach = 0.0;
    for (std::size_t e = 0; e < data.events_per_phase; ++e) {
        reach = std::max({reach, std::abs(data.x_post[first + e]), std::abs(data.x_realtime[first + e])});
    }
    reach = std::ceil(reach);
    MarginalTable t;
    t.phase_deg = data.phases_deg[best];
    const double width = 2.0 * reach / kMarginalBins;
    t.post.assign(kMarginalBins, 0.0);
    t.realtime.assign(kMarginalBins, 0.0);
    for (std::size_t b = 0; b < kMarginalBins; ++b) {
        t.x.push_back(-reach + (static_cast<double>(b) + 0.5) * width);
    }
    const auto bin = [&](double x) {
        return std::min(kMarginalBins - 1, static_cast<std::size_t>(std::max(0.0, (x + reach) / width)));
    };
    const double w = 1.0 / (static_cast<double>(data.events_per_phase) * width);
    for (std::size_t e = 0; e < data.events_per_phase; ++e) {
        t.post[bin(data.x_post[first + e])] += w;
        t.realtime[bin(data.x_realtime[first + e])] += w;
    }
    return t;
}

json channel_json(const ChannelMetrics &c) {
    return json{{"W00", c.w00},
                {"even_sum", c.even_sum},
                {"best_cat_F", c.best_cat_f},
                {"best_alpha_sq", c.best_alpha_sq},
                {"photon_probs", c.photon_probs},
                {"iterations", c.iterations},
                {"converged", c.converged}};
}

ChannelMetrics channel_from_json(const json &j) {
    ChannelMetrics c;
    c.w00 = j.at("W00").get<double>();
    c.even_sum = j.at("even_sum").get<double>();
    c.best_cat_f = j.at("best_cat_F").get<double>();
    c.best_alpha_sq = j.at("best_alpha_sq").get<double>();
    c.photon_probs = j.at("photon_probs").get<std::vector<double>>();
    c.iterations = j.at("iterations").get<int>();
    c.converged = j.at("converged").get<bool>();
    return c;
}

bool finite_all(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void ScenarioReport::validate() const {
    const std::vector<double> scalars{post.w00,           post.even_sum,       post.best_cat_f,   post.best_alpha_sq,
                                      realtime.w00,       realtime.even_sum,   realtime.best_cat_f,
                                      realtime.best_alpha_sq, even_sum_predicted, two_photon_predicted,
                                      mode_overlap_theory, lpf_overlap,        xi};
    if (!finite_all(scalars) || !finite_all(correlations) || !finite_all(post.photon_probs) ||
        !finite_all(realtime.photon_probs)) {
        throw ModelViolation("report '" + name + "' holds a non-finite metric");
    }
    for (double c : correlations) {
        if (c < -1.0 || c > 1.0) {
            throw ModelViolation("report '" + name + "' has a correlation outside [-1, 1]");
        }
    }
    if (correlations.size() != phases_deg.size()) {
        throw ShapeMismatch("report '" + name + "' has mismatched phase and correlation columns");
    }
}

ChannelMetrics channel_metrics(const MleResult &mle) {
    ChannelMetrics c;
    c.w00 = wigner_origin(mle.rho);
    c.even_sum = even_sum(mle.rho);
    const CatFit fit = best_cat_fidelity(mle.rho);
    c.best_cat_f = fit.fidelity;
    c.best_alpha_sq = fit.alpha * fit.alpha;
    c.photon_probs = photon_distribution(mle.rho);
    c.iterations = mle.iterations;
    c.converged = mle.converged;
    return c;
}

Analysis analyze_dataset(const QuadratureDataset &data, const DatasetMeta &meta, const MleOptions &opts) {
    const ExperimentConfig cfg = parse_config(meta.config_text);
    const MleResult post = mle_reconstruct(data, Channel::kPost, opts);
    const MleResult realtime = mle_reconstruct(data, Channel::kRealtime, opts);
    Analysis a{ScenarioReport{}, post.rho, realtime.rho};
    ScenarioReport &r = a.report;
    r.name = cfg.name;
    r.config_hash = meta.config_hash;
    r.config_text = meta.config_text;
    r.seed = meta.seed;
    r.xi = cfg.pump_xi();
    r.post = channel_metrics(post);
    r.realtime = channel_metrics(realtime);
    r.even_sum_predicted = predicted_even_sum(cfg);
    r.two_photon_predicted = predicted_two_photon_fraction(r.xi, cfg.tap_reflectivity);
    r.mode_overlap_theory = meta.overlap_theory;
    r.lpf_overlap = meta.overlap_lpf;
    r.phases_deg = data.phases_deg;
    r.correlations = data.channel_correlations();
    r.marginals = {marginal_at(data, 0.0), marginal_at(data, 90.0)};
    r.validate();
    return a;
}

std::string report_to_json(const ScenarioReport &r) {
    json marginals = json::array();
    for (const auto &m : r.marginals) {
        marginals.push_back({{"phase_deg", m.phase_deg}, {"x", m.x}, {"post", m.post}, {"realtime", m.realtime}});
    }
    const json j{{"name", r.name},
                 {"config_hash", r.config_hash},
                 {"config", r.config_text},
                 {"seed", r.seed},
                 {"xi", r.xi},
                 {"negativity_post", r.post.w00},
                 {"negativity_realtime", r.realtime.w00},
                 {"negativity_gap", r.negativity_gap()},
                 {"even_sum_measured", r.post.even_sum},
                 {"even_sum_predicted", r.even_sum_predicted},
                 {"two_photon_predicted", r.two_photon_predicted},
                 {"best_cat_F", r.post.best_cat_f},
                 {"best_alpha_sq", r.post.best_alpha_sq},
                 {"mode_overlap_theory", r.mode_overlap_theory},
                 {"lpf_overlap", r.lpf_overlap},
                 {"channels", {{"post", channel_json(r.post)}, {"realtime", channel_json(r.realtime)}}},
                 {"phases_deg", r.phases_deg},
                 {"correlations", r.correlations},
                 {"marginals", marginals}};
    return j.dump(1);
}

ScenarioReport report_from_json(const std::string &text) {
    ScenarioReport r;
    try {
        const json j = json::parse(text);
        r.name = j.at("name").get<std::string>();
        r.config_hash = j.at("config_hash").get<std::string>();
        r.config_text = j.at("config").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.xi = j.at("xi").get<double>();
        r.even_sum_predicted = j.at("even_sum_predicted").get<double>();
        r.two_photon_predicted = j.at("two_photon_predicted").get<double>();
        r.mode_overlap_theory = j.at("mode_overlap_theory").get<double>();
        r.lpf_overlap = j.at("lpf_overlap").get<double>();
        r.post = channel_from_json(j.at("channels").at("post"));
        r.realtime = channel_from_json(j.at("channels").at("realtime"));
        r.phases_deg = j.at("phases_deg").get<std::vector<double>>();
        r.correlations = j.at("correlations").get<std::vector<double>>();
        for (const auto &m : j.at("marginals")) {
            r.marginals.push_back({m.at("phase_deg").get<double>(), m.at("x").get<std::vector<double>>(),
                                   m.at("post").get<std::vector<double>>(),
                                   m.at("realtime").get<std::vector<double>>()});
        }
    } catch (const json::exception &e) {
        throw ParseError(std::string("bad report fragment: ") + e.what());
    }
    r.validate();
    return r;
}

std::vector<ScenarioReport> merge_reports(const std::vector<ScenarioReport> &fragments) {
    if (fragments.empty()) {
        throw DomainError("report needs at least one fragment");
    }
    std::map<std::string, const ScenarioReport *> by_name;
    std::vector<ScenarioReport> out;
    for (const auto &f : fragments) {
        const auto it = by_name.find(f.name);
        if (it != by_name.end()) {
            if (it->second->config_hash != f.config_hash) {
                throw ModelViolation("conflicting config hashes for scenario '" + f.name + "' (" +
                                     it->second->config_hash + " vs " + f.config_hash + ")");
            }
            continue;
        }
        by_name.emplace(f.name, &f);
        out.push_back(f);
    }
    std::stable_sort(out.begin(), out.end(), [](const ScenarioReport &a, const ScenarioReport &b) {
        return a.xi != b.xi ? a.xi < b.xi : a.name < b.name;
    });
    return out;
}

std::string merged_report_json(const std::vector<ScenarioReport> &reports) {
    json scenarios = json::array();
    for (const auto &r : reports) {
        scenarios.push_back(json::parse(report_to_json(r)));
    }
    return json{{"scenarios", scenarios}}.dump(1);
}

std::string summary_csv(const std::vector<ScenarioReport> &reports) {
    std::string out =
        "name,xi,negativity_post,negativity_realtime,negativity_gap,even_sum_measured,even_sum_predicted,"
        "best_cat_F,best_alpha_sq,mode_overlap_theory,lpf_overlap,min_correlation\n";
    for (const auto &r : reports) {
        const double min_corr = r.correlations.empty()
                                    ? 0.0
                                    : *std::min_element(r.correlations.begin(), r.correlations.end());
        for (const std::string &cell :
             {r.name, format_number(r.xi), format_number(r.post.w00), format_number(r.realtime.w00),
              format_number(r.negativity_gap()), format_number(r.post.even_sum), format_number(r.even_sum_predicted),
              format_number(r.post.best_cat_f), format_number(r.post.best_alpha_sq),
              format_number(r.mode_overlap_theory), format_number(r.lpf_overlap)}) {
            out += cell;
            out += ',';
        }
        out += format_number(min_corr);
        out += '\n';
    }
    return out;
}

std::string correlations_csv(const std::vector<ScenarioReport> &reports) {
    std::string out = "phase_deg";
    std::size_t rows = 0;
    for (const auto &r : reports) {
        out += ',' + r.name;
        rows = std::max(rows, r.phases_deg.size());
    }
    out += '\n';
    const ScenarioReport *longest = nullptr;
    for (const auto &r : reports) {
        if (longest == nullptr || r.phases_deg.size() > longest->phases_deg.size()) {
            longest = &r;
        }
    }
    for (std::size_t k = 0; k < rows; ++k) {
        out += format_number(longest->phases_deg[k]);
        for (const auto &r : reports) {
            out += ',';
            if (k < r.correlations.size()) {
                out += format_number(r.correlations[k]);
            }
        }
        out += '\n';
    }
    return out;
}

std::string marginals_csv(const ScenarioReport &r) {
    std::string out = "phase_deg,x,post,realtime\n";
    for (const auto &m : r.marginals) {
        for (std::size_t b = 0; b < m.x.size(); ++b) {
            out += format_number(m.phase_deg) + ',' + format_number(m.x[b]) + ',' + format_number(m.post[b]) + ',' +
                   format_number(m.realtime[b]) + '\n';
        }
    }
    return out;
}

std::string modes_csv(const ExperimentConfig &cfg, const FilterCoefficients &lpf) {
    const TimeGrid grid = cfg.time_grid();
    const auto rates = cfg.cavity_rates();
    const double narrow = std::min({rates[0], rates[1], rates[2]});
    const TemporalMode opo = opo_mode(rates[3], 0.0, grid);
    const TemporalMode filt = filter_mode(narrow, 0.0, grid);
    const TemporalMode comp = composite_mode(rates, 0.0, grid);
    const TemporalMode resp = lpf_mode(lpf, 0.0, grid);
    std::string out = "t,opo,filter,composite,lpf\n";
    for (std::size_t i = 0; i < grid.samples; ++i) {
        out += format_number(grid.at(i)) + ',' + format_number(opo.values[i]) + ',' + format_number(filt.values[i]) +
               ',' + format_number(comp.values[i]) + ',' + format_number(resp.values[i]) + '\n';
    }
    return out;
}

std::string spectra_csv(const ExperimentConfig &cfg, std::size_t points) {
    if (points < 2) {
        throw DomainError("spectra table needs at least two points");
    }
    const SqueezingSpectrum lossy = cfg.spectrum(cfg.spectrum_loss());
    const SqueezingSpectrum ideal = cfg.spectrum(0.0);
    const double f_max = 4.0 * lossy.f_hwhm;
    std::string out = "f_hz,s_minus,s_plus,s_minus_lossless,s_plus_lossless\n";
    for (std::size_t i = 0; i < points; ++i) {
        const double f = f_max * static_cast<double>(i) / static_cast<double>(points - 1);
        out += format_number(f) + ',' + format_number(squeezing_spectrum(lossy, f, Quadrature::kSqueezed)) + ',' +
               format_number(squeezing_spectrum(lossy, f, Quadrature::kAntiSqueezed)) + ',' +
               format_number(squeezing_spectrum(ideal, f, Quadrature::kSqueezed)) + ',' +
               format_number(squeezing_spectrum(ideal, f, Quadrature::kAntiSqueezed)) + '\n';
    }
    return out;
}

}  // namespace catfilter
