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

// Command line front end: simulate, analyze, report, modes, spectra.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "catfilter/config.h"
#include "catfilter/errors.h"
#include "catfilter/io.h"
#include "catfilter/report.h"
#include "catfilter/simulate.h"
#include "catfilter/tomography.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace catfilter;

namespace {

void print_error(const std::string &kind, const std::string &message, int line = 0) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    if (line > 0) {
        j["line"] = line;
    }
    std::cerr << j.dump() << '\n';
}

std::string prepare_out_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    }
    return dir;
}

std::string join(const std::string &dir, const std::string &file) { return (fs::path(dir) / file).string(); }

ExperimentConfig load_with_seed(const std::string &path, const std::optional<std::uint64_t> &seed) {
    ExperimentConfig cfg = load_config(path);
    if (seed) {
        cfg.seed = *seed;
    }
    return cfg;
}

void cmd_simulate(const std::string &config, const std::optional<std::uint64_t> &seed, const std::string &out) {
    const ExperimentConfig cfg = load_with_seed(config, seed);
    const ExperimentResult res = run_experiment(cfg);
    const std::string dir = prepare_out_dir(out);
    DatasetMeta meta{serialize_config(cfg), config_hash(cfg), cfg.seed, res.overlap_theory,
                     res.overlap_lpf,       res.pca_ambiguous, res.lpf};
    write_dataset(join(dir, "dataset.csv"), res.data, meta);
    write_text_file(join(dir, "mode_theory.csv"), mode_to_csv(res.theory_mode));
    write_text_file(join(dir, "mode_estimated.csv"), mode_to_csv(res.estimated_mode));
    write_text_file(join(dir, "filter.json"), filter_to_json(res.lpf));
    write_text_file(join(dir, "overlaps.json"),
                    nlohmann::json{{"overlap_theory", res.overlap_theory}, {"overlap_lpf", res.overlap_lpf}}.dump(1));
    std::cout << "wrote " << res.data.size() << " events to " << join(dir, "dataset.csv") << '\n';
    if (res.pca_ambiguous) {
        std::cerr << "warning: PCA eigenvalue gap below 1%; using the theory mode for post-processing\n";
    }
}

void cmd_analyze(const std::string &dataset, const std::string &channel, const std::string &out) {
    const auto [data, meta] = read_dataset(dataset);
    const Analysis a = analyze_dataset(data, meta);
    const std::string dir = prepare_out_dir(out);
    const bool post = channel == "post";
    const DensityMatrix &rho = post ? a.rho_post : a.rho_realtime;
    write_text_file(join(dir, "metrics.json"), report_to_json(a.report));
    write_text_file(join(dir, "density_" + channel + ".json"), density_matrix_to_json(rho));
    const WignerSurface surface = wigner_surface(rho);
    if (surface.truncation_warning) {
        std::cerr << "warning: Wigner surface tail estimate " << surface.tail_estimate << '\n';
    }
    write_text_file(join(dir, "wigner_" + channel + ".csv"), wigner_to_csv(surface));
    const ScenarioReport &r = a.report;
    std::cout << r.name << ": W(0,0) post " << r.post.w00 << ", realtime " << r.realtime.w00 << ", even sum "
              << r.post.even_sum << " (predicted " << r.even_sum_predicted << "), cat F " << r.post.best_cat_f
              << " at |alpha|^2 " << r.post.best_alpha_sq << '\n';
}

void cmd_report(const std::vector<std::string> &fragments, const std::string &out) {
    std::vector<ScenarioReport> parsed;
    for (const auto &f : fragments) {
        parsed.push_back(report_from_json(read_text_file(f)));
    }
    const std::vector<ScenarioReport> merged = merge_reports(parsed);
    const std::string dir = prepare_out_dir(out);
    write_text_file(join(dir, "report.json"), merged_report_json(merged));
    write_text_file(join(dir, "summary.csv"), summary_csv(merged));
    write_text_file(join(dir, "correlations.csv"), correlations_csv(merged));
    for (const auto &r : merged) {
        const ExperimentConfig cfg = parse_config(r.config_text);
        const FilterCoefficients lpf = design_lpf(composite_mode(cfg.cavity_rates(), 0.0, cfg.time_grid()));
        write_text_file(join(dir, "modes_" + r.name + ".csv"), modes_csv(cfg, lpf));
        write_text_file(join(dir, "spectra_" + r.name + ".csv"), spectra_csv(cfg));
        write_text_file(join(dir, "marginals_" + r.name + ".csv"), marginals_csv(r));
    }
    std::cout << summary_csv(merged);
}

void cmd_modes(const std::string &config, const std::string &out) {
    const ExperimentConfig cfg = load_config(config);
    const FilterCoefficients lpf = design_lpf(composite_mode(cfg.cavity_rates(), 0.0, cfg.time_grid()));
    const std::string dir = prepare_out_dir(out);
    write_text_file(join(dir, "modes.csv"), modes_csv(cfg, lpf));
    write_text_file(join(dir, "filter.json"), filter_to_json(lpf));
    std::cout << "LPF overlap with the composite mode: " << lpf.overlap << '\n';
}

void cmd_spectra(const std::string &config, const std::string &out) {
    const ExperimentConfig cfg = load_config(config);
    const std::string dir = prepare_out_dir(out);
    write_text_file(join(dir, "spectra.csv"), spectra_csv(cfg));
    std::cout << "wrote " << join(dir, "spectra.csv") << '\n';
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Photon-subtracted squeezed-state simulation, tomography and real-time filter analysis"};
    app.require_subcommand(1);

    std::string config;
    std::string dataset;
    std::string channel = "post";
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> fragments;

    auto *sim = app.add_subcommand("simulate", "Simulate a dataset from a config");
    sim->add_option("--config", config, "Scenario config file")->required();
    sim->add_option("--seed", seed, "Override the config seed");
    sim->add_option("--out-dir", out_dir, "Output directory");

    auto *ana = app.add_subcommand("analyze", "Tomography and metrics for a simulated dataset");
    ana->add_option("--dataset", dataset, "dataset.csv written by simulate")->required();
    ana->add_option("--channel", channel, "Channel for the density matrix and Wigner outputs")
        ->check(CLI::IsMember({"post", "realtime"}));
    ana->add_option("--out-dir", out_dir, "Output directory");

    auto *rep = app.add_subcommand("report", "Merge metrics fragments into a report with plot tables");
    rep->add_option("fragments", fragments, "metrics.json files from analyze")->required();
    rep->add_option("--out-dir", out_dir, "Output directory");

    auto *mod = app.add_subcommand("modes", "Dump the temporal mode curves and the designed filter");
    mod->add_option("--config", config, "Scenario config file")->required();
    mod->add_option("--out-dir", out_dir, "Output directory");

    auto *spe = app.add_subcommand("spectra", "Dump the squeezing spectra");
    spe->add_option("--config", config, "Scenario config file")->required();
    spe->add_option("--out-dir", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (*sim) {
            cmd_simulate(config, seed, out_dir);
        } else if (*ana) {
            cmd_analyze(dataset, channel, out_dir);
        } else if (*rep) {
            cmd_report(fragments, out_dir);
        } else if (*mod) {
            cmd_modes(config, out_dir);
        } else if (*spe) {
            cmd_spectra(config, out_dir);
        }
    } catch (const ParseError &e) {
        print_error(e.kind(), e.what(), e.line());
        return 1;
    } catch (const Error &e) {
        print_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception &e) {
        print_error("internal", e.what());
        return 1;
    }
    return 0;
}
