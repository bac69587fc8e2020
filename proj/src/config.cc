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

#include "catfilter/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "catfilter/errors.h"

namespace catfilter {

double ExperimentConfig::pump_xi() const {
    if (xi) {
        return *xi;
    }
    return pump_to_xi(power_mw.value_or(0.0), threshold_mw.value_or(0.0));
}

double ExperimentConfig::total_loss() const {
    double s = 0.0;
    for (const auto &item : losses) {
        s += item.second;
    }
    return s;
}

double ExperimentConfig::spectrum_loss() const { return std::min(1.0, total_loss() + (1.0 - tap_reflectivity)); }

std::array<double, 4> ExperimentConfig::cavity_rates() const {
    return {rate_from_fwhm(fc1_fwhm_mhz * 1e6), rate_from_fwhm(fc2_fwhm_mhz * 1e6), rate_from_fwhm(fc3_fwhm_mhz * 1e6),
            rate_from_fwhm(opo_fwhm_mhz * 1e6)};
}

TimeGrid ExperimentConfig::time_grid() const {
    return TimeGrid::centered(sample_interval_ns * 1e-9, static_cast<std::size_t>(samples));
}

std::vector<double> ExperimentConfig::phase_angles() const {
    std::vector<double> out(static_cast<std::size_t>(phases));
    for (int k = 0; k < phases; ++k) {
        out[k] = k * phase_step_deg * std::numbers::pi / 180.0;
    }
    return out;
}

SqueezingSpectrum ExperimentConfig::spectrum(double loss) const {
    return SqueezingSpectrum{pump_xi(), loss, opo_fwhm_mhz * 1e6 / 2.0};
}

namespace {

void check(bool ok, const std::string &message) {
    if (!ok) {
        throw DomainError(message);
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    check(!name.empty(), "scenario name must not be empty");
    for (double f : {opo_fwhm_mhz, fc1_fwhm_mhz, fc2_fwhm_mhz, fc3_fwhm_mhz}) {
        check(f > 0.0 && std::isfinite(f), "cavity linewidths must be positive");
    }
    if (xi) {
        check(*xi >= 0.0 && *xi < 1.0, "xi must lie in [0, 1)");
        check(!power_mw && !threshold_mw, "give either xi or power_mw + threshold_mw, not both");
    } else {
        check(power_mw && threshold_mw, "pump needs xi or both power_mw and threshold_mw");
        check(*power_mw >= 0.0 && *threshold_mw > 0.0 && *power_mw < *threshold_mw,
              "pump power must be non-negative and below threshold");
    }
    check(tap_reflectivity > 0.0 && tap_reflectivity < 1.0, "tap_reflectivity must lie in (0, 1)");
    for (const auto &item : losses) {
        check(item.second >= 0.0 && item.second <= 1.0, "loss item " + item.first + " must lie in [0, 1]");
    }
    check(total_loss() <= 1.0, "loss items sum to more than 1");
    check(fake_counts >= 0.0 && two_photon >= 0.0, "mixedness fractions must be non-negative");
    check(fake_counts + two_photon <= 1.0, "mixedness fractions sum to more than 1");
    check(phases >= 1, "phases must be at least 1");
    check(phase_step_deg > 0.0 && std::isfinite(phase_step_deg), "phase_step_deg must be positive");
    check(events_per_phase >= 1, "events_per_phase must be positive");
    check(sample_interval_ns > 0.0, "sample_interval_ns must be positive");
    check(samples >= 64 && samples % 2 == 0, "samples must be an even number >= 64");
    check(fock_cutoff >= 10 && fock_cutoff <= 60, "fock_cutoff must lie in [10, 60]");
}

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Value {
    std::string text;
    bool quoted = false;
    int line = 0;
};

double as_number(const Value &v, const std::string &key) {
    if (v.quoted) {
        throw ParseError(key + " expects a number", v.line);
    }
    double out = 0.0;
    const char *end = v.text.data() + v.text.size();
    const auto res = std::from_chars(v.text.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(out)) {
        throw ParseError(key + ": '" + v.text + "' is not a number", v.line);
    }
    return out;
}

int as_int(const Value &v, const std::string &key) {
    const double d = as_number(v, key);
    if (d != std::floor(d) || std::abs(d) > 2e9) {
        throw ParseError(key + " expects an integer", v.line);
    }
    return static_cast<int>(d);
}

std::uint64_t as_u64(const Value &v, const std::string &key) {
    std::uint64_t out = 0;
    const char *end = v.text.data() + v.text.size();
    const auto res = std::from_chars(v.text.data(), end, out);
    if (v.quoted || res.ec != std::errc() || res.ptr != end) {
        throw ParseError(key + " expects a non-negative integer", v.line);
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Which field an invalid-value message refers to, for line diagnostics.
const std::map<std::string, std::string> kFieldKeys = {
    {"xi", "pump.xi"},
    {"pump", "pump.power_mw"},
    {"tap_reflectivity", "pump.tap_reflectivity"},
    {"mixedness", "mixedness.fake_counts"},
    {"phases must", "acquisition.phases"},
    {"phase_step_deg", "acquisition.phase_step_deg"},
    {"events_per_phase", "acquisition.events_per_phase"},
    {"sample_interval_ns", "acquisition.sample_interval_ns"},
    {"samples must", "acquisition.samples"},
    {"fock_cutoff", "acquisition.fock_cutoff"},
    {"cavity", "cavities.opo_fwhm_mhz"},
};

}  // namespace

ExperimentConfig parse_config(const std::string &text) {
    ExperimentConfig cfg;
    cfg.losses.clear();
    cfg.xi.reset();

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    std::map<std::string, int> seen;
    bool losses_given = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') {
                in_string = !in_string;
            } else if (line[i] == '#' && !in_string) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("unterminated section header", line_no);
            }
            section = trim(line.substr(1, line.size() - 2));
            static const char *kSections[] = {"scenario", "cavities", "pump", "losses", "mixedness", "acquisition"};
            if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
                throw ParseError("unknown section [" + section + "]", line_no);
            }
            if (section == "losses") {
                losses_given = true;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value", line_no);
        }
        if (section.empty()) {
            throw ParseError("key outside of any section", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        Value v{trim(line.substr(eq + 1)), false, line_no};
        if (key.empty() || v.text.empty()) {
            throw ParseError("empty key or value", line_no);
        }
        if (v.text.front() == '"') {
            if (v.text.size() < 2 || v.text.back() != '"') {
                throw ParseError("unterminated string", line_no);
            }
            v.text = v.text.substr(1, v.text.size() - 2);
            v.quoted = true;
        }
        const std::string full = section + "." + key;
        if (seen.count(full)) {
            throw ParseError("duplicate key " + full + " (first set on line " + std::to_string(seen[full]) + ")",
                             line_no);
        }
        seen[full] = line_no;

        const std::map<std::string, std::function<void()>> setters = {
            {"scenario.name",
             [&] {
                 if (!v.quoted) {
                     throw ParseError("name expects a quoted string", line_no);
                 }
                 cfg.name = v.text;
             }},
            {"cavities.opo_fwhm_mhz", [&] { cfg.opo_fwhm_mhz = as_number(v, key); }},
            {"cavities.fc1_fwhm_mhz", [&] { cfg.fc1_fwhm_mhz = as_number(v, key); }},
            {"cavities.fc2_fwhm_mhz", [&] { cfg.fc2_fwhm_mhz = as_number(v, key); }},
            {"cavities.fc3_fwhm_mhz", [&] { cfg.fc3_fwhm_mhz = as_number(v, key); }},
            {"pump.xi", [&] { cfg.xi = as_number(v, key); }},
            {"pump.power_mw", [&] { cfg.power_mw = as_number(v, key); }},
            {"pump.threshold_mw", [&] { cfg.threshold_mw = as_number(v, key); }},
            {"pump.tap_reflectivity", [&] { cfg.tap_reflectivity = as_number(v, key); }},
            {"mixedness.fake_counts", [&] { cfg.fake_counts = as_number(v, key); }},
            {"mixedness.two_photon", [&] { cfg.two_photon = as_number(v, key); }},
            {"acquisition.phases", [&] { cfg.phases = as_int(v, key); }},
            {"acquisition.phase_step_deg", [&] { cfg.phase_step_deg = as_number(v, key); }},
            {"acquisition.events_per_phase", [&] { cfg.events_per_phase = as_int(v, key); }},
            {"acquisition.sample_interval_ns", [&] { cfg.sample_interval_ns = as_number(v, key); }},
            {"acquisition.samples", [&] { cfg.samples = as_int(v, key); }},
            {"acquisition.seed", [&] { cfg.seed = as_u64(v, key); }},
            {"acquisition.fock_cutoff", [&] { cfg.fock_cutoff = as_int(v, key); }},
        };
        if (section == "losses") {
            cfg.losses.emplace_back(key, as_number(v, key));
            continue;
        }
        const auto it = setters.find(full);
        if (it == setters.end()) {
            throw ParseError("unknown key " + full, line_no);
        }
        it->second();
    }
    if (!losses_given) {
        cfg.losses = ExperimentConfig{}.losses;
    }
    if (!cfg.xi && !cfg.power_mw && !cfg.threshold_mw) {
        cfg.xi = ExperimentConfig{}.xi;
    }
    try {
        cfg.validate();
    } catch (const DomainError &e) {
        const std::string msg = e.what();
        int line = 0;
        for (const auto &[needle, field] : kFieldKeys) {
            if (msg.find(needle) != std::string::npos && seen.count(field)) {
                line = seen[field];
                break;
            }
        }
        if (line == 0 && msg.rfind("loss item ", 0) == 0) {
            const std::string item = msg.substr(10, msg.find(' ', 10) - 10);
            if (seen.count("losses." + item)) {
                line = seen["losses." + item];
            }
        }
        throw ParseError(msg, line);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

std::string serialize(const ExperimentConfig &c, bool with_seed) {
    std::ostringstream o;
    o << "[scenario]\nname = \"" << c.name << "\"\n\n";
    o << "[cavities]\n";
    o << "opo_fwhm_mhz = " << fmt(c.opo_fwhm_mhz) << "\n";
    o << "fc1_fwhm_mhz = " << fmt(c.fc1_fwhm_mhz) << "\n";
    o << "fc2_fwhm_mhz = " << fmt(c.fc2_fwhm_mhz) << "\n";
    o << "fc3_fwhm_mhz = " << fmt(c.fc3_fwhm_mhz) << "\n\n";
    o << "[pump]\n";
    if (c.xi) {
        o << "xi = " << fmt(*c.xi) << "\n";
    }
    if (c.power_mw) {
        o << "power_mw = " << fmt(*c.power_mw) << "\n";
    }
    if (c.threshold_mw) {
        o << "threshold_mw = " << fmt(*c.threshold_mw) << "\n";
    }
    o << "tap_reflectivity = " << fmt(c.tap_reflectivity) << "\n\n";
    o << "[losses]\n";
    for (const auto &item : c.losses) {
        o << item.first << " = " << fmt(item.second) << "\n";
    }
    o << "\n[mixedness]\n";
    o << "fake_counts = " << fmt(c.fake_counts) << "\n";
    o << "two_photon = " << fmt(c.two_photon) << "\n\n";
    o << "[acquisition]\n";
    o << "phases = " << c.phases << "\n";
    o << "phase_step_deg = " << fmt(c.phase_step_deg) << "\n";
    o << "events_per_phase = " << c.events_per_phase << "\n";
    o << "sample_interval_ns = " << fmt(c.sample_interval_ns) << "\n";
    o << "samples = " << c.samples << "\n";
    if (with_seed) {
        o << "seed = " << c.seed << "\n";
    }
    o << "fock_cutoff = " << c.fock_cutoff << "\n";
    return o.str();
}

}  // namespace

std::string serialize_config(const ExperimentConfig &cfg) { return serialize(cfg, true); }

std::string config_hash(const ExperimentConfig &cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(cfg, false)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace catfilter
