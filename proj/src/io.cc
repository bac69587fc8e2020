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

#include "catfilter/io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "catfilter/errors.h"
#include "json.hpp"

namespace catfilter {

using nlohmann::json;

namespace {

constexpr const char *kCsvHeader = "phase_deg,event_id,x_post,x_realtime,label";

double parse_number(std::string_view s, int line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("not a number: '" + std::string(s) + "'", line);
    }
    return v;
}

json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

template <class T>
T field(const json &j, const char *key) {
    if (!j.contains(key)) {
        throw ParseError(std::string("missing JSON field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ParseError(std::string("bad JSON field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string density_matrix_to_json(const DensityMatrix &rho) {
    json re = json::array();
    json im = json::array();
    for (std::size_t m = 0; m < rho.dim(); ++m) {
        json rr = json::array();
        json ii = json::array();
        for (std::size_t n = 0; n < rho.dim(); ++n) {
            rr.push_back(rho(m, n).real());
            ii.push_back(rho(m, n).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return json{{"cutoff", rho.cutoff()}, {"real", re}, {"imag", im}}.dump(1);
}

DensityMatrix density_matrix_from_json(const std::string &text) {
    const json j = parse_json(text);
    const auto cutoff = field<std::size_t>(j, "cutoff");
    const auto re = field<std::vector<std::vector<double>>>(j, "real");
    const auto im = field<std::vector<std::vector<double>>>(j, "imag");
    const std::size_t d = cutoff + 1;
    if (re.size() != d || im.size() != d) {
        throw ShapeMismatch("density matrix rows do not match the cutoff");
    }
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        if (re[r].size() != d || im[r].size() != d) {
            throw ShapeMismatch("density matrix row " + std::to_string(r) + " has the wrong length");
        }
        for (std::size_t c = 0; c < d; ++c) {
            m(r, c) = {re[r][c], im[r][c]};
        }
    }
    return DensityMatrix(m);
}

std::string dataset_to_csv(const QuadratureDataset &data) {
    data.validate();
    std::string out = kCsvHeader;
    out += '\n';
    for (std::size_t k = 0; k < data.phases_deg.size(); ++k) {
        const std::string phase = format_number(data.phases_deg[k]);
        for (std::size_t e = 0; e < data.events_per_phase; ++e) {
            const std::size_t i = k * data.events_per_phase + e;
            out += phase;
            out += ',';
            out += std::to_string(e);
            out += ',';
            out += format_number(data.x_post[i]);
            out += ',';
            out += format_number(data.x_realtime[i]);
            out += ',';
            out += label_name(data.labels[i]);
            out += '\n';
        }
    }
    return out;
}

QuadratureDataset dataset_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ParseError(std::string("dataset header must be '") + kCsvHeader + "'", 1);
    }
    QuadratureDataset data;
    std::vector<std::size_t> counts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string_view> cols;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
            cols.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        cols.push_back(rest);
        if (cols.size() != 5) {
            throw ParseError("expected 5 columns, found " + std::to_string(cols.size()), lineno);
        }
        const double phase = parse_number(cols[0], lineno);
        if (data.phases_deg.empty() || data.phases_deg.back() != phase) {
            data.phases_deg.push_back(phase);
            counts.push_back(0);
        }
        const double event = parse_number(cols[1], lineno);
        if (event != static_cast<double>(counts.back())) {
            throw ParseError("event ids must count up from 0 within each phase", lineno);
        }
        ++counts.back();
        data.x_post.push_back(parse_number(cols[2], lineno));
        data.x_realtime.push_back(parse_number(cols[3], lineno));
        try {
            data.labels.push_back(parse_label(cols[4]));
        } catch (const ParseError &) {
            throw ParseError("unknown label '" + std::string(cols[4]) + "'", lineno);
        }
    }
    if (counts.empty()) {
        throw ParseError("dataset has no rows");
    }
    for (std::size_t c : counts) {
        if (c != counts.front()) {
            throw ShapeMismatch("phases hold different event counts");
        }
    }
    data.events_per_phase = counts.front();
    data.validate();
    return data;
}

std::string sidecar_path(const std::string &csv_path) {
    const std::string ext = ".csv";
    if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
        return csv_path.substr(0, csv_path.size() - ext.size()) + ".meta.json";
    }
    return csv_path + ".meta.json";
}

std::string meta_to_json(const DatasetMeta &meta) {
    const json j{{"config", meta.config_text},
                 {"config_hash", meta.config_hash},
                 {"seed", meta.seed},
                 {"overlap_theory", meta.overlap_theory},
                 {"overlap_lpf", meta.overlap_lpf},
                 {"pca_ambiguous", meta.pca_ambiguous},
                 {"lpf", parse_json(filter_to_json(meta.lpf))}};
    return j.dump(1);
}

DatasetMeta meta_from_json(const std::string &text) {
    const json j = parse_json(text);
    DatasetMeta m;
    m.config_text = field<std::string>(j, "config");
    m.config_hash = field<std::string>(j, "config_hash");
    m.seed = field<std::uint64_t>(j, "seed");
    m.overlap_theory = field<double>(j, "overlap_theory");
    m.overlap_lpf = field<double>(j, "overlap_lpf");
    m.pca_ambiguous = field<bool>(j, "pca_ambiguous");
    const json lpf = field<json>(j, "lpf");
    const auto tau = field<std::vector<double>>(lpf, "tau");
    if (tau.size() != 3) {
        throw ShapeMismatch("filter needs three time constants");
    }
    m.lpf = make_filter({tau[0], tau[1], tau[2]});
    m.lpf.overlap = field<double>(lpf, "overlap");
    return m;
}

void write_dataset(const std::string &csv_path, const QuadratureDataset &data, const DatasetMeta &meta) {
    write_text_file(csv_path, dataset_to_csv(data));
    write_text_file(sidecar_path(csv_path), meta_to_json(meta));
}

std::pair<QuadratureDataset, DatasetMeta> read_dataset(const std::string &csv_path) {
    QuadratureDataset data = dataset_from_csv(read_text_file(csv_path));
    DatasetMeta meta = meta_from_json(read_text_file(sidecar_path(csv_path)));
    const ExperimentConfig cfg = parse_config(meta.config_text);
    if (config_hash(cfg) != meta.config_hash) {
        throw ShapeMismatch("sidecar config does not match its recorded hash");
    }
    if (cfg.phases != static_cast<int>(data.phases_deg.size()) ||
        cfg.events_per_phase != static_cast<int>(data.events_per_phase)) {
        throw ShapeMismatch("dataset rows do not match the sidecar configuration");
    }
    data.name = cfg.name;
    data.config_hash = meta.config_hash;
    data.seed = meta.seed;
    return {std::move(data), std::move(meta)};
}

std::string mode_to_csv(const TemporalMode &mode) {
    std::string out = "t,amplitude\n";
    for (std::size_t i = 0; i < mode.values.size(); ++i) {
        out += format_number(mode.grid.at(i) - mode.t0);
        out += ',';
        out += format_number(mode.values[i]);
        out += '\n';
    }
    return out;
}

std::string filter_to_json(const FilterCoefficients &coeffs) {
    return json{{"tau", {coeffs.tau[0], coeffs.tau[1], coeffs.tau[2]}},
                {"gain", coeffs.gain},
                {"overlap", coeffs.overlap}}
        .dump(1);
}

std::string wigner_to_csv(const WignerSurface &surface) {
    std::string out = "x,p,W\n";
    const std::size_t n = surface.axis.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out += format_number(surface.axis[i]);
            out += ',';
            out += format_number(surface.axis[j]);
            out += ',';
            out += format_number(surface.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            out += '\n';
        }
    }
    return out;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

}  // namespace catfilter
