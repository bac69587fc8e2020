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

// File formats: dataset CSV + JSON sidecar, density matrix JSON, mode and
// Wigner CSVs, filter JSON.

#include <string>

#include "catfilter/fock.h"
#include "catfilter/simulate.h"
#include "catfilter/temporal.h"

namespace catfilter {

/// Shortest text that parses back to exactly `v`.
std::string format_number(double v);

/// {"cutoff", "real": [[..]], "imag": [[..]]}.
std::string density_matrix_to_json(const DensityMatrix &rho);
DensityMatrix density_matrix_from_json(const std::string &text);

/// Columns phase_deg,event_id,x_post,x_realtime,label, phase-major.
std::string dataset_to_csv(const QuadratureDataset &data);
/// Throws ParseError on a bad header or row and ShapeMismatch when the phases
/// do not hold equal event counts.
QuadratureDataset dataset_from_csv(const std::string &text);

/// Sidecar path for a dataset CSV: foo.csv -> foo.meta.json.
std::string sidecar_path(const std::string &csv_path);

struct DatasetMeta {
    std::string config_text;  // serialized ExperimentConfig
    std::string config_hash;
    std::uint64_t seed = 0;
    double overlap_theory = 0.0;
    double overlap_lpf = 0.0;
    bool pca_ambiguous = false;
    FilterCoefficients lpf;
};

std::string meta_to_json(const DatasetMeta &meta);
DatasetMeta meta_from_json(const std::string &text);

/// Writes the CSV and its sidecar.
void write_dataset(const std::string &csv_path, const QuadratureDataset &data, const DatasetMeta &meta);
/// Reads the CSV and sidecar; the sidecar's hash and seed must match the rows'
/// metadata.
std::pair<QuadratureDataset, DatasetMeta> read_dataset(const std::string &csv_path);

/// Two columns t,amplitude with t in seconds relative to the mode's t0.
std::string mode_to_csv(const TemporalMode &mode);
/// {"tau": [..], "gain": g, "overlap": o}, times in seconds.
std::string filter_to_json(const FilterCoefficients &coeffs);
/// Long format x,p,W.
std::string wigner_to_csv(const WignerSurface &surface);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace catfilter
