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


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "catfilter/config.h"
#include "catfilter/errors.h"
#include "catfilter/fock.h"
#include "catfilter/io.h"
#include "catfilter/mode_est.h"
#include "catfilter/report.h"
#include "catfilter/simulate.h"
#include "catfilter/spectra.h"
#include "catfilter/temporal.h"
#include "catfilter/tomography.h"

namespace py = pybind11;
using namespace catfilter;

namespace {

py::dict mode_dict(const TemporalMode &m) {
    std::vector<double> t(m.grid.samples);
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = m.grid.at(i);
    }
    py::dict d;
    d["t"] = t;
    d["values"] = m.values;
    d["t0"] = m.t0;
    return d;
}

py::dict filter_dict(const FilterCoefficients &c) {
    py::dict d;
    d["tau"] = std::vector<double>(c.tau.begin(), c.tau.end());
    d["gain"] = c.gain;
    d["overlap"] = c.overlap;
    return d;
}

py::dict dataset_dict(const QuadratureDataset &data) {
    std::vector<std::string> labels;
    labels.reserve(data.labels.size());
    for (EventLabel l : data.labels) {
        labels.emplace_back(label_name(l));
    }
    py::dict d;
    d["name"] = data.name;
    d["config_hash"] = data.config_hash;
    d["seed"] = data.seed;
    d["phases_deg"] = data.phases_deg;
    d["events_per_phase"] = data.events_per_phase;
    d["x_post"] = data.x_post;
    d["x_realtime"] = data.x_realtime;
    d["labels"] = labels;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photon-subtraction simulator and homodyne tomography core";

    // Translators registered later are tried first, so the base class goes first.
    const auto base = py::register_exception<Error>(m, "CatfilterError");
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<ShapeMismatch>(m, "ShapeMismatch", base);
    py::register_exception<TruncationError>(m, "TruncationError", base);
    py::register_exception<DegenerateHerald>(m, "DegenerateHerald", base);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base);
    py::register_exception<ModelViolation>(m, "ModelViolation", base);
    py::register_exception<IoError>(m, "IoError", base);
    py::register_exception<ParseError>(m, "ParseError", base);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<ComplexMatrix>(), py::arg("elements"))
        .def_static("vacuum", &DensityMatrix::vacuum, py::arg("cutoff") = kDefaultCutoff)
        .def_static("fock", &DensityMatrix::fock, py::arg("n"), py::arg("cutoff") = kDefaultCutoff)
        .def_property_readonly("cutoff", &DensityMatrix::cutoff)
        .def_property_readonly("matrix", &DensityMatrix::matrix)
        .def("trace", &DensityMatrix::trace)
        .def("purity", &DensityMatrix::purity)
        .def("mean_photon_number", &DensityMatrix::mean_photon_number)
        .def("min_eigenvalue", &DensityMatrix::min_eigenvalue);

    m.def(
        "squeezed_vacuum",
        [](double r_eff, double l_eff, std::size_t cutoff) {
            return squeezed_vacuum(GaussianInModeState::from_effective(r_eff, l_eff), cutoff);
        },
        py::arg("r_eff"), py::arg("l_eff") = 0.0, py::arg("cutoff") = kDefaultCutoff);
    m.def("apply_loss", &apply_loss, py::arg("rho"), py::arg("eta"));
    m.def(
        "photon_subtract",
        [](const DensityMatrix &rho, double reflectivity, int n_sub) {
            const HeraldResult h = photon_subtract(rho, reflectivity, n_sub);
            return py::make_tuple(h.state, h.probability);
        },
        py::arg("rho"), py::arg("reflectivity"), py::arg("n_sub") = 1);
    m.def("mix", &mix, py::arg("rho_a"), py::arg("rho_b"), py::arg("w"));
    m.def("rotate", &rotate, py::arg("rho"), py::arg("delta"));
    m.def("photon_distribution", &photon_distribution);
    m.def("even_sum", &even_sum);
    m.def("wigner_origin", &wigner_origin);
    m.def(
        "wigner", [](const DensityMatrix &rho, double x, double p) { return wigner(rho, x, p); }, py::arg("rho"),
        py::arg("x"), py::arg("p"));
    m.def("uhlmann_fidelity", &uhlmann_fidelity);
    m.def(
        "best_cat_fidelity",
        [](const DensityMatrix &rho) {
            const CatFit f = best_cat_fidelity(rho);
            return py::make_tuple(f.fidelity, f.alpha);
        },
        py::arg("rho"));

    m.def("table_cavity_rates", &table_cavity_rates);
    m.def(
        "composite_mode",
        [](const std::array<double, 4> &rates, double dt, std::size_t samples) {
            return mode_dict(composite_mode(rates, 0.0, TimeGrid::centered(dt, samples)));
        },
        py::arg("rates"), py::arg("dt") = 0.5e-9, py::arg("samples") = 2048);
    m.def(
        "design_lpf",
        [](const std::array<double, 4> &rates) { return filter_dict(design_lpf(composite_mode(rates))); },
        py::arg("rates"));
    m.def(
        "wavepacket_variances",
        [](const std::array<double, 4> &rates, double xi, double loss, double dt, std::size_t samples) {
            const auto mode = composite_mode(rates, 0.0, TimeGrid::centered(dt, samples));
            const GaussianInModeState g = wavepacket_variances(mode, SqueezingSpectrum{xi, loss, rates[3] / (2.0 * std::numbers::pi)});
            return py::make_tuple(g.v_minus, g.v_plus, g.r_eff, g.l_eff);
        },
        py::arg("rates"), py::arg("xi"), py::arg("loss") = 0.0, py::arg("dt") = 0.1e-9, py::arg("samples") = 16384);

    m.def(
        "parse_config", [](const std::string &text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Validates a configuration and returns its canonical text.");
    m.def(
        "load_config", [](const std::string &path) { return serialize_config(load_config(path)); },
        py::arg("path"));
    m.def(
        "config_hash", [](const std::string &text) { return config_hash(parse_config(text)); }, py::arg("text"));
    m.def(
        "predicted_even_sum", [](const std::string &text) { return predicted_even_sum(parse_config(text)); },
        py::arg("config_text"));

    m.def(
        "run_experiment",
        [](const std::string &text) {
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(parse_config(text));
            }
            py::dict d = dataset_dict(r.data);
            d["theory_mode"] = mode_dict(r.theory_mode);
            d["estimated_mode"] = mode_dict(r.estimated_mode);
            d["lpf"] = filter_dict(r.lpf);
            d["overlap_theory"] = r.overlap_theory;
            d["overlap_lpf"] = r.overlap_lpf;
            d["pca_ambiguous"] = r.pca_ambiguous;
            return d;
        },
        py::arg("config_text"));

    m.def(
        "sample_quadratures",
        [](const DensityMatrix &rho, const std::vector<double> &theta, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            std::vector<double> x(theta.size());
            for (std::size_t i = 0; i < theta.size(); ++i) {
                x[i] = sample_heralded_quadrature(rho, theta[i], rng);
            }
            return x;
        },
        py::arg("rho"), py::arg("theta"), py::arg("seed"), "Exact quadrature draws at the given LO phases.");

    m.def(
        "mle_reconstruct",
        [](const std::vector<double> &theta, const std::vector<double> &x, std::size_t cutoff, int max_iter,
           double tol) {
            MleOptions opts;
            opts.cutoff = cutoff;
            opts.max_iter = max_iter;
            opts.tol = tol;
            py::gil_scoped_release release;
            MleResult r = mle_reconstruct(theta, x, opts);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["rho"] = r.rho;
            d["loglikelihood"] = r.loglikelihood;
            d["iterations"] = r.iterations;
            d["converged"] = r.converged;
            d["floored_samples"] = r.floored_samples;
            return d;
        },
        py::arg("theta"), py::arg("x"), py::arg("cutoff") = kTomographyCutoff, py::arg("max_iter") = 2000,
        py::arg("tol") = 1e-8);

    m.def(
        "pca_mode",
        [](const Eigen::MatrixXd &traces, double dt) {
            const PcaResult r = pca_mode(TraceEnsemble{traces, TimeGrid::centered(dt, static_cast<std::size_t>(traces.cols())), 0.0});
            return py::make_tuple(r.mode.values, r.ambiguous);
        },
        py::arg("traces"), py::arg("dt"));
    m.def(
        "ica_mode",
        [](const Eigen::MatrixXd &traces, double dt, std::size_t k, std::uint64_t seed) {
            const IcaResult r =
                ica_mode(TraceEnsemble{traces, TimeGrid::centered(dt, static_cast<std::size_t>(traces.cols())), 0.0}, k, seed);
            return py::make_tuple(r.mode.values, r.excess_kurtosis);
        },
        py::arg("traces"), py::arg("dt"), py::arg("k") = 20, py::arg("seed") = 1);

    m.def("density_matrix_to_json", &density_matrix_to_json);
    m.def("density_matrix_from_json", &density_matrix_from_json);
}
