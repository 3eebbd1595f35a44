// Copyright 2026 The qclassical authors
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

#ifndef QCLASSICAL_REPORT_HPP
#define QCLASSICAL_REPORT_HPP

#include "detect_classical.hpp"
#include "detect_generalized.hpp"
#include "ndlid.hpp"
#include "states.hpp"
#include "types.hpp"
#include "version.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>

// Reports are built once as JSON and either dumped as-is (structured mode)
// or rendered to text from the same document, so both carry identical facts.
// Basis vectors are reported to 6 significant digits; residuals and rates
// keep full precision.

namespace qcl {

// Rounds through a 6-significant-digit decimal representation.
inline double round6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

template <class Real>
nlohmann::json basis_json(const CMat<Real>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c)
            row.push_back({round6(static_cast<double>(m(r, c).real())),
                           round6(static_cast<double>(m(r, c).imag()))});
        rows.push_back(row);
    }
    return rows;
}

template <class Real>
nlohmann::json classical_json(const ClassicalVerdict<Real>& v) {
    nlohmann::json j;
    j["verdict"] = v.is_classical;
    j["commutator_pairs_checked"] = v.commutator_pairs_checked;
    if (v.defective_block)
        j["defective_block"] = {v.defective_block->i, v.defective_block->j};
    if (v.noncommuting_pair)
        j["noncommuting_pair"] = {
            {"a", {v.noncommuting_pair->a.i, v.noncommuting_pair->a.j}},
            {"b", {v.noncommuting_pair->b.i, v.noncommuting_pair->b.j}},
            {"scaled_norm", v.noncommuting_pair->scaled_norm}};
    if (v.is_classical) {
        j["certificate_residual"] = static_cast<double>(v.certificate_residual);
        j["weights"] = nlohmann::json::array();
        for (Index i = 0; i < v.weights.size(); ++i)
            j["weights"].push_back(static_cast<double>(v.weights(i)));
        j["basis"] = basis_json(v.basis);
    }
    return j;
}

template <class Real>
nlohmann::json generalized_json(const GeneralizedVerdict<Real>& v) {
    nlohmann::json j;
    j["verdict"] = v.is_generalized_classical;
    j["status"] = to_string(v.status);
    j["iterations"] = v.feasibility.iterations;
    j["solver_residual"] = static_cast<double>(v.feasibility.residual);
    if (v.status == FeasStatus::Infeasible)
        j["gap_estimate"] = static_cast<double>(v.feasibility.gap_estimate);
    if (!v.note.empty()) j["note"] = v.note;
    if (v.is_generalized_classical) {
        j["certificate_residual"] = static_cast<double>(v.certificate_residual);
        j["min_eig_gap"] = static_cast<double>(v.feasibility.min_eig_gap);
        j["weights"] = nlohmann::json::array();
        for (Index i = 0; i < v.weights.size(); ++i)
            j["weights"].push_back(static_cast<double>(v.weights(i)));
        j["basis"] = basis_json(v.basis);
        j["duals"] = basis_json(v.duals);
    }
    return j;
}

inline nlohmann::json report_header(const std::string& command, const Tolerance& tol) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kVersion;
    j["command"] = command;
    j["tolerance"] = {{"eps_zero", tol.eps_zero},
                      {"eps_feas", tol.eps_feas},
                      {"max_iter", tol.max_iter}};
    return j;
}

// Text rendering.  Every line is read back from the JSON document.

namespace detail {

inline std::string yn(bool b) { return b ? "yes" : "no"; }

inline void render_basis(std::ostringstream& out, const nlohmann::json& basis,
                         const std::string& name, const std::string& pad) {
    out << pad << name << " (columns";
    out << ", entries re+im to 6 digits):\n";
    for (const auto& row : basis) {
        out << pad << "  ";
        for (const auto& cell : row) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "(%g%+gi) ", cell[0].get<double>(),
                          cell[1].get<double>());
            out << buf;
        }
        out << "\n";
    }
}

inline void render_party_classical(std::ostringstream& out, const nlohmann::json& p) {
    const auto& c = p["classical"];
    out << "  classical: " << yn(c["verdict"].get<bool>());
    out << "  [commutator pairs checked: " << c["commutator_pairs_checked"].get<long>() << "]\n";
    if (c.contains("defective_block"))
        out << "    witness: block (" << c["defective_block"][0].get<long>() << ","
            << c["defective_block"][1].get<long>() << ") is not diagonalizable\n";
    if (c.contains("noncommuting_pair"))
        out << "    witness: blocks (" << c["noncommuting_pair"]["a"][0].get<long>() << ","
            << c["noncommuting_pair"]["a"][1].get<long>() << ") and ("
            << c["noncommuting_pair"]["b"][0].get<long>() << ","
            << c["noncommuting_pair"]["b"][1].get<long>()
            << ") do not commute (scaled norm "
            << c["noncommuting_pair"]["scaled_norm"].get<double>() << ")\n";
    if (c.contains("certificate_residual"))
        out << "    certificate residual: " << c["certificate_residual"].get<double>() << "\n";
    if (c.contains("weights")) {
        out << "    weights:";
        for (const auto& w : c["weights"]) out << " " << w.get<double>();
        out << "\n";
    }
    if (c.contains("basis")) render_basis(out, c["basis"], "basis", "    ");
    if (p.contains("classical_ndlid_rate"))
        out << "    projective identification rate: "
            << p["classical_ndlid_rate"].get<double>() << "\n";
}

inline void render_party_generalized(std::ostringstream& out, const nlohmann::json& p) {
    const auto& g = p["generalized"];
    out << "  generalized-classical: " << yn(g["verdict"].get<bool>()) << " (solver "
        << g["status"].get<std::string>() << ", " << g["iterations"].get<long>()
        << " iterations, residual " << g["solver_residual"].get<double>() << ")\n";
    if (g.contains("gap_estimate"))
        out << "    infeasibility evidence: iterate gap stagnated at "
            << g["gap_estimate"].get<double>() << "\n";
    if (g.contains("note")) out << "    note: " << g["note"].get<std::string>() << "\n";
    if (g.contains("certificate_residual"))
        out << "    certificate residual: " << g["certificate_residual"].get<double>() << "\n";
    if (g.contains("weights")) {
        out << "    weights:";
        for (const auto& w : g["weights"]) out << " " << w.get<double>();
        out << "\n";
    }
    if (g.contains("basis")) render_basis(out, g["basis"], "basis", "    ");
    if (g.contains("duals")) render_basis(out, g["duals"], "duals", "    ");
    if (p.contains("generalized_ndlid_rate"))
        out << "    identification rate: " << p["generalized_ndlid_rate"].get<double>() << "\n";
}

}  // namespace detail

inline std::string render_text(const nlohmann::json& rep) {
    std::ostringstream out;
    const std::string cmd = rep.value("command", "");
    out << "qclassical " << rep.value("tool_version", "") << " -- " << cmd << "\n";
    if (rep.contains("input")) {
        out << "input: " << rep["input"].value("path", "(none)") << ", dims [";
        const auto& dims = rep["input"]["dims"];
        for (size_t i = 0; i < dims.size(); ++i)
            out << (i ? ", " : "") << dims[i].get<long>();
        out << "]\n";
    }
    if (rep.contains("tolerance"))
        out << "tolerance: eps_zero " << rep["tolerance"]["eps_zero"].get<double>()
            << ", eps_feas " << rep["tolerance"]["eps_feas"].get<double>() << ", max_iter "
            << rep["tolerance"]["max_iter"].get<long>() << "\n";

    if (cmd == "classify") {
        out << "\n";
        for (const auto& p : rep["per_party"]) {
            out << "party " << p["party"].get<int>() << " (dim " << p["dim"].get<int>()
                << "):\n";
            if (p.contains("classical")) detail::render_party_classical(out, p);
            if (p.contains("generalized")) detail::render_party_generalized(out, p);
        }
        out << "\nfully classical: " << detail::yn(rep["fully_classical"].get<bool>());
        if (rep.contains("joint_classical_residual"))
            out << " (joint product-basis residual "
                << rep["joint_classical_residual"].get<double>() << ")";
        out << "\nfully generalized-classical: "
            << rep["fully_generalized_status"].get<std::string>();
        if (rep.contains("joint_generalized_residual"))
            out << " (joint certificate residual "
                << rep["joint_generalized_residual"].get<double>() << ")";
        out << "\nhierarchy: " << rep["hierarchy"].get<std::string>() << "\n";
    } else if (cmd == "generate") {
        out << "generated class: " << rep["class"].get<std::string>() << "\n";
        out << "dims: [";
        const auto& dims = rep["dims"];
        for (size_t i = 0; i < dims.size(); ++i) out << (i ? ", " : "") << dims[i].get<long>();
        out << "], terms: " << rep["terms"].get<long>() << ", seed: "
            << rep["seed"].get<std::uint64_t>() << "\n";
        out << "state written to: " << rep["output"].get<std::string>() << "\n";
        if (rep.contains("sidecar"))
            out << "label sidecar: " << rep["sidecar"].get<std::string>() << "\n";
    } else if (cmd == "ndlid") {
        out << "party: " << rep["party"].get<int>() << "\n";
        out << "ensemble size: " << rep["ensemble_size"].get<long>() << "\n";
        out << "identification rate: " << rep["rate"].get<double>() << "\n";
        out << "projective: " << detail::yn(rep["projective"].get<bool>()) << "\n";
        out << "selectivity deviation: " << rep["selectivity_deviation"].get<double>() << "\n";
        out << "completeness deviation: " << rep["completeness_deviation"].get<double>() << "\n";
        if (rep.contains("invariance_deviation"))
            out << "state invariance deviation: " << rep["invariance_deviation"].get<double>()
                << "\n";
        if (rep.contains("outcome_probabilities")) {
            out << "outcome probabilities:";
            for (const auto& p : rep["outcome_probabilities"]) out << " " << p.get<double>();
            out << "\n";
        }
    } else if (cmd == "tomo") {
        out << "party: " << rep["party"].get<int>() << "\n";
        out << "mode: " << rep["mode"].get<std::string>() << "\n";
        if (rep.contains("shots")) out << "shots per setting: " << rep["shots"].get<long>() << "\n";
        out << "settings: " << rep["settings"].get<long>() << "\n";
        if (rep.contains("noise_scale"))
            out << "estimated block noise scale: " << rep["noise_scale"].get<double>() << "\n";
        out << "block deviation versus direct contraction: "
            << rep["block_deviation"].get<double>() << "\n";
        out << "classical verdict from reconstructed blocks: "
            << detail::yn(rep["reconstructed_classical"].get<bool>()) << "\n";
        out << "classical verdict from direct contraction: "
            << detail::yn(rep["direct_classical"].get<bool>()) << "\n";
        out << "verdicts agree: " << detail::yn(rep["verdicts_agree"].get<bool>()) << "\n";
        if (rep.contains("povm_max_scaled_commutator"))
            out << "POVM commutator test: max scaled commutator "
                << rep["povm_max_scaled_commutator"].get<double>() << " over "
                << rep["povm_pairs_checked"].get<long>() << " pairs, consistent: "
                << detail::yn(rep["povm_consistent"].get<bool>()) << "\n";
        if (rep.contains("record_file"))
            out << "record written to: " << rep["record_file"].get<std::string>() << "\n";
    }
    if (rep.contains("elapsed_ms"))
        out << "elapsed: " << rep["elapsed_ms"].get<double>() << " ms\n";
    return out.str();
}

}  // namespace qcl

#endif  // QCLASSICAL_REPORT_HPP
