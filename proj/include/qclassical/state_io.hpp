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

#ifndef QCLASSICAL_STATE_IO_HPP
#define QCLASSICAL_STATE_IO_HPP

#include "states.hpp"
#include "tomo.hpp"
#include "types.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// JSON state files.  A state is one document:
//
//   {
//     "dims": [2, 2],
//     "matrix": [[[re, im], ...], ...],      // rows of [re, im] pairs
//     "metadata": {"label": ..., "seed": ..., "generator": ...}   // optional
//   }
//
// Writers emit every float with 17 significant digits so values round-trip
// bit-exactly.  Readers throw ParseError for malformed JSON and
// ValidationError for well-formed documents with the wrong shape; numerical
// invariants are left to validate().

namespace qcl {

inline std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

template <class Real>
void write_matrix_json(std::ostream& out, const CMat<Real>& m, const std::string& pad) {
    out << "[";
    for (Index r = 0; r < m.rows(); ++r) {
        out << (r ? "," : "") << "\n" << pad << "  [";
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ", ";
            out << "[" << fmt17(static_cast<double>(m(r, c).real())) << ", "
                << fmt17(static_cast<double>(m(r, c).imag())) << "]";
        }
        out << "]";
    }
    out << "\n" << pad << "]";
}

template <class Real>
CMat<Real> read_matrix_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.empty())
        throw ValidationError(what + " must be a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    Index cols = -1;
    CMat<Real> m;
    for (Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<size_t>(r)];
        if (!row.is_array()) throw ValidationError(what + " rows must be arrays");
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            m.resize(rows, cols);
        }
        if (static_cast<Index>(row.size()) != cols)
            throw ValidationError(what + " rows have inconsistent lengths");
        for (Index c = 0; c < cols; ++c) {
            const auto& cell = row[static_cast<size_t>(c)];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number())
                throw ValidationError(what + " entries must be [re, im] number pairs");
            m(r, c) = std::complex<Real>(cell[0].template get<double>(),
                                         cell[1].template get<double>());
        }
    }
    return m;
}

inline nlohmann::json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace detail

template <class Real>
struct StateFile {
    MultipartiteState<Real> state;
    nlohmann::json metadata;  // null when the file had none
};

template <class Real>
void write_state_file(const std::string& path, const MultipartiteState<Real>& s,
                      const nlohmann::json& metadata = nullptr) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "{\n  \"dims\": [";
    for (size_t k = 0; k < s.dims.size(); ++k) out << (k ? ", " : "") << s.dims[k];
    out << "],\n  \"matrix\": ";
    detail::write_matrix_json(out, s.rho, "  ");
    if (!metadata.is_null()) out << ",\n  \"metadata\": " << metadata.dump();
    out << "\n}\n";
    if (!out) throw Error("failed writing " + path);
}

template <class Real>
StateFile<Real> read_state_file(const std::string& path) {
    const nlohmann::json j = detail::parse_file(path);
    if (!j.is_object()) throw ValidationError(path + ": top level must be an object");
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
        throw ValidationError(path + ": missing or malformed \"dims\"");
    StateFile<Real> f;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_integer() || d.template get<long>() < 1)
            throw ValidationError(path + ": dims must be positive integers");
        f.state.dims.push_back(static_cast<Index>(d.template get<long>()));
    }
    if (!j.contains("matrix"))
        throw ValidationError(path + ": missing \"matrix\"");
    f.state.rho = detail::read_matrix_json<Real>(j["matrix"], path + ": matrix");
    if (f.state.rho.rows() != f.state.rho.cols())
        throw ValidationError(path + ": matrix must be square");
    f.metadata = j.value("metadata", nlohmann::json(nullptr));
    return f;
}

// Sidecar carrying a generated state's ground-truth label and the
// construction-guaranteed claims.
inline void write_label_sidecar(const std::string& path, const ClassLabel& label,
                                const std::vector<Index>& dims, Index n_terms,
                                std::uint64_t seed) {
    nlohmann::json j;
    j["class"] = to_string(label.kind);
    j["parties"] = label.parties;
    j["dims"] = dims;
    j["terms"] = n_terms;
    j["seed"] = seed;
    nlohmann::json claims = nlohmann::json::array();
    for (const auto& c : guaranteed_claims(label, dims, n_terms)) {
        claims.push_back({{"party", c.party},
                          {"property", c.generalized ? "generalized_classical" : "classical"},
                          {"expected", c.expected}});
    }
    j["claims"] = claims;
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

template <class Real>
void write_record_file(const std::string& path, const MeasurementRecord<Real>& rec) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "{\n  \"party\": " << rec.party << ",\n  \"dims\": [";
    for (size_t k = 0; k < rec.dims.size(); ++k) out << (k ? ", " : "") << rec.dims[k];
    out << "],\n  \"base_basis\": ";
    detail::write_matrix_json(out, rec.base_basis, "  ");
    out << ",\n  \"items\": [";
    for (size_t n = 0; n < rec.items.size(); ++n) {
        const auto& item = rec.items[n];
        out << (n ? "," : "") << "\n    {\"label\": \"" << item.label.str()
            << "\", \"kind\": "
            << (item.label.kind == ProjKind::Phi ? "\"phi\""
                : item.label.kind == ProjKind::Psi ? "\"psi\"" : "\"chi\"")
            << ", \"i\": " << item.label.i << ", \"j\": " << item.label.j
            << ", \"shots\": " << item.shots << ", \"op\": ";
        detail::write_matrix_json(out, item.op, "    ");
        out << "}";
    }
    out << "\n  ]\n}\n";
    if (!out) throw Error("failed writing " + path);
}

template <class Real>
MeasurementRecord<Real> read_record_file(const std::string& path) {
    const nlohmann::json j = detail::parse_file(path);
    if (!j.is_object()) throw ValidationError(path + ": top level must be an object");
    MeasurementRecord<Real> rec;
    if (!j.contains("party") || !j["party"].is_number_integer())
        throw ValidationError(path + ": missing or malformed \"party\"");
    rec.party = j["party"].template get<int>();
    if (!j.contains("dims") || !j["dims"].is_array())
        throw ValidationError(path + ": missing or malformed \"dims\"");
    for (const auto& d : j["dims"])
        rec.dims.push_back(static_cast<Index>(d.template get<long>()));
    if (j.contains("base_basis"))
        rec.base_basis = detail::read_matrix_json<Real>(j["base_basis"], path + ": base_basis");
    if (!j.contains("items") || !j["items"].is_array())
        throw ValidationError(path + ": missing or malformed \"items\"");
    for (const auto& it : j["items"]) {
        typename MeasurementRecord<Real>::Item item;
        const std::string kind = it.value("kind", "");
        if (kind == "phi") item.label.kind = ProjKind::Phi;
        else if (kind == "psi") item.label.kind = ProjKind::Psi;
        else if (kind == "chi") item.label.kind = ProjKind::Chi;
        else throw ValidationError(path + ": item kind must be phi, psi or chi");
        if (!it.contains("i") || !it.contains("j"))
            throw ValidationError(path + ": item missing indices");
        item.label.i = static_cast<Index>(it["i"].template get<long>());
        item.label.j = static_cast<Index>(it["j"].template get<long>());
        item.shots = it.value("shots", 0L);
        if (!it.contains("op")) throw ValidationError(path + ": item missing \"op\"");
        item.op = detail::read_matrix_json<Real>(it["op"], path + ": item op");
        rec.items.push_back(std::move(item));
    }
    return rec;
}

}  // namespace qcl

#endif  // QCLASSICAL_STATE_IO_HPP
