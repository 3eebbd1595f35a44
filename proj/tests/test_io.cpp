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

#include "qclassical/state_io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "qclassical/tomo.hpp"

#include "oracles.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using qcl::cmat;
using qcl::MultipartiteState;
using C = std::complex<double>;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qcl_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("state files round-trip bit for bit", "[io]") {
    TempDir tmp;
    std::mt19937_64 rng(61);
    const MultipartiteState<double> s{{2, 3}, oracle::random_density(6, rng)};
    nlohmann::json meta;
    meta["label"] = "unknown";
    meta["seed"] = 61;
    qcl::write_state_file(tmp.file("s.json"), s, meta);

    const auto back = qcl::read_state_file<double>(tmp.file("s.json"));
    REQUIRE(back.state.dims == s.dims);
    REQUIRE(back.state.rho.rows() == 6);
    for (qcl::Index i = 0; i < 6; ++i)
        for (qcl::Index j = 0; j < 6; ++j) {
            CHECK(back.state.rho(i, j).real() == s.rho(i, j).real());
            CHECK(back.state.rho(i, j).imag() == s.rho(i, j).imag());
        }
    CHECK(back.metadata["label"] == "unknown");
    CHECK(back.metadata["seed"] == 61);
}

TEST_CASE("state files without metadata read back null metadata", "[io]") {
    TempDir tmp;
    const MultipartiteState<double> s{{2}, cmat(cmat::Identity(2, 2) / 2.0)};
    qcl::write_state_file(tmp.file("plain.json"), s);
    const auto back = qcl::read_state_file<double>(tmp.file("plain.json"));
    CHECK(back.metadata.is_null());
    CHECK((back.state.rho - s.rho).norm() == 0.0);
}

TEST_CASE("malformed state files raise typed errors", "[io]") {
    TempDir tmp;
    CHECK_THROWS_AS(qcl::read_state_file<double>(tmp.file("missing.json")), qcl::ParseError);

    {
        std::ofstream out(tmp.file("broken.json"));
        out << "{ not json";
    }
    CHECK_THROWS_AS(qcl::read_state_file<double>(tmp.file("broken.json")), qcl::ParseError);

    {
        std::ofstream out(tmp.file("baddims.json"));
        out << R"({"dims": [2, 0], "rho": []})";
    }
    CHECK_THROWS_AS(qcl::read_state_file<double>(tmp.file("baddims.json")),
                    qcl::ValidationError);

    {
        std::ofstream out(tmp.file("shape.json"));
        out << R"({"dims": [2], "rho": [[[1.0, 0.0]], [[0.0, 0.0]]]})";
    }
    CHECK_THROWS_AS(qcl::read_state_file<double>(tmp.file("shape.json")),
                    qcl::ValidationError);
}

TEST_CASE("label sidecars carry the construction claims", "[io]") {
    TempDir tmp;
    const qcl::ClassLabel label{qcl::StateClass::GeneralizedClassicalForParty, {0}};
    qcl::write_label_sidecar(tmp.file("side.json"), label, {2, 2}, 2, 99);
    const auto j = qcl::detail::parse_file(tmp.file("side.json"));
    CHECK(j["class"] == "generalized_classical_for_party");
    CHECK(j["dims"] == nlohmann::json({2, 2}));
    CHECK(j["terms"] == 2);
    CHECK(j["seed"] == 99);
    REQUIRE(j.contains("claims"));
    const auto claims = qcl::guaranteed_claims(label, {2, 2}, 2);
    REQUIRE(j["claims"].size() == claims.size());
    for (const auto& c : j["claims"]) {
        CHECK(c.contains("party"));
        CHECK(c.contains("property"));
        CHECK(c.contains("expected"));
    }
}

TEST_CASE("measurement records round-trip", "[io]") {
    TempDir tmp;
    std::mt19937_64 rng(62);
    const MultipartiteState<double> s{{2, 2}, oracle::random_density(4, rng)};
    const auto rec = qcl::sample_record(s, 1, 5000, 3);
    qcl::write_record_file(tmp.file("rec.json"), rec);
    const auto back = qcl::read_record_file<double>(tmp.file("rec.json"));
    CHECK(back.party == rec.party);
    CHECK(back.dims == rec.dims);
    REQUIRE(back.items.size() == rec.items.size());
    for (size_t k = 0; k < rec.items.size(); ++k) {
        CHECK(back.items[k].label.str() == rec.items[k].label.str());
        CHECK(back.items[k].shots == rec.items[k].shots);
        CHECK((back.items[k].op - rec.items[k].op).norm() == 0.0);
    }
    // A reconstructed verdict from the reloaded record matches the original.
    CHECK(qcl::blocks_deviation(qcl::reconstruct_blocks(rec), qcl::reconstruct_blocks(back)) ==
          0.0);
}

TEST_CASE("seventeen digit formatting preserves doubles", "[io]") {
    CHECK(qcl::fmt17(1.0 / 3.0) == qcl::fmt17(1.0 / 3.0));
    const double x = 0.1 + 0.2;
    CHECK(std::stod(qcl::fmt17(x)) == x);
    CHECK(std::stod(qcl::fmt17(1e-300)) == 1e-300);
}
