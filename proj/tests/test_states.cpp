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

#include "qclassical/states.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using qcl::cmat;
using qcl::cvec;
using qcl::MultipartiteState;
using C = std::complex<double>;

namespace {

MultipartiteState<double> two_qubit(const cmat& rho) { return {{2, 2}, rho}; }

}  // namespace

TEST_CASE("validate accepts the maximally mixed state", "[states]") {
    const auto s = two_qubit(cmat::Identity(4, 4) / 4.0);
    CHECK_NOTHROW(qcl::validate(s));
}

TEST_CASE("validate rejects malformed inputs", "[states]") {
    CHECK_THROWS_AS(qcl::validate(two_qubit(cmat::Identity(3, 3) / 3.0)), qcl::BadDims);
    CHECK_THROWS_AS(qcl::validate(MultipartiteState<double>{{}, cmat::Identity(1, 1)}),
                    qcl::BadDims);

    cmat nonherm = cmat::Identity(4, 4) / 4.0;
    nonherm(0, 1) = C(0.1, 0.0);
    CHECK_THROWS_AS(qcl::validate(two_qubit(nonherm)), qcl::NotHermitian);

    CHECK_THROWS_AS(qcl::validate(two_qubit(cmat::Identity(4, 4))), qcl::TraceNotOne);

    cmat indef = cmat::Identity(4, 4) / 2.0;
    indef(3, 3) = -0.5;
    CHECK_THROWS_AS(qcl::validate(two_qubit(indef)), qcl::NotPSD);

    cmat nan = cmat::Identity(4, 4) / 4.0;
    nan(2, 2) = C(std::nan(""), 0);
    CHECK_THROWS_AS(qcl::validate(two_qubit(nan)), qcl::NotFinite);
}

TEST_CASE("state_from_decomposition builds the expected mixture", "[states]") {
    qcl::ProductBasisDecomposition<double> d;
    d.weights = qcl::rvec(2);
    d.weights << 0.25, 0.75;
    cvec e0 = cvec::Zero(2), e1 = cvec::Zero(2);
    e0(0) = 1;
    e1(1) = 1;
    d.local_vectors = {{e0, e0}, {e1, e1}};
    const auto s = qcl::state_from_decomposition<double>({2, 2}, d);
    cmat expect = cmat::Zero(4, 4);
    expect(0, 0) = 0.25;
    expect(3, 3) = 0.75;
    CHECK((s.rho - expect).norm() < 1e-15);
    CHECK_NOTHROW(qcl::validate(s));
}

TEST_CASE("generated classical states are valid and reproducible", "[states]") {
    const auto g1 = qcl::generate_classical<double>({2, 3}, {0, 1}, 2, 42);
    const auto g2 = qcl::generate_classical<double>({2, 3}, {0, 1}, 2, 42);
    CHECK((g1.state.rho - g2.state.rho).norm() == 0.0);
    CHECK_NOTHROW(qcl::validate(g1.state));
    CHECK(g1.label.kind == qcl::StateClass::FullyClassical);
    CHECK(g1.decomp.terms() == 2);

    const auto g3 = qcl::generate_classical<double>({2, 3}, {0, 1}, 2, 43);
    CHECK((g1.state.rho - g3.state.rho).norm() > 1e-6);

    // In-set local vectors are orthonormal.
    for (int party = 0; party < 2; ++party)
        for (qcl::Index s = 0; s < 2; ++s)
            for (qcl::Index t = 0; t < 2; ++t) {
                const C ip = g1.decomp.local_vectors[static_cast<size_t>(s)][party].dot(
                    g1.decomp.local_vectors[static_cast<size_t>(t)][party]);
                CHECK(std::abs(ip - (s == t ? C(1, 0) : C(0, 0))) < 1e-12);
            }
}

TEST_CASE("generated generalized states have skewed in-set vectors", "[states]") {
    const auto g = qcl::generate_generalized_classical<double>({2, 2}, {0}, 2, 50.0, 7);
    CHECK_NOTHROW(qcl::validate(g.state));
    CHECK(g.label.kind == qcl::StateClass::GeneralizedClassicalForParty);
    REQUIRE(g.decomp.terms() == 2);

    // Party 0 vectors overlap but stay independent; party 1 stays orthonormal.
    const C in_overlap = g.decomp.local_vectors[0][0].dot(g.decomp.local_vectors[1][0]);
    CHECK(std::abs(in_overlap) > 0.04);
    CHECK(std::abs(in_overlap) < 0.999);
    const C out_overlap = g.decomp.local_vectors[0][1].dot(g.decomp.local_vectors[1][1]);
    CHECK(std::abs(out_overlap) < 1e-12);

    CHECK_THROWS_AS(qcl::generate_generalized_classical<double>({2, 2}, {0}, 3, 50.0, 7),
                    qcl::BadDims);
    CHECK_THROWS_AS(qcl::generate_generalized_classical<double>({2, 2}, {0}, 1, 50.0, 7),
                    qcl::BadDims);
}

TEST_CASE("product states factor over the parties", "[states]") {
    const auto s = qcl::generate_product<double>({2, 3}, 5);
    CHECK_NOTHROW(qcl::validate(s));
    // For a product state the state equals the tensor product of marginals.
    cmat a = cmat::Zero(2, 2), b = cmat::Zero(3, 3);
    for (qcl::Index i = 0; i < 2; ++i)
        for (qcl::Index j = 0; j < 2; ++j) {
            C sum = 0;
            for (qcl::Index k = 0; k < 3; ++k) sum += s.rho(i * 3 + k, j * 3 + k);
            a(i, j) = sum;
        }
    for (qcl::Index i = 0; i < 3; ++i)
        for (qcl::Index j = 0; j < 3; ++j) {
            C sum = 0;
            for (qcl::Index k = 0; k < 2; ++k) sum += s.rho(k * 3 + i, k * 3 + j);
            b(i, j) = sum;
        }
    CHECK((s.rho - oracle::kron2(a, b)).norm() < 1e-12);
}

TEST_CASE("generic separable and random states validate", "[states]") {
    const auto sep = qcl::generate_generic_separable<double>({2, 2}, 6, 9);
    CHECK_NOTHROW(qcl::validate(sep.state));
    CHECK(sep.decomp.terms() == 6);

    const auto rnd = qcl::generate_random_density<double>({2, 2}, 9);
    CHECK_NOTHROW(qcl::validate(rnd));
}

TEST_CASE("guaranteed claims follow the construction", "[states]") {
    using qcl::StateClass;
    const auto claims = qcl::guaranteed_claims(
        {StateClass::ClassicalForParty, {0}}, {2, 2}, 2);
    // Party 0: classical and generalized both hold.  Party 1: with two terms
    // in dimension two the vectors are non-orthogonal by construction, so
    // classicality fails there while generalized classicality holds.
    REQUIRE(claims.size() == 4);
    bool party1_classical_false = false;
    for (const auto& c : claims) {
        if (c.party == 0) CHECK(c.expected);
        if (c.party == 1 && !c.generalized) {
            CHECK_FALSE(c.expected);
            party1_classical_false = true;
        }
        if (c.party == 1 && c.generalized) CHECK(c.expected);
    }
    CHECK(party1_classical_false);

    const auto prod = qcl::guaranteed_claims({StateClass::Product, {}}, {2, 2, 2}, 1);
    REQUIRE(prod.size() == 6);
    for (const auto& c : prod) CHECK(c.expected);

    // One term in a larger dimension carries no out-of-set classicality
    // claim: a single product projector is classical everywhere.
    const auto single = qcl::guaranteed_claims(
        {StateClass::ClassicalForParty, {0}}, {2, 2}, 1);
    for (const auto& c : single) CHECK(c.party == 0);
}

TEST_CASE("product vector independence and minimal length", "[states]") {
    const auto g = qcl::generate_classical<double>({2, 2}, {0, 1}, 2, 11);
    CHECK(qcl::check_product_linear_independence(g.decomp));
    CHECK(qcl::verify_minimal_length(g.state, g.decomp));

    // Repeating a term keeps independence of the distinct vectors and the
    // minimal-length property of the state.
    auto doubled = g.decomp;
    doubled.weights = qcl::rvec(3);
    doubled.weights << 0.25, 0.25, 0.5;
    doubled.local_vectors.push_back(doubled.local_vectors[0]);
    CHECK(qcl::check_product_linear_independence(doubled));
    CHECK(qcl::verify_minimal_length(g.state, doubled));

    // A genuinely new direction breaks minimality against the old state.
    const auto g3 = qcl::generate_generic_separable<double>({2, 2}, 5, 13);
    CHECK_FALSE(qcl::verify_minimal_length(g.state, g3.decomp));
}

TEST_CASE("independent vector draws respect margin and conditioning", "[states]") {
    qcl::Rng rng(99);
    const cmat v = qcl::detail::draw_independent_vectors<double>(3, 3, 50.0, 0.05, rng);
    REQUIRE(v.cols() == 3);
    for (qcl::Index i = 0; i < 3; ++i) {
        CHECK(v.col(i).norm() == Catch::Approx(1.0).margin(1e-12));
        for (qcl::Index j = i + 1; j < 3; ++j)
            CHECK(std::abs(v.col(i).dot(v.col(j))) >= 0.05);
    }
    const cmat gram = v.adjoint() * v;
    Eigen::JacobiSVD<cmat> svd(gram);
    CHECK(svd.singularValues()(0) / svd.singularValues()(2) <= 50.0);
}
