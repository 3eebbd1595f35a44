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

#include "qclassical/ndlid.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "qclassical/detect_classical.hpp"
#include "qclassical/detect_generalized.hpp"

#include "oracles.hpp"

using qcl::cmat;
using qcl::cvec;
using qcl::MultipartiteState;
using C = std::complex<double>;

TEST_CASE("orthonormal ensembles give a projective measurement", "[ndlid]") {
    const auto m = qcl::build_measurement(cmat(cmat::Identity(3, 3)));
    CHECK(m.rate == Catch::Approx(1.0).margin(1e-12));
    CHECK(m.inconclusive.norm() < 1e-7);
    for (qcl::Index i = 0; i < 3; ++i) {
        cmat proj = cmat::Zero(3, 3);
        proj(i, i) = 1;
        CHECK((m.operators[static_cast<size_t>(i)] - proj).norm() < 1e-12);
    }
}

TEST_CASE("frozen success rate of a skewed pair", "[ndlid]") {
    const double s = 1 / std::sqrt(2.0);
    cmat ensemble(2, 2);
    ensemble << 1, s, 0, s;
    const auto m = qcl::build_measurement(ensemble);
    CHECK(m.rate == Catch::Approx(1.0 - s).epsilon(1e-12));

    // Unambiguous discrimination: M_i annihilates every other member and
    // succeeds with the same rate on its own member.
    for (qcl::Index i = 0; i < 2; ++i)
        for (qcl::Index j = 0; j < 2; ++j) {
            const double v = (m.operators[static_cast<size_t>(i)] * ensemble.col(j)).norm();
            if (i == j)
                CHECK(v * v == Catch::Approx(m.rate).epsilon(1e-10));
            else
                CHECK(v < 1e-12);
        }

    // Completeness including the inconclusive arm.
    cmat total = m.inconclusive.adjoint() * m.inconclusive;
    for (const auto& op : m.operators) total += op.adjoint() * op;
    CHECK((total - cmat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("build_measurement input validation", "[ndlid]") {
    cmat dep(2, 2);
    dep << 1, 1, 0, 0;
    CHECK_THROWS_AS(qcl::build_measurement(dep), qcl::DependentEnsemble);
    const double s = 1 / std::sqrt(2.0);
    cmat crowd(2, 3);
    crowd << 1, 0, s, 0, 1, s;
    CHECK_THROWS_AS(qcl::build_measurement(crowd), qcl::DependentEnsemble);
    cmat unnorm(2, 2);
    unnorm << 2, 0, 0, 1;
    CHECK_THROWS_AS(qcl::build_measurement(unnorm), qcl::ShapeMismatch);
}

TEST_CASE("measurement leaves a generalized-classical state invariant", "[ndlid]") {
    const auto g = qcl::generate_generalized_classical<double>({2, 3}, {0}, 2, 50.0, 31);
    const auto verdict = qcl::detect_generalized_for_party(g.state, 0);
    REQUIRE(verdict.is_generalized_classical);

    auto m = qcl::build_measurement(verdict.basis);
    m.party = 0;
    CHECK(m.rate < 1.0 - 1e-3);
    CHECK(m.rate > 0.0);
    CHECK(qcl::verify_invariance(g.state, m) < 1e-7);

    // A random state is disturbed by the same measurement.
    std::mt19937_64 rng(32);
    const MultipartiteState<double> noise{{2, 3}, oracle::random_density(6, rng)};
    CHECK(qcl::verify_invariance(noise, m) > 1e-3);
}

TEST_CASE("classical states admit a rate-one invariant measurement", "[ndlid]") {
    const auto g = qcl::generate_classical<double>({2, 2}, {0, 1}, 2, 33);
    const auto verdict = qcl::detect_classical_for_party(g.state, 1);
    REQUIRE(verdict.is_classical);
    auto m = qcl::build_measurement(verdict.basis);
    m.party = 1;
    CHECK(m.rate == Catch::Approx(1.0).margin(1e-9));
    CHECK(qcl::verify_invariance(g.state, m) < 1e-9);
}

TEST_CASE("identify returns the conditional complement states", "[ndlid]") {
    // 0.25 |00> + 0.75 |11>, measured on party 0 in the computational basis.
    cmat rho = cmat::Zero(4, 4);
    rho(0, 0) = 0.25;
    rho(3, 3) = 0.75;
    const MultipartiteState<double> s{{2, 2}, rho};
    auto m = qcl::build_measurement(cmat(cmat::Identity(2, 2)));
    m.party = 0;

    const auto out0 = qcl::identify(s, m, 0);
    CHECK(out0.probability == Catch::Approx(0.25).margin(1e-12));
    cmat e00 = cmat::Zero(2, 2);
    e00(0, 0) = 1;
    CHECK((out0.conditional_rest - e00).norm() < 1e-12);

    const auto out1 = qcl::identify(s, m, 1);
    CHECK(out1.probability == Catch::Approx(0.75).margin(1e-12));

    CHECK_THROWS_AS(qcl::identify(s, m, 5), qcl::ShapeMismatch);

    // A zero-probability branch cannot be conditioned on.
    cmat pure = cmat::Zero(4, 4);
    pure(0, 0) = 1;
    const MultipartiteState<double> s0{{2, 2}, pure};
    CHECK_THROWS_AS(qcl::identify(s0, m, 1), qcl::ZeroProbabilityOutcome);
}

TEST_CASE("outcome probabilities recover the mixing weights", "[ndlid]") {
    const auto g = qcl::generate_generalized_classical<double>({3, 2}, {1}, 2, 50.0, 35);
    const auto verdict = qcl::detect_generalized_for_party(g.state, 1);
    REQUIRE(verdict.is_generalized_classical);
    auto m = qcl::build_measurement(verdict.basis);
    m.party = 1;

    // p_i = lambda * w_i for the certified decomposition weights w_i.
    double total = 0;
    for (qcl::Index i = 0; i < 2; ++i) {
        const auto out = qcl::identify(g.state, m, i);
        CHECK(out.probability ==
              Catch::Approx(m.rate * verdict.weights(i)).epsilon(1e-6));
        total += out.probability;
    }
    CHECK(total == Catch::Approx(m.rate).epsilon(1e-6));
}
