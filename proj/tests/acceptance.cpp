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

// Acceptance suite: one line per criterion, [PASS] or [FAIL], plus a short
// evidence summary.  Exits nonzero when any criterion fails.

#include "qclassical/detect_classical.hpp"
#include "qclassical/detect_generalized.hpp"
#include "qclassical/ndlid.hpp"
#include "qclassical/states.hpp"
#include "qclassical/tomo.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using qcl::cmat;
using qcl::cvec;
using qcl::FeasStatus;
using qcl::MultipartiteState;
using C = std::complex<double>;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

MultipartiteState<double> motivating_example() {
    cmat rho = cmat::Zero(4, 4);
    rho(0, 0) = 0.5;
    rho(3, 3) = 0.5;
    return {{2, 2}, rho};
}

MultipartiteState<double> bell_state() {
    cvec phi = cvec::Zero(4);
    phi(0) = 1 / std::sqrt(2.0);
    phi(3) = 1 / std::sqrt(2.0);
    return {{2, 2}, cmat(phi * phi.adjoint())};
}

// Shared corpus statistics filled by criterion 2 and re-used by criterion 3.
struct CorpusStats {
    long claims = 0;
    long wrong_definitive = 0;
    long indeterminate = 0;
    long chain_violations = 0;
    long minimal_length_failures = 0;
    long states = 0;
    bool ran = false;
} corpus;

const std::vector<std::vector<qcl::Index>> kDimsList{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}};

void run_corpus() {
    corpus.ran = true;
    const qcl::Tolerance tol;
    const long seeds_per_cell = 125;  // x 4 dims = 500 states per class

    enum class Kind { FullyClassical, ClassicalOne, FullyGeneralized, GeneralizedOne, Product };
    const std::vector<Kind> kinds{Kind::FullyClassical, Kind::ClassicalOne,
                                  Kind::FullyGeneralized, Kind::GeneralizedOne, Kind::Product};

    for (size_t ki = 0; ki < kinds.size(); ++ki) {
        for (size_t di = 0; di < kDimsList.size(); ++di) {
            const auto& dims = kDimsList[di];
            std::vector<int> all;
            for (size_t k = 0; k < dims.size(); ++k) all.push_back(static_cast<int>(k));
            for (long seed = 0; seed < seeds_per_cell; ++seed) {
                const std::uint64_t s =
                    static_cast<std::uint64_t>(seed + 1000 * static_cast<long>(di) +
                                               100000 * static_cast<long>(ki));
                MultipartiteState<double> state;
                std::vector<qcl::ClassClaim> claims;
                bool check_rank = false;
                qcl::ProductBasisDecomposition<double> decomp;
                switch (kinds[ki]) {
                    case Kind::FullyClassical: {
                        auto g = qcl::generate_classical<double>(dims, all, 2, s);
                        state = g.state;
                        claims = qcl::guaranteed_claims(g.label, dims, 2);
                        break;
                    }
                    case Kind::ClassicalOne: {
                        auto g = qcl::generate_classical<double>(dims, {0}, 2, s);
                        state = g.state;
                        claims = qcl::guaranteed_claims(g.label, dims, 2);
                        break;
                    }
                    case Kind::FullyGeneralized: {
                        auto g = qcl::generate_generalized_classical<double>(dims, all, 2, 50.0,
                                                                             s);
                        state = g.state;
                        decomp = g.decomp;
                        check_rank = true;
                        claims = qcl::guaranteed_claims(g.label, dims, 2);
                        break;
                    }
                    case Kind::GeneralizedOne: {
                        auto g = qcl::generate_generalized_classical<double>(dims, {0}, 2, 50.0,
                                                                             s);
                        state = g.state;
                        claims = qcl::guaranteed_claims(g.label, dims, 2);
                        break;
                    }
                    case Kind::Product: {
                        state = qcl::generate_product<double>(dims, s);
                        claims = qcl::guaranteed_claims(
                            {qcl::StateClass::Product, {}}, dims, 1);
                        break;
                    }
                }
                ++corpus.states;

                // Evaluate the detectors once per party, then test claims
                // and the hierarchy chain on the same verdicts.
                std::vector<qcl::ClassicalVerdict<double>> cls;
                std::vector<qcl::GeneralizedVerdict<double>> gen;
                for (int k = 0; k < state.parties(); ++k) {
                    const auto cs = qcl::contract(state, k, tol);
                    cls.push_back(qcl::detect_classical_blocks(cs, tol));
                    gen.push_back(qcl::detect_generalized_blocks(cs, tol));
                }

                for (const auto& claim : claims) {
                    ++corpus.claims;
                    const size_t k = static_cast<size_t>(claim.party);
                    if (!claim.generalized) {
                        if (cls[k].is_classical != claim.expected) ++corpus.wrong_definitive;
                    } else {
                        const auto& g = gen[k];
                        if (g.status == FeasStatus::Indeterminate)
                            ++corpus.indeterminate;
                        else if (g.is_generalized_classical != claim.expected)
                            ++corpus.wrong_definitive;
                    }
                }

                // Chain: classical for a party definitively implies
                // generalized-classical cannot be refuted for that party.
                for (size_t k = 0; k < cls.size(); ++k)
                    if (cls[k].is_classical && gen[k].status == FeasStatus::Infeasible)
                        ++corpus.chain_violations;

                if (check_rank) {
                    if (!qcl::verify_minimal_length(state, decomp, tol))
                        ++corpus.minimal_length_failures;
                    if (qcl::matrix_rank(state.rho, 1e-9) != 2)
                        ++corpus.minimal_length_failures;
                }
            }
        }
    }
}

bool criterion1(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const auto s = motivating_example();
    const auto full = qcl::detect_classical_full(s);
    if (!full.fully_classical) {
        detail = "motivating example not reported fully classical";
        return false;
    }
    double worst_rate_gap = 0, worst_invariance = 0;
    for (int party = 0; party < 2; ++party) {
        auto m = qcl::build_measurement(full.per_party[static_cast<size_t>(party)].basis);
        m.party = party;
        worst_rate_gap = std::max(worst_rate_gap, std::abs(m.rate - 1.0));
        worst_invariance = std::max(worst_invariance, qcl::verify_invariance(s, m));
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "fully classical, rate gap " << worst_rate_gap << ", invariance deviation "
       << worst_invariance << ", " << elapsed << " s";
    detail = os.str();
    return worst_rate_gap <= 1e-9 && worst_invariance <= 1e-8 && elapsed < 1.0;
}

bool criterion2(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    if (!corpus.ran) run_corpus();
    const double elapsed = seconds_since(start);
    const double agree_rate =
        1.0 - static_cast<double>(corpus.wrong_definitive + corpus.indeterminate) /
                  static_cast<double>(corpus.claims);
    std::ostringstream os;
    os << corpus.states << " states, " << corpus.claims << " claims, agreement "
       << 100.0 * agree_rate << "%, wrong definitive " << corpus.wrong_definitive
       << ", indeterminate " << corpus.indeterminate << ", " << elapsed << " s";
    detail = os.str();
    return corpus.wrong_definitive == 0 && agree_rate >= 0.99 && elapsed < 300.0;
}

bool criterion3(std::string& detail) {
    if (!corpus.ran) run_corpus();
    std::ostringstream os;
    os << "chain violations " << corpus.chain_violations << ", minimal-length failures "
       << corpus.minimal_length_failures << " over " << corpus.states << " states";
    detail = os.str();
    return corpus.chain_violations == 0 && corpus.minimal_length_failures == 0;
}

bool criterion4(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const auto bell = bell_state();
    bool defective_witness = true, infeasible = true, gap_evidence = true;
    for (int party = 0; party < 2; ++party) {
        const auto c = qcl::detect_classical_for_party(bell, party);
        if (c.is_classical || !c.defective_block.has_value()) defective_witness = false;
        const auto g = qcl::detect_generalized_for_party(bell, party);
        if (g.status != FeasStatus::Infeasible) infeasible = false;
        if (!(g.feasibility.gap_estimate > 0)) gap_evidence = false;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "defective witness " << (defective_witness ? "yes" : "no") << ", SDP infeasible "
       << (infeasible ? "yes" : "no") << ", gap evidence " << (gap_evidence ? "yes" : "no")
       << ", " << elapsed << " s";
    detail = os.str();
    return defective_witness && infeasible && gap_evidence && elapsed < 1.0;
}

bool criterion5(std::string& detail) {
    std::mt19937_64 rng(0x5dc0ffee);
    long checked = 0, indeterminate = 0, wrong = 0;
    while (checked + indeterminate < 200) {
        const cmat a = oracle::random_hermitian(2, rng);
        const cmat b = oracle::random_hermitian(2, rng);
        const auto expect = oracle::congruence_feasible_2x2(a, b);
        if (!expect.has_value()) continue;
        qcl::HermitianizedFamily<double> fam;
        fam.dim = 2;
        fam.matrices = {a, b};
        const auto res = qcl::sdp_feasibility(fam);
        if (res.status == FeasStatus::Indeterminate) {
            ++indeterminate;
            continue;
        }
        if ((res.status == FeasStatus::Feasible) != *expect) ++wrong;
        ++checked;
    }
    std::ostringstream os;
    os << checked << " definitive, wrong " << wrong << ", indeterminate " << indeterminate;
    detail = os.str();
    return wrong == 0 && indeterminate <= 4;
}

bool criterion6(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    for (qcl::Index da : {2, 3, 4}) {
        const long budget = da * da * (da * da - 1) / 2;
        long worst = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const std::vector<qcl::Index> dims{da, 2};
            // Classical states exercise the full sweep; random ones the
            // early exits.  Both must respect the budget.
            const auto g = qcl::generate_classical<double>(dims, {1}, 2, 600 + seed);
            worst = std::max(worst,
                             qcl::detect_classical_blocks(qcl::contract(g.state, 1))
                                 .commutator_pairs_checked);
            const auto r = qcl::generate_random_density<double>(dims, 700 + seed);
            worst = std::max(worst,
                             qcl::detect_classical_blocks(qcl::contract(r, 1))
                                 .commutator_pairs_checked);
            ok = ok && worst <= budget;
        }
        os << "d_A=" << da << " worst " << worst << "/" << budget << "  ";
    }
    detail = os.str();
    return ok;
}

bool criterion7(std::string& detail) {
    // Exact two-path equality on 100 random states.
    std::mt19937_64 rng(0x70e0);
    double worst_exact = 0;
    for (int t = 0; t < 100; ++t) {
        const auto& dims = kDimsList[static_cast<size_t>(t) % 3];
        qcl::Index total = 1;
        for (auto d : dims) total *= d;
        const MultipartiteState<double> s{dims, oracle::random_density(total, rng)};
        const int party = t % static_cast<int>(dims.size());
        const auto rec = qcl::exact_record(s, party);
        const auto blocks = qcl::reconstruct_blocks(rec);
        worst_exact = std::max(worst_exact,
                               qcl::blocks_deviation(qcl::contract(s, party), blocks));
    }

    // Sampled verdict agreement at one million shots on classical states.
    long agree = 0, trials = 0;
    for (size_t di = 0; di < kDimsList.size(); ++di)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto& dims = kDimsList[di];
            std::vector<int> all;
            for (size_t k = 0; k < dims.size(); ++k) all.push_back(static_cast<int>(k));
            const auto g = qcl::generate_classical<double>(dims, all, 2, 900 + seed);
            const auto direct = qcl::detect_classical_for_party(g.state, 0);
            const auto out = qcl::run_tomography(g.state, 0, 1000000,
                                                 7000 + seed + 100 * di);
            ++trials;
            if (out.verdict.is_classical == direct.is_classical) ++agree;
        }
    std::ostringstream os;
    os << "exact worst deviation " << worst_exact << ", sampled agreement " << agree << "/"
       << trials;
    detail = os.str();
    return worst_exact <= 1e-10 &&
           static_cast<double>(agree) >= 0.95 * static_cast<double>(trials);
}

bool criterion8(std::string& detail) {
    long classical_hits = 0, generalized_hits = 0, infeasible = 0, indeterminate = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto rho = qcl::generate_random_density<double>({2, 2}, 5000 + seed);
        for (int party = 0; party < 2; ++party) {
            if (qcl::detect_classical_for_party(rho, party).is_classical) ++classical_hits;
            const auto g = qcl::detect_generalized_for_party(rho, party);
            if (g.is_generalized_classical) ++generalized_hits;
            if (g.status == FeasStatus::Infeasible) ++infeasible;
            if (g.status == FeasStatus::Indeterminate) ++indeterminate;
        }
    }
    std::ostringstream os;
    os << "100 Haar states: classical hits " << classical_hits << ", generalized hits "
       << generalized_hits << ", infeasible " << infeasible << ", indeterminate "
       << indeterminate;
    detail = os.str();
    return classical_hits == 0 && generalized_hits == 0;
}

bool criterion9(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0x909);
    std::normal_distribution<double> g(0, 1);
    double worst_recon = 0, worst_dual = 0, worst_idem = 0;
    for (int t = 0; t < 1000; ++t) {
        const qcl::Index n = 2 + static_cast<qcl::Index>(rng() % 15);

        const cmat m = oracle::random_hermitian(n, rng);
        const auto eig = qcl::hermitian_eig(m);
        const cmat recon = eig.vectors *
                           eig.values.asDiagonal().toDenseMatrix().cast<C>() *
                           eig.vectors.adjoint();
        worst_recon = std::max(worst_recon,
                               (recon - m).norm() / std::max(1.0, m.norm()));

        cmat b(n, n);
        for (qcl::Index i = 0; i < n; ++i)
            for (qcl::Index j = 0; j < n; ++j) b(i, j) = C(g(rng), g(rng));
        Eigen::JacobiSVD<cmat> svd(b);
        if (svd.singularValues()(n - 1) > 1e-4 * svd.singularValues()(0)) {
            const cmat d = qcl::dual_basis(b);
            worst_dual = std::max(worst_dual,
                                  (d.adjoint() * b - cmat::Identity(n, n)).norm());
        }

        const cmat p = qcl::psd_project(oracle::random_hermitian(n, rng), 0.0);
        worst_idem = std::max(worst_idem, (qcl::psd_project(p, 0.0) - p).norm() /
                                              std::max(1.0, p.norm()));
    }
    const double elapsed = seconds_since(start);
    std::ostringstream os;
    os << "1000 instances: eig residual " << worst_recon << ", dual residual " << worst_dual
       << ", idempotence residual " << worst_idem << ", " << elapsed << " s";
    detail = os.str();
    return worst_recon < 1e-10 && worst_dual < 1e-7 && worst_idem < 1e-10 && elapsed < 60.0;
}

}  // namespace

int main() {
    criterion(1, "motivating example", criterion1);
    criterion(2, "hierarchy round-trip", criterion2);
    criterion(3, "hierarchy chain consistency", criterion3);
    criterion(4, "Bell-state rejection", criterion4);
    criterion(5, "SDP vs pencil oracle", criterion5);
    criterion(6, "commutator pair budget", criterion6);
    criterion(7, "tomography two-path equality", criterion7);
    criterion(8, "measure-zero statistical check", criterion8);
    criterion(9, "numerics kernel properties", criterion9);
    if (failures == 0)
        std::printf("all 9 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
