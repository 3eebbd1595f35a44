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

// Command line front end: classify a state file, generate labelled states,
// build identification measurements, and run the tomographic protocol.
// Exit codes: 0 for a definitive run, 2 when any requested verdict is
// indeterminate, 1 for invalid input or usage.

#include <CLI11.hpp>
#include <json.hpp>

#include "qclassical/contraction.hpp"
#include "qclassical/detect_classical.hpp"
#include "qclassical/detect_generalized.hpp"
#include "qclassical/ndlid.hpp"
#include "qclassical/report.hpp"
#include "qclassical/state_io.hpp"
#include "qclassical/states.hpp"
#include "qclassical/tomo.hpp"
#include "qclassical/version.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;

struct Options {
    std::string format = "text";
    qcl::Tolerance tol;
};

void emit(const json& report, const Options& opt) {
    if (opt.format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << qcl::render_text(report);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

qcl::MultipartiteState<double> load_state(const std::string& path, const qcl::Tolerance& tol) {
    auto file = qcl::read_state_file<double>(path);
    qcl::validate(file.state, tol);
    return file.state;
}

double ndlid_rate_for(const qcl::cmat& basis, const qcl::Tolerance& tol) {
    return qcl::build_measurement(basis, tol).rate;
}

int cmd_classify(const std::string& path, std::optional<int> party, const std::string& mode,
                 const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto state = load_state(path, opt.tol);
    if (party && (*party < 0 || *party >= state.parties()))
        throw qcl::BadParty("party index out of range");

    json rep = qcl::report_header("classify", opt.tol);
    rep["input"] = {{"path", path}, {"dims", state.dims}, {"total_dim", state.total_dim()}};

    const bool run_classical = mode != "generalized";
    const bool run_generalized = mode != "classical";
    bool any_indeterminate = false;

    std::vector<int> parties;
    if (party)
        parties.push_back(*party);
    else
        for (int k = 0; k < state.parties(); ++k) parties.push_back(k);

    std::vector<qcl::ClassicalVerdict<double>> classical;
    std::vector<qcl::GeneralizedVerdict<double>> generalized;
    rep["per_party"] = json::array();
    for (int k : parties) {
        json p;
        p["party"] = k;
        p["dim"] = state.party_dim(k);
        const auto cs = qcl::contract(state, k, opt.tol);
        if (run_classical) {
            classical.push_back(qcl::detect_classical_blocks(cs, opt.tol));
            p["classical"] = qcl::classical_json(classical.back());
            if (classical.back().is_classical)
                p["classical_ndlid_rate"] = ndlid_rate_for(classical.back().basis, opt.tol);
        }
        if (run_generalized) {
            generalized.push_back(qcl::detect_generalized_blocks(cs, opt.tol));
            p["generalized"] = qcl::generalized_json(generalized.back());
            if (generalized.back().is_generalized_classical)
                p["generalized_ndlid_rate"] =
                    ndlid_rate_for(generalized.back().basis, opt.tol);
            any_indeterminate = any_indeterminate ||
                                generalized.back().status == qcl::FeasStatus::Indeterminate;
        }
        rep["per_party"].push_back(p);
    }

    // Summary across the parties actually examined.
    bool fully_classical = run_classical && !classical.empty();
    for (const auto& v : classical) fully_classical = fully_classical && v.is_classical;
    bool fully_generalized = run_generalized && !generalized.empty();
    bool any_gen_infeasible = false;
    for (const auto& v : generalized) {
        fully_generalized = fully_generalized && v.is_generalized_classical;
        any_gen_infeasible = any_gen_infeasible || v.status == qcl::FeasStatus::Infeasible;
    }
    rep["fully_classical"] = fully_classical;
    if (run_classical && fully_classical && !party) {
        const auto full = qcl::detect_classical_full(state, opt.tol);
        rep["joint_classical_residual"] = full.joint_residual;
    }
    std::string gen_status;
    if (!run_generalized)
        gen_status = "not evaluated";
    else if (fully_generalized)
        gen_status = "yes";
    else if (any_gen_infeasible)
        gen_status = "no";
    else
        gen_status = "indeterminate";
    rep["fully_generalized_status"] = gen_status;
    if (run_generalized && fully_generalized && !party) {
        const auto full = qcl::detect_generalized_full(state, opt.tol);
        rep["joint_generalized_residual"] = full.joint_residual;
    }

    // Placement in the hierarchy: classical states sit inside the
    // generalized-classical class, which sits inside the separable states.
    std::string hierarchy;
    if (fully_classical)
        hierarchy = "fully classical (contained in fully generalized-classical, separable)";
    else if (run_generalized && fully_generalized)
        hierarchy = "fully generalized-classical but not fully classical (separable)";
    else if (run_generalized && any_gen_infeasible)
        hierarchy = "neither classical nor generalized-classical for at least one party";
    else if (run_generalized && any_indeterminate)
        hierarchy = "indeterminate";
    else
        hierarchy = "not fully classical";
    rep["hierarchy"] = hierarchy;
    rep["elapsed_ms"] = elapsed_ms(start);
    emit(rep, opt);
    return any_indeterminate ? 2 : 0;
}

int cmd_generate(const std::vector<qcl::Index>& dims, const std::string& cls,
                 std::vector<int> parties, long terms, std::uint64_t seed,
                 const std::string& out_path, std::string sidecar, const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    if (parties.empty())
        for (size_t k = 0; k < dims.size(); ++k) parties.push_back(static_cast<int>(k));
    qcl::Index min_dim = dims.empty() ? 0 : dims[0];
    for (auto d : dims) min_dim = std::min(min_dim, d);
    if (terms <= 0) terms = min_dim;

    qcl::MultipartiteState<double> state;
    qcl::ClassLabel label;
    bool has_label = true;
    if (cls == "classical" || cls == "fully_classical") {
        auto g = qcl::generate_classical<double>(
            dims, cls == "fully_classical" ? [&] {
                std::vector<int> all;
                for (size_t k = 0; k < dims.size(); ++k) all.push_back(static_cast<int>(k));
                return all;
            }() : parties,
            terms, seed);
        state = g.state;
        label = g.label;
    } else if (cls == "generalized" || cls == "fully_generalized") {
        std::vector<int> set = parties;
        if (cls == "fully_generalized") {
            set.clear();
            for (size_t k = 0; k < dims.size(); ++k) set.push_back(static_cast<int>(k));
        }
        auto g = qcl::generate_generalized_classical<double>(dims, set, terms, 50.0, seed);
        state = g.state;
        label = g.label;
    } else if (cls == "product") {
        state = qcl::generate_product<double>(dims, seed);
        label.kind = qcl::StateClass::Product;
    } else if (cls == "separable") {
        auto g = qcl::generate_generic_separable<double>(dims, terms, seed);
        state = g.state;
        label = g.label;
        has_label = false;  // no per-party claims
    } else if (cls == "random") {
        state = qcl::generate_random_density<double>(dims, seed);
        label.kind = qcl::StateClass::Unknown;
        has_label = false;
    } else {
        throw qcl::ValidationError("unknown state class: " + cls);
    }

    json meta;
    meta["label"] = qcl::to_string(label.kind);
    meta["seed"] = seed;
    meta["generator"] = cls;
    qcl::write_state_file(out_path, state, meta);

    json rep = qcl::report_header("generate", opt.tol);
    rep["class"] = qcl::to_string(label.kind);
    rep["dims"] = dims;
    rep["terms"] = terms;
    rep["seed"] = seed;
    rep["output"] = out_path;
    if (!sidecar.empty()) {
        if (sidecar == "auto") sidecar = out_path + ".label.json";
        qcl::write_label_sidecar(sidecar, label, dims, terms, seed);
        rep["sidecar"] = sidecar;
    }
    (void)has_label;
    rep["elapsed_ms"] = elapsed_ms(start);
    emit(rep, opt);
    return 0;
}

int cmd_ndlid(const std::string& path, int party, const std::string& ensemble_path,
              const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto state = load_state(path, opt.tol);
    if (party < 0 || party >= state.parties()) throw qcl::BadParty("party index out of range");

    qcl::cmat ensemble;
    std::string source;
    bool indeterminate = false;
    if (!ensemble_path.empty()) {
        const json j = qcl::detail::parse_file(ensemble_path);
        if (!j.contains("vectors"))
            throw qcl::ValidationError(ensemble_path + ": missing \"vectors\"");
        ensemble = qcl::detail::read_matrix_json<double>(j["vectors"],
                                                         ensemble_path + ": vectors");
        source = "file";
    } else {
        const auto cs = qcl::contract(state, party, opt.tol);
        auto cv = qcl::detect_classical_blocks(cs, opt.tol);
        if (cv.is_classical) {
            ensemble = cv.basis;
            source = "classical certificate";
        } else {
            auto gv = qcl::detect_generalized_blocks(cs, opt.tol);
            if (gv.is_generalized_classical) {
                ensemble = gv.basis;
                source = "generalized certificate";
            } else if (gv.status == qcl::FeasStatus::Indeterminate) {
                indeterminate = true;
            }
            if (!indeterminate && !gv.is_generalized_classical) {
                json rep = qcl::report_header("ndlid", opt.tol);
                rep["input"] = {{"path", path}, {"dims", state.dims}};
                rep["party"] = party;
                rep["capable"] = false;
                rep["note"] =
                    "state is not generalized-classical for this party; no invariant "
                    "identification measurement exists";
                rep["elapsed_ms"] = elapsed_ms(start);
                emit(rep, opt);
                return 0;
            }
        }
        if (indeterminate) {
            json rep = qcl::report_header("ndlid", opt.tol);
            rep["input"] = {{"path", path}, {"dims", state.dims}};
            rep["party"] = party;
            rep["capable"] = false;
            rep["note"] = "detection was indeterminate; no ensemble to build from";
            rep["elapsed_ms"] = elapsed_ms(start);
            emit(rep, opt);
            return 2;
        }
    }

    const auto m = [&] {
        auto built = qcl::build_measurement(ensemble, opt.tol);
        built.party = party;
        return built;
    }();

    // Exactness diagnostics: each operator must pick out exactly its own
    // ensemble member at the advertised rate and miss every other one.
    double cross = 0, rate_dev = 0;
    const qcl::Index n = m.ensemble.cols();
    for (qcl::Index i = 0; i < n; ++i)
        for (qcl::Index j = 0; j < n; ++j) {
            const double v = (m.operators[static_cast<size_t>(i)] * m.ensemble.col(j)).norm();
            if (i == j)
                rate_dev = std::max(rate_dev, std::abs(v * v - m.rate));
            else
                cross = std::max(cross, v);
        }
    qcl::cmat total = qcl::cmat::Zero(ensemble.rows(), ensemble.rows());
    for (const auto& op : m.operators) total += op.adjoint() * op;
    total += m.inconclusive.adjoint() * m.inconclusive;
    const double completeness =
        qcl::max_abs(qcl::cmat(total - qcl::cmat::Identity(total.rows(), total.cols())));

    json rep = qcl::report_header("ndlid", opt.tol);
    rep["input"] = {{"path", path}, {"dims", state.dims}};
    rep["party"] = party;
    rep["capable"] = true;
    rep["ensemble_source"] = source;
    rep["ensemble_size"] = n;
    rep["rate"] = m.rate;
    rep["projective"] = std::abs(m.rate - 1.0) <= 100 * opt.tol.eps_zero;
    rep["selectivity_deviation"] = std::max(cross, rate_dev);
    rep["completeness_deviation"] = completeness;
    rep["invariance_deviation"] = qcl::verify_invariance(state, m, opt.tol);
    rep["ensemble"] = qcl::basis_json(m.ensemble);
    json probs = json::array();
    for (qcl::Index i = 0; i < n; ++i) {
        try {
            probs.push_back(qcl::identify(state, m, i, opt.tol).probability);
        } catch (const qcl::ZeroProbabilityOutcome&) {
            probs.push_back(0.0);
        }
    }
    rep["outcome_probabilities"] = probs;
    rep["elapsed_ms"] = elapsed_ms(start);
    emit(rep, opt);
    return 0;
}

int cmd_tomo(const std::string& path, int party, long shots, std::uint64_t seed,
             const std::string& record_path, bool povm_test, const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto state = load_state(path, opt.tol);
    if (party < 0 || party >= state.parties()) throw qcl::BadParty("party index out of range");

    const auto outcome = qcl::run_tomography(state, party, shots, seed, opt.tol);
    const auto direct = qcl::contract(state, party, opt.tol);
    const auto direct_verdict = qcl::detect_classical_blocks(direct, opt.tol);
    const double deviation = qcl::blocks_deviation(direct, outcome.blocks);

    json rep = qcl::report_header("tomo", opt.tol);
    rep["input"] = {{"path", path}, {"dims", state.dims}};
    rep["party"] = party;
    rep["mode"] = shots > 0 ? "sampled" : "exact";
    if (shots > 0) {
        rep["shots"] = shots;
        rep["seed"] = seed;
        rep["noise_scale"] = outcome.noise_scale;
    }
    rep["settings"] = static_cast<long>(outcome.record.items.size());
    rep["block_deviation"] = deviation;
    rep["reconstructed_classical"] = outcome.verdict.is_classical;
    rep["direct_classical"] = direct_verdict.is_classical;
    rep["verdicts_agree"] = outcome.verdict.is_classical == direct_verdict.is_classical;
    if (povm_test) {
        const auto povm = qcl::default_ic_povm<double>(state.complement_dim(party), opt.tol);
        const auto report = qcl::povm_commutator_test(state, party, povm, opt.tol);
        rep["povm_max_scaled_commutator"] = report.max_scaled_commutator;
        rep["povm_pairs_checked"] = report.pairs_checked;
        rep["povm_consistent"] = report.consistent_with_classical;
    }
    if (!record_path.empty()) {
        qcl::write_record_file(record_path, outcome.record);
        rep["record_file"] = record_path;
    }
    rep["elapsed_ms"] = elapsed_ms(start);
    emit(rep, opt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decide classicality and generalized classicality of multipartite states"};
    app.set_version_flag("--version", qcl::kVersion);
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("QCLASSICAL_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0) opt.tol.eps_zero = v;
    }
    app.add_option("--tol", opt.tol.eps_zero, "zero threshold (overrides QCLASSICAL_TOL)");
    app.add_option("--eps-feas", opt.tol.eps_feas, "feasibility residual threshold");
    app.add_option("--max-iter", opt.tol.max_iter, "feasibility solver iteration cap");
    app.add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* classify = app.add_subcommand("classify", "classify a state file");
    classify->fallthrough();
    std::string classify_path;
    std::optional<int> classify_party;
    std::string classify_mode = "both";
    classify->add_option("state", classify_path, "state JSON file")->required();
    int classify_party_raw = -1;
    auto* party_opt = classify->add_option("--party", classify_party_raw,
                                           "restrict to one party (default: all)");
    classify->add_option("--mode", classify_mode, "classical, generalized or both")
        ->check(CLI::IsMember({"classical", "generalized", "both"}));

    auto* generate = app.add_subcommand("generate", "generate a labelled state file");
    generate->fallthrough();
    std::string gen_dims_str, gen_class = "fully_classical", gen_out = "state.json";
    std::string gen_sidecar;
    std::vector<int> gen_parties;
    long gen_terms = 0;
    std::uint64_t gen_seed = 1;
    generate->add_option("--dims", gen_dims_str, "local dimensions, e.g. 2,2")->required();
    generate
        ->add_option("--class", gen_class,
                     "fully_classical, classical, fully_generalized, generalized, product, "
                     "separable or random")
        ->required();
    generate->add_option("--parties", gen_parties, "party set for the per-party classes");
    generate->add_option("--terms", gen_terms, "number of product terms (default: min dim)");
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output state file");
    generate->add_option("--sidecar", gen_sidecar,
                         "write a ground-truth label sidecar ('auto' derives the name)");

    auto* ndlid = app.add_subcommand("ndlid", "build an identification measurement");
    ndlid->fallthrough();
    std::string ndlid_path, ndlid_ensemble;
    int ndlid_party = 0;
    ndlid->add_option("state", ndlid_path, "state JSON file")->required();
    ndlid->add_option("--party", ndlid_party, "target party")->required();
    ndlid->add_option("--ensemble", ndlid_ensemble,
                      "JSON file with \"vectors\" (columns) instead of the state's certificate");

    auto* tomo = app.add_subcommand("tomo", "tomographic block reconstruction and detection");
    tomo->fallthrough();
    std::string tomo_path, tomo_record;
    int tomo_party = 0;
    long tomo_shots = 0;
    std::uint64_t tomo_seed = 1;
    bool tomo_povm = false;
    tomo->add_option("state", tomo_path, "state JSON file")->required();
    tomo->add_option("--party", tomo_party, "target party")->required();
    tomo->add_option("--shots", tomo_shots, "shots per setting (0 = exact expectations)");
    tomo->add_option("--seed", tomo_seed, "sampling seed");
    tomo->add_option("--record", tomo_record, "write the measurement record to this file");
    tomo->add_flag("--povm-test", tomo_povm, "also run the POVM commutator test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*classify) {
            if (*party_opt) classify_party = classify_party_raw;
            return cmd_classify(classify_path, classify_party, classify_mode, opt);
        }
        if (*generate) {
            std::vector<qcl::Index> dims;
            std::stringstream ss(gen_dims_str);
            std::string tok;
            while (std::getline(ss, tok, ','))
                dims.push_back(static_cast<qcl::Index>(std::stol(tok)));
            return cmd_generate(dims, gen_class, gen_parties, gen_terms, gen_seed, gen_out,
                                gen_sidecar, opt);
        }
        if (*ndlid) return cmd_ndlid(ndlid_path, ndlid_party, ndlid_ensemble, opt);
        if (*tomo)
            return cmd_tomo(tomo_path, tomo_party, tomo_shots, tomo_seed, tomo_record,
                            tomo_povm, opt);
    } catch (const qcl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
