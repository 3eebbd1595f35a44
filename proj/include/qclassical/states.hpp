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

#ifndef QCLASSICAL_STATES_HPP
#define QCLASSICAL_STATES_HPP

#include "numerics.hpp"
#include "random.hpp"
#include "types.hpp"

#include <string>
#include <vector>

// Multipartite density matrices and seeded generators for the state classes
// the detectors decide between.  Generator labels are ground truth by
// construction: a state labelled classical for a party really was built from
// an orthonormal family on that party, and a state labelled generalized-only
// was built from a family that is linearly independent but decisively
// non-orthogonal, so the detectors have something definite to agree with.

namespace qcl {

template <class Real>
struct MultipartiteState {
    std::vector<Index> dims;  // local dimension per party, tensor order
    CMat<Real> rho;           // density matrix on the full product space

    Index parties() const { return static_cast<Index>(dims.size()); }

    Index total_dim() const {
        Index d = 1;
        for (Index dk : dims) d *= dk;
        return d;
    }

    Index party_dim(int party) const {
        if (party < 0 || party >= parties()) throw BadParty("party index out of range");
        return dims[static_cast<size_t>(party)];
    }

    Index complement_dim(int party) const { return total_dim() / party_dim(party); }
};

// Convex decomposition over product vectors: rho = sum_t weights(t) * P_t
// where P_t projects onto kron(local_vectors[t][0], ..., local_vectors[t][N-1]).
template <class Real>
struct ProductBasisDecomposition {
    RVec<Real> weights;
    std::vector<std::vector<CVec<Real>>> local_vectors;  // [term][party], unit norm

    Index terms() const { return static_cast<Index>(local_vectors.size()); }
};

enum class StateClass {
    Product,
    FullyClassical,
    ClassicalForParty,
    GeneralizedClassicalForParty,
    FullyGeneralizedClassical,
    MinimalLengthConstructed,
    GenericSeparable,
    Unknown,
};

struct ClassLabel {
    StateClass kind = StateClass::Unknown;
    std::vector<int> parties;  // which parties the per-party kinds refer to
};

inline std::string to_string(StateClass c) {
    switch (c) {
        case StateClass::Product: return "product";
        case StateClass::FullyClassical: return "fully_classical";
        case StateClass::ClassicalForParty: return "classical_for_party";
        case StateClass::GeneralizedClassicalForParty: return "generalized_classical_for_party";
        case StateClass::FullyGeneralizedClassical: return "fully_generalized_classical";
        case StateClass::MinimalLengthConstructed: return "minimal_length_constructed";
        case StateClass::GenericSeparable: return "generic_separable";
        case StateClass::Unknown: return "unknown";
    }
    return "unknown";
}

template <class Real>
struct GeneratedState {
    MultipartiteState<Real> state;
    ProductBasisDecomposition<Real> decomp;
    ClassLabel label;
};

// One construction-guaranteed fact about a generated state: party `party`
// is (or is not) classical / generalized-classical.
struct ClassClaim {
    int party = 0;
    bool generalized = false;  // false: claim about classicality
    bool expected = false;
};

namespace detail {

inline void check_dims(const std::vector<Index>& dims) {
    if (dims.empty()) throw BadDims("state needs at least one party");
    for (Index d : dims)
        if (d < 2) throw BadDims("every local dimension must be at least 2");
}

}  // namespace detail

// Checks the density-matrix invariants and throws on the first violation:
// BadDims, NotFinite, NotHermitian, TraceNotOne, NotPSD.
template <class Real>
void validate(const MultipartiteState<Real>& s, const Tolerance& tol = {}) {
    detail::check_dims(s.dims);
    if (s.rho.rows() != s.rho.cols()) throw BadDims("density matrix must be square");
    if (s.rho.rows() != s.total_dim())
        throw BadDims("density matrix size does not match the product of local dimensions");
    if (!s.rho.allFinite()) throw NotFinite("density matrix has NaN or Inf entries");
    const Real scale = std::max<Real>(Real(1), max_abs(s.rho));
    if (hermiticity_defect(s.rho) > tol.eps_zero * scale)
        throw NotHermitian("density matrix is not Hermitian");
    if (std::abs(s.rho.trace().real() - Real(1)) > tol.eps_zero ||
        std::abs(s.rho.trace().imag()) > tol.eps_zero)
        throw TraceNotOne("density matrix trace is not 1");
    if (min_eigenvalue(hermitian_part(s.rho), tol) < -tol.eps_zero * scale)
        throw NotPSD("density matrix has a negative eigenvalue");
}

// rho = sum_t w_t |v_t><v_t| with v_t the Kronecker product of the term's
// local vectors, first party most significant.
template <class Real>
MultipartiteState<Real> state_from_decomposition(const std::vector<Index>& dims,
                                                 const ProductBasisDecomposition<Real>& decomp) {
    detail::check_dims(dims);
    const Index n = decomp.terms();
    if (decomp.weights.size() != n) throw ShapeMismatch("weights do not match term count");
    Index total = 1;
    for (Index d : dims) total *= d;
    CMat<Real> rho = CMat<Real>::Zero(total, total);
    for (Index t = 0; t < n; ++t) {
        const auto& locals = decomp.local_vectors[static_cast<size_t>(t)];
        if (locals.size() != dims.size()) throw ShapeMismatch("term has wrong party count");
        CVec<Real> v = CVec<Real>::Ones(1);
        for (size_t k = 0; k < locals.size(); ++k) {
            if (locals[k].size() != dims[k]) throw ShapeMismatch("local vector has wrong dimension");
            v = kron(v, locals[k]).eval();
        }
        rho += decomp.weights(t) * (v * v.adjoint());
    }
    return {dims, hermitian_part(rho)};
}

namespace detail {

// Unit columns that are linearly independent with margin: Gram condition
// number at most cond_cap and, when a non-orthogonality margin is requested,
// at least one Gram off-diagonal of magnitude >= margin.  The margin keeps
// generator labels decisive: "not classical" claims only come from families
// a detector could never mistake for orthogonal.
template <class Real>
CMat<Real> draw_independent_vectors(Index dim, Index count, Real cond_cap,
                                    Real nonorth_margin, Rng& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        CMat<Real> v(dim, count);
        for (Index j = 0; j < count; ++j) v.col(j) = haar_unit_vector<Real>(dim, rng);
        CMat<Real> gram = v.adjoint() * v;
        Eigen::SelfAdjointEigenSolver<CMat<Real>> es(gram);
        const Real lo = es.eigenvalues().minCoeff();
        const Real hi = es.eigenvalues().maxCoeff();
        if (lo <= Real(0) || hi / lo > cond_cap) continue;
        if (nonorth_margin > Real(0) && count > 1) {
            Real max_off = 0;
            for (Index i = 0; i < count; ++i)
                for (Index j = i + 1; j < count; ++j)
                    max_off = std::max(max_off, std::abs(gram(i, j)));
            if (max_off < nonorth_margin) continue;
        }
        return v;
    }
    throw NoConvergence("could not draw a vector family meeting the margins");
}

inline bool in_set(const std::vector<int>& set, int k) {
    for (int s : set)
        if (s == k) return true;
    return false;
}

inline void check_party_set(const std::vector<Index>& dims, const std::vector<int>& party_set) {
    if (party_set.empty()) throw BadParty("party set must not be empty");
    for (int k : party_set)
        if (k < 0 || static_cast<size_t>(k) >= dims.size())
            throw BadParty("party index out of range");
}

constexpr double kGramCondCap = 50.0;      // conditioning cap for independent draws
constexpr double kNonOrthMargin = 0.05;    // smallest tolerated Gram off-diagonal
constexpr double kWeightFloorCap = 0.01;   // mixing weights stay above min(this, 0.5/n)

template <class Real>
RVec<Real> draw_weights(Index n, Rng& rng) {
    const Real floor = std::min(Real(kWeightFloorCap), Real(0.5) / Real(n));
    return simplex_weights<Real>(n, floor, rng);
}

}  // namespace detail

// Mixture of product projectors that is classical for every party in
// party_set: those parties get columns of a Haar orthonormal basis.  Parties
// outside the set get independent non-orthogonal draws when n_terms fits in
// their dimension (so the state is generically *not* classical for them),
// and unconstrained draws otherwise.
template <class Real>
GeneratedState<Real> generate_classical(const std::vector<Index>& dims,
                                        const std::vector<int>& party_set, Index n_terms,
                                        std::uint64_t seed) {
    detail::check_dims(dims);
    detail::check_party_set(dims, party_set);
    if (n_terms < 1) throw BadDims("need at least one term");
    for (int k : party_set)
        if (n_terms > dims[static_cast<size_t>(k)])
            throw BadDims("more terms than the dimension of a classical party");

    Rng rng(mix_seed(seed, 0x636c6173ULL));
    GeneratedState<Real> out;
    out.decomp.weights = detail::draw_weights<Real>(n_terms, rng);
    out.decomp.local_vectors.assign(static_cast<size_t>(n_terms),
                                    std::vector<CVec<Real>>(dims.size()));
    for (size_t k = 0; k < dims.size(); ++k) {
        const Index d = dims[k];
        CMat<Real> cols;
        if (detail::in_set(party_set, static_cast<int>(k))) {
            cols = haar_unitary<Real>(d, rng).leftCols(n_terms);
        } else if (n_terms <= d) {
            cols = detail::draw_independent_vectors<Real>(
                d, n_terms, Real(detail::kGramCondCap), Real(detail::kNonOrthMargin), rng);
        } else {
            cols.resize(d, n_terms);
            for (Index t = 0; t < n_terms; ++t) cols.col(t) = haar_unit_vector<Real>(d, rng);
        }
        for (Index t = 0; t < n_terms; ++t)
            out.decomp.local_vectors[static_cast<size_t>(t)][k] = cols.col(t);
    }
    out.state = state_from_decomposition(dims, out.decomp);
    out.label.kind = party_set.size() == dims.size() ? StateClass::FullyClassical
                                                     : StateClass::ClassicalForParty;
    out.label.parties = party_set;
    return out;
}

// Like generate_classical, but parties in party_set get linearly independent
// non-orthogonal families (generalized-classical without being classical),
// while the remaining parties get orthonormal columns.
template <class Real>
GeneratedState<Real> generate_generalized_classical(const std::vector<Index>& dims,
                                                    const std::vector<int>& party_set,
                                                    Index n_terms, Real max_gram_cond,
                                                    std::uint64_t seed) {
    detail::check_dims(dims);
    detail::check_party_set(dims, party_set);
    if (n_terms < 2) throw BadDims("a non-orthogonal family needs at least two terms");
    if (max_gram_cond <= Real(1)) throw BadDims("Gram condition cap must exceed 1");
    for (size_t k = 0; k < dims.size(); ++k)
        if (n_terms > dims[k])
            throw BadDims("more terms than a local dimension");

    Rng rng(mix_seed(seed, 0x67656e63ULL));
    GeneratedState<Real> out;
    out.decomp.weights = detail::draw_weights<Real>(n_terms, rng);
    out.decomp.local_vectors.assign(static_cast<size_t>(n_terms),
                                    std::vector<CVec<Real>>(dims.size()));
    for (size_t k = 0; k < dims.size(); ++k) {
        const Index d = dims[k];
        CMat<Real> cols;
        if (detail::in_set(party_set, static_cast<int>(k))) {
            cols = detail::draw_independent_vectors<Real>(d, n_terms, max_gram_cond,
                                                          Real(detail::kNonOrthMargin), rng);
        } else {
            cols = haar_unitary<Real>(d, rng).leftCols(n_terms);
        }
        for (Index t = 0; t < n_terms; ++t)
            out.decomp.local_vectors[static_cast<size_t>(t)][k] = cols.col(t);
    }
    out.state = state_from_decomposition(dims, out.decomp);
    out.label.kind = party_set.size() == dims.size() ? StateClass::FullyGeneralizedClassical
                                                     : StateClass::GeneralizedClassicalForParty;
    out.label.parties = party_set;
    return out;
}

// Tensor product of independent full-rank local states.
template <class Real>
MultipartiteState<Real> generate_product(const std::vector<Index>& dims, std::uint64_t seed) {
    detail::check_dims(dims);
    Rng rng(mix_seed(seed, 0x70726f64ULL));
    CMat<Real> rho = CMat<Real>::Ones(1, 1);
    for (Index d : dims) {
        CMat<Real> g = gaussian_matrix<Real>(d, d, rng);
        CMat<Real> local = g * g.adjoint();
        local /= local.trace().real();
        rho = kron(rho, local).eval();
    }
    return {dims, hermitian_part(rho)};
}

// Mixture of Haar product projectors with no structure imposed across terms.
template <class Real>
GeneratedState<Real> generate_generic_separable(const std::vector<Index>& dims, Index n_terms,
                                                std::uint64_t seed) {
    detail::check_dims(dims);
    if (n_terms < 1) throw BadDims("need at least one term");
    Rng rng(mix_seed(seed, 0x73657061ULL));
    GeneratedState<Real> out;
    out.decomp.weights = detail::draw_weights<Real>(n_terms, rng);
    out.decomp.local_vectors.assign(static_cast<size_t>(n_terms),
                                    std::vector<CVec<Real>>(dims.size()));
    for (Index t = 0; t < n_terms; ++t)
        for (size_t k = 0; k < dims.size(); ++k)
            out.decomp.local_vectors[static_cast<size_t>(t)][k] =
                haar_unit_vector<Real>(dims[k], rng);
    out.state = state_from_decomposition(dims, out.decomp);
    out.label.kind = StateClass::GenericSeparable;
    return out;
}

// Full-rank Wishart draw; almost surely entangled for any split.
template <class Real>
MultipartiteState<Real> generate_random_density(const std::vector<Index>& dims,
                                                std::uint64_t seed) {
    detail::check_dims(dims);
    Rng rng(mix_seed(seed, 0x72616e64ULL));
    Index total = 1;
    for (Index d : dims) total *= d;
    CMat<Real> g = gaussian_matrix<Real>(total, total, rng);
    CMat<Real> rho = g * g.adjoint();
    rho /= rho.trace().real();
    return {dims, hermitian_part(rho)};
}

// The facts a generator's construction guarantees, given its label and term
// count.  Orthonormal parties are classical (hence generalized-classical);
// parties given a non-orthogonal family with margin are decisively not
// classical but still generalized-classical; parties with possibly dependent
// draws (more terms than their dimension) support no claim at all.
inline std::vector<ClassClaim> guaranteed_claims(const ClassLabel& label,
                                                 const std::vector<Index>& dims, Index n_terms) {
    std::vector<ClassClaim> claims;
    const int np = static_cast<int>(dims.size());
    switch (label.kind) {
        case StateClass::Product:
            for (int k = 0; k < np; ++k) {
                claims.push_back({k, false, true});
                claims.push_back({k, true, true});
            }
            break;
        case StateClass::FullyClassical:
        case StateClass::ClassicalForParty:
            for (int k = 0; k < np; ++k) {
                if (detail::in_set(label.parties, k)) {
                    claims.push_back({k, false, true});
                    claims.push_back({k, true, true});
                } else if (n_terms >= 2 && n_terms <= dims[static_cast<size_t>(k)]) {
                    claims.push_back({k, false, false});
                    claims.push_back({k, true, true});
                }
            }
            break;
        case StateClass::FullyGeneralizedClassical:
        case StateClass::GeneralizedClassicalForParty:
            for (int k = 0; k < np; ++k) {
                if (detail::in_set(label.parties, k)) {
                    claims.push_back({k, false, false});
                    claims.push_back({k, true, true});
                } else {
                    claims.push_back({k, false, true});
                    claims.push_back({k, true, true});
                }
            }
            break;
        default:
            break;
    }
    return claims;
}

namespace detail {

// Product vectors of a decomposition with terms equal up to phase merged,
// so a repeated projector counts once.
template <class Real>
CMat<Real> distinct_product_vectors(const ProductBasisDecomposition<Real>& decomp,
                                    const Tolerance& tol) {
    const Index n = decomp.terms();
    Index total = 1;
    for (const auto& lv : decomp.local_vectors[0]) total *= lv.size();
    CMat<Real> vecs(total, n);
    for (Index t = 0; t < n; ++t) {
        CVec<Real> v = CVec<Real>::Ones(1);
        for (const auto& lv : decomp.local_vectors[static_cast<size_t>(t)])
            v = kron(v, lv).eval();
        vecs.col(t) = v.normalized();
    }
    std::vector<Index> keep;
    for (Index t = 0; t < n; ++t) {
        bool duplicate = false;
        for (Index s : keep)
            if (std::abs(vecs.col(s).dot(vecs.col(t))) >= Real(1) - Real(100) * tol.eps_zero)
                duplicate = true;
        if (!duplicate) keep.push_back(t);
    }
    CMat<Real> distinct(total, static_cast<Index>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i)
        distinct.col(static_cast<Index>(i)) = vecs.col(keep[i]);
    return distinct;
}

}  // namespace detail

// True when the decomposition's distinct product vectors are linearly
// independent.  Terms equal up to phase are merged before the rank test, so
// repeating a projector does not count against independence.
template <class Real>
bool check_product_linear_independence(const ProductBasisDecomposition<Real>& decomp,
                                       const Tolerance& tol = {}) {
    if (decomp.terms() == 0) return true;
    CMat<Real> distinct = detail::distinct_product_vectors(decomp, tol);
    return matrix_rank(distinct, Real(tol.eps_zero)) == distinct.cols();
}

// A decomposition over linearly independent product vectors has as many
// terms as the state's rank; checks that equality numerically.
template <class Real>
bool verify_minimal_length(const MultipartiteState<Real>& s,
                           const ProductBasisDecomposition<Real>& decomp,
                           const Tolerance& tol = {}) {
    if (decomp.terms() == 0) return false;
    const Index distinct = detail::distinct_product_vectors(decomp, tol).cols();
    return matrix_rank(s.rho, Real(tol.eps_zero)) == distinct;
}

}  // namespace qcl

#endif  // QCLASSICAL_STATES_HPP
