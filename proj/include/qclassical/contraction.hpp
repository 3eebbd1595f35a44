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

#ifndef QCLASSICAL_CONTRACTION_HPP
#define QCLASSICAL_CONTRACTION_HPP

#include "numerics.hpp"
#include "states.hpp"
#include "types.hpp"

#include <cmath>
#include <vector>

// Contraction of a density matrix against a basis on the complement of one
// party.  After fusing every other party into a single factor A and moving
// the target party B last, rho lives on A (x) B and splits into d_A^2 blocks
// rho_ij = <phi_i| rho |phi_j> acting on B.  The block family drives both
// detectors: rho is classical for B exactly when all blocks are commuting
// normal matrices, and generalized-classical for B exactly when the
// Hermitianized family is simultaneously diagonalizable by congruence.

namespace qcl {

template <class Real>
struct ContractionSet {
    int party = -1;             // target party in the original ordering
    std::vector<Index> dims;    // original local dimensions
    Index dim_party = 0;        // d_B
    Index dim_complement = 0;   // d_A
    CMat<Real> other_basis;     // d_A x d_A, columns |phi_i>
    std::vector<CMat<Real>> blocks;  // packed upper triangle, i <= j

    // Stored blocks cover i <= j; the rest follow from rho_ji = rho_ij^dag.
    Index packed_index(Index i, Index j) const {
        if (i > j || j >= dim_complement) throw ShapeMismatch("block index out of range");
        return i * dim_complement - i * (i - 1) / 2 + (j - i);
    }

    const CMat<Real>& block(Index i, Index j) const {
        return blocks[static_cast<size_t>(packed_index(i, j))];
    }

    CMat<Real> block_full(Index i, Index j) const {
        if (i <= j) return block(i, j);
        return block(j, i).adjoint();
    }

    // Frobenius norm of the full block matrix, i.e. of the contracted rho.
    Real family_norm() const {
        Real sq = 0;
        for (Index i = 0; i < dim_complement; ++i)
            for (Index j = i; j < dim_complement; ++j) {
                const Real b = block(i, j).squaredNorm();
                sq += (i == j) ? b : 2 * b;
            }
        return std::sqrt(sq);
    }
};

// Permutation that fuses the complement of `party` (original order kept)
// into the leading factor and moves `party` last.  Returns rho re-indexed
// accordingly.
template <class Real>
CMat<Real> permute_party_last(const MultipartiteState<Real>& s, int party) {
    if (party < 0 || party >= s.parties()) throw BadParty("party index out of range");
    const size_t np = s.dims.size();
    const Index total = s.total_dim();
    if (s.rho.rows() != total || s.rho.cols() != total)
        throw BadDims("density matrix size does not match dims");

    std::vector<Index> stride(np, 1);
    for (size_t k = np - 1; k > 0; --k) stride[k - 1] = stride[k] * s.dims[k];

    std::vector<size_t> order;
    for (size_t k = 0; k < np; ++k)
        if (static_cast<int>(k) != party) order.push_back(k);
    order.push_back(static_cast<size_t>(party));

    std::vector<Index> map(static_cast<size_t>(total));
    std::vector<Index> digit(np, 0);
    for (Index x = 0; x < total; ++x) {
        Index rem = x;
        Index orig = 0;
        for (size_t pos = 0; pos < np; ++pos) {
            const size_t k = order[pos];
            Index block = 1;
            for (size_t q = pos + 1; q < np; ++q) block *= s.dims[order[q]];
            digit[k] = rem / block;
            rem %= block;
        }
        for (size_t k = 0; k < np; ++k) orig += digit[k] * stride[k];
        map[static_cast<size_t>(x)] = orig;
    }

    CMat<Real> out(total, total);
    for (Index x = 0; x < total; ++x)
        for (Index y = 0; y < total; ++y)
            out(x, y) = s.rho(map[static_cast<size_t>(x)], map[static_cast<size_t>(y)]);
    return out;
}

// Contracts rho against a basis on the complement of `party`.  The basis is
// given as columns over the fused complement factor and must be orthonormal;
// by default the computational basis is used.  All d_A(d_A+1)/2 packed
// blocks are stored, including zero ones.
template <class Real>
ContractionSet<Real> contract(const MultipartiteState<Real>& s, int party,
                              const Tolerance& tol = {}, const CMat<Real>& basis = {}) {
    if (party < 0 || party >= s.parties()) throw BadParty("party index out of range");
    const Index db = s.party_dim(party);
    const Index da = s.complement_dim(party);

    CMat<Real> phi;
    if (basis.size() == 0) {
        phi = CMat<Real>::Identity(da, da);
    } else {
        if (basis.rows() != da || basis.cols() != da)
            throw ShapeMismatch("contraction basis must be square over the fused complement");
        if (max_abs(CMat<Real>(basis.adjoint() * basis - CMat<Real>::Identity(da, da))) >
            100 * tol.eps_zero)
            throw NonOrthonormalBasis("contraction basis is not orthonormal");
        phi = basis;
    }

    CMat<Real> sigma = permute_party_last(s, party);
    ContractionSet<Real> cs;
    cs.party = party;
    cs.dims = s.dims;
    cs.dim_party = db;
    cs.dim_complement = da;
    cs.other_basis = phi;
    cs.blocks.reserve(static_cast<size_t>(da * (da + 1) / 2));
    const bool trivial = basis.size() == 0;
    for (Index i = 0; i < da; ++i)
        for (Index j = i; j < da; ++j) {
            CMat<Real> blk;
            if (trivial) {
                blk = sigma.block(i * db, j * db, db, db);
            } else {
                blk = CMat<Real>::Zero(db, db);
                for (Index p = 0; p < da; ++p)
                    for (Index q = 0; q < da; ++q)
                        blk += std::conj(phi(p, i)) * phi(q, j) *
                               sigma.block(p * db, q * db, db, db);
            }
            cs.blocks.push_back(std::move(blk));
        }
    return cs;
}

// Rebuilds the contracted matrix sum_ij |phi_i><phi_j| (x) rho_ij on the
// fused ordering (complement first, target party last).
template <class Real>
CMat<Real> reassemble(const ContractionSet<Real>& cs) {
    const Index da = cs.dim_complement;
    const Index db = cs.dim_party;
    CMat<Real> sigma = CMat<Real>::Zero(da * db, da * db);
    for (Index i = 0; i < da; ++i)
        for (Index j = 0; j < da; ++j) {
            const CMat<Real> blk = cs.block_full(i, j);
            CMat<Real> outer = cs.other_basis.col(i) * cs.other_basis.col(j).adjoint();
            sigma += kron(outer, blk);
        }
    return sigma;
}

// Partial traces over one factor of a bipartite operator on A (x) B, A most
// significant: e.g. ptrace_first of kron(a, b) is tr(a) * b.
template <class Real>
CMat<Real> ptrace_first(const CMat<Real>& m, Index da, Index db) {
    if (m.rows() != da * db || m.cols() != da * db)
        throw ShapeMismatch("ptrace_first: size does not match da * db");
    CMat<Real> out = CMat<Real>::Zero(db, db);
    for (Index i = 0; i < da; ++i) out += m.block(i * db, i * db, db, db);
    return out;
}

template <class Real>
CMat<Real> ptrace_last(const CMat<Real>& m, Index da, Index db) {
    if (m.rows() != da * db || m.cols() != da * db)
        throw ShapeMismatch("ptrace_last: size does not match da * db");
    CMat<Real> out(da, da);
    for (Index i = 0; i < da; ++i)
        for (Index j = 0; j < da; ++j)
            out(i, j) = m.block(i * db, j * db, db, db).trace();
    return out;
}

template <class Real>
struct HermitianizedFamily {
    Index dim = 0;                    // d_B
    std::vector<CMat<Real>> matrices; // Hermitian, zero members dropped
};

// Splits every block into Hermitian and anti-Hermitian parts, producing the
// Hermitian family A' = (rho_ij + rho_ij^dag)/2, A'' = (rho_ij -
// rho_ij^dag)/(2i).  Members below eps_zero relative to the family norm are
// dropped.
template <class Real>
HermitianizedFamily<Real> hermitianize(const ContractionSet<Real>& cs, const Tolerance& tol = {}) {
    HermitianizedFamily<Real> fam;
    fam.dim = cs.dim_party;
    const Real cut = tol.eps_zero * std::max<Real>(Real(1e-300), cs.family_norm());
    for (Index i = 0; i < cs.dim_complement; ++i)
        for (Index j = i; j < cs.dim_complement; ++j) {
            const CMat<Real>& blk = cs.block(i, j);
            if (i == j) {
                if (blk.norm() > cut) fam.matrices.push_back(hermitian_part(blk));
                continue;
            }
            CMat<Real> re = hermitian_part(blk);
            CMat<Real> im = antihermitian_part(blk);
            if (re.norm() > cut) fam.matrices.push_back(std::move(re));
            if (im.norm() > cut) fam.matrices.push_back(std::move(im));
        }
    return fam;
}

}  // namespace qcl

#endif  // QCLASSICAL_CONTRACTION_HPP
