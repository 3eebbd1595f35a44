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

#ifndef QCLASSICAL_DETECT_CLASSICAL_HPP
#define QCLASSICAL_DETECT_CLASSICAL_HPP

#include "contraction.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "types.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

// Classicality test for one party: the state is classical for party B
// exactly when all contraction blocks are diagonalizable and pairwise
// commuting (with adjoints included, which forces each block to be normal),
// in which case a common orthonormal eigenbasis diagonalizes every block and
// rho = sum_m rho_m (x) |b_m><b_m| is the certifying decomposition.

namespace qcl {

struct BlockIndex {
    Index i = 0;
    Index j = 0;
};

struct CommutatorWitness {
    BlockIndex a;
    BlockIndex b;
    double scaled_norm = 0;  // ||[A,B]||_F / (||A||_F ||B||_F)
};

template <class Real>
struct ClassicalVerdict {
    int party = -1;
    bool is_classical = false;
    CMat<Real> basis;                          // orthonormal columns when classical
    std::vector<CMat<Real>> conditional_ops;   // unnormalized, on the complement
    RVec<Real> weights;                        // traces of the conditionals, descending
    std::optional<BlockIndex> defective_block;
    std::optional<CommutatorWitness> noncommuting_pair;
    long commutator_pairs_checked = 0;
    Real certificate_residual = 0;
    Real min_conditional_eig = 0;
};

// Common orthonormal eigenbasis of a commuting family of normal matrices,
// found by recursively splitting eigenspaces of random real combinations of
// the Hermitian parts.  Members must commute with each other and with each
// other's adjoints within tol.eps_zero (scaled by the members' norms); that
// is rechecked on entry and NotCommuting thrown otherwise.
template <class Real>
CMat<Real> common_eigenbasis(const std::vector<CMat<Real>>& family, const Tolerance& tol = {}) {
    if (family.empty()) throw ShapeMismatch("common_eigenbasis: empty family");
    const Index n = family[0].rows();
    for (const auto& f : family)
        if (f.rows() != n || f.cols() != n)
            throw ShapeMismatch("common_eigenbasis: members must be square and equally sized");
    if (n == 1) return CMat<Real>::Identity(1, 1);

    // Close the family under adjoints, then recheck commutation; a family
    // commuting with its adjoints consists of normal matrices whose
    // Hermitian and skew parts all commute with one another.
    std::vector<CMat<Real>> closed;
    for (const auto& f : family) {
        closed.push_back(f);
        if (hermiticity_defect(f) > tol.eps_zero * std::max<Real>(Real(1), max_abs(f)))
            closed.push_back(f.adjoint());
    }
    for (size_t a = 0; a < closed.size(); ++a)
        for (size_t b = a + 1; b < closed.size(); ++b) {
            const Real bound = tol.eps_zero *
                               std::max<Real>(closed[a].norm() * closed[b].norm(), Real(1e-300));
            if (commutator(closed[a], closed[b]).norm() > bound)
                throw NotCommuting("common_eigenbasis: family does not commute within tolerance");
        }

    std::vector<CMat<Real>> herms;
    for (const auto& f : closed) {
        const Real cut = tol.eps_zero * std::max<Real>(Real(1), f.norm());
        CMat<Real> re = hermitian_part(f);
        CMat<Real> im = antihermitian_part(f);
        if (re.norm() > cut) herms.push_back(std::move(re));
        if (im.norm() > cut) herms.push_back(std::move(im));
    }

    Rng rng(0x8e15eb57c0ffee01ULL);
    std::vector<CMat<Real>> columns;

    // Refines one orthonormal block of columns: members that act as scalars
    // on its span are discarded, the rest split it through the eigenspaces
    // of a random combination (with a deterministic single-member fallback
    // when a random draw degenerates).
    auto refine = [&](auto&& self, const CMat<Real>& v) -> void {
        const Index k = v.cols();
        if (k == 1) {
            columns.push_back(v);
            return;
        }
        std::vector<CMat<Real>> active;
        for (const auto& h : herms) {
            CMat<Real> p = hermitian_part(CMat<Real>(v.adjoint() * h * v));
            const std::complex<Real> mean = p.trace() / Real(k);
            CMat<Real> dev = p - mean * CMat<Real>::Identity(k, k);
            if (dev.norm() > tol.eps_zero * std::max<Real>(Real(1), h.norm()))
                active.push_back(std::move(p));
        }
        if (active.empty()) {
            columns.push_back(v);
            return;
        }

        auto split = [&](const CMat<Real>& combo) -> bool {
            Eigen::SelfAdjointEigenSolver<CMat<Real>> es(combo);
            const RVec<Real>& lam = es.eigenvalues();
            const Real spread = lam(k - 1) - lam(0);
            if (!(spread > Real(0))) return false;
            const Real gamma = std::max<Real>(
                Real(1e-7) * spread,
                Real(1e3) * std::numeric_limits<Real>::epsilon() * lam.cwiseAbs().maxCoeff());
            std::vector<Index> starts{0};
            for (Index i = 1; i < k; ++i)
                if (lam(i) - lam(i - 1) > gamma) starts.push_back(i);
            if (starts.size() < 2) return false;
            starts.push_back(k);
            for (size_t c = 0; c + 1 < starts.size(); ++c) {
                const Index lo = starts[c];
                const Index width = starts[c + 1] - lo;
                self(self, CMat<Real>(v * es.eigenvectors().middleCols(lo, width)));
            }
            return true;
        };

        std::normal_distribution<Real> gauss(Real(0), Real(1));
        for (int attempt = 0; attempt < 5; ++attempt) {
            CMat<Real> combo = CMat<Real>::Zero(k, k);
            for (const auto& p : active) combo += std::complex<Real>(gauss(rng), 0) * p;
            if (split(combo)) return;
        }
        // Random combinations kept cancelling; any single non-scalar member
        // splits, since its spectral spread exceeds the cluster gap.
        Real best_dev = -1;
        size_t best = 0;
        for (size_t t = 0; t < active.size(); ++t) {
            const std::complex<Real> mean = active[t].trace() / Real(k);
            const Real dev =
                (active[t] - mean * CMat<Real>::Identity(k, k)).norm();
            if (dev > best_dev) {
                best_dev = dev;
                best = t;
            }
        }
        split(active[best]);
    };
    refine(refine, CMat<Real>::Identity(n, n));

    CMat<Real> u(n, n);
    Index at = 0;
    for (const auto& block : columns) {
        u.middleCols(at, block.cols()) = block;
        at += block.cols();
    }
    return u;
}

namespace detail {

// Approximate common eigenbasis for a family that commutes only up to noise:
// the eigenbasis of a random Hermitian combination of the members' Hermitian
// and skew parts.  A random combination separates indices that any member
// separates, so within-cluster rotations are the only freedom left, and those
// do not affect the downstream certificate.  The draw with the widest minimal
// eigenvalue gap among a few attempts keeps the basis stable against noise.
template <class Real>
CMat<Real> noisy_common_eigenbasis(const std::vector<CMat<Real>>& family, Index n) {
    std::vector<CMat<Real>> herms;
    for (const auto& f : family) {
        CMat<Real> re = hermitian_part(f);
        CMat<Real> im = antihermitian_part(f);
        if (re.norm() > Real(0)) herms.push_back(std::move(re));
        if (im.norm() > Real(0)) herms.push_back(std::move(im));
    }
    if (herms.empty()) return CMat<Real>::Identity(n, n);

    Rng rng(0x6e6f6973791dULL);
    std::normal_distribution<Real> gauss(Real(0), Real(1));
    Real best_gap = Real(-1);
    CMat<Real> best = CMat<Real>::Identity(n, n);
    for (int attempt = 0; attempt < 3; ++attempt) {
        CMat<Real> combo = CMat<Real>::Zero(n, n);
        for (const auto& h : herms) combo += std::complex<Real>(gauss(rng), 0) * h;
        Eigen::SelfAdjointEigenSolver<CMat<Real>> es(combo);
        if (es.info() != Eigen::Success) continue;
        const RVec<Real>& lam = es.eigenvalues();
        Real gap = std::numeric_limits<Real>::max();
        for (Index i = 1; i < n; ++i) gap = std::min(gap, lam(i) - lam(i - 1));
        if (gap > best_gap) {
            best_gap = gap;
            best = es.eigenvectors();
        }
    }
    return best;
}

}  // namespace detail

// Decides classicality from a contraction set.  noise_scale, when positive,
// is the per-entry standard deviation of the blocks (estimated from shot
// statistics); thresholds then switch from relative floating-point bounds to
// propagated noise bounds and the defectiveness pre-test is skipped, since
// sampling noise makes it meaningless while the commutator sweep (which
// includes adjoint pairs, hence normality) still decides.
template <class Real>
ClassicalVerdict<Real> detect_classical_blocks(const ContractionSet<Real>& cs,
                                               const Tolerance& tol = {},
                                               Real noise_scale = 0) {
    ClassicalVerdict<Real> v;
    v.party = cs.party;
    const Index da = cs.dim_complement;
    const Index db = cs.dim_party;
    const Real fam_norm = cs.family_norm();
    const Real block_noise = noise_scale * Real(db);  // Frobenius scale of a pure-noise block
    Real cut = tol.eps_zero * std::max<Real>(Real(1e-300), fam_norm);
    if (noise_scale > Real(0)) cut = std::max<Real>(cut, Real(8) * block_noise);

    struct Member {
        BlockIndex idx;
        CMat<Real> m;
        Real norm;
    };
    std::vector<Member> members;
    for (Index i = 0; i < da; ++i)
        for (Index j = i; j < da; ++j) {
            const CMat<Real>& blk = cs.block(i, j);
            const Real bn = blk.norm();
            if (bn <= cut) continue;
            members.push_back({{i, j}, blk, bn});
            if (i != j) members.push_back({{j, i}, blk.adjoint(), bn});
        }

    if (noise_scale == Real(0)) {
        for (const auto& mem : members) {
            if (mem.idx.i > mem.idx.j) continue;  // adjoints share the spectrum
            if (!general_eig_diagonalizable(mem.m, tol)) {
                v.defective_block = mem.idx;
                return v;
            }
        }
    }

    for (size_t a = 0; a < members.size(); ++a)
        for (size_t b = a + 1; b < members.size(); ++b) {
            const Real cn = commutator(members[a].m, members[b].m).norm();
            ++v.commutator_pairs_checked;
            Real bound;
            if (noise_scale == Real(0)) {
                bound = tol.eps_zero * members[a].norm * members[b].norm;
            } else {
                bound = Real(10) * (block_noise * (members[a].norm + members[b].norm) +
                                    block_noise * block_noise);
            }
            if (cn > bound) {
                v.noncommuting_pair = CommutatorWitness{
                    members[a].idx, members[b].idx,
                    static_cast<double>(cn / (members[a].norm * members[b].norm))};
                return v;
            }
        }

    std::vector<CMat<Real>> family;
    family.reserve(members.size());
    for (auto& mem : members) family.push_back(mem.m);
    if (family.empty()) family.push_back(CMat<Real>::Zero(db, db));
    // The sweep above already decided commutation; with noise the exact
    // splitter's thresholds are meaningless, so a noise-robust basis is
    // extracted from a random combination instead.
    CMat<Real> basis = noise_scale > Real(0) ? detail::noisy_common_eigenbasis(family, db)
                                             : common_eigenbasis(family, tol);

    // Conditional operators on the complement: rho_m = Phi C_m Phi^dag with
    // (C_m)_ij = <b_m| rho_ij |b_m>.
    std::vector<CMat<Real>> conds;
    RVec<Real> weights(db);
    for (Index m = 0; m < db; ++m) {
        CMat<Real> c(da, da);
        for (Index i = 0; i < da; ++i)
            for (Index j = 0; j < da; ++j)
                c(i, j) = (basis.col(m).adjoint() * cs.block_full(i, j) * basis.col(m))(0, 0);
        CMat<Real> cond = cs.other_basis * c * cs.other_basis.adjoint();
        conds.push_back(hermitian_part(cond));
        weights(m) = conds.back().trace().real();
    }
    std::vector<Index> order(static_cast<size_t>(db));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return weights(a) > weights(b); });
    v.basis.resize(db, db);
    v.weights.resize(db);
    for (Index m = 0; m < db; ++m) {
        v.basis.col(m) = basis.col(order[static_cast<size_t>(m)]);
        v.conditional_ops.push_back(conds[static_cast<size_t>(order[static_cast<size_t>(m)])]);
        v.weights(m) = weights(order[static_cast<size_t>(m)]);
    }

    v.min_conditional_eig = 0;
    for (const auto& c : v.conditional_ops)
        v.min_conditional_eig = std::min(v.min_conditional_eig, min_eigenvalue(c, tol));

    CMat<Real> sigma = reassemble(cs);
    CMat<Real> rebuilt = CMat<Real>::Zero(sigma.rows(), sigma.cols());
    for (Index m = 0; m < db; ++m)
        rebuilt += kron(v.conditional_ops[static_cast<size_t>(m)],
                        CMat<Real>(v.basis.col(m) * v.basis.col(m).adjoint()));
    v.certificate_residual = (sigma - rebuilt).norm() / std::max<Real>(Real(1e-300), sigma.norm());

    Real cert_cap = Real(10) * tol.eps_zero;
    Real psd_slack = Real(100) * tol.eps_zero;
    if (noise_scale > Real(0)) {
        cert_cap = std::max(cert_cap, Real(10) * noise_scale * Real(da) * Real(db) /
                                          std::max<Real>(fam_norm, Real(1e-6)));
        psd_slack = std::max(psd_slack, Real(10) * noise_scale * Real(da));
    }
    v.is_classical =
        v.certificate_residual <= cert_cap && v.min_conditional_eig >= -psd_slack;
    return v;
}

template <class Real>
ClassicalVerdict<Real> detect_classical_for_party(const MultipartiteState<Real>& s, int party,
                                                  const Tolerance& tol = {}) {
    return detect_classical_blocks(contract(s, party, tol), tol);
}

template <class Real>
struct FullClassicalVerdict {
    std::vector<ClassicalVerdict<Real>> per_party;
    bool fully_classical = false;
    CMat<Real> joint_basis;   // product-basis columns over all parties
    Real joint_residual = 0;  // off-diagonal mass of rho in that basis
};

// Runs the per-party detector for every party.  When all parties pass, the
// per-party bases assemble into a product basis whose grid pinching fixes
// rho, so rho is diagonal in it; the residual reports how exactly.
template <class Real>
FullClassicalVerdict<Real> detect_classical_full(const MultipartiteState<Real>& s,
                                                 const Tolerance& tol = {}) {
    FullClassicalVerdict<Real> out;
    out.fully_classical = true;
    for (int k = 0; k < s.parties(); ++k) {
        out.per_party.push_back(detect_classical_for_party(s, k, tol));
        out.fully_classical = out.fully_classical && out.per_party.back().is_classical;
    }
    if (!out.fully_classical) return out;

    CMat<Real> joint = CMat<Real>::Identity(1, 1);
    for (const auto& verdict : out.per_party) joint = kron(joint, verdict.basis).eval();
    out.joint_basis = joint;
    CMat<Real> d = joint.adjoint() * s.rho * joint;
    CMat<Real> off = d;
    off.diagonal().setZero();
    out.joint_residual = off.norm() / std::max<Real>(Real(1e-300), s.rho.norm());
    return out;
}

}  // namespace qcl

#endif  // QCLASSICAL_DETECT_CLASSICAL_HPP
