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

#ifndef QCLASSICAL_TOMO_HPP
#define QCLASSICAL_TOMO_HPP

#include "contraction.hpp"
#include "detect_classical.hpp"
#include "numerics.hpp"
#include "random.hpp"
#include "states.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

// Tomographic access to the contraction blocks.  Projecting the complement
// onto phi_i, psi_ij = (phi_i + phi_j)/sqrt(2) and chi_ij = (phi_i - i
// phi_j)/sqrt(2) and measuring the remaining party with an informationally
// complete POVM yields operator-valued expectations R_P = Tr_A[(P (x) I)
// rho] from which every block follows linearly:
//   <phi_i| rho |phi_j> = R_psi + i R_chi - (1+i)/2 (R_phi_i + R_phi_j),
// for i > j.  The same blocks feed the classical detector, so classicality
// is decidable from local measurement statistics alone.

namespace qcl {

enum class ProjKind { Phi, Psi, Chi };

struct ProjLabel {
    ProjKind kind = ProjKind::Phi;
    Index i = 0;
    Index j = 0;  // == i for Phi, strictly less than i otherwise

    std::string str() const {
        switch (kind) {
            case ProjKind::Phi: return "phi_" + std::to_string(i);
            case ProjKind::Psi: return "psi_" + std::to_string(i) + "_" + std::to_string(j);
            case ProjKind::Chi: return "chi_" + std::to_string(i) + "_" + std::to_string(j);
        }
        return "";
    }
};

template <class Real>
struct ProjectorFamily {
    CMat<Real> base_basis;  // orthonormal columns phi_i on the complement
    struct Entry {
        ProjLabel label;
        CVec<Real> vector;  // unit; the setting projects onto it
    };
    std::vector<Entry> entries;  // d_A * d_A of them
};

// Spanning projector family over the complement, built from an orthonormal
// basis (computational by default).
template <class Real>
ProjectorFamily<Real> build_projector_family(Index dim, const CMat<Real>& basis = {},
                                             const Tolerance& tol = {}) {
    CMat<Real> phi;
    if (basis.size() == 0) {
        phi = CMat<Real>::Identity(dim, dim);
    } else {
        if (basis.rows() != dim || basis.cols() != dim)
            throw ShapeMismatch("build_projector_family: basis shape mismatch");
        if (max_abs(CMat<Real>(basis.adjoint() * basis - CMat<Real>::Identity(dim, dim))) >
            100 * tol.eps_zero)
            throw NonOrthonormalBasis("build_projector_family: basis is not orthonormal");
        phi = basis;
    }
    ProjectorFamily<Real> fam;
    fam.base_basis = phi;
    const Real rt2 = std::sqrt(Real(2));
    for (Index i = 0; i < dim; ++i)
        fam.entries.push_back({{ProjKind::Phi, i, i}, phi.col(i)});
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < i; ++j) {
            fam.entries.push_back(
                {{ProjKind::Psi, i, j}, CVec<Real>((phi.col(i) + phi.col(j)) / rt2)});
            fam.entries.push_back(
                {{ProjKind::Chi, i, j},
                 CVec<Real>((phi.col(i) - std::complex<Real>(0, 1) * phi.col(j)) / rt2)});
        }
    return fam;
}

template <class Real>
struct ICPovm {
    std::vector<CMat<Real>> elements;
    // Linear estimator: maps the vector of outcome means tr(F_b X) to the
    // Hermitian coordinates of X (pseudo-inverse of the frame matrix).
    RMat<Real> dual;
    Real dual_gain = 0;  // operator norm of the estimator, for noise bounds
};

namespace detail {

template <class Real>
ICPovm<Real> finish_ic_povm(std::vector<CMat<Real>> elements, Index dim) {
    const Index k = static_cast<Index>(elements.size());
    RMat<Real> frame(k, dim * dim);
    for (Index b = 0; b < k; ++b) frame.row(b) = herm_coords(elements[static_cast<size_t>(b)]).transpose();
    Eigen::JacobiSVD<RMat<Real>> svd(frame, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= Real(1e-12) * sv(0))
        throw InvalidPOVM("POVM is not informationally complete");
    RVec<Real> inv = sv.cwiseInverse();
    ICPovm<Real> povm;
    povm.dual = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
    povm.dual_gain = inv.maxCoeff();
    povm.elements = std::move(elements);
    return povm;
}

}  // namespace detail

// Informationally complete POVM on the measured party: symmetric
// tetrahedron for qubits, a Weyl-Heisenberg symmetric construction for
// dimension 3, and a mixture of d+1 fixed random bases otherwise.
template <class Real>
ICPovm<Real> bside_ic_povm(Index dim) {
    if (dim < 2) throw BadDims("bside_ic_povm: dimension must be at least 2");
    using C = std::complex<Real>;
    std::vector<CMat<Real>> elems;
    if (dim == 2) {
        const Real s = Real(1) / std::sqrt(Real(3));
        const Real dirs[4][3] = {
            {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
        for (auto& d : dirs) {
            CMat<Real> f(2, 2);
            f(0, 0) = C(1 + d[2], 0);
            f(0, 1) = C(d[0], -d[1]);
            f(1, 0) = C(d[0], d[1]);
            f(1, 1) = C(1 - d[2], 0);
            elems.push_back(f / Real(4));
        }
    } else if (dim == 3) {
        const Real rt2 = std::sqrt(Real(2));
        CVec<Real> fid(3);
        fid << C(0, 0), C(1 / rt2, 0), C(-1 / rt2, 0);
        const C omega = std::polar(Real(1), Real(2) * Real(EIGEN_PI) / Real(3));
        for (Index a = 0; a < 3; ++a)
            for (Index b = 0; b < 3; ++b) {
                CVec<Real> v(3);
                for (Index r = 0; r < 3; ++r)
                    v((r + a) % 3) = std::pow(omega, static_cast<int>(b * r)) * fid(r);
                elems.push_back(CMat<Real>(v * v.adjoint() / Real(3)));
            }
    } else {
        Rng rng(0xb51dec0dedba5e5ULL + static_cast<std::uint64_t>(dim));
        std::vector<CMat<Real>> bases{CMat<Real>::Identity(dim, dim)};
        for (Index m = 0; m < dim; ++m) bases.push_back(haar_unitary<Real>(dim, rng));
        for (const auto& u : bases)
            for (Index k = 0; k < dim; ++k)
                elems.push_back(
                    CMat<Real>(u.col(k) * u.col(k).adjoint() / Real(dim + 1)));
    }
    return detail::finish_ic_povm(std::move(elems), dim);
}

template <class Real>
struct MeasurementRecord {
    int party = -1;
    std::vector<Index> dims;
    CMat<Real> base_basis;  // complement basis the family was built on
    struct Item {
        ProjLabel label;
        CMat<Real> op;   // estimate of R = Tr_A[(P (x) I) rho], d_B x d_B
        long shots = 0;  // 0 means exact
    };
    std::vector<Item> items;
};

// Exact operator-valued expectations for every family entry.
template <class Real>
MeasurementRecord<Real> exact_record(const MultipartiteState<Real>& s, int party,
                                     const Tolerance& tol = {}, const CMat<Real>& basis = {}) {
    if (party < 0 || party >= s.parties()) throw BadParty("party index out of range");
    const Index da = s.complement_dim(party);
    const Index db = s.party_dim(party);
    const auto fam = build_projector_family<Real>(da, basis, tol);
    const CMat<Real> sigma = permute_party_last(s, party);
    MeasurementRecord<Real> rec;
    rec.party = party;
    rec.dims = s.dims;
    rec.base_basis = fam.base_basis;
    const CMat<Real> eye = CMat<Real>::Identity(db, db);
    for (const auto& entry : fam.entries) {
        const CMat<Real> lift = kron(CMat<Real>(entry.vector), eye);  // (da*db) x db
        rec.items.push_back({entry.label, CMat<Real>(lift.adjoint() * sigma * lift), 0});
    }
    return rec;
}

// Simulates the finite-shot protocol: for every family entry, `shots` joint
// measurements of {projector yes/no} x {IC POVM outcome} are drawn, and the
// yes-frequencies are mapped through the POVM's linear estimator.  The
// estimate is unbiased; no positivity repair is applied.
template <class Real>
MeasurementRecord<Real> sample_record(const MultipartiteState<Real>& s, int party, long shots,
                                      std::uint64_t seed, const Tolerance& tol = {},
                                      const CMat<Real>& basis = {}) {
    if (shots < 1) throw BadDims("sample_record: shots must be positive");
    if (party < 0 || party >= s.parties()) throw BadParty("party index out of range");
    const Index da = s.complement_dim(party);
    const Index db = s.party_dim(party);
    const auto fam = build_projector_family<Real>(da, basis, tol);
    const auto povm = bside_ic_povm<Real>(db);
    const Index noutcome = static_cast<Index>(povm.elements.size());
    const CMat<Real> sigma = permute_party_last(s, party);
    const CMat<Real> rho_party = ptrace_first(sigma, da, db);
    const CMat<Real> eye = CMat<Real>::Identity(db, db);

    MeasurementRecord<Real> rec;
    rec.party = party;
    rec.dims = s.dims;
    rec.base_basis = fam.base_basis;
    for (size_t e = 0; e < fam.entries.size(); ++e) {
        const auto& entry = fam.entries[e];
        const CMat<Real> lift = kron(CMat<Real>(entry.vector), eye);
        const CMat<Real> r_exact = lift.adjoint() * sigma * lift;

        // Joint outcome distribution: (yes, b) then (no, b).
        std::vector<Real> probs(static_cast<size_t>(2 * noutcome));
        for (Index b = 0; b < noutcome; ++b) {
            const Real pyes = (povm.elements[static_cast<size_t>(b)] * r_exact).trace().real();
            const Real pall =
                (povm.elements[static_cast<size_t>(b)] * rho_party).trace().real();
            probs[static_cast<size_t>(b)] = std::max<Real>(Real(0), pyes);
            probs[static_cast<size_t>(noutcome + b)] = std::max<Real>(Real(0), pall - pyes);
        }
        Real total = 0;
        for (Real p : probs) total += p;
        if (std::abs(total - Real(1)) > Real(1e-6))
            throw Error("sample_record: outcome probabilities do not sum to 1");
        for (Real& p : probs) p /= total;

        // Multinomial draw via a chain of binomials.
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(e)));
        std::vector<long> counts(probs.size(), 0);
        long remaining = shots;
        Real ptail = 1;
        for (size_t c = 0; c + 1 < probs.size() && remaining > 0; ++c) {
            const Real pc = std::clamp<Real>(probs[c] / ptail, Real(0), Real(1));
            std::binomial_distribution<long> bin(remaining, static_cast<double>(pc));
            counts[c] = bin(rng);
            remaining -= counts[c];
            ptail = std::max<Real>(ptail - probs[c], Real(0));
            if (ptail <= Real(0)) break;
        }
        counts.back() += remaining;

        RVec<Real> freq(noutcome);
        for (Index b = 0; b < noutcome; ++b)
            freq(b) = Real(counts[static_cast<size_t>(b)]) / Real(shots);
        const CMat<Real> estimate = herm_from_coords(RVec<Real>(povm.dual * freq), db);
        rec.items.push_back({entry.label, estimate, shots});
    }
    return rec;
}

// Per-entry noise scale of the reconstructed blocks: the outcome-frequency
// error of one record is at most ~1/sqrt(shots) in Euclidean norm, the
// estimator amplifies it by its gain, and a block mixes up to four records
// with coefficient square-sum 3.
template <class Real>
Real record_noise_scale(const MeasurementRecord<Real>& rec) {
    long shots = 0;
    for (const auto& item : rec.items) shots = std::max(shots, item.shots);
    if (shots == 0) return 0;
    const Index db = rec.dims[static_cast<size_t>(rec.party)];
    const Real gain = bside_ic_povm<Real>(db).dual_gain;
    return std::sqrt(Real(3)) * gain / (Real(db) * std::sqrt(Real(shots)));
}

// Rebuilds the contraction set from a complete measurement record.
template <class Real>
ContractionSet<Real> reconstruct_blocks(const MeasurementRecord<Real>& rec,
                                        const Tolerance& tol = {}) {
    if (rec.party < 0 || rec.party >= static_cast<int>(rec.dims.size()))
        throw BadParty("record party out of range");
    Index total = 1;
    for (Index d : rec.dims) total *= d;
    const Index db = rec.dims[static_cast<size_t>(rec.party)];
    const Index da = total / db;

    std::map<std::tuple<int, Index, Index>, const CMat<Real>*> table;
    for (const auto& item : rec.items) {
        if (item.op.rows() != db || item.op.cols() != db)
            throw ShapeMismatch("record operator has the wrong size");
        table[{static_cast<int>(item.label.kind), item.label.i, item.label.j}] = &item.op;
    }
    auto lookup = [&](ProjKind kind, Index i, Index j) -> const CMat<Real>& {
        auto it = table.find({static_cast<int>(kind), i, j});
        if (it == table.end())
            throw IncompleteRecord("missing record entry " +
                                   ProjLabel{kind, i, j}.str());
        return *it->second;
    };

    ContractionSet<Real> cs;
    cs.party = rec.party;
    cs.dims = rec.dims;
    cs.dim_party = db;
    cs.dim_complement = da;
    cs.other_basis =
        rec.base_basis.size() == 0 ? CMat<Real>::Identity(da, da) : rec.base_basis;
    const std::complex<Real> ihalf(Real(0.5), Real(0.5));  // (1+i)/2
    for (Index a = 0; a < da; ++a)
        for (Index b = a; b < da; ++b) {
            if (a == b) {
                cs.blocks.push_back(hermitian_part(lookup(ProjKind::Phi, a, a)));
                continue;
            }
            // The family addresses pairs as (i, j) with i > j; the stored
            // upper block is the adjoint of the reconstructed <i| rho |j>.
            const CMat<Real> lower = lookup(ProjKind::Psi, b, a) +
                                     std::complex<Real>(0, 1) * lookup(ProjKind::Chi, b, a) -
                                     ihalf * (lookup(ProjKind::Phi, b, b) +
                                              lookup(ProjKind::Phi, a, a));
            cs.blocks.push_back(lower.adjoint());
        }
    (void)tol;
    return cs;
}

// Relative Frobenius deviation between two contraction sets over the same
// party and dims.
template <class Real>
Real blocks_deviation(const ContractionSet<Real>& a, const ContractionSet<Real>& b) {
    if (a.dim_party != b.dim_party || a.dim_complement != b.dim_complement)
        throw ShapeMismatch("blocks_deviation: incompatible contraction sets");
    Real sq = 0;
    for (Index i = 0; i < a.dim_complement; ++i)
        for (Index j = i; j < a.dim_complement; ++j) {
            const Real d = (a.block(i, j) - b.block(i, j)).squaredNorm();
            sq += (i == j) ? d : 2 * d;
        }
    return std::sqrt(sq) / std::max<Real>(Real(1e-300), a.family_norm());
}

// Default informationally complete POVM on the complement: the projector
// family normalized into a POVM by the symmetric frame transformation
// T^{-1/2} L_k T^{-1/2}.
template <class Real>
std::vector<CMat<Real>> default_ic_povm(Index dim, const Tolerance& tol = {}) {
    const auto fam = build_projector_family<Real>(dim, {}, tol);
    CMat<Real> t = CMat<Real>::Zero(dim, dim);
    for (const auto& e : fam.entries) t += e.vector * e.vector.adjoint();
    auto eig = hermitian_eig(t, tol);
    if (eig.values.minCoeff() <= tol.eps_zero)
        throw InvalidPOVM("default_ic_povm: frame operator is singular");
    const CMat<Real> tis = eig.vectors * eig.values.cwiseSqrt().cwiseInverse().asDiagonal() *
                           eig.vectors.adjoint();
    std::vector<CMat<Real>> elems;
    for (const auto& e : fam.entries) {
        const CVec<Real> w = tis * e.vector;
        elems.push_back(CMat<Real>(w * w.adjoint()));
    }
    return elems;
}

template <class Real>
struct PovmCommutatorReport {
    Real max_scaled_commutator = 0;
    long pairs_checked = 0;
    bool consistent_with_classical = false;
};

// For every POVM element on the complement, forms rho_E = Tr_A[(E (x) I)
// rho] and checks whether the family commutes.  A state classical for the
// party yields commuting operators for every choice of local POVMs.
template <class Real>
PovmCommutatorReport<Real> povm_commutator_test(const MultipartiteState<Real>& s, int party,
                                                const std::vector<CMat<Real>>& elements,
                                                const Tolerance& tol = {}) {
    if (party < 0 || party >= s.parties()) throw BadParty("party index out of range");
    const Index da = s.complement_dim(party);
    const Index db = s.party_dim(party);
    if (elements.empty()) throw InvalidPOVM("empty POVM");
    CMat<Real> sum = CMat<Real>::Zero(da, da);
    for (const auto& e : elements) {
        if (e.rows() != da || e.cols() != da)
            throw InvalidPOVM("POVM element size does not match the complement");
        if (hermiticity_defect(e) > 100 * tol.eps_zero * std::max<Real>(Real(1), max_abs(e)))
            throw InvalidPOVM("POVM element is not Hermitian");
        if (min_eigenvalue(hermitian_part(e), tol) < -100 * tol.eps_zero)
            throw InvalidPOVM("POVM element is not positive semidefinite");
        sum += e;
    }
    if (max_abs(CMat<Real>(sum - CMat<Real>::Identity(da, da))) > 100 * tol.eps_zero)
        throw InvalidPOVM("POVM elements do not sum to the identity");

    const CMat<Real> sigma = permute_party_last(s, party);
    std::vector<CMat<Real>> contracted;
    Real scale = 0;
    for (const auto& e : elements) {
        CMat<Real> r = CMat<Real>::Zero(db, db);
        for (Index p = 0; p < da; ++p)
            for (Index q = 0; q < da; ++q) {
                const std::complex<Real> c = e(p, q);
                if (c == std::complex<Real>(0, 0)) continue;
                r += c * sigma.block(q * db, p * db, db, db);
            }
        contracted.push_back(std::move(r));
        scale = std::max(scale, contracted.back().norm());
    }

    PovmCommutatorReport<Real> rep;
    for (size_t a = 0; a < contracted.size(); ++a) {
        if (contracted[a].norm() <= tol.eps_zero * scale) continue;
        for (size_t b = a + 1; b < contracted.size(); ++b) {
            if (contracted[b].norm() <= tol.eps_zero * scale) continue;
            const Real c = commutator(contracted[a], contracted[b]).norm() /
                           (contracted[a].norm() * contracted[b].norm());
            rep.max_scaled_commutator = std::max(rep.max_scaled_commutator, c);
            ++rep.pairs_checked;
        }
    }
    rep.consistent_with_classical = rep.max_scaled_commutator <= 100 * tol.eps_zero;
    return rep;
}

template <class Real>
struct TomoOutcome {
    MeasurementRecord<Real> record;
    ContractionSet<Real> blocks;
    ClassicalVerdict<Real> verdict;
    Real noise_scale = 0;
};

// Full pipeline: measure (exactly or with finite shots), rebuild the blocks,
// and run the classical detector with noise-aware thresholds when sampled.
template <class Real>
TomoOutcome<Real> run_tomography(const MultipartiteState<Real>& s, int party, long shots,
                                 std::uint64_t seed, const Tolerance& tol = {},
                                 const CMat<Real>& basis = {}) {
    TomoOutcome<Real> out;
    out.record = shots > 0 ? sample_record(s, party, shots, seed, tol, basis)
                           : exact_record(s, party, tol, basis);
    out.blocks = reconstruct_blocks(out.record, tol);
    out.noise_scale = record_noise_scale(out.record);
    out.verdict = detect_classical_blocks(out.blocks, tol, out.noise_scale);
    return out;
}

}  // namespace qcl

#endif  // QCLASSICAL_TOMO_HPP
