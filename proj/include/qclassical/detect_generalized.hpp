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

#ifndef QCLASSICAL_DETECT_GENERALIZED_HPP
#define QCLASSICAL_DETECT_GENERALIZED_HPP

#include "contraction.hpp"
#include "detect_classical.hpp"
#include "numerics.hpp"
#include "types.hpp"

#include <cmath>
#include <deque>
#include <string>
#include <vector>

// Generalized-classicality test for one party.  The Hermitianized block
// family {A_t} is simultaneously diagonalizable by one congruence exactly
// when some W >= I satisfies A_s W A_t = A_t W A_s for all pairs; that is a
// feasibility problem over the intersection of an affine subspace with the
// shifted PSD cone, solved here by alternating projections with a Dykstra
// correction on the cone side.  A feasible witness is then turned into the
// transform P, a linearly independent basis with duals, and conditional
// operators certifying rho = sum_m rho_m (x) |b_m><b_m|.

namespace qcl {

enum class FeasStatus { Feasible, Infeasible, Indeterminate };

inline std::string to_string(FeasStatus s) {
    switch (s) {
        case FeasStatus::Feasible: return "feasible";
        case FeasStatus::Infeasible: return "infeasible";
        case FeasStatus::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

template <class Real>
struct FeasibilityResult {
    FeasStatus status = FeasStatus::Indeterminate;
    CMat<Real> witness;      // W with W >= I when Feasible
    long iterations = 0;
    Real residual = 0;       // max normalized pair residual at the reported W
    Real min_eig_gap = 0;    // lambda_min(W) - 1
    Real gap_estimate = 0;   // stagnated distance between the two sets (Infeasible)
};

// Worst pair residual ||A_s W A_t - A_t W A_s||_F normalized by the member
// and witness norms.
template <class Real>
Real congruence_residual(const std::vector<CMat<Real>>& family, const CMat<Real>& w) {
    Real worst = 0;
    const Real wn = std::max<Real>(w.norm(), Real(1e-300));
    for (size_t s = 0; s < family.size(); ++s)
        for (size_t t = s + 1; t < family.size(); ++t) {
            const Real fn =
                std::max<Real>(family[s].norm() * family[t].norm(), Real(1e-300));
            const Real r =
                (family[s] * w * family[t] - family[t] * w * family[s]).norm() / (fn * wn);
            worst = std::max(worst, r);
        }
    return worst;
}

template <class Real>
FeasibilityResult<Real> sdp_feasibility(const HermitianizedFamily<Real>& fam,
                                        const Tolerance& tol = {}) {
    const Index n = fam.dim;
    if (n < 1) throw ShapeMismatch("sdp_feasibility: empty instance");
    for (const auto& a : fam.matrices)
        if (a.rows() != n || a.cols() != n)
            throw ShapeMismatch("sdp_feasibility: member size mismatch");

    FeasibilityResult<Real> res;
    const size_t m = fam.matrices.size();
    if (m <= 1) {
        res.status = FeasStatus::Feasible;
        res.witness = CMat<Real>::Identity(n, n);
        return res;
    }

    // Projector onto the affine (here linear) subspace of admissible W, from
    // the null space of the stacked real constraint matrix.
    const Index nh = n * n;
    const Index pairs = static_cast<Index>(m * (m - 1) / 2);
    RMat<Real> constraints(pairs * 2 * nh, nh);
    for (Index a = 0; a < nh; ++a) {
        RVec<Real> e = RVec<Real>::Zero(nh);
        e(a) = 1;
        const CMat<Real> h = herm_from_coords(e, n);
        Index row = 0;
        for (size_t s = 0; s < m; ++s)
            for (size_t t = s + 1; t < m; ++t) {
                const CMat<Real> k =
                    fam.matrices[s] * h * fam.matrices[t] - fam.matrices[t] * h * fam.matrices[s];
                for (Index p = 0; p < n; ++p)
                    for (Index q = 0; q < n; ++q) {
                        constraints(row++, a) = k(p, q).real();
                        constraints(row++, a) = k(p, q).imag();
                    }
            }
    }
    Eigen::JacobiSVD<RMat<Real>> svd(constraints, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Real smax = sv.size() > 0 ? sv(0) : Real(0);
    const Real cutoff = Real(constraints.rows()) * std::numeric_limits<Real>::epsilon() * smax;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    const RMat<Real> null_basis = svd.matrixV().rightCols(nh - rank);
    const RMat<Real> null_proj = null_basis * null_basis.transpose();

    auto project_affine = [&](const CMat<Real>& w) {
        return herm_from_coords(RVec<Real>((null_proj * herm_coords(w)).eval()), n);
    };
    auto min_eig = [&](const CMat<Real>& w) {
        Eigen::SelfAdjointEigenSolver<CMat<Real>> es(w, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    };
    auto accept = [&](const CMat<Real>& w, long iters, Real r) {
        res.status = FeasStatus::Feasible;
        res.witness = w;
        res.iterations = iters;
        res.residual = r;
        res.min_eig_gap = min_eig(w) - Real(1);
        return res;
    };

    CMat<Real> x = CMat<Real>::Identity(n, n);
    {
        const Real r0 = congruence_residual(fam.matrices, x);
        if (r0 <= tol.eps_feas) return accept(x, 0, r0);
    }

    CMat<Real> q = CMat<Real>::Zero(n, n);
    std::deque<Real> gaps;
    Real last_residual = 0;
    Real last_gap = 0;
    for (long k = 1; k <= tol.max_iter; ++k) {
        const CMat<Real> y = project_affine(x);
        if (min_eig(y) >= Real(1) - tol.eps_feas) {
            const Real r = congruence_residual(fam.matrices, y);
            if (r <= tol.eps_feas) return accept(y, k, r);
        }
        const CMat<Real> t = y + q;
        x = psd_project(t, Real(1), tol);
        q = t - x;
        last_residual = congruence_residual(fam.matrices, x);
        if (last_residual <= tol.eps_feas) return accept(x, k, last_residual);

        last_gap = (y - x).norm() / std::max<Real>(Real(1), x.norm());
        gaps.push_back(last_gap);
        if (gaps.size() > 101) gaps.pop_front();
        if (gaps.size() == 101 && last_gap > Real(100) * tol.eps_feas) {
            Real lo = gaps.front(), hi = gaps.front();
            for (Real g : gaps) {
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
            // The iterate gap has stagnated at a value far above the
            // feasibility tolerance: the sets do not intersect.
            if (hi - lo <= tol.eps_feas * last_gap) {
                res.status = FeasStatus::Infeasible;
                res.iterations = k;
                res.residual = last_residual;
                res.min_eig_gap = min_eig(x) - Real(1);
                res.gap_estimate = last_gap;
                return res;
            }
        }
    }
    res.status = FeasStatus::Indeterminate;
    res.iterations = tol.max_iter;
    res.residual = last_residual;
    res.gap_estimate = last_gap;
    return res;
}

template <class Real>
struct CongruenceTransform {
    CMat<Real> p;                       // invertible; P A_t P^dag diagonal
    std::vector<RVec<Real>> diagonals;  // real diagonals of the transformed members
    Real offdiag_residual = 0;
};

// Turns a feasible witness into the diagonalizing congruence: with Q the
// Hermitian square root of W, the matrices Q A_t Q commute, and P = V^dag Q
// built from their common eigenbasis diagonalizes every member.
template <class Real>
CongruenceTransform<Real> recover_transform(const CMat<Real>& w,
                                            const std::vector<CMat<Real>>& family,
                                            const Tolerance& tol = {}) {
    const Index n = w.rows();
    if (w.cols() != n) throw ShapeMismatch("recover_transform: witness not square");
    auto eig = hermitian_eig(w, tol);
    if (eig.values.minCoeff() < Real(1) - Real(100) * tol.eps_feas)
        throw RecoveryFailed("recover_transform: witness is not above the identity");
    const CMat<Real> q = CMat<Real>(eig.vectors * eig.values.cwiseSqrt().asDiagonal() *
                                    eig.vectors.adjoint());

    std::vector<CMat<Real>> transformed;
    transformed.reserve(family.size());
    for (const auto& a : family) transformed.push_back(hermitian_part(CMat<Real>(q * a * q)));

    // The witness is only eps_feas-feasible, so the commutation recheck runs
    // with a matching (looser) zero threshold.
    Tolerance btol = tol;
    btol.eps_zero = std::max(tol.eps_zero, Real(100) * tol.eps_feas);
    CMat<Real> v;
    try {
        v = common_eigenbasis(transformed, btol);
    } catch (const NotCommuting&) {
        throw RecoveryFailed("recover_transform: transformed family does not commute");
    }

    CongruenceTransform<Real> out;
    out.p = v.adjoint() * q;
    Real worst = 0;
    for (const auto& a : family) {
        const CMat<Real> t = out.p * a * out.p.adjoint();
        CMat<Real> off = t;
        off.diagonal().setZero();
        worst = std::max(worst, off.norm() / std::max<Real>(t.norm(), Real(1e-300)));
        out.diagonals.push_back(t.diagonal().real());
    }
    out.offdiag_residual = worst;
    if (worst > Real(100) * std::max(tol.eps_feas, tol.eps_zero))
        throw RecoveryFailed("recover_transform: transformed members are not diagonal");
    return out;
}

template <class Real>
struct GeneralizedVerdict {
    int party = -1;
    bool is_generalized_classical = false;
    FeasStatus status = FeasStatus::Indeterminate;  // after certificate checks
    CMat<Real> basis;   // unit, linearly independent columns when positive
    CMat<Real> duals;   // <duals_m | basis_l> = delta_ml
    std::vector<CMat<Real>> conditional_ops;
    RVec<Real> weights;
    Real certificate_residual = 0;
    Real min_conditional_eig = 0;
    FeasibilityResult<Real> feasibility;
    std::string note;
};

template <class Real>
GeneralizedVerdict<Real> detect_generalized_blocks(const ContractionSet<Real>& cs,
                                                   const Tolerance& tol = {}) {
    GeneralizedVerdict<Real> v;
    v.party = cs.party;
    const Index da = cs.dim_complement;
    const Index db = cs.dim_party;

    HermitianizedFamily<Real> fam = hermitianize(cs, tol);
    if (fam.matrices.empty()) fam.matrices.push_back(CMat<Real>::Zero(db, db));
    v.feasibility = sdp_feasibility(fam, tol);
    v.status = v.feasibility.status;
    if (v.status != FeasStatus::Feasible) {
        if (v.status == FeasStatus::Indeterminate)
            v.note = "feasibility solver hit the iteration cap without a verdict";
        return v;
    }

    CongruenceTransform<Real> ct;
    try {
        ct = recover_transform(v.feasibility.witness, fam.matrices, tol);
    } catch (const RecoveryFailed& e) {
        v.status = FeasStatus::Indeterminate;
        v.note = e.what();
        return v;
    }

    Eigen::FullPivLU<CMat<Real>> lu(ct.p);
    const CMat<Real> pinv = lu.inverse();
    CMat<Real> basis(db, db);
    CMat<Real> duals(db, db);
    for (Index m = 0; m < db; ++m) {
        const Real beta = pinv.col(m).norm();
        basis.col(m) = pinv.col(m) / beta;
        duals.col(m) = ct.p.row(m).adjoint() * beta;
    }

    // Conditionals via dual contraction: rho_m = Phi C_m Phi^dag with
    // (C_m)_ij = <d_m| rho_ij |d_m>.
    std::vector<CMat<Real>> conds;
    RVec<Real> weights(db);
    for (Index m = 0; m < db; ++m) {
        CMat<Real> c(da, da);
        for (Index i = 0; i < da; ++i)
            for (Index j = 0; j < da; ++j)
                c(i, j) = (duals.col(m).adjoint() * cs.block_full(i, j) * duals.col(m))(0, 0);
        conds.push_back(hermitian_part(CMat<Real>(cs.other_basis * c * cs.other_basis.adjoint())));
        weights(m) = conds.back().trace().real();
    }
    std::vector<Index> order(static_cast<size_t>(db));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return weights(a) > weights(b); });
    v.basis.resize(db, db);
    v.duals.resize(db, db);
    v.weights.resize(db);
    for (Index m = 0; m < db; ++m) {
        const Index src = order[static_cast<size_t>(m)];
        v.basis.col(m) = basis.col(src);
        v.duals.col(m) = duals.col(src);
        v.conditional_ops.push_back(conds[static_cast<size_t>(src)]);
        v.weights(m) = weights(src);
    }

    v.min_conditional_eig = 0;
    for (const auto& c : v.conditional_ops)
        v.min_conditional_eig = std::min(v.min_conditional_eig, min_eigenvalue(c, tol));

    const CMat<Real> sigma = reassemble(cs);
    CMat<Real> rebuilt = CMat<Real>::Zero(sigma.rows(), sigma.cols());
    for (Index m = 0; m < db; ++m)
        rebuilt += kron(v.conditional_ops[static_cast<size_t>(m)],
                        CMat<Real>(v.basis.col(m) * v.basis.col(m).adjoint()));
    v.certificate_residual = (sigma - rebuilt).norm() / std::max<Real>(Real(1e-300), sigma.norm());

    // The witness is eps_feas-accurate and the congruence recovery amplifies
    // that by the family's conditioning; a wrong witness reconstructs with
    // order-one residual, so the gate separates scales, not ulps.
    const Real cert_cap = Real(1000) * std::max(tol.eps_feas, tol.eps_zero);
    const Real psd_slack = Real(1000) * tol.eps_feas;
    if (v.certificate_residual <= cert_cap && v.min_conditional_eig >= -psd_slack) {
        v.is_generalized_classical = true;
    } else {
        v.status = FeasStatus::Indeterminate;
        v.note = "feasible witness did not certify: reconstruction residual " +
                 std::to_string(static_cast<double>(v.certificate_residual));
    }
    return v;
}

template <class Real>
GeneralizedVerdict<Real> detect_generalized_for_party(const MultipartiteState<Real>& s, int party,
                                                      const Tolerance& tol = {}) {
    return detect_generalized_blocks(contract(s, party, tol), tol);
}

template <class Real>
struct FullGeneralizedVerdict {
    std::vector<GeneralizedVerdict<Real>> per_party;
    bool fully_generalized_classical = false;
    FeasStatus status = FeasStatus::Indeterminate;
    CMat<Real> joint_basis;   // grid of per-party basis vectors (columns)
    Real joint_residual = 0;
};

// Per-party generalized detection for every party; when all pass, the grid
// of per-party bases with product duals certifies a joint decomposition.
template <class Real>
FullGeneralizedVerdict<Real> detect_generalized_full(const MultipartiteState<Real>& s,
                                                     const Tolerance& tol = {}) {
    FullGeneralizedVerdict<Real> out;
    bool all_true = true;
    bool any_infeasible = false;
    bool any_indeterminate = false;
    for (int k = 0; k < s.parties(); ++k) {
        out.per_party.push_back(detect_generalized_for_party(s, k, tol));
        const auto& v = out.per_party.back();
        all_true = all_true && v.is_generalized_classical;
        any_infeasible = any_infeasible || v.status == FeasStatus::Infeasible;
        any_indeterminate = any_indeterminate || v.status == FeasStatus::Indeterminate;
    }
    out.fully_generalized_classical = all_true;
    out.status = all_true ? FeasStatus::Feasible
                          : (any_infeasible ? FeasStatus::Infeasible : FeasStatus::Indeterminate);
    if (!all_true) return out;

    CMat<Real> joint_basis = CMat<Real>::Identity(1, 1);
    CMat<Real> joint_duals = CMat<Real>::Identity(1, 1);
    for (const auto& v : out.per_party) {
        joint_basis = kron(joint_basis, v.basis).eval();
        joint_duals = kron(joint_duals, v.duals).eval();
    }
    out.joint_basis = joint_basis;
    const Index total = joint_basis.cols();
    CMat<Real> rebuilt = CMat<Real>::Zero(total, total);
    for (Index m = 0; m < total; ++m) {
        const std::complex<Real> c =
            (joint_duals.col(m).adjoint() * s.rho * joint_duals.col(m))(0, 0);
        rebuilt += c.real() * CMat<Real>(joint_basis.col(m) * joint_basis.col(m).adjoint());
    }
    out.joint_residual = (s.rho - rebuilt).norm() / std::max<Real>(Real(1e-300), s.rho.norm());
    return out;
}

}  // namespace qcl

#endif  // QCLASSICAL_DETECT_GENERALIZED_HPP
