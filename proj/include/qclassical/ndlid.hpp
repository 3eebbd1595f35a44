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

#ifndef QCLASSICAL_NDLID_HPP
#define QCLASSICAL_NDLID_HPP

#include "contraction.hpp"
#include "numerics.hpp"
#include "states.hpp"
#include "types.hpp"

#include <cmath>
#include <vector>

// Non-disruptive local state identification: given a linearly independent
// ensemble {|phi_i>}, the operators M_i = sqrt(lambda) |phi_i><d_i| built
// from the dual family satisfy M_i |phi_j><phi_j| M_i^dag = lambda delta_ij
// |phi_j><phi_j|, so outcome i identifies the local state as |phi_i> without
// disturbing it.  The shared success rate lambda = 1 / lambda_max(sum_i
// |d_i><d_i|) is the largest making sum_i M_i^dag M_i <= I, and equals 1
// exactly when the ensemble is orthonormal.

namespace qcl {

template <class Real>
struct NdlidMeasurement {
    int party = -1;
    CMat<Real> ensemble;                // unit columns |phi_i>
    CMat<Real> duals;                   // <d_i|phi_j> = delta_ij over the span
    std::vector<CMat<Real>> operators;  // M_i, one per ensemble member
    Real rate = 0;                      // lambda, in (0, 1]
    CMat<Real> inconclusive;            // K with K^dag K = I - sum_i M_i^dag M_i
};

template <class Real>
NdlidMeasurement<Real> build_measurement(const CMat<Real>& ensemble, const Tolerance& tol = {}) {
    const Index d = ensemble.rows();
    const Index n = ensemble.cols();
    if (d < 1 || n < 1) throw ShapeMismatch("build_measurement: empty ensemble");
    for (Index i = 0; i < n; ++i)
        if (std::abs(ensemble.col(i).norm() - Real(1)) > Real(100) * tol.eps_zero)
            throw ShapeMismatch("build_measurement: ensemble columns must be unit vectors");
    if (n > d)
        throw DependentEnsemble("build_measurement: more vectors than the dimension");
    Eigen::JacobiSVD<CMat<Real>> svd(ensemble);
    const auto& sv = svd.singularValues();
    if (sv(0) <= Real(0) || sv(n - 1) < tol.eps_zero * sv(0))
        throw DependentEnsemble("build_measurement: ensemble is linearly dependent");

    NdlidMeasurement<Real> m;
    m.ensemble = ensemble;
    const CMat<Real> gram = ensemble.adjoint() * ensemble;
    m.duals = ensemble * gram.inverse();
    const CMat<Real> frame = m.duals * m.duals.adjoint();
    Eigen::SelfAdjointEigenSolver<CMat<Real>> es(frame);
    m.rate = Real(1) / es.eigenvalues().maxCoeff();
    for (Index i = 0; i < n; ++i)
        m.operators.push_back(CMat<Real>(std::sqrt(m.rate) * m.ensemble.col(i) *
                                         m.duals.col(i).adjoint()));
    CMat<Real> slack = CMat<Real>::Identity(d, d) - m.rate * frame;
    m.inconclusive = sqrt_psd(hermitian_part(slack), tol);
    return m;
}

// Relative deviation of sum_i (I (x) M_i) rho (I (x) M_i^dag) from
// lambda * rho; zero exactly when rho is classical for the party with the
// measurement's ensemble as basis states.
template <class Real>
Real verify_invariance(const MultipartiteState<Real>& s, const NdlidMeasurement<Real>& m,
                       const Tolerance& = {}) {
    if (m.party < 0 || m.party >= s.parties()) throw BadParty("measurement party out of range");
    const Index db = s.party_dim(m.party);
    if (m.ensemble.rows() != db)
        throw ShapeMismatch("measurement dimension does not match the party");
    const Index da = s.complement_dim(m.party);
    const CMat<Real> sigma = permute_party_last(s, m.party);
    const CMat<Real> eye = CMat<Real>::Identity(da, da);
    CMat<Real> mapped = CMat<Real>::Zero(sigma.rows(), sigma.cols());
    for (const auto& op : m.operators) {
        const CMat<Real> lifted = kron(eye, op);
        mapped += lifted * sigma * lifted.adjoint();
    }
    return (mapped - m.rate * sigma).norm() / std::max<Real>(Real(1e-300), sigma.norm());
}

template <class Real>
struct IdentifyOutcome {
    CVec<Real> local_state;      // the identified |phi_i>
    CMat<Real> conditional_rest; // post-measurement state of the other parties
    Real probability = 0;        // of outcome i on the input state
};

template <class Real>
IdentifyOutcome<Real> identify(const MultipartiteState<Real>& s, const NdlidMeasurement<Real>& m,
                               Index outcome, const Tolerance& tol = {}) {
    if (m.party < 0 || m.party >= s.parties()) throw BadParty("measurement party out of range");
    if (outcome < 0 || outcome >= static_cast<Index>(m.operators.size()))
        throw ShapeMismatch("outcome index out of range");
    const Index db = s.party_dim(m.party);
    if (m.ensemble.rows() != db)
        throw ShapeMismatch("measurement dimension does not match the party");
    const Index da = s.complement_dim(m.party);
    const CMat<Real> sigma = permute_party_last(s, m.party);
    const CMat<Real> lifted = kron(CMat<Real>::Identity(da, da),
                                   m.operators[static_cast<size_t>(outcome)]);
    const CMat<Real> post = lifted * sigma * lifted.adjoint();
    const Real p = post.trace().real();
    if (p <= tol.eps_zero)
        throw ZeroProbabilityOutcome("identify: outcome has vanishing probability");
    IdentifyOutcome<Real> out;
    out.local_state = m.ensemble.col(outcome);
    out.conditional_rest = ptrace_last(post, da, db) / p;
    out.probability = p;
    return out;
}

}  // namespace qcl

#endif  // QCLASSICAL_NDLID_HPP
