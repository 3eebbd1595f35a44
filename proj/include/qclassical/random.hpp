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

#ifndef QCLASSICAL_RANDOM_HPP
#define QCLASSICAL_RANDOM_HPP

#include "types.hpp"

#include <cstdint>
#include <random>

// Seeded random draws used by the state generators and the sampling
// simulator.  All randomness in the library flows through an explicit
// std::mt19937_64 so results are reproducible from a seed.

namespace qcl {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent streams from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <class Real>
CMat<Real> gaussian_matrix(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<Real> gauss(Real(0), Real(1));
    CMat<Real> m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = std::complex<Real>(gauss(rng), gauss(rng));
    return m;
}

template <class Real>
CVec<Real> haar_unit_vector(Index dim, Rng& rng) {
    CVec<Real> v = gaussian_matrix<Real>(dim, 1, rng);
    while (v.norm() < Real(1e-6)) v = gaussian_matrix<Real>(dim, 1, rng);
    return v.normalized();
}

// Haar-distributed unitary: QR of a Ginibre matrix with the phase
// convention that makes R's diagonal positive.
template <class Real>
CMat<Real> haar_unitary(Index dim, Rng& rng) {
    CMat<Real> g = gaussian_matrix<Real>(dim, dim, rng);
    Eigen::HouseholderQR<CMat<Real>> qr(g);
    CMat<Real> q = qr.householderQ();
    CMat<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Index k = 0; k < dim; ++k) {
        const std::complex<Real> d = r(k, k);
        const Real a = std::abs(d);
        q.col(k) *= (a > Real(0)) ? d / a : std::complex<Real>(1, 0);
    }
    return q;
}

// Point on the probability simplex with every entry at least `floor`.
template <class Real>
RVec<Real> simplex_weights(Index n, Real floor, Rng& rng) {
    std::exponential_distribution<Real> expo(Real(1));
    RVec<Real> w(n);
    Real total = 0;
    for (Index i = 0; i < n; ++i) {
        w(i) = expo(rng);
        total += w(i);
    }
    w /= total;
    return RVec<Real>::Constant(n, floor) + (Real(1) - Real(n) * floor) * w;
}

}  // namespace qcl

#endif  // QCLASSICAL_RANDOM_HPP
