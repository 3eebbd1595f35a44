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

#ifndef QCLASSICAL_NUMERICS_HPP
#define QCLASSICAL_NUMERICS_HPP

#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

// Dense linear-algebra helpers on top of Eigen.  Multiply, adjoint, trace
// and Frobenius norm are used directly through Eigen's expression API; this
// header adds the operations the detectors need beyond that: spectral
// decompositions with explicit failure modes, dual bases, cone projections,
// Kronecker products and numerical rank.

namespace qcl {

template <class Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) ->
    typename Eigen::NumTraits<typename Derived::Scalar>::Real {
    if (m.size() == 0) return 0;
    return m.cwiseAbs().maxCoeff();
}

// Deviation from Hermitian symmetry, as a max-norm.
template <class Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& m) ->
    typename Eigen::NumTraits<typename Derived::Scalar>::Real {
    return max_abs(m.derived() - m.derived().adjoint().eval());
}

template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double eps) {
    const auto scale = std::max<double>(1.0, max_abs(m));
    return hermiticity_defect(m) <= eps * scale;
}

// Hermitian part (A + A†)/2 of a square matrix.
template <class Real>
CMat<Real> hermitian_part(const CMat<Real>& m) {
    return ((m + m.adjoint()) / Real(2)).eval();
}

// Skew part divided by i, i.e. (A - A†)/(2i); Hermitian again.
template <class Real>
CMat<Real> antihermitian_part(const CMat<Real>& m) {
    return ((m - m.adjoint()) / std::complex<Real>(0, 2)).eval();
}

template <class DerivedA, class DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a,
                const Eigen::MatrixBase<DerivedB>& b) ->
    typename DerivedA::PlainObject {
    return a * b - b * a;
}

// Kronecker product with the first factor most significant: for vectors
// kron(e_i, e_j) = e_{i*n+j}.
template <class DerivedA, class DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) ->
    typename DerivedA::PlainObject {
    typename DerivedA::PlainObject out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b.derived();
    return out;
}

template <class Real>
struct HermitianEig {
    RVec<Real> values;   // ascending
    CMat<Real> vectors;  // orthonormal columns, matching order
};

// Spectral decomposition of a Hermitian matrix.  The input is checked for
// Hermitian symmetry relative to its own scale and symmetrised before the
// solve, so the result is exactly the decomposition of (m + m†)/2.
template <class Real>
HermitianEig<Real> hermitian_eig(const CMat<Real>& m, const Tolerance& tol = {}) {
    if (m.rows() != m.cols()) throw ShapeMismatch("hermitian_eig: matrix not square");
    const Real scale = std::max<Real>(Real(1), max_abs(m));
    if (hermiticity_defect(m) > tol.eps_zero * scale)
        throw NotHermitian("hermitian_eig: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat<Real>> es(hermitian_part(m));
    if (es.info() != Eigen::Success)
        throw NoConvergence("hermitian_eig: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

template <class Real>
Real min_eigenvalue(const CMat<Real>& m, const Tolerance& tol = {}) {
    return hermitian_eig(m, tol).values.minCoeff();
}

template <class Real>
struct GeneralEig {
    CVec<Real> values;   // sorted ascending by (re, im)
    CMat<Real> vectors;  // unit columns, matching order; possibly skew
};

// Eigendecomposition of an arbitrary square matrix, succeeding only when the
// matrix is diagonalizable to working precision.  Defectiveness shows up as
// a numerically singular eigenvector matrix, so the certificate is the
// smallest singular value of V relative to the largest.
template <class Real>
std::optional<GeneralEig<Real>> general_eig_diagonalizable(const CMat<Real>& m,
                                                           const Tolerance& tol = {}) {
    if (m.rows() != m.cols()) throw ShapeMismatch("general_eig_diagonalizable: matrix not square");
    const Index n = m.rows();
    Eigen::ComplexEigenSolver<CMat<Real>> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) return std::nullopt;
    CMat<Real> v = es.eigenvectors();
    Eigen::JacobiSVD<CMat<Real>> svd(v);
    const auto& sv = svd.singularValues();
    if (sv(0) <= Real(0) || sv(n - 1) < tol.eps_zero * sv(0)) return std::nullopt;

    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    const auto& vals = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });
    GeneralEig<Real> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        out.values(k) = vals(order[static_cast<size_t>(k)]);
        out.vectors.col(k) = v.col(order[static_cast<size_t>(k)]).normalized();
    }
    return out;
}

// Dual (biorthogonal) family of a spanning basis given as matrix columns:
// returns D with D† B = I, i.e. column i of D satisfies <d_i|b_j> = δ_ij.
template <class Real>
CMat<Real> dual_basis(const CMat<Real>& basis, const Tolerance& tol = {}) {
    if (basis.rows() != basis.cols())
        throw ShapeMismatch("dual_basis: basis must be square (a spanning family)");
    Eigen::JacobiSVD<CMat<Real>> svd(basis);
    const auto& sv = svd.singularValues();
    if (sv(0) <= Real(0) || sv(basis.cols() - 1) < tol.eps_zero * sv(0))
        throw SingularBasis("dual_basis: columns are linearly dependent");
    Eigen::FullPivLU<CMat<Real>> lu(basis);
    return lu.inverse().adjoint();
}

// Nearest (Frobenius) Hermitian matrix whose eigenvalues all sit at or above
// `floor`: eigenvalues below the floor are raised to it.
template <class Real>
CMat<Real> psd_project(const CMat<Real>& m, Real floor, const Tolerance& tol = {}) {
    auto eig = hermitian_eig(m, tol);
    RVec<Real> clipped = eig.values.cwiseMax(floor);
    CMat<Real> out = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
    return hermitian_part(out);
}

// Hermitian square root of a PSD matrix.  Mild negative eigenvalues within
// tolerance are clamped to zero; anything worse throws.
template <class Real>
CMat<Real> sqrt_psd(const CMat<Real>& m, const Tolerance& tol = {}) {
    auto eig = hermitian_eig(m, tol);
    const Real scale = std::max<Real>(Real(1), eig.values.cwiseAbs().maxCoeff());
    if (eig.values.minCoeff() < -tol.eps_zero * scale)
        throw NotPSD("sqrt_psd: matrix has a negative eigenvalue");
    RVec<Real> roots = eig.values.cwiseMax(Real(0)).cwiseSqrt();
    CMat<Real> out = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    return hermitian_part(out);
}

// Numerical rank from a column-pivoted QR with an explicit relative threshold.
template <class Real>
Index matrix_rank(const CMat<Real>& m, Real rel_eps) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<CMat<Real>> svd(m);
    const auto& sv = svd.singularValues();
    if (sv(0) <= Real(0)) return 0;
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_eps * sv(0)) ++r;
    return r;
}

template <class Real>
CVec<Real> solve_linear(const CMat<Real>& a, const CVec<Real>& b) {
    if (a.rows() != b.rows()) throw ShapeMismatch("solve_linear: incompatible shapes");
    return a.colPivHouseholderQr().solve(b);
}

// Coordinates of a Hermitian n x n matrix in an orthonormal real basis of
// the Hermitian space (Frobenius inner product): n diagonal entries followed
// by sqrt(2) * (Re, Im) of each strict upper entry.  An isometry, inverted
// by herm_from_coords.
template <class Real>
RVec<Real> herm_coords(const CMat<Real>& m) {
    const Index n = m.rows();
    if (m.cols() != n) throw ShapeMismatch("herm_coords: matrix not square");
    const Real rt2 = std::sqrt(Real(2));
    RVec<Real> x(n * n);
    Index at = 0;
    for (Index p = 0; p < n; ++p) x(at++) = m(p, p).real();
    for (Index p = 0; p < n; ++p)
        for (Index q = p + 1; q < n; ++q) {
            x(at++) = rt2 * m(p, q).real();
            x(at++) = rt2 * m(p, q).imag();
        }
    return x;
}

template <class Real>
CMat<Real> herm_from_coords(const RVec<Real>& x, Index n) {
    if (x.size() != n * n) throw ShapeMismatch("herm_from_coords: coordinate count mismatch");
    const Real rt2 = std::sqrt(Real(2));
    CMat<Real> m(n, n);
    Index at = 0;
    for (Index p = 0; p < n; ++p) m(p, p) = x(at++);
    for (Index p = 0; p < n; ++p)
        for (Index q = p + 1; q < n; ++q) {
            const Real re = x(at++) / rt2;
            const Real im = x(at++) / rt2;
            m(p, q) = std::complex<Real>(re, im);
            m(q, p) = std::complex<Real>(re, -im);
        }
    return m;
}

}  // namespace qcl

#endif  // QCLASSICAL_NUMERICS_HPP
