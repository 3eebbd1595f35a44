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

#ifndef QCLASSICAL_TYPES_HPP
#define QCLASSICAL_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qcl {

using Index = Eigen::Index;

// Dense complex types, templated on the real scalar.  Everything in the
// library is sized at runtime; dimensions stay small (tens, not thousands).
template <class Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cmat = CMat<double>;
using cvec = CVec<double>;
using rmat = RMat<double>;
using rvec = RVec<double>;
using cplx = std::complex<double>;

// Numerical knobs shared across the library.
//   eps_zero — threshold below which a magnitude counts as zero; applied
//              relative to the scale of whatever it thresholds.
//   eps_feas — residual threshold for the congruence feasibility solver.
//   max_iter — iteration cap for that solver.
struct Tolerance {
    double eps_zero = 1e-9;
    double eps_feas = 1e-8;
    long max_iter = 50000;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QCL_DEFINE_ERROR(NAME)                     \
    struct NAME : Error {                          \
        using Error::Error;                        \
        NAME() : Error(#NAME) {}                   \
    }

QCL_DEFINE_ERROR(NotHermitian);
QCL_DEFINE_ERROR(NoConvergence);
QCL_DEFINE_ERROR(SingularBasis);
QCL_DEFINE_ERROR(NotPSD);
QCL_DEFINE_ERROR(NotFinite);
QCL_DEFINE_ERROR(TraceNotOne);
QCL_DEFINE_ERROR(BadDims);
QCL_DEFINE_ERROR(BadParty);
QCL_DEFINE_ERROR(NonOrthonormalBasis);
QCL_DEFINE_ERROR(NotCommuting);
QCL_DEFINE_ERROR(RecoveryFailed);
QCL_DEFINE_ERROR(DependentEnsemble);
QCL_DEFINE_ERROR(ShapeMismatch);
QCL_DEFINE_ERROR(ZeroProbabilityOutcome);
QCL_DEFINE_ERROR(IncompleteRecord);
QCL_DEFINE_ERROR(InvalidPOVM);
QCL_DEFINE_ERROR(ParseError);
QCL_DEFINE_ERROR(ValidationError);

#undef QCL_DEFINE_ERROR

}  // namespace qcl

#endif  // QCLASSICAL_TYPES_HPP
