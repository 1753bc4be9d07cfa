// SPDX-License-Identifier: Apache-2.0
//
// coopfb - cooperative precoder feedback for two-user MIMO interference channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef COOPFB_NUMERICS_HPP
#define COOPFB_NUMERICS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "coopfb/errors.hpp"

namespace coopfb {

template <typename Real>
using ComplexMatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealVectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// The carrier for channels, precoders and equalizers.
using ComplexMatrix = ComplexMatrixX<double>;
using RealVector = RealVectorX<double>;

// Full SVD, m = left * diag(singular_values) * right^H.
//   left:  rows x rows unitary
//   right: cols x cols unitary
//   singular_values: min(rows, cols), descending
template <typename Real>
struct SvdResult {
    ComplexMatrixX<Real> left;
    RealVectorX<Real> singular_values;
    ComplexMatrixX<Real> right;
};

namespace detail {

// Index of the largest-magnitude entry; lowest index wins ties.
template <typename Vec>
Eigen::Index dominant_entry(const Vec& v) {
    using Real = typename Eigen::NumTraits<typename Vec::Scalar>::Real;
    Eigen::Index best = 0;
    Real best_mag = Real(-1);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Real mag = std::abs(v(i));
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    return best;
}

// Unit-modulus factor c such that c * v(dominant_entry(v)) is real and >= 0.
template <typename Vec>
typename Vec::Scalar canonical_phase(const Vec& v) {
    using Scalar = typename Vec::Scalar;
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    if (v.size() == 0) return Scalar(1);
    const Scalar z = v(dominant_entry(v));
    const Real mag = std::abs(z);
    if (mag == Real(0)) return Scalar(1);
    return std::conj(z) / mag;
}

// Lexicographic "a before b": entries compared by real part, then imaginary
// part, larger first.
template <typename VecA, typename VecB>
bool lex_before(const VecA& a, const VecB& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() > b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() > b(i).imag();
    }
    return false;
}

}  // namespace detail

template <typename Derived>
auto frobenius_norm_sq(const Eigen::MatrixBase<Derived>& m) {
    return m.squaredNorm();
}

// ||m^H m - I||_F, the orthonormal-columns residual.
template <typename Derived>
auto orthonormality_residual(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    return (m.adjoint() * m - Mat::Identity(m.cols(), m.cols())).norm();
}

// Full SVD with singular values in descending order and a fixed phase
// convention: every left singular vector is rotated so that its
// largest-magnitude entry (lowest row on ties) is real and nonnegative, and
// the paired right vector receives the same unit factor so the product is
// unchanged. Unpaired columns (the null-space part of the larger factor) are
// normalised the same way on their own. Runs of equal singular values are
// ordered by descending lexicographic order of their normalised left vectors.
template <typename Derived>
SvdResult<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
svd_descending(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    using Complex = std::complex<Real>;
    using Mat = ComplexMatrixX<Real>;

    if (m.rows() < 1 || m.cols() < 1) throw InvalidInput("svd_descending: empty matrix");
    if (!m.allFinite()) throw InvalidInput("svd_descending: non-finite entry");

    const Mat a = m.template cast<Complex>();
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);

    SvdResult<Real> out;
    out.left = svd.matrixU();
    out.right = svd.matrixV();
    out.singular_values = svd.singularValues();

    const Eigen::Index paired = out.singular_values.size();
    for (Eigen::Index i = 0; i < paired; ++i) {
        const Complex c = detail::canonical_phase(out.left.col(i));
        out.left.col(i) *= c;
        out.right.col(i) *= c;
    }
    for (Eigen::Index i = paired; i < out.left.cols(); ++i)
        out.left.col(i) *= detail::canonical_phase(out.left.col(i));
    for (Eigen::Index i = paired; i < out.right.cols(); ++i)
        out.right.col(i) *= detail::canonical_phase(out.right.col(i));

    // Jacobi already returns descending values; only ties need an order.
    if (paired > 1) {
        const Real scale = std::max(out.singular_values(0), std::numeric_limits<Real>::min());
        const Real tol = Real(1e3) * std::numeric_limits<Real>::epsilon() * scale;
        std::vector<Eigen::Index> order(static_cast<std::size_t>(paired));
        std::iota(order.begin(), order.end(), Eigen::Index(0));
        Eigen::Index start = 0;
        bool permuted = false;
        while (start < paired) {
            Eigen::Index stop = start + 1;
            while (stop < paired && out.singular_values(start) - out.singular_values(stop) <= tol) ++stop;
            if (stop - start > 1) {
                std::stable_sort(order.begin() + start, order.begin() + stop,
                                 [&](Eigen::Index x, Eigen::Index y) {
                                     return detail::lex_before(out.left.col(x), out.left.col(y));
                                 });
                permuted = true;
            }
            start = stop;
        }
        if (permuted) {
            Mat left = out.left;
            Mat right = out.right;
            RealVectorX<Real> sv = out.singular_values;
            for (Eigen::Index i = 0; i < paired; ++i) {
                const Eigen::Index src = order[static_cast<std::size_t>(i)];
                left.col(i) = out.left.col(src);
                right.col(i) = out.right.col(src);
                sv(i) = out.singular_values(src);
            }
            out.left = std::move(left);
            out.right = std::move(right);
            out.singular_values = std::move(sv);
        }
    }
    return out;
}

// Orthonormal basis of the column space, Gram-Schmidt convention: the
// implied triangular factor has a real positive diagonal, so the result is a
// unique function of the input and an orthonormal input comes back unchanged.
template <typename Derived>
ComplexMatrixX<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
orthonormalize(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    using Complex = std::complex<Real>;
    using Mat = ComplexMatrixX<Real>;

    if (m.cols() < 1 || m.rows() < m.cols()) throw InvalidInput("orthonormalize: need rows >= cols >= 1");
    if (!m.allFinite()) throw InvalidInput("orthonormalize: non-finite entry");

    const Mat a = m.template cast<Complex>();
    Eigen::ColPivHouseholderQR<Mat> rank_probe(a);
    rank_probe.setThreshold(Real(1e-10));
    if (rank_probe.rank() < a.cols()) throw DegenerateInput("orthonormalize: input is column-rank deficient");

    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const Complex r = qr.matrixQR()(j, j);
        q.col(j) *= r / std::abs(r);
    }
    return q;
}

}  // namespace coopfb

#endif  // COOPFB_NUMERICS_HPP
