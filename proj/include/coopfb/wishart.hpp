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

#ifndef COOPFB_WISHART_HPP
#define COOPFB_WISHART_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coopfb/channel.hpp"

namespace coopfb {

// Small-argument behaviour of the k-th largest eigenvalue phi_k of H^H H,
// H q1 x q2 i.i.d. CN(0,1), q1 >= q2:  Pr(phi_k < x) = a_k x^d_k + o(x^d_k).
struct WishartExpansion {
    int q1 = 1;
    int q2 = 1;
    int k = 1;
    double a_k = 1.0;
    int d_k = 1;
};

// d_k = (q1-k+1)(q2-k+1),  a_k = |A(k)| |B(k)| / (U d_k),
// U = prod_{m=1}^{q2} (q1-m)! (q2-m)!,
// [A(k)]_{mn} = (q1-q2+m+n+2(q2-k))!           for m,n = 1..k-1   (A(1) = I),
// [B(k)]_{mn} = 2 / ([(q1-q2+m+n)^2 - 1](q1-q2+m+n))  for m,n = 1..q2-k  (B(q2) = I).
// Factorials and determinants are evaluated in long double; q1 + q2 <= 20.
WishartExpansion wishart_expansion_constants(int q1, int q2, int k);

// Monte Carlo draws of phi_k (k-th largest, 1-based).
std::vector<double> sample_ordered_eigenvalue(int q1, int q2, int k, std::size_t trials, std::uint64_t seed);

// Pr(phi_k < x) on each grid point.
std::vector<double> empirical_eigenvalue_cdf(int q1, int q2, int k, std::span<const double> x_grid,
                                             std::size_t trials, std::uint64_t seed);

// Fit of the empirical CDF near zero. Probe points are the empirical
// quantiles p = p_top, p_top/2, p_top/4, ... while at least min_count draws
// fall below them. slope: least-squares d log F / d log x. level: geometric
// mean of F(x) / x^d_k over the probe points, with d_k the theoretical exponent.
struct SmallXFit {
    std::vector<double> x;
    std::vector<double> cdf;
    double slope = 0.0;
    double level = 0.0;
};
SmallXFit fit_small_x_cdf(int q1, int q2, int k, std::size_t trials, std::uint64_t seed, double p_top = 0.01,
                          std::size_t min_count = 200);

// E[smallest eigenvalue] of a q x q complex Wishart matrix.
double mean_smallest_eigenvalue(int q, std::size_t trials, std::uint64_t seed);

// Distribution used for the cross-link eigenvalue in the large-power limit.
enum class CrossEigenModel {
    cross_channel,  // (K-Ne+1)-th largest eigenvalue of H H^H, H the K x L cross channel
    square_lxl,     // (K-Ne+1)-th largest eigenvalue of an L x L Wishart matrix
};

struct AsymptoticOptions {
    int bits = 8;
    int codebook_realizations = 10;
    CrossEigenModel model = CrossEigenModel::cross_channel;
};

// Monte Carlo value of the first-order large-power term of A_IM:
//   sum over both links, l = 1..M, of
//   E[ log2(1 + tau lam_l / ((1 + tau) Np nu lam_cross eps)) ]
// with lam_l the l-th eigenvalue of an Ne x Np Wishart matrix, lam_cross per
// the chosen model and eps the RVQ quantisation error of an isotropic L x Np
// subspace.
double asymptotic_a_im(const SystemDims& dims, double nu, double tau, std::size_t trials, std::uint64_t seed,
                       const AsymptoticOptions& opt = {});

}  // namespace coopfb

#endif  // COOPFB_WISHART_HPP
