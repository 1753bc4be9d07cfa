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

#ifndef COOPFB_POWER_HPP
#define COOPFB_POWER_HPP

#include <array>
#include <utility>
#include <vector>

#include "coopfb/numerics.hpp"
#include "coopfb/transceiver.hpp"

namespace coopfb {

// Scalars the interference-power-control feedback works with. Index m is the
// link; lam_cross[m] is lambda_mn^[K-Ne+1] at receiver m, eps[m] the
// quantisation error of transmitter m's inner precoder.
struct LinkScalars {
    std::array<RealVector, 2> lam_dd;
    std::array<double, 2> lam_cross{0.0, 0.0};
    std::array<double, 2> eps{0.0, 0.0};
    int np = 1;
    double nu = 1.0;

    void validate() const;
};

LinkScalars link_scalars(const std::array<LinkTransceiver, 2>& t, double nu);

// eta_n = tau / (Np nu lambda_mn eps_n), P_n = min(eta_n, p_max); eps_n = 0 or
// lambda_mn = 0 leaves P_n at p_max.
std::pair<double, double> ipc_fixed_margin(const LinkScalars& s, double tau, double p_max);

// sum_m sum_l log2(1 + min(eta_m, p_max) lambda_mm^[l] / (1 + tau)) for one realisation.
double achievable_throughput_im(const LinkScalars& s, double tau, double p_max);

// Lower bound A(P1, P2) maximised by the iterative feedback.
double achievable_throughput_st(const LinkScalars& s, double p1, double p2);

enum class SlopeVariant {
    exact,    // derivative of achievable_throughput_st
    printed,  // companion term with Np^2 in place of M * Np
};

// (dA/dP1, dA/dP2) = mu_m + psi_m - rho_m.
std::pair<double, double> gradient_a(const LinkScalars& s, double p1, double p2,
                                     SlopeVariant variant = SlopeVariant::exact);

struct IpcState {
    double p1 = 0.0;
    double p2 = 0.0;
    int iteration = 0;
    double slope1 = 0.0;
    double slope2 = 0.0;
};

struct IpcOptions {
    double step = 1.0;     // Delta gamma
    double p_max = 1.0;
    int max_iter = 50;
    double tol = 1e-4;     // relative to p_max
    SlopeVariant variant = SlopeVariant::exact;
};

struct IpcResult {
    IpcState last;   // final iterate
    IpcState best;   // iterate with the largest A seen so far, init included
    double best_a = 0.0;
    std::vector<double> best_a_trace;  // best A after each update, size = last.iteration
};

// Projected gradient ascent P_m <- min{[P_m + slope_m * step]^+, p_max}.
IpcResult ipc_algorithm1(const LinkScalars& s, std::pair<double, double> p_init, const IpcOptions& opt);

}  // namespace coopfb

#endif  // COOPFB_POWER_HPP
