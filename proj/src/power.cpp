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

#include "coopfb/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace coopfb {

namespace {

constexpr double kLog2e = std::numbers::log2e;

// Np nu lambda_nm eps_m: interference leaked to receiver n per unit of P_m.
double leakage(const LinkScalars& s, int m) {
    const int n = 1 - m;
    return s.np * s.nu * s.lam_cross[static_cast<std::size_t>(n)] * s.eps[static_cast<std::size_t>(m)];
}

double eta(const LinkScalars& s, int m, double tau) {
    const double l = leakage(s, m);
    return l > 0.0 ? tau / l : std::numeric_limits<double>::infinity();
}

}  // namespace

void LinkScalars::validate() const {
    if (np < 1) throw InvalidInput("LinkScalars: np must be positive");
    if (!(nu >= 0.0)) throw InvalidInput("LinkScalars: nu must be nonnegative");
    for (int m = 0; m < 2; ++m) {
        const auto i = static_cast<std::size_t>(m);
        if ((lam_dd[i].array() < 0.0).any() || !lam_dd[i].allFinite())
            throw InvalidInput("LinkScalars: direct eigenvalues must be finite and nonnegative");
        if (!(lam_cross[i] >= 0.0)) throw InvalidInput("LinkScalars: cross eigenvalue must be nonnegative");
        if (!(eps[i] >= 0.0 && eps[i] <= 1.0)) throw InvalidInput("LinkScalars: eps must lie in [0, 1]");
    }
}

LinkScalars link_scalars(const std::array<LinkTransceiver, 2>& t, double nu) {
    LinkScalars s;
    for (std::size_t m = 0; m < 2; ++m) {
        s.lam_dd[m] = t[m].eff_eigs;
        s.lam_cross[m] = t[m].cross_eig;
        s.eps[m] = t[m].eps;
    }
    s.np = static_cast<int>(t[0].f_inner.cols());
    s.nu = nu;
    return s;
}

std::pair<double, double> ipc_fixed_margin(const LinkScalars& s, double tau, double p_max) {
    if (!(tau > 0.0) || !(p_max > 0.0)) throw InvalidInput("ipc_fixed_margin: tau and p_max must be positive");
    return {std::min(eta(s, 0, tau), p_max), std::min(eta(s, 1, tau), p_max)};
}

double achievable_throughput_im(const LinkScalars& s, double tau, double p_max) {
    if (!(tau > 0.0)) throw InvalidInput("achievable_throughput_im: tau must be positive");
    const auto [p1, p2] = ipc_fixed_margin(s, tau, p_max);
    const std::array<double, 2> p = {p1, p2};
    double a = 0.0;
    for (std::size_t m = 0; m < 2; ++m)
        for (Eigen::Index l = 0; l < s.lam_dd[m].size(); ++l) a += std::log2(1.0 + p[m] * s.lam_dd[m](l) / (1.0 + tau));
    return a;
}

double achievable_throughput_st(const LinkScalars& s, double p1, double p2) {
    if (p1 < 0.0 || p2 < 0.0) throw InvalidInput("achievable_throughput_st: powers must be nonnegative");
    const std::array<double, 2> p = {p1, p2};
    double a = 0.0;
    for (int m = 0; m < 2; ++m) {
        const int n = 1 - m;
        const auto im = static_cast<std::size_t>(m);
        const double denom = 1.0 + p[static_cast<std::size_t>(n)] * leakage(s, n);
        for (Eigen::Index l = 0; l < s.lam_dd[im].size(); ++l) a += std::log2(1.0 + p[im] * s.lam_dd[im](l) / denom);
    }
    return a;
}

std::pair<double, double> gradient_a(const LinkScalars& s, double p1, double p2, SlopeVariant variant) {
    if (p1 < 0.0 || p2 < 0.0) throw InvalidInput("gradient_a: powers must be nonnegative");
    const std::array<double, 2> p = {p1, p2};
    std::array<double, 2> slope{};
    for (int m = 0; m < 2; ++m) {
        const int n = 1 - m;
        const auto im = static_cast<std::size_t>(m);
        const auto in = static_cast<std::size_t>(n);
        const double into_m = leakage(s, n);  // Np nu lambda_mn eps_n
        const double from_m = leakage(s, m);  // Np nu lambda_nm eps_m

        double mu = 0.0;
        for (Eigen::Index l = 0; l < s.lam_dd[im].size(); ++l)
            mu += s.lam_dd[im](l) / (1.0 + into_m * p[in] + s.lam_dd[im](l) * p[im]);

        double psi = 0.0;
        for (Eigen::Index l = 0; l < s.lam_dd[in].size(); ++l)
            psi += from_m / (1.0 + from_m * p[im] + s.lam_dd[in](l) * p[in]);

        const double weight = variant == SlopeVariant::exact ? static_cast<double>(s.lam_dd[in].size())
                                                             : static_cast<double>(s.np);
        const double rho = weight * from_m / (1.0 + from_m * p[im]);
        slope[im] = kLog2e * (mu + psi - rho);
    }
    return {slope[0], slope[1]};
}

IpcResult ipc_algorithm1(const LinkScalars& s, std::pair<double, double> p_init, const IpcOptions& opt) {
    if (!(opt.step > 0.0)) throw InvalidInput("ipc_algorithm1: step must be positive");
    if (!(opt.p_max > 0.0)) throw InvalidInput("ipc_algorithm1: p_max must be positive");
    auto clamp = [&](double v) { return std::clamp(v, 0.0, opt.p_max); };

    IpcResult out;
    IpcState cur{clamp(p_init.first), clamp(p_init.second), 0, 0.0, 0.0};
    std::tie(cur.slope1, cur.slope2) = gradient_a(s, cur.p1, cur.p2, opt.variant);
    out.best = cur;
    out.best_a = achievable_throughput_st(s, cur.p1, cur.p2);

    while (cur.iteration < opt.max_iter) {
        const double next1 = clamp(cur.p1 + cur.slope1 * opt.step);
        const double next2 = clamp(cur.p2 + cur.slope2 * opt.step);
        const bool settled = std::abs(next1 - cur.p1) < opt.tol * opt.p_max &&
                             std::abs(next2 - cur.p2) < opt.tol * opt.p_max;
        cur.p1 = next1;
        cur.p2 = next2;
        ++cur.iteration;
        std::tie(cur.slope1, cur.slope2) = gradient_a(s, cur.p1, cur.p2, opt.variant);

        const double a = achievable_throughput_st(s, cur.p1, cur.p2);
        if (a > out.best_a) {
            out.best_a = a;
            out.best = cur;
        }
        out.best_a_trace.push_back(out.best_a);
        if (settled) break;
    }
    out.last = cur;
    return out;
}

}  // namespace coopfb
