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

#include "coopfb/wishart.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "coopfb/codebook.hpp"
#include "coopfb/errors.hpp"
#include "coopfb/parallel.hpp"

namespace coopfb {

namespace {

constexpr std::size_t kBlock = 4096;

long double factorial(int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) f *= static_cast<long double>(i);
    return f;
}

// Gaussian elimination with partial pivoting.
long double determinant(std::vector<std::vector<long double>> a) {
    const std::size_t n = a.size();
    long double det = 1.0L;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0L) return 0.0L;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const long double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

void check_dims(int q1, int q2, int k, const char* who) {
    if (!(q1 >= q2 && q2 >= k && k >= 1))
        throw InvalidInput(std::string(who) + ": need q1 >= q2 >= k >= 1");
}

// Eigenvalues of H^H H (or H H^H, whichever is smaller), descending.
RealVector wishart_eigenvalues(Engine& engine, int rows, int cols) {
    const ComplexMatrix h = gaussian_matrix(engine, rows, cols);
    const ComplexMatrix w = rows >= cols ? ComplexMatrix(h.adjoint() * h) : ComplexMatrix(h * h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

std::size_t block_count(std::size_t trials) { return (trials + kBlock - 1) / kBlock; }

// Runs fill(engine, begin, end) over fixed-size blocks, each with its own
// derived seed, so the result does not depend on the worker count.
template <typename Fill>
void blocked(std::size_t trials, std::uint64_t seed, std::uint64_t tag, Fill&& fill) {
    parallel_for(block_count(trials), [&](std::size_t b) {
        Engine engine(derive_seed(seed, Stream::wishart, b, tag));
        fill(engine, b * kBlock, std::min(trials, (b + 1) * kBlock));
    });
}

}  // namespace

WishartExpansion wishart_expansion_constants(int q1, int q2, int k) {
    check_dims(q1, q2, k, "wishart_expansion_constants");
    if (q1 + q2 > 20) throw InvalidInput("wishart_expansion_constants: q1 + q2 must not exceed 20");

    long double u = 1.0L;
    for (int m = 1; m <= q2; ++m) u *= factorial(q1 - m) * factorial(q2 - m);

    const int na = k - 1;
    std::vector<std::vector<long double>> a(static_cast<std::size_t>(na), std::vector<long double>(na));
    for (int m = 1; m <= na; ++m)
        for (int n = 1; n <= na; ++n) a[m - 1][n - 1] = factorial(q1 - q2 + m + n + 2 * (q2 - k));

    const int nb = q2 - k;
    std::vector<std::vector<long double>> b(static_cast<std::size_t>(nb), std::vector<long double>(nb));
    for (int m = 1; m <= nb; ++m) {
        for (int n = 1; n <= nb; ++n) {
            const long double s = q1 - q2 + m + n;
            b[m - 1][n - 1] = 2.0L / ((s * s - 1.0L) * s);
        }
    }

    WishartExpansion e;
    e.q1 = q1;
    e.q2 = q2;
    e.k = k;
    e.d_k = (q1 - k + 1) * (q2 - k + 1);
    const long double det_a = na == 0 ? 1.0L : determinant(a);
    const long double det_b = nb == 0 ? 1.0L : determinant(b);
    e.a_k = static_cast<double>(std::fabs(det_a * det_b) / (u * e.d_k));
    if (!(e.a_k > 0.0) || !std::isfinite(e.a_k))
        throw DegenerateInput("wishart_expansion_constants: constant is not a positive finite number");
    return e;
}

std::vector<double> sample_ordered_eigenvalue(int q1, int q2, int k, std::size_t trials, std::uint64_t seed) {
    check_dims(q1, q2, k, "sample_ordered_eigenvalue");
    if (trials == 0) throw InvalidInput("sample_ordered_eigenvalue: trials must be positive");
    std::vector<double> out(trials);
    blocked(trials, seed, 1, [&](Engine& engine, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = wishart_eigenvalues(engine, q1, q2)(k - 1);
    });
    return out;
}

std::vector<double> empirical_eigenvalue_cdf(int q1, int q2, int k, std::span<const double> x_grid,
                                             std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw InvalidInput("empirical_eigenvalue_cdf: trials must be positive");
    std::vector<double> draws = sample_ordered_eigenvalue(q1, q2, k, trials, seed);
    std::sort(draws.begin(), draws.end());
    std::vector<double> cdf;
    cdf.reserve(x_grid.size());
    for (double x : x_grid) {
        const auto below = std::lower_bound(draws.begin(), draws.end(), x) - draws.begin();
        cdf.push_back(static_cast<double>(below) / static_cast<double>(trials));
    }
    return cdf;
}

SmallXFit fit_small_x_cdf(int q1, int q2, int k, std::size_t trials, std::uint64_t seed, double p_top,
                          std::size_t min_count) {
    const WishartExpansion e = wishart_expansion_constants(q1, q2, k);
    if (!(p_top > 0.0 && p_top < 1.0)) throw InvalidInput("fit_small_x_cdf: p_top must lie in (0, 1)");
    std::vector<double> draws = sample_ordered_eigenvalue(q1, q2, k, trials, seed);
    std::sort(draws.begin(), draws.end());

    SmallXFit fit;
    for (double p = p_top;; p *= 0.5) {
        const auto n = static_cast<std::size_t>(std::llround(p * static_cast<double>(trials)));
        if (n < min_count || n >= trials) break;
        const double x = draws[n];
        if (!(x > 0.0)) break;
        fit.x.push_back(x);
        fit.cdf.push_back(static_cast<double>(n) / static_cast<double>(trials));
    }
    if (fit.x.size() < 2) throw DegenerateInput("fit_small_x_cdf: too few draws below the probe level");

    const auto n = static_cast<double>(fit.x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, level = 0.0;
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
        const double lx = std::log(fit.x[i]);
        const double ly = std::log(fit.cdf[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        level += ly - e.d_k * lx;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.level = std::exp(level / n);
    return fit;
}

double mean_smallest_eigenvalue(int q, std::size_t trials, std::uint64_t seed) {
    if (q < 1) throw InvalidInput("mean_smallest_eigenvalue: q must be positive");
    if (trials == 0) throw InvalidInput("mean_smallest_eigenvalue: trials must be positive");
    std::vector<double> partial(block_count(trials));
    blocked(trials, seed, 2, [&](Engine& engine, std::size_t begin, std::size_t end) {
        long double acc = 0.0L;
        for (std::size_t i = begin; i < end; ++i) acc += wishart_eigenvalues(engine, q, q)(q - 1);
        partial[begin / kBlock] = static_cast<double>(acc);
    });
    long double acc = 0.0L;
    for (double x : partial) acc += x;
    return static_cast<double>(acc / static_cast<long double>(trials));
}

double asymptotic_a_im(const SystemDims& dims, double nu, double tau, std::size_t trials, std::uint64_t seed,
                       const AsymptoticOptions& opt) {
    dims.validate();
    if (!(nu > 0.0)) throw InvalidInput("asymptotic_a_im: nu must be positive");
    if (!(tau >= 0.0)) throw InvalidInput("asymptotic_a_im: tau must be nonnegative");
    if (trials == 0) throw InvalidInput("asymptotic_a_im: trials must be positive");
    if (opt.codebook_realizations < 1) throw InvalidInput("asymptotic_a_im: need at least one codebook realization");

    const int L = dims.tx_antennas;
    const int K = dims.rx_antennas;
    const int M = dims.streams;
    const int np = dims.precoder_width;
    const int ne = dims.equalizer_width;
    const int cross_index = K - ne;  // 0-based position of the (K-Ne+1)-th largest
    const auto reps = static_cast<std::size_t>(opt.codebook_realizations);

    std::vector<Codebook> books(reps);
    parallel_for(reps, [&](std::size_t r) { books[r] = generate_rvq_codebook(derive_seed(seed, Stream::codebook, r), L, np, opt.bits); });

    // trials split evenly across codebook realizations, remainder to the first ones
    std::vector<std::size_t> per(reps, trials / reps);
    for (std::size_t r = 0; r < trials % reps; ++r) ++per[r];
    std::vector<std::pair<std::size_t, std::size_t>> work;  // (realization, block)
    for (std::size_t r = 0; r < reps; ++r)
        for (std::size_t b = 0; b < block_count(per[r]); ++b) work.emplace_back(r, b);

    std::vector<double> partial(work.size());
    parallel_for(work.size(), [&](std::size_t w) {
        const auto [r, b] = work[w];
        Engine engine(derive_seed(seed, Stream::wishart, b, 3 + r));
        const std::size_t count = std::min(per[r], (b + 1) * kBlock) - b * kBlock;
        long double acc = 0.0L;
        for (std::size_t t = 0; t < count; ++t) {
            for (int link = 0; link < 2; ++link) {
                const RealVector direct = wishart_eigenvalues(engine, ne, np);
                const RealVector cross = opt.model == CrossEigenModel::cross_channel
                                             ? wishart_eigenvalues(engine, K, L)
                                             : wishart_eigenvalues(engine, L, L);
                const double lam_cross = cross_index < cross.size() ? cross(cross_index) : 0.0;
                ComplexMatrix target;
                for (;;) {
                    try {
                        target = orthonormalize(gaussian_matrix(engine, L, np));
                        break;
                    } catch (const DegenerateInput&) {
                    }
                }
                const double eps = quantize(target, books[r]).error;
                const double denom = (1.0 + tau) * np * nu * lam_cross * eps;
                for (int l = 0; l < M; ++l) acc += std::log2(1.0 + tau * direct(l) / denom);
            }
        }
        partial[w] = static_cast<double>(acc);
    });
    long double acc = 0.0L;
    for (double x : partial) acc += x;
    return static_cast<double>(acc / static_cast<long double>(trials));
}

}  // namespace coopfb
