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

#include "doctest.h"

#include <cmath>

#include "coopfb/channel.hpp"
#include "coopfb/codebook.hpp"
#include "coopfb/transceiver.hpp"

using namespace coopfb;

namespace {

ComplexMatrix random_matrix(std::uint64_t seed, int rows, int cols) {
    Engine e(seed);
    return gaussian_matrix(e, rows, cols);
}

ComplexMatrix random_subspace(std::uint64_t seed, int L, int n) { return orthonormalize(random_matrix(seed, L, n)); }

ChannelSet channels(std::uint64_t t, const SystemDims& d = {}, double nu = 0.5) {
    return draw_channel_set(derive_seed(77, Stream::channel, t), d, nu);
}

bool is_diagonal(const ComplexMatrix& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol) return false;
    return true;
}

}  // namespace

TEST_CASE("inner pair for a single-antenna cross channel") {
    ComplexMatrix h(1, 2);
    h << 1.0, 0.0;
    const auto p = design_inner_pair(h, SystemDims{2, 1, 1, 1, 1});
    CHECK(std::abs(p.f_inner(0, 0)) < 1e-15);
    CHECK(std::abs(p.f_inner(1, 0)) == doctest::Approx(1.0));
    CHECK((p.g_inner.adjoint() * h * p.f_inner).norm() < 1e-15);
    CHECK(p.cross_eig == doctest::Approx(1.0));
}

TEST_CASE("inner pair zero-forces the cross channel") {
    for (int ne : {2, 3}) {
        const SystemDims d{6, 3, 2, 3, ne};
        for (std::uint64_t s = 0; s < 200; ++s) {
            const ComplexMatrix h = random_matrix(s, 3, 6);
            const auto p = design_inner_pair(h, d);
            CHECK(p.g_inner.cols() == ne);
            CHECK(p.f_inner.cols() == 3);
            CHECK(orthonormality_residual(p.g_inner) < 1e-10);
            CHECK(orthonormality_residual(p.f_inner) < 1e-10);
            CHECK((p.g_inner.adjoint() * h * p.f_inner).norm() < 1e-9);
            const auto svd = svd_descending(h);
            CHECK(p.cross_eig == doctest::Approx(std::pow(svd.singular_values(3 - ne), 2)));
            if (ne == 2) {
                // the strongest left direction is excluded
                CHECK((p.g_inner.adjoint() * svd.left.col(0)).norm() < 1e-10);
            }
        }
    }
}

TEST_CASE("inner pair picks the trailing right vectors when they are free") {
    const ComplexMatrix h = random_matrix(3, 3, 6);
    const auto p = design_inner_pair(h, SystemDims{});
    const auto svd = svd_descending(h);
    CHECK((p.f_inner - svd.right.rightCols(3)).norm() < 1e-14);
    CHECK((p.g_inner - svd.left.rightCols(3)).norm() < 1e-14);
}

TEST_CASE("inner pair dimension checks") {
    const ComplexMatrix h = random_matrix(3, 3, 6);
    CHECK_THROWS_AS(design_inner_pair(h, SystemDims{6, 3, 2, 4, 3}), InvalidInput);
    CHECK_THROWS_AS(design_inner_pair(random_matrix(3, 2, 6), SystemDims{}), InvalidInput);
}

TEST_CASE("equalizer refit with an exact null-space precoder") {
    const ComplexMatrix h = random_matrix(4, 3, 6);
    const auto svd = svd_descending(h);
    const ComplexMatrix f = svd.right.rightCols(3);
    const ComplexMatrix g = redesign_inner_equalizer(h, f, 2);
    CHECK(g.cols() == 2);
    CHECK((g.adjoint() * h * f).norm() < 1e-9);
}

TEST_CASE("equalizer refit never leaks more than the zero-forcing equalizer") {
    const SystemDims d{6, 3, 2, 3, 2};
    const Codebook cb = generate_rvq_codebook(5, 6, 3, 6);
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const ComplexMatrix h = random_matrix(derive_seed(1, Stream::channel, s), 3, 6);
        const auto p = design_inner_pair(h, d);
        const ComplexMatrix f_hat = quantize(p.f_inner, cb).codeword;
        const ComplexMatrix g_hat = redesign_inner_equalizer(h, f_hat, 2);
        const double refit = (g_hat.adjoint() * h * f_hat).squaredNorm();
        const double zf = (p.g_inner.adjoint() * h * f_hat).squaredNorm();
        REQUIRE(refit <= zf + 1e-12);
        REQUIRE(std::abs(refit - redesigned_interference_bound(h, f_hat, 2)) < 1e-9 * std::max(1.0, refit));
    }
}

TEST_CASE("equalizer refit with Ne = K returns the zero-forcing equalizer") {
    const ComplexMatrix h = random_matrix(6, 3, 6);
    const auto p = design_inner_pair(h, SystemDims{});
    const ComplexMatrix f_hat = random_subspace(7, 6, 3);
    CHECK((redesign_inner_equalizer(h, f_hat, 3) - p.g_inner).norm() < 1e-14);
}

TEST_CASE("outer pair on a diagonal effective channel") {
    ComplexMatrix eff = ComplexMatrix::Zero(3, 3);
    eff(0, 0) = 3.0;
    eff(1, 1) = 2.0;
    eff(2, 2) = 1.0;
    const ComplexMatrix I = ComplexMatrix::Identity(3, 3);
    const auto o = design_outer_pair(I, eff, I, 2);
    CHECK(o.eff_eigs(0) == doctest::Approx(9.0));
    CHECK(o.eff_eigs(1) == doctest::Approx(4.0));
    CHECK((o.f_outer - I.leftCols(2)).norm() < 1e-14);
    CHECK_THROWS_AS(design_outer_pair(I, eff, I, 4), InvalidInput);
}

TEST_CASE("perfect feedback composition is diagonal with root eigenvalues") {
    for (std::uint64_t t = 0; t < 200; ++t) {
        const ChannelSet ch = channels(t);
        const auto tr = design_link_transceivers(ch, SystemDims{}, nullptr);
        for (int m = 0; m < 2; ++m) {
            const auto& l = tr[static_cast<std::size_t>(m)];
            CHECK(orthonormality_residual(l.f_inner) < 1e-9);
            CHECK(orthonormality_residual(l.f_outer) < 1e-9);
            CHECK(orthonormality_residual(l.g_inner) < 1e-9);
            CHECK(orthonormality_residual(l.g_outer) < 1e-9);
            CHECK(l.eps == 0.0);
            const ComplexMatrix comp = l.equalizer().adjoint() * ch.direct(m) * l.precoder();
            CHECK(is_diagonal(comp, 1e-9));
            for (Eigen::Index k = 0; k < 2; ++k) CHECK(std::abs(comp(k, k)) == doctest::Approx(std::sqrt(l.eff_eigs(k))));
            CHECK(l.eff_eigs(0) >= l.eff_eigs(1));
            // zero forcing toward the other receiver
            const auto& other = tr[static_cast<std::size_t>(1 - m)];
            CHECK((other.g_inner.adjoint() * ch.cross(1 - m) * l.f_inner).norm() < 1e-9);
        }
    }
}

TEST_CASE("perfect feedback SINR equals P times the effective eigenvalue") {
    const ChannelSet ch = channels(1);
    const auto tr = design_link_transceivers(ch, SystemDims{}, nullptr);
    const auto sm = compute_stream_metrics(ch, tr[0], tr[1], 10.0, 20.0);
    for (Eigen::Index l = 0; l < 2; ++l) {
        CHECK(sm.links[0].sinr(l) == doctest::Approx(10.0 * tr[0].eff_eigs(l)).epsilon(1e-9));
        CHECK(sm.links[1].sinr(l) == doctest::Approx(20.0 * tr[1].eff_eigs(l)).epsilon(1e-9));
        CHECK(sm.links[0].interference_power(l) < 1e-15);
    }
    CHECK(sm.links[0].interference_bound == 0.0);
}

TEST_CASE("nu = 0 removes interference") {
    const ChannelSet ch = channels(2).with_nu(0.0);
    const Codebook cb = generate_rvq_codebook(2, 6, 3, 4);
    const auto tr = design_link_transceivers(ch, SystemDims{}, &cb);
    const auto sm = compute_stream_metrics(ch, tr[0], tr[1], 5.0, 5.0);
    for (int m = 0; m < 2; ++m) {
        const auto& l = tr[static_cast<std::size_t>(m)];
        const ComplexMatrix comp = l.equalizer().adjoint() * ch.direct(m) * l.precoder();
        for (Eigen::Index k = 0; k < 2; ++k) {
            CHECK(sm.links[static_cast<std::size_t>(m)].interference_power(k) == 0.0);
            CHECK(sm.links[static_cast<std::size_t>(m)].sinr(k) == doctest::Approx(5.0 * std::norm(comp(k, k))));
        }
    }
}

TEST_CASE("quantized feedback interference respects the per-stream bound") {
    for (int ne : {2, 3}) {
        const SystemDims d{6, 3, 2, 3, ne};
        const Codebook cb = generate_rvq_codebook(3, 6, 3, 8);
        for (std::uint64_t t = 0; t < 2000; ++t) {
            const ChannelSet ch = channels(t, d);
            const auto tr = design_link_transceivers(ch, d, &cb);
            const auto sm = compute_stream_metrics(ch, tr[0], tr[1], 100.0, 100.0);
            for (const auto& l : sm.links) {
                REQUIRE((l.interference_power.array() <= l.interference_bound + 1e-9).all());
                REQUIRE(l.interference_power.sum() <= l.aggregate_bound + 1e-9);
            }
        }
    }
}

TEST_CASE("SINR is non-increasing in the other link's power") {
    const Codebook cb = generate_rvq_codebook(4, 6, 3, 4);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const ChannelSet ch = channels(t);
        const auto tr = design_link_transceivers(ch, SystemDims{}, &cb);
        double previous = 1e300;
        for (double p2 : {0.0, 1.0, 10.0, 100.0}) {
            const double s = compute_stream_metrics(ch, tr[0], tr[1], 10.0, p2).links[0].sinr(0);
            CHECK(s <= previous);
            previous = s;
        }
    }
}

TEST_CASE("perfect feedback throughput matches the eigenvalue sum") {
    double a = 0.0, b = 0.0;
    const int trials = 20000;
    const double p = 10.0;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = channels(static_cast<std::uint64_t>(t));
        const auto tr = design_link_transceivers(ch, SystemDims{}, nullptr);
        a += compute_stream_metrics(ch, tr[0], tr[1], p, p).sum_rate();
        for (const auto& l : tr)
            for (Eigen::Index k = 0; k < l.eff_eigs.size(); ++k) b += std::log2(1.0 + p * l.eff_eigs(k));
    }
    CHECK(std::abs(a - b) / b < 0.01);
}

TEST_CASE("effective eigenvalues do not depend on the inner pair choice") {
    // isotropic H: eigenvalues of G^H H F match those of a 3 x 3 block of H
    double designed = 0.0, plain = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = channels(static_cast<std::uint64_t>(t));
        const auto tr = design_link_transceivers(ch, SystemDims{}, nullptr);
        designed += tr[0].eff_eigs.sum();
        const ComplexMatrix I6 = ComplexMatrix::Identity(6, 3);
        const ComplexMatrix I3 = ComplexMatrix::Identity(3, 3);
        plain += design_outer_pair(I3, ch.h11, I6, 2).eff_eigs.sum();
    }
    CHECK(std::abs(designed - plain) / plain < 0.02);
}

TEST_CASE("single-user baseline") {
    const ChannelSet ch = channels(5);
    const auto sm = baseline_single_user(ch.with_nu(0.0), 2, 7.0);
    const auto svd = svd_descending(ch.h11);
    for (Eigen::Index l = 0; l < 2; ++l)
        CHECK(sm.links[0].sinr(l) == doctest::Approx(7.0 * std::pow(svd.singular_values(l), 2)));

    // large power: SINR saturates at signal over interference
    const auto bf = design_single_user(ch, 2);
    const auto hi = evaluate_beamformers(ch, bf, 1e6, 1e6);
    const auto hi2 = evaluate_beamformers(ch, bf, 1e7, 1e7);
    CHECK(std::abs(hi.sum_rate() - hi2.sum_rate()) < 1e-3);
    const ComplexMatrix g = bf[0].equalizer;
    const ComplexMatrix own = g.adjoint() * ch.h11 * bf[0].precoder;
    const ComplexMatrix cross = g.adjoint() * ch.h12 * bf[1].precoder;
    const double limit = std::norm(own(0, 0)) / (ch.nu * cross.row(0).squaredNorm());
    CHECK(hi.links[0].sinr(0) == doctest::Approx(limit).epsilon(1e-4));

    ChannelSet scalar;
    scalar.h11 = ComplexMatrix::Constant(1, 1, std::complex<double>(0.6, 0.8));
    scalar.h12 = ComplexMatrix::Constant(1, 1, std::complex<double>(0.3, 0.0));
    scalar.h21 = ComplexMatrix::Constant(1, 1, std::complex<double>(0.0, 0.5));
    scalar.h22 = ComplexMatrix::Constant(1, 1, std::complex<double>(2.0, 0.0));
    scalar.nu = 0.5;
    const auto s = baseline_single_user(scalar, 1, 4.0);
    CHECK(s.links[0].sinr(0) == doctest::Approx(4.0 * 1.0 / (1.0 + 0.5 * 4.0 * 0.09)));
    CHECK(s.links[1].sinr(0) == doctest::Approx(4.0 * 4.0 / (1.0 + 0.5 * 4.0 * 0.25)));
}

TEST_CASE("interference coordination with perfect feedback") {
    const int M = 2;
    CHECK(coordination_rows(3, 6, 2) == 3);
    CHECK(coordination_rows(8, 6, 2) == 4);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const ChannelSet ch = channels(t);
        const auto bf = design_interference_coordination(ch, M, nullptr);
        const int rows = coordination_rows(3, 6, M);
        for (int m = 0; m < 2; ++m) {
            const int n = 1 - m;
            const auto& b = bf[static_cast<std::size_t>(m)];
            CHECK(orthonormality_residual(b.precoder) < 1e-10);
            CHECK((ch.cross(n).topRows(rows) * b.precoder).norm() < 1e-9);
            // normalised zero-forcing receiver: G^H H F is diagonal
            const ComplexMatrix eff = b.equalizer.adjoint() * ch.direct(m) * b.precoder;
            CHECK(is_diagonal(eff, 1e-9));
            // unnormalised pseudo-inverse oracle
            const ComplexMatrix a = ch.direct(m).topRows(rows) * b.precoder;
            const ComplexMatrix pinv = a * (a.adjoint() * a).inverse();
            CHECK((pinv.adjoint() * a - ComplexMatrix::Identity(M, M)).norm() < 1e-9);
        }
    }
}

TEST_CASE("interference coordination dimension errors") {
    const ChannelSet ch = channels(1);
    CHECK_THROWS_AS(design_interference_coordination(ch, 4, nullptr), InvalidInput);
    const Codebook wrong = generate_rvq_codebook(1, 6, 3, 2);
    CHECK_THROWS_AS(design_interference_coordination(ch, 2, &wrong), InvalidInput);
}

TEST_CASE("no-CSIT baseline is deterministic and below coordination") {
    const ChannelSet ch = channels(3);
    const auto a = baseline_no_csit(ch, 2, 17, 100.0);
    const auto b = baseline_no_csit(ch, 2, 17, 100.0);
    CHECK(a.sum_rate() == b.sum_rate());

    const Codebook cb = generate_rvq_codebook(9, 6, 2, 8);
    double ic = 0.0, nc = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet c = channels(static_cast<std::uint64_t>(t));
        ic += baseline_interference_coordination(c, 2, cb, 100.0).sum_rate();
        nc += baseline_no_csit(c, 2, derive_seed(2, Stream::random_precoder, static_cast<std::uint64_t>(t)), 100.0).sum_rate();
    }
    CHECK(nc <= ic);

    ChannelSet scalar;
    scalar.h11 = ComplexMatrix::Constant(1, 1, std::complex<double>(1.0, 0.0));
    scalar.h12 = ComplexMatrix::Constant(1, 1, std::complex<double>(0.5, 0.0));
    scalar.h21 = ComplexMatrix::Constant(1, 1, std::complex<double>(0.5, 0.0));
    scalar.h22 = ComplexMatrix::Constant(1, 1, std::complex<double>(1.0, 0.0));
    scalar.nu = 1.0;
    const auto s = baseline_no_csit(scalar, 1, 3, 2.0);
    CHECK(s.links[0].sinr(0) == doctest::Approx(2.0 / (1.0 + 2.0 * 0.25)));
}
