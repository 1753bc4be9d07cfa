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

#include "coopfb/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace coopfb {

namespace {

ComplexMatrix gather_columns(const ComplexMatrix& m, const std::vector<Eigen::Index>& idx) {
    ComplexMatrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
    return out;
}

// Zero-forcing receiver A (A^H A)^{-1} on the first `rows` receive antennas,
// zero-padded back to K rows, columns scaled to unit norm.
ComplexMatrix zf_receiver(const ComplexMatrix& h_direct, const ComplexMatrix& precoder, int rows) {
    const ComplexMatrix a = h_direct.topRows(rows) * precoder;
    const ComplexMatrix gram = a.adjoint() * a;
    const ComplexMatrix g_top = a * gram.ldlt().solve(ComplexMatrix::Identity(gram.rows(), gram.cols()));
    ComplexMatrix g = ComplexMatrix::Zero(h_direct.rows(), precoder.cols());
    g.topRows(rows) = g_top;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        const double n = g.col(j).norm();
        if (n > 0.0) g.col(j) /= n;
    }
    return g;
}

}  // namespace

InnerPair design_inner_pair(const ComplexMatrix& h_cross, const SystemDims& dims) {
    const int K = dims.rx_antennas;
    const int L = dims.tx_antennas;
    const int ne = dims.equalizer_width;
    const int np = dims.precoder_width;
    if (h_cross.rows() != K || h_cross.cols() != L) throw InvalidInput("design_inner_pair: h_cross must be K x L");
    if (ne < 1 || np < 1 || ne > K || np > L) throw InvalidInput("design_inner_pair: inner widths out of range");
    if (ne + np > std::max(L, K)) throw InvalidInput("design_inner_pair: Ne + Np <= max(L, K) violated");

    const auto svd = svd_descending(h_cross);
    InnerPair out;
    out.g_inner = svd.left.rightCols(ne);

    // Positions K-Ne..K-1 (0-based) belong to the equalizer; the precoder takes
    // the last Np right-vector positions outside that set.
    std::vector<Eigen::Index> b;
    for (Eigen::Index j = L - 1; j >= 0 && static_cast<int>(b.size()) < np; --j) {
        if (j >= K - ne && j < K) continue;
        b.push_back(j);
    }
    if (static_cast<int>(b.size()) < np) throw InvalidInput("design_inner_pair: no disjoint precoder index set");
    std::reverse(b.begin(), b.end());
    out.f_inner = gather_columns(svd.right, b);

    const Eigen::Index pos = K - ne;
    out.cross_eig = pos < svd.singular_values.size() ? svd.singular_values(pos) * svd.singular_values(pos) : 0.0;
    return out;
}

ComplexMatrix redesign_inner_equalizer(const ComplexMatrix& h_cross, const ComplexMatrix& f_hat, int ne) {
    const Eigen::Index K = h_cross.rows();
    if (f_hat.rows() != h_cross.cols()) throw InvalidInput("redesign_inner_equalizer: f_hat must have L rows");
    if (ne < 1 || ne > K) throw InvalidInput("redesign_inner_equalizer: need 1 <= Ne <= K");
    if (ne == K) return svd_descending(h_cross).left;
    return svd_descending(h_cross * f_hat).left.rightCols(ne);
}

double redesigned_interference_bound(const ComplexMatrix& h_cross, const ComplexMatrix& f_hat, int ne) {
    const Eigen::Index K = h_cross.rows();
    if (f_hat.rows() != h_cross.cols()) throw InvalidInput("redesigned_interference_bound: f_hat must have L rows");
    if (ne < 1 || ne > K) throw InvalidInput("redesigned_interference_bound: need 1 <= Ne <= K");
    const RealVector sv = svd_descending(h_cross * f_hat).singular_values;
    double sum = 0.0;
    for (Eigen::Index l = K - ne; l < sv.size(); ++l) sum += sv(l) * sv(l);
    return sum;
}

OuterPair design_outer_pair(const ComplexMatrix& g_inner, const ComplexMatrix& h_direct, const ComplexMatrix& f_inner,
                            int streams) {
    if (g_inner.rows() != h_direct.rows() || f_inner.rows() != h_direct.cols())
        throw InvalidInput("design_outer_pair: inner factors do not match the channel");
    if (streams < 1 || streams > std::min(g_inner.cols(), f_inner.cols()))
        throw InvalidInput("design_outer_pair: need 1 <= M <= min(Ne, Np)");

    const auto svd = svd_descending(g_inner.adjoint() * h_direct * f_inner);
    OuterPair out;
    out.g_outer = svd.left.leftCols(streams);
    out.f_outer = svd.right.leftCols(streams);
    out.eff_eigs = svd.singular_values.head(streams).array().square();
    return out;
}

std::array<LinkTransceiver, 2> design_link_transceivers(const ChannelSet& ch, const SystemDims& dims,
                                                        const Codebook* cb) {
    dims.validate();
    // inner[m]: designed by receiver m on H_mn; its precoder belongs to link n.
    const std::array<InnerPair, 2> inner = {design_inner_pair(ch.cross(0), dims),
                                            design_inner_pair(ch.cross(1), dims)};
    std::array<LinkTransceiver, 2> out;
    for (int n = 0; n < 2; ++n) {
        const InnerPair& from = inner[static_cast<std::size_t>(1 - n)];
        auto& link = out[static_cast<std::size_t>(n)];
        if (cb != nullptr) {
            auto q = quantize(from.f_inner, *cb);
            link.f_inner = std::move(q.codeword);
            link.eps = q.error;
        } else {
            link.f_inner = from.f_inner;
            link.eps = 0.0;
        }
    }
    for (int m = 0; m < 2; ++m) {
        const int n = 1 - m;
        auto& link = out[static_cast<std::size_t>(m)];
        const InnerPair& own = inner[static_cast<std::size_t>(m)];
        link.cross_eig = own.cross_eig;
        const bool refit = cb != nullptr && dims.equalizer_width < dims.rx_antennas;
        link.g_inner = refit ? redesign_inner_equalizer(ch.cross(m), out[static_cast<std::size_t>(n)].f_inner,
                                                        dims.equalizer_width)
                             : own.g_inner;
        auto outer = design_outer_pair(link.g_inner, ch.direct(m), link.f_inner, dims.streams);
        link.g_outer = std::move(outer.g_outer);
        link.f_outer = std::move(outer.f_outer);
        link.eff_eigs = std::move(outer.eff_eigs);
    }
    return out;
}

double LinkMetrics::rate() const {
    double r = 0.0;
    for (Eigen::Index l = 0; l < sinr.size(); ++l) r += std::log2(1.0 + sinr(l));
    return r;
}

StreamMetrics evaluate_beamformers(const ChannelSet& ch, const std::array<Beamformers, 2>& bf, double p1, double p2) {
    if (p1 < 0.0 || p2 < 0.0) throw InvalidInput("evaluate_beamformers: powers must be nonnegative");
    const std::array<double, 2> power = {p1, p2};
    StreamMetrics out;
    for (int m = 0; m < 2; ++m) {
        const int n = 1 - m;
        const auto& g = bf[static_cast<std::size_t>(m)].equalizer;
        const auto& f = bf[static_cast<std::size_t>(m)].precoder;
        const auto& f_other = bf[static_cast<std::size_t>(n)].precoder;
        const ComplexMatrix own = g.adjoint() * ch.direct(m) * f;
        const ComplexMatrix cross = g.adjoint() * ch.cross(m) * f_other;
        const double pm = power[static_cast<std::size_t>(m)];
        const double pn = power[static_cast<std::size_t>(n)];

        auto& lm = out.links[static_cast<std::size_t>(m)];
        const Eigen::Index streams = g.cols();
        lm.sinr.resize(streams);
        lm.interference_power.resize(streams);
        for (Eigen::Index l = 0; l < streams; ++l) {
            const double signal = pm * std::norm(own(l, l));
            const double self = pm * (own.row(l).squaredNorm() - std::norm(own(l, l)));
            const double inter = ch.nu * pn * cross.row(l).squaredNorm();
            const double noise = g.col(l).squaredNorm();
            lm.interference_power(l) = inter;
            lm.sinr(l) = signal / (noise + inter + std::max(self, 0.0));
        }
    }
    return out;
}

StreamMetrics compute_stream_metrics(const ChannelSet& ch, const LinkTransceiver& t1, const LinkTransceiver& t2,
                                     double p1, double p2) {
    const std::array<Beamformers, 2> bf = {Beamformers{t1.precoder(), t1.equalizer()},
                                           Beamformers{t2.precoder(), t2.equalizer()}};
    StreamMetrics out = evaluate_beamformers(ch, bf, p1, p2);
    const std::array<const LinkTransceiver*, 2> t = {&t1, &t2};
    const std::array<double, 2> power = {p1, p2};
    for (int m = 0; m < 2; ++m) {
        const int n = 1 - m;
        const auto& rx = *t[static_cast<std::size_t>(m)];
        const auto& tx = *t[static_cast<std::size_t>(n)];
        const double np = static_cast<double>(tx.f_inner.cols());
        auto& lm = out.links[static_cast<std::size_t>(m)];
        lm.interference_bound = ch.nu * np * power[static_cast<std::size_t>(n)] * rx.cross_eig * tx.eps;
        lm.aggregate_bound = static_cast<double>(rx.g_outer.cols()) * lm.interference_bound;
    }
    return out;
}

int coordination_rows(int rx_antennas, int tx_antennas, int streams) {
    return std::min(rx_antennas, tx_antennas - streams);
}

std::array<Beamformers, 2> design_single_user(const ChannelSet& ch, int streams) {
    if (streams < 1 || streams > std::min(ch.h11.rows(), ch.h11.cols()))
        throw InvalidInput("design_single_user: need 1 <= M <= min(L, K)");
    std::array<Beamformers, 2> out;
    for (int m = 0; m < 2; ++m) {
        const auto svd = svd_descending(ch.direct(m));
        out[static_cast<std::size_t>(m)] = {svd.right.leftCols(streams), svd.left.leftCols(streams)};
    }
    return out;
}

std::array<Beamformers, 2> design_interference_coordination(const ChannelSet& ch, int streams, const Codebook* cb) {
    const int K = static_cast<int>(ch.h11.rows());
    const int L = static_cast<int>(ch.h11.cols());
    if (streams < 1 || L - streams < 1) throw InvalidInput("interference coordination: need L - M >= 1");
    if (L - streams < streams) throw InvalidInput("interference coordination: L - M < M");
    const int rows = coordination_rows(K, L, streams);
    if (cb != nullptr && (cb->rows() != L || cb->cols() != streams))
        throw InvalidInput("interference coordination: codebook must be L x M");

    std::array<Beamformers, 2> out;
    for (int m = 0; m < 2; ++m) {
        const int n = 1 - m;
        // Transmitter m nulls the first rows of H_nm, i.e. receiver n's cross channel.
        const auto svd = svd_descending(ch.cross(n).topRows(rows));
        ComplexMatrix f = svd.right.middleCols(rows, streams);
        if (cb != nullptr) f = quantize(f, *cb).codeword;
        out[static_cast<std::size_t>(m)].precoder = std::move(f);
    }
    for (int m = 0; m < 2; ++m) {
        auto& b = out[static_cast<std::size_t>(m)];
        b.equalizer = zf_receiver(ch.direct(m), b.precoder, rows);
    }
    return out;
}

std::array<Beamformers, 2> design_no_csit(const ChannelSet& ch, int streams, std::uint64_t seed) {
    const int K = static_cast<int>(ch.h11.rows());
    const int L = static_cast<int>(ch.h11.cols());
    if (streams < 1 || streams > std::min(K, L)) throw InvalidInput("design_no_csit: need 1 <= M <= min(L, K)");
    // Same receive-row restriction as the coordination scheme, but never fewer than M rows.
    const int rows = std::max(streams, std::min(K, std::max(L - streams, 1)));
    Engine engine(seed);
    std::array<Beamformers, 2> out;
    for (auto& b : out) b.precoder = orthonormalize(gaussian_matrix(engine, L, streams));
    for (int m = 0; m < 2; ++m) {
        auto& b = out[static_cast<std::size_t>(m)];
        b.equalizer = zf_receiver(ch.direct(m), b.precoder, rows);
    }
    return out;
}

StreamMetrics baseline_single_user(const ChannelSet& ch, int streams, double p) {
    return evaluate_beamformers(ch, design_single_user(ch, streams), p, p);
}

StreamMetrics baseline_interference_coordination(const ChannelSet& ch, int streams, const Codebook& cb, double p) {
    return evaluate_beamformers(ch, design_interference_coordination(ch, streams, &cb), p, p);
}

StreamMetrics baseline_no_csit(const ChannelSet& ch, int streams, std::uint64_t seed, double p) {
    return evaluate_beamformers(ch, design_no_csit(ch, streams, seed), p, p);
}

}  // namespace coopfb
