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

#ifndef COOPFB_TRANSCEIVER_HPP
#define COOPFB_TRANSCEIVER_HPP

#include <array>
#include <cstdint>
#include <limits>

#include "coopfb/channel.hpp"
#include "coopfb/codebook.hpp"
#include "coopfb/numerics.hpp"

namespace coopfb {

// Zero-forcing inner pair designed by receiver m from its cross channel
// H_mn: the equalizer belongs to receiver m, the precoder to transmitter n.
struct InnerPair {
    ComplexMatrix g_inner;  // K x Ne
    ComplexMatrix f_inner;  // L x Np
    double cross_eig = 0.0; // lambda_mn at position K - Ne + 1 (1-based), 0 if beyond rank
};

// Equalizer: left singular vectors of h_cross at positions K-Ne+1..K.
// Precoder: the Np right singular vectors with the smallest singular values
// among positions not used by the equalizer, which is L-Np+1..L whenever
// Np <= L - K. Then g_inner^H h_cross f_inner = 0.
InnerPair design_inner_pair(const ComplexMatrix& h_cross, const SystemDims& dims);

// Receiver-side refit against the quantized precoder: the Ne left singular
// vectors of h_cross * f_hat with the smallest singular values. With Ne = K
// there is nothing to refit and the zero-forcing equalizer is returned.
ComplexMatrix redesign_inner_equalizer(const ComplexMatrix& h_cross, const ComplexMatrix& f_hat, int ne);

// Residual interference power ||G_hat^H h_cross f_hat||_F^2 left by the
// refit equalizer: the sum of the squared singular values of h_cross * f_hat
// at positions K-Ne+1 .. min(K, Np).
double redesigned_interference_bound(const ComplexMatrix& h_cross, const ComplexMatrix& f_hat, int ne);

struct OuterPair {
    ComplexMatrix g_outer;  // Ne x M
    ComplexMatrix f_outer;  // Np x M
    RealVector eff_eigs;    // top-M squared singular values, descending
};

// Top-M eigenmodes of the effective channel g_inner^H h_direct f_inner.
OuterPair design_outer_pair(const ComplexMatrix& g_inner, const ComplexMatrix& h_direct,
                            const ComplexMatrix& f_inner, int streams);

// Everything link m needs at its transmitter and receiver.
struct LinkTransceiver {
    ComplexMatrix f_inner;
    ComplexMatrix f_outer;
    ComplexMatrix g_inner;
    ComplexMatrix g_outer;
    RealVector eff_eigs;
    double eps = 0.0;        // quantisation error of this link's inner precoder
    double cross_eig = 0.0;  // lambda_mn^[K-Ne+1] seen by this link's receiver

    ComplexMatrix precoder() const { return f_inner * f_outer; }
    ComplexMatrix equalizer() const { return g_inner * g_outer; }
};

// Full decomposed design for both links. A null codebook means perfect
// cooperative feedback (eps = 0, no equalizer refit).
std::array<LinkTransceiver, 2> design_link_transceivers(const ChannelSet& ch, const SystemDims& dims,
                                                        const Codebook* cb);

// A bare precoder/equalizer pair, used by the baselines.
struct Beamformers {
    ComplexMatrix precoder;   // L x M
    ComplexMatrix equalizer;  // K x M
};

struct LinkMetrics {
    RealVector sinr;
    RealVector interference_power;  // nu P_n ||g_l^H H_mn F_n||^2 per stream
    // nu Np P_n lambda_mn eps_n per stream, and M times that in aggregate.
    // Infinite for designs that carry no analytic bound.
    double interference_bound = std::numeric_limits<double>::infinity();
    double aggregate_bound = std::numeric_limits<double>::infinity();

    double rate() const;  // sum_l log2(1 + sinr_l)
};

struct StreamMetrics {
    std::array<LinkMetrics, 2> links;
    double sum_rate() const { return links[0].rate() + links[1].rate(); }
};

// Per-stream SINR for arbitrary beamformers:
//   P_m |g^H H_mm f_l|^2 / (||g||^2 + nu P_n ||g^H H_mn F_n||^2 + P_m sum_{k != l} |g^H H_mm f_k|^2)
// For orthonormal, diagonalising designs the last term is zero and ||g|| = 1.
StreamMetrics evaluate_beamformers(const ChannelSet& ch, const std::array<Beamformers, 2>& bf, double p1, double p2);

StreamMetrics compute_stream_metrics(const ChannelSet& ch, const LinkTransceiver& t1, const LinkTransceiver& t2,
                                     double p1, double p2);

// Baselines. The design_* functions do the power-independent work once.
std::array<Beamformers, 2> design_single_user(const ChannelSet& ch, int streams);
std::array<Beamformers, 2> design_interference_coordination(const ChannelSet& ch, int streams, const Codebook* cb);
std::array<Beamformers, 2> design_no_csit(const ChannelSet& ch, int streams, std::uint64_t seed);

StreamMetrics baseline_single_user(const ChannelSet& ch, int streams, double p);
StreamMetrics baseline_interference_coordination(const ChannelSet& ch, int streams, const Codebook& cb, double p);
StreamMetrics baseline_no_csit(const ChannelSet& ch, int streams, std::uint64_t seed, double p);

// Number of receive rows the coordination receiver uses: min(K, L - M).
int coordination_rows(int rx_antennas, int tx_antennas, int streams);

}  // namespace coopfb

#endif  // COOPFB_TRANSCEIVER_HPP
