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

#ifndef COOPFB_CHANNEL_HPP
#define COOPFB_CHANNEL_HPP

#include <cstdint>
#include <random>

#include "coopfb/numerics.hpp"

namespace coopfb {

using Engine = std::mt19937_64;

// Stream tags keep the channel, codebook and auxiliary random streams of one
// experiment disjoint even when their indices coincide.
enum class Stream : std::uint64_t {
    channel = 0x6368616e6e656c00ULL,
    codebook = 0x636f6465626f6f6bULL,
    baseline_codebook = 0x62617365636f6465ULL,
    random_precoder = 0x72616e647072636fULL,
    wishart = 0x7769736861727400ULL,
};

std::uint64_t splitmix64(std::uint64_t x);

// derive_seed(master, s, i, j) =
//   splitmix64(splitmix64(splitmix64(master ^ s) + i) + j)
// with wrap-around 64-bit addition.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t i, std::uint64_t j = 0);

// K x L i.i.d. CN(0,1) entries; row-major draw order, real part then imaginary part.
ComplexMatrix gaussian_matrix(Engine& engine, Eigen::Index rows, Eigen::Index cols);

// Antenna and stream budget of one link (both links are identical).
struct SystemDims {
    int tx_antennas = 6;      // L
    int rx_antennas = 3;      // K
    int streams = 2;          // M
    int precoder_width = 3;   // N_p, inner precoder is L x N_p
    int equalizer_width = 3;  // N_e, inner equalizer is K x N_e

    // Throws InvalidInput naming the first violated constraint.
    void validate() const;
    bool operator==(const SystemDims&) const = default;
};

// One block-fading realisation. Cross channels are stored unscaled; the
// path-loss factor nu is a power factor applied where interference is formed.
struct ChannelSet {
    ComplexMatrix h11;
    ComplexMatrix h12;
    ComplexMatrix h21;
    ComplexMatrix h22;
    double nu = 1.0;

    // H_mm for link m in {0, 1}.
    const ComplexMatrix& direct(int m) const { return m == 0 ? h11 : h22; }
    // H_mn, transmitter n != m to receiver m.
    const ComplexMatrix& cross(int m) const { return m == 0 ? h12 : h21; }

    // Same matrices, different path loss. Accepts nu in [0, 1]; nu = 0 decouples the links.
    ChannelSet with_nu(double new_nu) const;
};

ChannelSet draw_channel_set(std::uint64_t seed, const SystemDims& dims, double nu);

}  // namespace coopfb

#endif  // COOPFB_CHANNEL_HPP
