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

#include "coopfb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coopfb {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t i, std::uint64_t j) {
    const auto s = static_cast<std::uint64_t>(stream);
    return splitmix64(splitmix64(splitmix64(master ^ s) + i) + j);
}

ComplexMatrix gaussian_matrix(Engine& engine, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix h(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double re = normal(engine);
            const double im = normal(engine);
            h(r, c) = {re, im};
        }
    }
    return h;
}

void SystemDims::validate() const {
    const int L = tx_antennas;
    const int K = rx_antennas;
    const int M = streams;
    auto fail = [](const std::string& what) { throw InvalidInput("SystemDims: " + what); };
    if (L < 1 || K < 1 || M < 1) fail("L, K and M must be positive");
    if (M > std::min(L, K)) fail("M <= min(L, K) violated");
    if (precoder_width < M || precoder_width > L) fail("M <= Np <= L violated");
    if (equalizer_width < M || equalizer_width > K) fail("M <= Ne <= K violated");
    if (equalizer_width + precoder_width > std::max(L, K)) fail("Ne + Np <= max(L, K) violated");
}

ChannelSet ChannelSet::with_nu(double new_nu) const {
    if (!(new_nu >= 0.0 && new_nu <= 1.0)) throw InvalidInput("ChannelSet::with_nu: nu must lie in [0, 1]");
    ChannelSet out = *this;
    out.nu = new_nu;
    return out;
}

ChannelSet draw_channel_set(std::uint64_t seed, const SystemDims& dims, double nu) {
    if (!(nu > 0.0 && nu <= 1.0)) throw InvalidInput("draw_channel_set: nu must lie in (0, 1]");
    if (dims.tx_antennas < 1 || dims.rx_antennas < 1) throw InvalidInput("draw_channel_set: empty antenna array");
    Engine engine(seed);
    const Eigen::Index K = dims.rx_antennas;
    const Eigen::Index L = dims.tx_antennas;
    ChannelSet ch;
    ch.h11 = gaussian_matrix(engine, K, L);
    ch.h12 = gaussian_matrix(engine, K, L);
    ch.h21 = gaussian_matrix(engine, K, L);
    ch.h22 = gaussian_matrix(engine, K, L);
    ch.nu = nu;
    return ch;
}

}  // namespace coopfb
