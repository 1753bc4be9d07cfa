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

#ifndef COOPFB_CODEBOOK_HPP
#define COOPFB_CODEBOOK_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "coopfb/numerics.hpp"

namespace coopfb {

inline constexpr int kMaxCodebookBits = 20;

// 2^bits orthonormal L x N_p codewords, stored side by side in one
// L x (2^bits * N_p) matrix so a whole scan is a single product.
class Codebook {
public:
    Codebook() = default;

    // Throws InvalidInput if the codeword count is not a power of two, shapes
    // differ, or a codeword is not orthonormal.
    static Codebook from_entries(const std::vector<ComplexMatrix>& entries);

    int bits() const noexcept { return bits_; }
    Eigen::Index rows() const noexcept { return stacked_.rows(); }
    Eigen::Index cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return std::size_t{1} << bits_; }

    auto entry(std::size_t i) const {
        return stacked_.middleCols(static_cast<Eigen::Index>(i) * cols_, cols_);
    }
    const ComplexMatrix& stacked() const noexcept { return stacked_; }

private:
    Codebook(int bits, Eigen::Index cols, ComplexMatrix stacked)
        : bits_(bits), cols_(cols), stacked_(std::move(stacked)) {}

    friend Codebook generate_rvq_codebook(std::uint64_t, int, int, int);

    int bits_ = 0;
    Eigen::Index cols_ = 0;
    ComplexMatrix stacked_;
};

struct QuantizationResult {
    ComplexMatrix codeword;
    double error = 0.0;  // 1 - ||F^H W||_F^2 / N_p, in [0, 1]
    std::size_t index = 0;
};

// Random vector quantisation: each codeword orthonormalises an i.i.d.
// CN(0,1) L x N_p draw. bits = 0 gives a single codeword.
Codebook generate_rvq_codebook(std::uint64_t seed, int L, int Np, int bits);

// (1/sqrt 2) ||W W^H - F F^H||_F for orthonormal W, F of equal shape.
double chordal_distance(const ComplexMatrix& w, const ComplexMatrix& f);

// Codeword with the smallest chordal distance to f_inner (largest
// ||F^H W||_F). Ties go to the lowest index.
QuantizationResult quantize(const ComplexMatrix& f_inner, const Codebook& cb);

// Grassmannian quantisation constants for L x n subspaces:
//   Z = n (L - n),   beta = (1/Z!) prod_{m=1}^{n} (L-m)! / (n-m)!
struct GrassmannConstants {
    int z = 0;
    double log_beta = 0.0;
    double beta() const;
};
GrassmannConstants grassmann_constants(int L, int n);

// Upper bound on E[eps] for a max-min packing codebook with 2^bits codewords:
//   Gamma(1/Z)/Z * beta^(-1/Z) * 2^(-B/Z) + L exp(-(2^B beta)^(1-kappa))
double expected_error_bound(int bits, int L, int Np, double kappa = 0.5);

// Feedback bits that keep the quantisation throughput loss near c bit/s/Hz:
//   B = Z log2(nu P) - Z log2(2^(c/(2 Ne)) - 1) + omega,
//   omega = Z log2( Ne Gamma(1/Z) E[lambda] / (Z beta^(1/Z)) ),  Z = Ne (L - Ne).
// Real valued; callers round up.
double required_feedback_bits(double p_max, double nu, double c, int L, int Ne, double mean_cross_eig);

// Text form: first line "bits,rows,cols", then one line per codeword with
// rows*cols complex entries in row-major order as re,im,re,im,...
void write_codebook_csv(std::ostream& os, const Codebook& cb);
Codebook read_codebook_csv(std::istream& is);

// Binary form: 8-byte magic "CFBCODE1", three little-endian int32
// (bits, rows, cols), then the same entry order as the CSV as float64 pairs.
void write_codebook_binary(std::ostream& os, const Codebook& cb);
Codebook read_codebook_binary(std::istream& is);

}  // namespace coopfb

#endif  // COOPFB_CODEBOOK_HPP
