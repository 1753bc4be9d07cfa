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

#include "coopfb/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "coopfb/channel.hpp"

namespace coopfb {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr char kBinaryMagic[8] = {'C', 'F', 'B', 'C', 'O', 'D', 'E', '1'};

int bits_for_count(std::size_t count) {
    if (count == 0 || (count & (count - 1)) != 0) throw InvalidInput("codebook size must be a power of two");
    const int bits = std::countr_zero(count);
    if (bits > kMaxCodebookBits) throw ResourceLimit("codebook exceeds 2^20 entries");
    return bits;
}

template <typename T>
void put_le(std::ostream& os, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw InvalidInput("codebook binary: truncated stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

void check_header(int bits, int rows, int cols) {
    if (bits < 0) throw InvalidInput("codebook header: negative bit count");
    if (bits > kMaxCodebookBits) throw ResourceLimit("codebook header: more than 2^20 entries");
    if (rows < 1 || cols < 1 || cols > rows) throw InvalidInput("codebook header: need rows >= cols >= 1");
}

}  // namespace

Codebook Codebook::from_entries(const std::vector<ComplexMatrix>& entries) {
    const int bits = bits_for_count(entries.size());
    const Eigen::Index rows = entries.front().rows();
    const Eigen::Index cols = entries.front().cols();
    ComplexMatrix stacked(rows, cols * static_cast<Eigen::Index>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.rows() != rows || e.cols() != cols) throw InvalidInput("Codebook: codewords differ in shape");
        if (!e.allFinite() || orthonormality_residual(e) > kOrthoTol)
            throw InvalidInput("Codebook: codeword " + std::to_string(i) + " is not orthonormal");
        stacked.middleCols(static_cast<Eigen::Index>(i) * cols, cols) = e;
    }
    return Codebook(bits, cols, std::move(stacked));
}

Codebook generate_rvq_codebook(std::uint64_t seed, int L, int Np, int bits) {
    if (bits < 0) throw InvalidInput("generate_rvq_codebook: negative bit count");
    if (bits > kMaxCodebookBits) throw ResourceLimit("generate_rvq_codebook: more than 2^20 codewords requested");
    if (Np < 1 || Np > L) throw InvalidInput("generate_rvq_codebook: need 1 <= Np <= L");

    Engine engine(seed);
    const std::size_t count = std::size_t{1} << bits;
    ComplexMatrix stacked(L, static_cast<Eigen::Index>(count) * Np);
    for (std::size_t i = 0; i < count; ++i) {
        ComplexMatrix q;
        for (;;) {
            try {
                q = orthonormalize(gaussian_matrix(engine, L, Np));
                break;
            } catch (const DegenerateInput&) {
                // probability zero; draw again
            }
        }
        stacked.middleCols(static_cast<Eigen::Index>(i) * Np, Np) = q;
    }
    return Codebook(bits, Np, std::move(stacked));
}

double chordal_distance(const ComplexMatrix& w, const ComplexMatrix& f) {
    if (w.rows() != f.rows() || w.cols() != f.cols()) throw InvalidInput("chordal_distance: shape mismatch");
    if (!w.allFinite() || !f.allFinite()) throw InvalidInput("chordal_distance: non-finite entry");
    if (orthonormality_residual(w) > 1e-8 || orthonormality_residual(f) > 1e-8)
        throw InvalidInput("chordal_distance: inputs must have orthonormal columns");
    const ComplexMatrix diff = w * w.adjoint() - f * f.adjoint();
    return diff.norm() / std::sqrt(2.0);
}

QuantizationResult quantize(const ComplexMatrix& f_inner, const Codebook& cb) {
    if (cb.size() == 0 || cb.rows() == 0) throw InvalidInput("quantize: empty codebook");
    if (f_inner.rows() != cb.rows() || f_inner.cols() != cb.cols())
        throw InvalidInput("quantize: precoder shape does not match codebook");

    const Eigen::Index np = cb.cols();
    const ComplexMatrix overlap = f_inner.adjoint() * cb.stacked();
    std::size_t best = 0;
    double best_gain = -1.0;
    for (std::size_t i = 0; i < cb.size(); ++i) {
        const double gain = overlap.middleCols(static_cast<Eigen::Index>(i) * np, np).squaredNorm();
        if (gain > best_gain) {
            best_gain = gain;
            best = i;
        }
    }
    QuantizationResult out;
    out.index = best;
    out.codeword = cb.entry(best);
    out.error = std::clamp(1.0 - best_gain / static_cast<double>(np), 0.0, 1.0);
    return out;
}

double GrassmannConstants::beta() const { return std::exp(log_beta); }

GrassmannConstants grassmann_constants(int L, int n) {
    if (n < 1 || n > L) throw InvalidInput("grassmann_constants: need 1 <= n <= L");
    GrassmannConstants g;
    g.z = n * (L - n);
    if (g.z == 0) throw DegenerateInput("grassmann_constants: n = L leaves nothing to quantise");
    g.log_beta = -std::lgamma(g.z + 1.0);
    for (int m = 1; m <= n; ++m) g.log_beta += std::lgamma(L - m + 1.0) - std::lgamma(n - m + 1.0);
    return g;
}

double expected_error_bound(int bits, int L, int Np, double kappa) {
    if (bits < 0) throw InvalidInput("expected_error_bound: negative bit count");
    if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidInput("expected_error_bound: kappa must lie in (0, 1)");
    const GrassmannConstants g = grassmann_constants(L, Np);
    const double z = g.z;
    const double first = std::tgamma(1.0 / z) / z * std::exp(-g.log_beta / z) * std::exp2(-bits / z);
    const double packing = std::exp2(static_cast<double>(bits)) * g.beta();
    const double second = L * std::exp(-std::pow(packing, 1.0 - kappa));
    return first + second;
}

double required_feedback_bits(double p_max, double nu, double c, int L, int Ne, double mean_cross_eig) {
    if (!(c > 0.0)) throw InvalidInput("required_feedback_bits: loss budget c must be positive");
    if (!(p_max > 0.0)) throw InvalidInput("required_feedback_bits: p_max must be positive");
    if (!(nu > 0.0)) throw InvalidInput("required_feedback_bits: nu must be positive");
    if (!(mean_cross_eig > 0.0)) throw InvalidInput("required_feedback_bits: mean eigenvalue must be positive");
    const GrassmannConstants g = grassmann_constants(L, Ne);
    const double z = g.z;
    const double omega =
        z * std::log2(Ne * std::tgamma(1.0 / z) * mean_cross_eig / (z * std::exp(g.log_beta / z)));
    return z * std::log2(nu * p_max) - z * std::log2(std::exp2(c / (2.0 * Ne)) - 1.0) + omega;
}

void write_codebook_csv(std::ostream& os, const Codebook& cb) {
    os << cb.bits() << ',' << cb.rows() << ',' << cb.cols() << '\n';
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < cb.size(); ++i) {
        const auto e = cb.entry(i);
        bool first = true;
        for (Eigen::Index r = 0; r < e.rows(); ++r) {
            for (Eigen::Index c = 0; c < e.cols(); ++c) {
                if (!first) os << ',';
                os << e(r, c).real() << ',' << e(r, c).imag();
                first = false;
            }
        }
        os << '\n';
    }
}

Codebook read_codebook_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("codebook csv: missing header");
    int bits = -1, rows = 0, cols = 0;
    char c1 = 0, c2 = 0;
    std::istringstream header(line);
    if (!(header >> bits >> c1 >> rows >> c2 >> cols) || c1 != ',' || c2 != ',')
        throw InvalidInput("codebook csv: header must be bits,rows,cols");
    check_header(bits, rows, cols);

    const std::size_t count = std::size_t{1} << bits;
    std::vector<ComplexMatrix> entries;
    entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(is, line)) throw InvalidInput("codebook csv: fewer codewords than declared");
        std::istringstream row(line);
        ComplexMatrix e(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                double re = 0.0, im = 0.0;
                char sep = 0;
                if (r + c > 0 && !(row >> sep && sep == ','))
                    throw InvalidInput("codebook csv: malformed line " + std::to_string(i + 2));
                if (!(row >> re >> sep >> im) || sep != ',')
                    throw InvalidInput("codebook csv: malformed line " + std::to_string(i + 2));
                e(r, c) = {re, im};
            }
        }
        entries.push_back(std::move(e));
    }
    return Codebook::from_entries(entries);
}

void write_codebook_binary(std::ostream& os, const Codebook& cb) {
    os.write(kBinaryMagic, sizeof(kBinaryMagic));
    put_le<std::int32_t>(os, cb.bits());
    put_le<std::int32_t>(os, static_cast<std::int32_t>(cb.rows()));
    put_le<std::int32_t>(os, static_cast<std::int32_t>(cb.cols()));
    for (std::size_t i = 0; i < cb.size(); ++i) {
        const auto e = cb.entry(i);
        for (Eigen::Index r = 0; r < e.rows(); ++r) {
            for (Eigen::Index c = 0; c < e.cols(); ++c) {
                put_le<double>(os, e(r, c).real());
                put_le<double>(os, e(r, c).imag());
            }
        }
    }
}

Codebook read_codebook_binary(std::istream& is) {
    char magic[sizeof(kBinaryMagic)];
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0)
        throw InvalidInput("codebook binary: bad magic");
    const auto bits = get_le<std::int32_t>(is);
    const auto rows = get_le<std::int32_t>(is);
    const auto cols = get_le<std::int32_t>(is);
    check_header(bits, rows, cols);

    const std::size_t count = std::size_t{1} << bits;
    std::vector<ComplexMatrix> entries;
    entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ComplexMatrix e(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                const double re = get_le<double>(is);
                const double im = get_le<double>(is);
                e(r, c) = {re, im};
            }
        }
        entries.push_back(std::move(e));
    }
    return Codebook::from_entries(entries);
}

}  // namespace coopfb
