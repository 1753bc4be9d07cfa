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

#ifndef COOPFB_SIMULATOR_HPP
#define COOPFB_SIMULATOR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopfb/channel.hpp"
#include "coopfb/power.hpp"

namespace coopfb {

enum class Scheme {
    proposed_fixed_power,
    proposed_ipc_margin,
    proposed_ipc_alg1,
    baseline_single_user,
    baseline_interference_coordination,
    baseline_no_csit,
    perfect_feedback,
};

std::string_view scheme_name(Scheme s);
// Throws InvalidInput for an unknown name.
Scheme parse_scheme(std::string_view name);

struct ExperimentConfig {
    std::string name = "run";
    std::string label;  // curve label; empty means scheme_name(scheme)
    SystemDims dims;
    double nu = 0.5;
    std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30, 35, 40};
    int bits = 8;
    std::size_t trials = 2000;
    int codebook_realizations = 10;
    Scheme scheme = Scheme::proposed_fixed_power;
    double tau = 2.0;
    // Iterative ascent: step = alg1_step * P_max, start = alg1_init * P_max.
    double alg1_step = 1.0;
    double alg1_init = 0.5;
    int alg1_iters = 20;
    double alg1_tol = 1e-4;
    SlopeVariant alg1_variant = SlopeVariant::exact;
    std::uint64_t master_seed = 1;
    // Assert every per-stream interference against its analytic bound.
    bool check_bounds = false;

    // Throws ValidationError naming the first violated constraint.
    void validate() const;
    std::string curve_label() const { return label.empty() ? std::string(scheme_name(scheme)) : label; }
    bool operator==(const ExperimentConfig&) const = default;
};

struct ThroughputCurve {
    std::string scheme_label;
    std::vector<double> snr_db;
    std::vector<double> mean_bits_per_s_per_hz;
    std::vector<double> stderr_bits;
    std::size_t samples = 0;  // trials * codebook realizations
    int bits = 0;
    int ne = 0;
    int np = 0;
    double tau = 0.0;
};

// Sample i = r * trials + t is channel trial t under codebook realization r,
// with channel seed derive_seed(master, channel, t, r). Configs that share a
// master seed and dims therefore see the same channels.
ThroughputCurve run_experiment(const ExperimentConfig& cfg);

// Per-sample sum rates, samples x SNR points, for tests that need paired data.
std::vector<std::vector<double>> run_experiment_samples(const ExperimentConfig& cfg);

enum class FigurePreset { fig2, fig3, fig4, fig5 };
FigurePreset parse_preset(std::string_view name);
std::string_view preset_name(FigurePreset p);

struct PresetOverrides {
    std::optional<std::uint64_t> master_seed;
    std::optional<std::size_t> trials;
    std::optional<int> codebook_realizations;
    std::optional<std::vector<double>> snr_grid_db;
};

std::vector<ExperimentConfig> figure_preset_configs(FigurePreset p, const PresetOverrides& ov = {});
std::vector<ThroughputCurve> run_figure_preset(FigurePreset p, const PresetOverrides& ov = {});

// Mean of the per-realisation A_IM (fixed interference margin) with
// quantized feedback at one P_max.
struct MeanEstimate {
    double mean = 0.0;
    double stderr_value = 0.0;
};
MeanEstimate simulate_a_im(const SystemDims& dims, double nu, double tau, double p_max, int bits, std::size_t trials,
                           int codebook_realizations, std::uint64_t seed);

struct BitScalingOptions {
    SystemDims dims{6, 3, 2, 3, 3};
    double nu = 0.5;
    std::size_t trials = 500;
    int codebook_realizations = 4;
    std::size_t eig_trials = 100000;
    std::uint64_t master_seed = 1;
};

struct BitScalingRow {
    double p_max_db = 0.0;
    double required_bits = 0.0;  // real-valued rule
    int bits = 0;                // ceil, floored at 0
    double delta_c = 0.0;        // perfect minus quantized sum rate, full power
    double delta_c_stderr = 0.0;
    double c = 0.0;
};

// Rows for every grid point whose rounded bit count is within cap_bits.
std::vector<BitScalingRow> run_bit_scaling_check(double c, const std::vector<double>& p_grid_db, int cap_bits,
                                                 const BitScalingOptions& opt = {});

}  // namespace coopfb

#endif  // COOPFB_SIMULATOR_HPP
