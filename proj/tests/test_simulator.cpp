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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>

#include "coopfb/codebook.hpp"
#include "coopfb/errors.hpp"
#include "coopfb/simulator.hpp"
#include "coopfb/transceiver.hpp"

using namespace coopfb;

namespace {

ExperimentConfig small(Scheme s, std::size_t trials = 100, int books = 2) {
    ExperimentConfig c;
    c.scheme = s;
    c.trials = trials;
    c.codebook_realizations = books;
    c.snr_grid_db = {0, 10, 20};
    return c;
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

TEST_CASE("scheme names round trip") {
    for (Scheme s : {Scheme::proposed_fixed_power, Scheme::proposed_ipc_margin, Scheme::proposed_ipc_alg1,
                     Scheme::baseline_single_user, Scheme::baseline_interference_coordination,
                     Scheme::baseline_no_csit, Scheme::perfect_feedback})
        CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK_THROWS_AS(parse_scheme("zero_forcing"), InvalidInput);
    CHECK(parse_preset("fig4") == FigurePreset::fig4);
    CHECK_THROWS_AS(parse_preset("fig6"), InvalidInput);
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = [](auto tweak) {
        ExperimentConfig x;
        tweak(x);
        CHECK_THROWS_AS(x.validate(), ValidationError);
        CHECK_THROWS_AS(run_experiment(x), InvalidInput);
    };
    bad([](ExperimentConfig& x) { x.nu = 0.0; });
    bad([](ExperimentConfig& x) { x.nu = 1.5; });
    bad([](ExperimentConfig& x) { x.snr_grid_db.clear(); });
    bad([](ExperimentConfig& x) { x.snr_grid_db = {0, 10, 10}; });
    bad([](ExperimentConfig& x) { x.trials = 0; });
    bad([](ExperimentConfig& x) { x.codebook_realizations = 0; });
    bad([](ExperimentConfig& x) { x.bits = 21; });
    bad([](ExperimentConfig& x) { x.tau = 0.0; });
    bad([](ExperimentConfig& x) { x.alg1_init = 1.5; });
    bad([](ExperimentConfig& x) { x.dims.streams = 4; });
    bad([](ExperimentConfig& x) {
        x.scheme = Scheme::baseline_interference_coordination;
        x.dims = SystemDims{3, 4, 2, 2, 2};
    });
}

TEST_CASE("curves have the configured shape") {
    const ThroughputCurve c = run_experiment(small(Scheme::proposed_fixed_power, 20));
    CHECK(c.scheme_label == "proposed_fixed_power");
    CHECK(c.snr_db.size() == 3);
    CHECK(c.mean_bits_per_s_per_hz.size() == 3);
    CHECK(c.stderr_bits.size() == 3);
    CHECK(c.samples == 40);
    CHECK(c.bits == 8);
    CHECK(c.ne == 3);
    CHECK(c.np == 3);
    for (double s : c.stderr_bits) CHECK(s >= 0.0);
    for (std::size_t k = 1; k < 3; ++k) CHECK(c.mean_bits_per_s_per_hz[k] > c.mean_bits_per_s_per_hz[k - 1]);
}

TEST_CASE("curves are bit-identical across runs and worker counts") {
    for (Scheme s : {Scheme::proposed_ipc_alg1, Scheme::baseline_no_csit, Scheme::baseline_interference_coordination}) {
        const ExperimentConfig cfg = small(s, 60);
        setenv("COOPFB_THREADS", "1", 1);
        const ThroughputCurve one = run_experiment(cfg);
        setenv("COOPFB_THREADS", "3", 1);
        const ThroughputCurve three = run_experiment(cfg);
        unsetenv("COOPFB_THREADS");
        const ThroughputCurve again = run_experiment(cfg);
        CHECK(one.mean_bits_per_s_per_hz == three.mean_bits_per_s_per_hz);
        CHECK(one.stderr_bits == three.stderr_bits);
        CHECK(one.mean_bits_per_s_per_hz == again.mean_bits_per_s_per_hz);
    }
    ExperimentConfig other = small(Scheme::proposed_fixed_power, 60);
    const auto base = run_experiment(other).mean_bits_per_s_per_hz;
    other.master_seed = 2;
    CHECK(run_experiment(other).mean_bits_per_s_per_hz != base);
}

TEST_CASE("sample i is trial i mod T under codebook realization i div T") {
    ExperimentConfig cfg = small(Scheme::proposed_fixed_power, 5, 3);
    cfg.master_seed = 77;
    const auto samples = run_experiment_samples(cfg);
    REQUIRE(samples.size() == 15);
    const std::size_t t = 3, r = 2;
    const ChannelSet ch = draw_channel_set(derive_seed(77, Stream::channel, t, r), cfg.dims, cfg.nu);
    const Codebook cb = generate_rvq_codebook(derive_seed(77, Stream::codebook, r), 6, 3, 8);
    const auto tr = design_link_transceivers(ch, cfg.dims, &cb);
    for (std::size_t k = 0; k < 3; ++k) {
        const double p = std::pow(10.0, cfg.snr_grid_db[k] / 10.0);
        CHECK(samples[r * 5 + t][k] == doctest::Approx(compute_stream_metrics(ch, tr[0], tr[1], p, p).sum_rate()));
    }
}

TEST_CASE("perfect feedback without cross coupling matches the decoupled-link Monte Carlo") {
    // each link carries M streams over the top eigenmodes of an Ne x Np
    // i.i.d. CN(0,1) block
    ExperimentConfig cfg = small(Scheme::perfect_feedback, 4000, 1);
    cfg.nu = 1e-9;
    const ThroughputCurve sim = run_experiment(cfg);

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const int n = 8000;
    std::vector<std::vector<double>> vals(3, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        double sums[3] = {0, 0, 0};
        for (int link = 0; link < 2; ++link) {
            ComplexMatrix h(3, 3);
            for (Eigen::Index a = 0; a < 3; ++a)
                for (Eigen::Index b = 0; b < 3; ++b) h(a, b) = {g(rng), g(rng)};
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.adjoint() * h);
            const auto ev = es.eigenvalues();  // ascending
            for (int k = 0; k < 3; ++k) {
                const double p = std::pow(10.0, cfg.snr_grid_db[k] / 10.0);
                sums[k] += std::log2(1.0 + p * ev(2)) + std::log2(1.0 + p * ev(1));
            }
        }
        for (int k = 0; k < 3; ++k) vals[k][i] = sums[k];
    }
    for (int k = 0; k < 3; ++k) {
        double m = 0.0, ss = 0.0;
        for (double v : vals[k]) m += v;
        m /= n;
        for (double v : vals[k]) ss += (v - m) * (v - m);
        const double se = std::sqrt(ss / (n - 1) / n);
        CAPTURE(k);
        CHECK(std::abs(sim.mean_bits_per_s_per_hz[k] - m) < 3.0 * combined(se, sim.stderr_bits[k]));
    }
}

TEST_CASE("two more feedback bits add about 0.7 bit/s/Hz at 20 dB") {
    ExperimentConfig cfg = small(Scheme::proposed_fixed_power, 300, 4);
    cfg.snr_grid_db = {20};
    cfg.bits = 6;
    const ThroughputCurve b6 = run_experiment(cfg);
    cfg.bits = 8;
    const ThroughputCurve b8 = run_experiment(cfg);
    const double gap = b8.mean_bits_per_s_per_hz[0] - b6.mean_bits_per_s_per_hz[0];
    MESSAGE("B8 - B6 gap " << gap);
    CHECK(gap == doctest::Approx(0.7).epsilon(0.4 / 0.7));
}

TEST_CASE("four times the samples halves the standard error") {
    ExperimentConfig cfg = small(Scheme::proposed_fixed_power, 200, 2);
    const ThroughputCurve a = run_experiment(cfg);
    cfg.trials = 800;
    const ThroughputCurve b = run_experiment(cfg);
    for (std::size_t k = 0; k < 3; ++k) CHECK(a.stderr_bits[k] / b.stderr_bits[k] == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("quantized feedback never beats perfect feedback") {
    const ThroughputCurve perfect = run_experiment(small(Scheme::perfect_feedback, 300));
    for (Scheme s : {Scheme::proposed_fixed_power, Scheme::proposed_ipc_margin, Scheme::proposed_ipc_alg1}) {
        const ThroughputCurve q = run_experiment(small(s, 300));
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(q.mean_bits_per_s_per_hz[k] <=
                  perfect.mean_bits_per_s_per_hz[k] + 2.0 * combined(q.stderr_bits[k], perfect.stderr_bits[k]));
    }
}

TEST_CASE("measured interference never exceeds its analytic bound") {
    for (Scheme s : {Scheme::perfect_feedback, Scheme::proposed_fixed_power, Scheme::proposed_ipc_margin,
                     Scheme::proposed_ipc_alg1}) {
        ExperimentConfig cfg = small(s, 150);
        cfg.check_bounds = true;
        cfg.snr_grid_db = {0, 20, 40};
        CHECK_NOTHROW(run_experiment(cfg));
        cfg.dims.equalizer_width = 2;
        CHECK_NOTHROW(run_experiment(cfg));
    }
}

TEST_CASE("figure presets") {
    for (FigurePreset p : {FigurePreset::fig2, FigurePreset::fig3, FigurePreset::fig4, FigurePreset::fig5}) {
        const auto configs = figure_preset_configs(p);
        std::set<std::string> labels;
        for (const auto& c : configs) {
            CHECK_NOTHROW(c.validate());
            CHECK(labels.insert(c.curve_label()).second);
            CHECK(c.name == preset_name(p));
            CHECK(c.dims.tx_antennas == 6);
            CHECK(c.dims.rx_antennas == 3);
            CHECK(c.dims.streams == 2);
        }
    }
    const auto f2 = figure_preset_configs(FigurePreset::fig2);
    REQUIRE(f2.size() == 2);
    CHECK(f2[0].dims.equalizer_width == 2);
    CHECK(f2[1].dims.equalizer_width == 3);
    const auto f3 = figure_preset_configs(FigurePreset::fig3);
    REQUIRE(f3.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(f3[i].bits == 4 + 2 * static_cast<int>(i));
        CHECK(f3[i].dims.equalizer_width == 3);
    }
    const auto f4 = figure_preset_configs(FigurePreset::fig4);
    REQUIRE(f4.size() == 5);
    CHECK(f4[1].scheme == Scheme::proposed_ipc_margin);
    CHECK(f4[1].tau == 2.0);
    CHECK(f4[4].alg1_iters == 20);
    CHECK(f4[4].alg1_step == 1.0);
    CHECK(f4[4].alg1_init == 0.5);
    const auto f5 = figure_preset_configs(FigurePreset::fig5);
    CHECK(f5[1].scheme == Scheme::baseline_interference_coordination);
    CHECK(f5[2].scheme == Scheme::baseline_no_csit);

    PresetOverrides ov;
    ov.master_seed = 9;
    ov.trials = 7;
    ov.codebook_realizations = 3;
    ov.snr_grid_db = std::vector<double>{5, 15};
    for (const auto& c : figure_preset_configs(FigurePreset::fig3, ov)) {
        CHECK(c.master_seed == 9);
        CHECK(c.trials == 7);
        CHECK(c.codebook_realizations == 3);
        CHECK(c.snr_grid_db == std::vector<double>{5, 15});
    }
    const auto curves = run_figure_preset(FigurePreset::fig2, ov);
    REQUIRE(curves.size() == 2);
    CHECK(curves[0].scheme_label == "proposed_fixed_power_ne2");
    CHECK(curves[0].samples == 21);
}

TEST_CASE("fixed-margin throughput agrees with the realisation-level A_IM mean") {
    const MeanEstimate a = simulate_a_im(SystemDims{}, 0.5, 2.0, 100.0, 8, 200, 2, 3);
    const MeanEstimate b = simulate_a_im(SystemDims{}, 0.5, 2.0, 100.0, 8, 200, 2, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.mean > 0.0);
    CHECK(a.stderr_value > 0.0);
    CHECK(simulate_a_im(SystemDims{}, 0.5, 10.0, 100.0, 8, 200, 2, 3).mean > a.mean);
    CHECK_THROWS_AS(simulate_a_im(SystemDims{}, 0.5, 2.0, 0.0, 8, 200, 2, 3), InvalidInput);
}

TEST_CASE("feedback bit scaling") {
    BitScalingOptions opt;
    opt.trials = 150;
    opt.codebook_realizations = 2;
    opt.eig_trials = 20000;
    const std::vector<double> grid = {-6, -4, -2, 0, 3};
    const auto rows = run_bit_scaling_check(1.0, grid, 14, opt);
    REQUIRE(rows.size() >= 3);
    for (const auto& r : rows) {
        CHECK(r.bits <= 14);
        CHECK(r.bits >= 0);
        CHECK(r.bits == std::max(0, static_cast<int>(std::ceil(r.required_bits))));
        CHECK(r.delta_c <= r.c + 0.5 + 2.0 * r.delta_c_stderr);
    }
    // B grows like Z log2 P with Z = Np (L - Np) = 9
    const auto& lo = rows[rows.size() - 2];
    const auto& hi = rows.back();
    const double slope = (hi.required_bits - lo.required_bits) / ((hi.p_max_db - lo.p_max_db) / 10.0 * std::log2(10.0));
    CHECK(slope == doctest::Approx(9.0).epsilon(0.15));
    CHECK(rows.back().p_max_db <= 0.0);  // 3 dB needs more than 14 bits
    CHECK_THROWS_AS(run_bit_scaling_check(1.0, grid, 17, opt), InvalidInput);
    CHECK_THROWS_AS(run_bit_scaling_check(0.0, grid, 14, opt), InvalidInput);
}

TEST_CASE("noise-limited regime: few bits cost little at 0 dB") {
    ExperimentConfig cfg = small(Scheme::proposed_fixed_power, 400, 2);
    cfg.snr_grid_db = {0, 20};
    cfg.bits = 4;
    const auto q = run_experiment(cfg);
    cfg.scheme = Scheme::perfect_feedback;
    const auto p = run_experiment(cfg);
    const double low = p.mean_bits_per_s_per_hz[0] - q.mean_bits_per_s_per_hz[0];
    const double high = p.mean_bits_per_s_per_hz[1] - q.mean_bits_per_s_per_hz[1];
    MESSAGE("4-bit loss " << low << " at 0 dB, " << high << " at 20 dB");
    CHECK(low < 0.15 * high);
}
