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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopfb/codebook.hpp"
#include "coopfb/config.hpp"
#include "coopfb/errors.hpp"
#include "coopfb/simulator.hpp"
#include "coopfb/wishart.hpp"

namespace fs = std::filesystem;
using namespace coopfb;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string joined_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
    return s;
}

// Writes one CSV per curve plus manifest.txt under out/name.
void write_outputs(const fs::path& out, const std::string& name, const std::vector<ExperimentConfig>& configs,
                   const std::vector<ThroughputCurve>& curves, RunManifest manifest) {
    const fs::path dir = out / name;
    fs::create_directories(dir);
    for (const auto& c : curves) {
        const fs::path file = dir / (c.scheme_label + ".csv");
        std::ofstream os(file, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + file.string());
        write_curve_csv(os, c);
        manifest.outputs.push_back(file.string());
    }
    manifest.configs = configs;
    manifest.finished = utc_timestamp();
    std::ofstream ms(dir / "manifest.txt", std::ios::binary);
    if (!ms) throw std::runtime_error("cannot write manifest in " + dir.string());
    write_manifest(ms, manifest);
}

void check_unique_labels(const std::vector<ExperimentConfig>& configs) {
    std::set<std::string> seen;
    for (const auto& c : configs)
        if (!seen.insert(c.curve_label()).second) throw ValidationError("duplicate curve label " + c.curve_label());
}

int run_configs(const std::vector<ExperimentConfig>& configs, const std::string& name, const fs::path& out,
                RunManifest manifest) {
    check_unique_labels(configs);
    std::vector<ThroughputCurve> curves;
    for (const auto& cfg : configs) {
        std::cerr << "running " << name << "/" << cfg.curve_label() << "\n";
        curves.push_back(run_experiment(cfg));
    }
    write_outputs(out, name, configs, curves, std::move(manifest));
    std::cout << "wrote " << curves.size() << " curve(s) to " << (out / name).string() << "\n";
    return 0;
}

void print_bits_table(const std::vector<BitScalingRow>& rows) {
    std::printf("p_max_db,required_bits,bits,delta_c,delta_c_stderr,c\n");
    for (const auto& r : rows)
        std::printf("%.6g,%.6g,%d,%.6g,%.6g,%.6g\n", r.p_max_db, r.required_bits, r.bits, r.delta_c,
                    r.delta_c_stderr, r.c);
}

void print_wishart_table(std::size_t trials, std::uint64_t seed) {
    struct Case {
        int q1, q2, k;
    };
    const Case cases[] = {{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {2, 2, 2}, {3, 3, 3}, {3, 3, 2}};
    constexpr double p_top = 0.01;
    // at least four halvings of the probe level
    const std::size_t min_count = std::clamp<std::size_t>(static_cast<std::size_t>(trials * p_top / 16), 10, 200);
    std::printf("q1,q2,k,a_k,d_k,empirical_slope,empirical_level\n");
    for (const auto& c : cases) {
        const WishartExpansion e = wishart_expansion_constants(c.q1, c.q2, c.k);
        const SmallXFit fit = fit_small_x_cdf(c.q1, c.q2, c.k, trials, seed, p_top, min_count);
        std::printf("%d,%d,%d,%.6g,%d,%.6g,%.6g\n", c.q1, c.q2, c.k, e.a_k, e.d_k, fit.slope, fit.level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coopfb: cooperative precoder feedback simulator for two-user MIMO interference channels"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment described by a config file");
    std::string config_path;
    std::optional<std::uint64_t> run_seed;
    std::string run_out = "out";
    run->add_option("--config", config_path, "INI config file")->required();
    run->add_option("--seed", run_seed, "Override the master seed");
    run->add_option("--out", run_out, "Output directory")->capture_default_str();

    auto* preset = app.add_subcommand("preset", "Reproduce one of the throughput figures");
    std::string preset_arg;
    PresetOverrides ov;
    std::string preset_out = "out";
    preset->add_option("name", preset_arg, "fig2 | fig3 | fig4 | fig5")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
    preset->add_option("--seed", ov.master_seed, "Master seed");
    preset->add_option("--out", preset_out, "Output directory")->capture_default_str();
    preset->add_option("--trials", ov.trials, "Channel trials per codebook realization")->check(CLI::PositiveNumber);
    preset->add_option("--codebooks", ov.codebook_realizations, "Codebook realizations")->check(CLI::PositiveNumber);
    preset->add_option("--snr-db", ov.snr_grid_db, "SNR grid in dB")->delimiter(',');

    auto* bits = app.add_subcommand("bits", "Feedback-bit scaling table");
    std::vector<double> pmax_db;
    double loss = 1.0;
    int cap_bits = 14;
    BitScalingOptions bits_opt;
    bits->add_option("--pmax-db", pmax_db, "Comma separated P_max values in dB")->required()->delimiter(',');
    bits->add_option("--c", loss, "Throughput loss budget in bit/s/Hz")->required()->check(CLI::PositiveNumber);
    bits->add_option("--cap", cap_bits, "Largest bit count simulated")->capture_default_str()->check(CLI::Range(0, 16));
    bits->add_option("--trials", bits_opt.trials, "Channel trials per codebook realization")->capture_default_str();
    bits->add_option("--codebooks", bits_opt.codebook_realizations, "Codebook realizations")->capture_default_str();
    bits->add_option("--seed", bits_opt.master_seed, "Master seed")->capture_default_str();

    auto* wcheck = app.add_subcommand("wishart-check", "Compare eigenvalue CDF constants with Monte Carlo");
    std::size_t w_trials = 200000;
    std::uint64_t w_seed = 1;
    wcheck->add_option("--trials", w_trials, "Monte Carlo draws per case")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{2000}, std::size_t{100000000}));
    wcheck->add_option("--seed", w_seed, "Seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    RunManifest manifest;
    manifest.command = joined_args(argc, argv);
    manifest.started = utc_timestamp();
    manifest.version = version_string();

    try {
        if (*run) {
            ExperimentConfig cfg;
            try {
                cfg = parse_config(config_path);
                if (run_seed) cfg.master_seed = *run_seed;
            } catch (const ParseError& e) {
                std::cerr << "config error: " << e.what();
                if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
                if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
                std::cerr << "\n" << run->help();
                return kExitUsage;
            } catch (const ValidationError& e) {
                std::cerr << "config error: " << e.what() << "\n";
                return kExitUsage;
            }
            manifest.master_seed = cfg.master_seed;
            return run_configs({cfg}, cfg.name, run_out, manifest);
        }
        if (*preset) {
            const FigurePreset p = parse_preset(preset_arg);
            const auto configs = figure_preset_configs(p, ov);
            for (const auto& c : configs) c.validate();
            manifest.master_seed = configs.front().master_seed;
            return run_configs(configs, std::string(preset_name(p)), preset_out, manifest);
        }
        if (*bits) {
            print_bits_table(run_bit_scaling_check(loss, pmax_db, cap_bits, bits_opt));
            return 0;
        }
        if (*wcheck) {
            print_wishart_table(w_trials, w_seed);
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
