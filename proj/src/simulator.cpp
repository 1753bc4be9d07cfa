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

#include "coopfb/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "coopfb/codebook.hpp"
#include "coopfb/errors.hpp"
#include "coopfb/parallel.hpp"
#include "coopfb/transceiver.hpp"
#include "coopfb/wishart.hpp"

namespace coopfb {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 7> kSchemeNames = {{
    {Scheme::proposed_fixed_power, "proposed_fixed_power"},
    {Scheme::proposed_ipc_margin, "proposed_ipc_margin"},
    {Scheme::proposed_ipc_alg1, "proposed_ipc_alg1"},
    {Scheme::baseline_single_user, "baseline_single_user"},
    {Scheme::baseline_interference_coordination, "baseline_interference_coordination"},
    {Scheme::baseline_no_csit, "baseline_no_csit"},
    {Scheme::perfect_feedback, "perfect_feedback"},
}};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

bool uses_codebook(Scheme s) {
    return s == Scheme::proposed_fixed_power || s == Scheme::proposed_ipc_margin || s == Scheme::proposed_ipc_alg1 ||
           s == Scheme::baseline_interference_coordination;
}

void check_bounds(const StreamMetrics& sm) {
    for (const auto& link : sm.links) {
        const double slack = 1e-9 * std::max(1.0, link.interference_bound);
        if ((link.interference_power.array() > link.interference_bound + slack).any())
            throw ValidationError("per-stream interference exceeds its analytic bound");
        if (link.interference_power.sum() > link.aggregate_bound + slack)
            throw ValidationError("aggregate interference exceeds its analytic bound");
    }
}

// Sum rates at every SNR point for one channel/codebook sample.
std::vector<double> sample_rates(const ExperimentConfig& cfg, const std::vector<double>& p_grid, const Codebook* cb,
                                 std::size_t trial, std::size_t realization) {
    const ChannelSet ch =
        draw_channel_set(derive_seed(cfg.master_seed, Stream::channel, trial, realization), cfg.dims, cfg.nu);
    const int M = cfg.dims.streams;
    std::vector<double> out(p_grid.size());

    switch (cfg.scheme) {
    case Scheme::perfect_feedback:
    case Scheme::proposed_fixed_power:
    case Scheme::proposed_ipc_margin:
    case Scheme::proposed_ipc_alg1: {
        const auto t = design_link_transceivers(ch, cfg.dims, cfg.scheme == Scheme::perfect_feedback ? nullptr : cb);
        const LinkScalars s = link_scalars(t, cfg.nu);
        for (std::size_t i = 0; i < p_grid.size(); ++i) {
            const double p = p_grid[i];
            double p1 = p, p2 = p;
            if (cfg.scheme == Scheme::proposed_ipc_margin) {
                std::tie(p1, p2) = ipc_fixed_margin(s, cfg.tau, p);
            } else if (cfg.scheme == Scheme::proposed_ipc_alg1) {
                IpcOptions opt;
                opt.step = cfg.alg1_step * p;
                opt.p_max = p;
                opt.max_iter = cfg.alg1_iters;
                opt.tol = cfg.alg1_tol;
                opt.variant = cfg.alg1_variant;
                const IpcResult r = ipc_algorithm1(s, {cfg.alg1_init * p, cfg.alg1_init * p}, opt);
                p1 = r.best.p1;
                p2 = r.best.p2;
            }
            const StreamMetrics sm = compute_stream_metrics(ch, t[0], t[1], p1, p2);
            if (cfg.check_bounds) check_bounds(sm);
            out[i] = sm.sum_rate();
        }
        return out;
    }
    case Scheme::baseline_single_user:
    case Scheme::baseline_interference_coordination:
    case Scheme::baseline_no_csit: {
        std::array<Beamformers, 2> bf;
        if (cfg.scheme == Scheme::baseline_single_user)
            bf = design_single_user(ch, M);
        else if (cfg.scheme == Scheme::baseline_interference_coordination)
            bf = design_interference_coordination(ch, M, cb);
        else
            bf = design_no_csit(ch, M, derive_seed(cfg.master_seed, Stream::random_precoder, trial, realization));
        for (std::size_t i = 0; i < p_grid.size(); ++i) out[i] = evaluate_beamformers(ch, bf, p_grid[i], p_grid[i]).sum_rate();
        return out;
    }
    }
    return out;
}

std::vector<Codebook> make_codebooks(const ExperimentConfig& cfg) {
    std::vector<Codebook> books;
    if (!uses_codebook(cfg.scheme)) return books;
    const auto reps = static_cast<std::size_t>(cfg.codebook_realizations);
    books.resize(reps);
    const bool baseline = cfg.scheme == Scheme::baseline_interference_coordination;
    const int cols = baseline ? cfg.dims.streams : cfg.dims.precoder_width;
    parallel_for(reps, [&](std::size_t r) {
        const auto seed = derive_seed(cfg.master_seed, baseline ? Stream::baseline_codebook : Stream::codebook, r);
        books[r] = generate_rvq_codebook(seed, cfg.dims.tx_antennas, cols, cfg.bits);
    });
    return books;
}

MeanEstimate summarize(const std::vector<double>& x) {
    MeanEstimate e;
    if (x.empty()) return e;
    long double sum = 0.0L;
    for (double v : x) sum += v;
    const long double mean = sum / static_cast<long double>(x.size());
    long double ss = 0.0L;
    for (double v : x) ss += (v - mean) * (v - mean);
    e.mean = static_cast<double>(mean);
    if (x.size() > 1)
        e.stderr_value = static_cast<double>(std::sqrt(ss / static_cast<long double>(x.size() - 1)) /
                                             std::sqrt(static_cast<long double>(x.size())));
    return e;
}

}  // namespace

std::string_view scheme_name(Scheme s) {
    for (const auto& [k, v] : kSchemeNames)
        if (k == s) return v;
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (const auto& [k, v] : kSchemeNames)
        if (v == name) return k;
    throw InvalidInput("unknown scheme '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError(what); };
    try {
        dims.validate();
    } catch (const InvalidInput& e) {
        fail(e.what());
    }
    if (!(nu > 0.0 && nu <= 1.0)) fail("nu must lie in (0, 1]");
    if (snr_grid_db.empty()) fail("snr grid must not be empty");
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (!std::isfinite(snr_grid_db[i])) fail("snr grid entries must be finite");
        if (i > 0 && !(snr_grid_db[i] > snr_grid_db[i - 1])) fail("snr grid must be strictly increasing");
    }
    if (trials < 1) fail("trials must be >= 1");
    if (codebook_realizations < 1) fail("codebook_realizations must be >= 1");
    if (bits < 0 || bits > kMaxCodebookBits) fail("bits must lie in [0, 20]");
    if (!(tau > 0.0)) fail("tau must be positive");
    if (!(alg1_step > 0.0)) fail("alg1 step must be positive");
    if (!(alg1_init >= 0.0 && alg1_init <= 1.0)) fail("alg1 init must lie in [0, 1]");
    if (alg1_iters < 1) fail("alg1 iterations must be >= 1");
    if (!(alg1_tol >= 0.0)) fail("alg1 tolerance must be nonnegative");
    if (scheme == Scheme::baseline_interference_coordination) {
        const int L = dims.tx_antennas;
        const int M = dims.streams;
        if (L - M < M) fail("interference coordination needs L - M >= M");
    }
}

std::vector<std::vector<double>> run_experiment_samples(const ExperimentConfig& cfg) {
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        throw InvalidInput(std::string("run_experiment: ") + e.what());
    }
    std::vector<double> p_grid;
    for (double db : cfg.snr_grid_db) p_grid.push_back(db_to_linear(db));
    const std::vector<Codebook> books = make_codebooks(cfg);

    const std::size_t reps = static_cast<std::size_t>(cfg.codebook_realizations);
    std::vector<std::vector<double>> samples(reps * cfg.trials);
    parallel_for(samples.size(), [&](std::size_t i) {
        const std::size_t r = i / cfg.trials;
        const std::size_t t = i % cfg.trials;
        samples[i] = sample_rates(cfg, p_grid, books.empty() ? nullptr : &books[r], t, r);
    });
    return samples;
}

ThroughputCurve run_experiment(const ExperimentConfig& cfg) {
    const auto samples = run_experiment_samples(cfg);
    ThroughputCurve c;
    c.scheme_label = cfg.curve_label();
    c.snr_db = cfg.snr_grid_db;
    c.samples = samples.size();
    c.bits = cfg.bits;
    c.ne = cfg.dims.equalizer_width;
    c.np = cfg.dims.precoder_width;
    c.tau = cfg.tau;
    std::vector<double> column(samples.size());
    for (std::size_t k = 0; k < c.snr_db.size(); ++k) {
        for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i][k];
        const MeanEstimate e = summarize(column);
        c.mean_bits_per_s_per_hz.push_back(e.mean);
        c.stderr_bits.push_back(e.stderr_value);
    }
    return c;
}

FigurePreset parse_preset(std::string_view name) {
    if (name == "fig2") return FigurePreset::fig2;
    if (name == "fig3") return FigurePreset::fig3;
    if (name == "fig4") return FigurePreset::fig4;
    if (name == "fig5") return FigurePreset::fig5;
    throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

std::string_view preset_name(FigurePreset p) {
    switch (p) {
    case FigurePreset::fig2: return "fig2";
    case FigurePreset::fig3: return "fig3";
    case FigurePreset::fig4: return "fig4";
    case FigurePreset::fig5: return "fig5";
    }
    return "unknown";
}

std::vector<ExperimentConfig> figure_preset_configs(FigurePreset p, const PresetOverrides& ov) {
    ExperimentConfig base;
    base.name = std::string(preset_name(p));
    if (ov.master_seed) base.master_seed = *ov.master_seed;
    if (ov.trials) base.trials = *ov.trials;
    if (ov.codebook_realizations) base.codebook_realizations = *ov.codebook_realizations;
    if (ov.snr_grid_db) base.snr_grid_db = *ov.snr_grid_db;

    std::vector<ExperimentConfig> out;
    auto add = [&](Scheme s, std::string label, auto&& tweak) {
        ExperimentConfig c = base;
        c.scheme = s;
        c.label = std::move(label);
        tweak(c);
        out.push_back(std::move(c));
    };
    auto same = [](ExperimentConfig&) {};

    switch (p) {
    case FigurePreset::fig2:
        for (int ne : {2, 3})
            add(Scheme::proposed_fixed_power, "proposed_fixed_power_ne" + std::to_string(ne),
                [ne](ExperimentConfig& c) { c.dims.equalizer_width = ne; });
        break;
    case FigurePreset::fig3:
        for (int b : {4, 6, 8, 10})
            add(Scheme::proposed_fixed_power, "proposed_fixed_power_b" + std::to_string(b),
                [b](ExperimentConfig& c) { c.bits = b; });
        break;
    case FigurePreset::fig4:
        add(Scheme::perfect_feedback, "perfect_feedback", same);
        add(Scheme::proposed_ipc_margin, "proposed_ipc_margin", same);
        for (int it : {1, 5, 20})
            add(Scheme::proposed_ipc_alg1, "proposed_ipc_alg1_it" + std::to_string(it), [it](ExperimentConfig& c) {
                c.alg1_iters = it;
                c.alg1_step = 1.0;
                c.alg1_init = 0.5;
            });
        break;
    case FigurePreset::fig5:
        add(Scheme::proposed_fixed_power, "proposed_fixed_power", same);
        add(Scheme::baseline_interference_coordination, "baseline_interference_coordination", same);
        add(Scheme::baseline_no_csit, "baseline_no_csit", same);
        add(Scheme::baseline_single_user, "baseline_single_user", same);
        break;
    }
    return out;
}

std::vector<ThroughputCurve> run_figure_preset(FigurePreset p, const PresetOverrides& ov) {
    std::vector<ThroughputCurve> curves;
    for (const auto& cfg : figure_preset_configs(p, ov)) curves.push_back(run_experiment(cfg));
    return curves;
}

MeanEstimate simulate_a_im(const SystemDims& dims, double nu, double tau, double p_max, int bits, std::size_t trials,
                           int codebook_realizations, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.dims = dims;
    cfg.nu = nu;
    cfg.tau = tau;
    cfg.bits = bits;
    cfg.trials = trials;
    cfg.codebook_realizations = codebook_realizations;
    cfg.master_seed = seed;
    cfg.validate();
    if (!(p_max > 0.0)) throw InvalidInput("simulate_a_im: p_max must be positive");
    const std::vector<Codebook> books = make_codebooks(cfg);
    const auto reps = static_cast<std::size_t>(codebook_realizations);
    std::vector<double> values(reps * trials);
    parallel_for(values.size(), [&](std::size_t i) {
        const std::size_t r = i / trials;
        const std::size_t t = i % trials;
        const ChannelSet ch = draw_channel_set(derive_seed(seed, Stream::channel, t, r), dims, nu);
        const auto tr = design_link_transceivers(ch, dims, &books[r]);
        values[i] = achievable_throughput_im(link_scalars(tr, nu), tau, p_max);
    });
    return summarize(values);
}

std::vector<BitScalingRow> run_bit_scaling_check(double c, const std::vector<double>& p_grid_db, int cap_bits,
                                                 const BitScalingOptions& opt) {
    if (cap_bits < 0 || cap_bits > 16) throw InvalidInput("run_bit_scaling_check: cap_bits must lie in [0, 16]");
    if (!(c > 0.0)) throw InvalidInput("run_bit_scaling_check: c must be positive");
    if (opt.trials < 1 || opt.codebook_realizations < 1) throw InvalidInput("run_bit_scaling_check: empty budget");
    opt.dims.validate();
    const int L = opt.dims.tx_antennas;
    const int ne = opt.dims.equalizer_width;
    const double mean_eig = mean_smallest_eigenvalue(L, opt.eig_trials, opt.master_seed);

    std::vector<BitScalingRow> rows;
    for (double db : p_grid_db) {
        BitScalingRow row;
        row.p_max_db = db;
        row.c = c;
        row.required_bits = required_feedback_bits(db_to_linear(db), opt.nu, c, L, ne, mean_eig);
        row.bits = std::max(0, static_cast<int>(std::ceil(row.required_bits)));
        if (row.bits <= cap_bits) rows.push_back(row);
    }

    std::map<int, std::vector<Codebook>> books;
    for (const auto& row : rows) {
        if (books.count(row.bits)) continue;
        ExperimentConfig cfg;
        cfg.dims = opt.dims;
        cfg.bits = row.bits;
        cfg.codebook_realizations = opt.codebook_realizations;
        cfg.master_seed = opt.master_seed;
        books[row.bits] = make_codebooks(cfg);
    }

    const auto reps = static_cast<std::size_t>(opt.codebook_realizations);
    const std::size_t n = reps * opt.trials;
    std::vector<std::vector<double>> loss(n, std::vector<double>(rows.size()));
    parallel_for(n, [&](std::size_t i) {
        const std::size_t r = i / opt.trials;
        const std::size_t t = i % opt.trials;
        const ChannelSet ch = draw_channel_set(derive_seed(opt.master_seed, Stream::channel, t, r), opt.dims, opt.nu);
        const auto perfect = design_link_transceivers(ch, opt.dims, nullptr);
        std::map<int, std::array<LinkTransceiver, 2>> quantized;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const int b = rows[k].bits;
            if (!quantized.count(b)) quantized[b] = design_link_transceivers(ch, opt.dims, &books[b][r]);
            const double p = db_to_linear(rows[k].p_max_db);
            const auto& q = quantized[b];
            loss[i][k] = compute_stream_metrics(ch, perfect[0], perfect[1], p, p).sum_rate() -
                         compute_stream_metrics(ch, q[0], q[1], p, p).sum_rate();
        }
    });
    std::vector<double> column(n);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) column[i] = loss[i][k];
        const MeanEstimate e = summarize(column);
        rows[k].delta_c = e.mean;
        rows[k].delta_c_stderr = e.stderr_value;
    }
    return rows;
}

}  // namespace coopfb
