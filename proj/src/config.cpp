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

#include "coopfb/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "coopfb/errors.hpp"

#ifndef COOPFB_VERSION
#define COOPFB_VERSION "0.0.0"
#endif

namespace coopfb {

namespace {

namespace pt = boost::property_tree;

// 1-based line of section.key in the raw text, 0 if not found.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream is(text);
    std::string line, current;
    for (int n = 1; std::getline(is, line); ++n) {
        boost::algorithm::trim(line);
        if (line.empty() || line[0] == ';' || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            current = boost::algorithm::trim_copy(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq != std::string::npos && current == section && boost::algorithm::trim_copy(line.substr(0, eq)) == key)
            return n;
    }
    return 0;
}

template <typename T>
T parse_number(const std::string& raw, const std::string& field, int line) {
    const std::string s = boost::algorithm::trim_copy(raw);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("cannot read '" + s + "' as a number", line, field);
    return v;
}

std::vector<double> parse_list(const std::string& raw, const std::string& field, int line) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(item, field, line));
    if (out.empty()) throw ParseError("empty list", line, field);
    return out;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << v;
    return os.str();
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&, int)>;

template <typename T, typename Member>
Setter number(Member member) {
    return [member](ExperimentConfig& c, const std::string& v, const std::string& f, int l) {
        std::invoke(member, c) = parse_number<T>(v, f, l);
    };
}

const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"run",
         {
             {"name", [](ExperimentConfig& c, const std::string& v, const std::string& f, int l) {
                  c.name = boost::algorithm::trim_copy(v);
                  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
                      throw ParseError("name must be a non-empty file name", l, f);
              }},
             {"label", [](ExperimentConfig& c, const std::string& v, const std::string&, int) {
                  c.label = boost::algorithm::trim_copy(v);
              }},
             {"scheme", [](ExperimentConfig& c, const std::string& v, const std::string& f, int l) {
                  try {
                      c.scheme = parse_scheme(boost::algorithm::trim_copy(v));
                  } catch (const InvalidInput& e) {
                      throw ParseError(e.what(), l, f);
                  }
              }},
             {"seed", number<std::uint64_t>([](ExperimentConfig& c) -> auto& { return c.master_seed; })},
             {"check_bounds", [](ExperimentConfig& c, const std::string& v, const std::string& f, int l) {
                  const std::string s = boost::algorithm::trim_copy(v);
                  if (s == "true" || s == "1") c.check_bounds = true;
                  else if (s == "false" || s == "0") c.check_bounds = false;
                  else throw ParseError("expected true or false", l, f);
              }},
         }},
        {"system",
         {
             {"L", number<int>([](ExperimentConfig& c) -> auto& { return c.dims.tx_antennas; })},
             {"K", number<int>([](ExperimentConfig& c) -> auto& { return c.dims.rx_antennas; })},
             {"M", number<int>([](ExperimentConfig& c) -> auto& { return c.dims.streams; })},
             {"Np", number<int>([](ExperimentConfig& c) -> auto& { return c.dims.precoder_width; })},
             {"Ne", number<int>([](ExperimentConfig& c) -> auto& { return c.dims.equalizer_width; })},
             {"nu", number<double>([](ExperimentConfig& c) -> auto& { return c.nu; })},
         }},
        {"sweep",
         {
             {"snr_db", [](ExperimentConfig& c, const std::string& v, const std::string& f, int l) {
                  c.snr_grid_db = parse_list(v, f, l);
              }},
             {"bits", number<int>([](ExperimentConfig& c) -> auto& { return c.bits; })},
             {"trials", number<std::size_t>([](ExperimentConfig& c) -> auto& { return c.trials; })},
             {"codebooks", number<int>([](ExperimentConfig& c) -> auto& { return c.codebook_realizations; })},
         }},
        {"ipc",
         {
             {"tau", number<double>([](ExperimentConfig& c) -> auto& { return c.tau; })},
             {"alg1_step", number<double>([](ExperimentConfig& c) -> auto& { return c.alg1_step; })},
             {"alg1_init", number<double>([](ExperimentConfig& c) -> auto& { return c.alg1_init; })},
             {"alg1_iters", number<int>([](ExperimentConfig& c) -> auto& { return c.alg1_iters; })},
             {"alg1_tol", number<double>([](ExperimentConfig& c) -> auto& { return c.alg1_tol; })},
             {"alg1_slope", [](ExperimentConfig& c, const std::string& v, const std::string& f, int l) {
                  const std::string s = boost::algorithm::trim_copy(v);
                  if (s == "exact") c.alg1_variant = SlopeVariant::exact;
                  else if (s == "printed") c.alg1_variant = SlopeVariant::printed;
                  else throw ParseError("expected exact or printed", l, f);
              }},
         }},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(e.message(), static_cast<int>(e.line()), "");
    }

    ExperimentConfig cfg;
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        const auto sec = table.find(section);
        if (!body.data().empty()) throw ParseError("key outside any section", line_of(text, "", section), section);
        if (sec == table.end()) throw ParseError("unknown section", 0, section);
        for (const auto& [key, value] : body) {
            const std::string field = section + "." + key;
            const int line = line_of(text, section, key);
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) throw ParseError("unknown key", line, field);
            it->second(cfg, value.data(), field, line);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string(), 0, "");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "[run]\n";
    os << "name = " << cfg.name << "\n";
    if (!cfg.label.empty()) os << "label = " << cfg.label << "\n";
    os << "scheme = " << scheme_name(cfg.scheme) << "\n";
    os << "seed = " << cfg.master_seed << "\n";
    os << "check_bounds = " << (cfg.check_bounds ? "true" : "false") << "\n\n";
    os << "[system]\n";
    os << "L = " << cfg.dims.tx_antennas << "\n";
    os << "K = " << cfg.dims.rx_antennas << "\n";
    os << "M = " << cfg.dims.streams << "\n";
    os << "Np = " << cfg.dims.precoder_width << "\n";
    os << "Ne = " << cfg.dims.equalizer_width << "\n";
    os << "nu = " << fmt_double(cfg.nu) << "\n\n";
    os << "[sweep]\n";
    os << "snr_db = ";
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) os << (i ? "," : "") << fmt_double(cfg.snr_grid_db[i]);
    os << "\n";
    os << "bits = " << cfg.bits << "\n";
    os << "trials = " << cfg.trials << "\n";
    os << "codebooks = " << cfg.codebook_realizations << "\n\n";
    os << "[ipc]\n";
    os << "tau = " << fmt_double(cfg.tau) << "\n";
    os << "alg1_step = " << fmt_double(cfg.alg1_step) << "\n";
    os << "alg1_init = " << fmt_double(cfg.alg1_init) << "\n";
    os << "alg1_iters = " << cfg.alg1_iters << "\n";
    os << "alg1_tol = " << fmt_double(cfg.alg1_tol) << "\n";
    os << "alg1_slope = " << (cfg.alg1_variant == SlopeVariant::exact ? "exact" : "printed") << "\n";
}

void write_curve_csv(std::ostream& os, const ThroughputCurve& c) {
    os << "snr_db,scheme,mean_sum_tput,stderr,trials,bits,ne,np,tau\n";
    char buf[256];
    for (std::size_t i = 0; i < c.snr_db.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g,%s,%.6g,%.6g,%zu,%d,%d,%d,%.6g\n", c.snr_db[i], c.scheme_label.c_str(),
                      c.mean_bits_per_s_per_hz[i], c.stderr_bits[i], c.samples, c.bits, c.ne, c.np, c.tau);
        os << buf;
    }
}

void write_manifest(std::ostream& os, const RunManifest& m) {
    os << "version = " << m.version << "\n";
    os << "command = " << m.command << "\n";
    os << "master_seed = " << m.master_seed << "\n";
    os << "started = " << m.started << "\n";
    os << "finished = " << m.finished << "\n";
    for (const auto& o : m.outputs) os << "output = " << o << "\n";
    for (std::size_t i = 0; i < m.configs.size(); ++i) {
        os << "\n# config " << i + 1 << " of " << m.configs.size() << "\n";
        write_config(os, m.configs[i]);
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string version_string() { return COOPFB_VERSION; }

}  // namespace coopfb
