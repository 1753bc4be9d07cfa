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

#ifndef COOPFB_CONFIG_HPP
#define COOPFB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "coopfb/simulator.hpp"

namespace coopfb {

// INI text, sections [run], [system], [sweep], [ipc]; see README for the keys.
// Missing keys keep their defaults; unknown sections or keys are parse errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

// Emits every key, so parse_config_text(write) reproduces the config.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

// Header snr_db,scheme,mean_sum_tput,stderr,trials,bits,ne,np,tau; numbers
// with 6 significant digits; LF line endings. trials is the sample count.
void write_curve_csv(std::ostream& os, const ThroughputCurve& c);

struct RunManifest {
    std::string command;
    std::vector<ExperimentConfig> configs;
    std::uint64_t master_seed = 0;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
    std::string version;
};
void write_manifest(std::ostream& os, const RunManifest& m);

// ISO-8601 UTC time stamp of now.
std::string utc_timestamp();

// Library version.
std::string version_string();

}  // namespace coopfb

#endif  // COOPFB_CONFIG_HPP
