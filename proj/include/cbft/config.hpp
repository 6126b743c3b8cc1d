/*
 Copyright 2026 The cbft Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef CBFT_CONFIG_HPP
#define CBFT_CONFIG_HPP

#include "cbft/dynamics.hpp"
#include "cbft/prf.hpp"
#include "cbft/safety_filter.hpp"
#include "cbft/trial.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace cbft {

struct ServerConfig {
    unsigned short port = 8088;
    std::string bind_address = "127.0.0.1";
    std::string worlds_dir = "data/worlds";
    double stale_input = 0.2;       ///< s of zero-order hold before the stick decays
    double input_decay = 0.2;       ///< s for a stale stick to ramp to zero
    double disconnect_grace = 2.0;  ///< s without clients before the trial clock pauses
    std::string log_dir;            ///< finished session logs are written here when set
};

/// Every tunable of the tick pipeline, as read from the run configuration file.
struct PipelineConfig {
    ControlConfig control;
    FilterConfig filter;
    PrfConfig prf;
    TrialConfig trial;
    ServerConfig server;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a partial config over the defaults; unknown keys and out-of-range values throw ConfigError.
PipelineConfig config_from_json(const nlohmann::json& doc, PipelineConfig base = {});
nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);
void validate(const PipelineConfig& cfg);

}  // namespace cbft

#endif  // CBFT_CONFIG_HPP
