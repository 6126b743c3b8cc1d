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
#include "cbft/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <type_traits>

namespace cbft {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// Reads the known keys of one section and rejects anything else.
class SectionReader {
public:
    SectionReader(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.contains(name_)) {
            section_ = &doc.at(name_);
            if (!section_->is_object()) throw ConfigError(name_ + ": expected an object");
        }
    }

    template <typename T>
    void read(const char* key, T& field) {
        seen_[key] = true;
        if (!section_ || !section_->contains(key)) return;
        const json& value = section_->at(key);
        if constexpr (std::is_integral_v<T>) {
            if (!value.is_number_integer()) throw ConfigError(name_ + "." + key + ": expected an integer");
            const auto wide = value.get<long long>();
            if (wide < static_cast<long long>(std::numeric_limits<T>::min()) ||
                wide > static_cast<long long>(std::numeric_limits<T>::max())) {
                throw ConfigError(name_ + "." + key + ": out of range");
            }
        }
        try {
            field = value.get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(name_ + "." + key + ": " + e.what());
        }
    }

    void finish() const {
        if (!section_) return;
        for (const auto& [key, value] : section_->items()) {
            if (!seen_.count(key)) throw ConfigError(name_ + ": unknown key '" + key + "'");
        }
    }

private:
    std::string name_;
    const json* section_ = nullptr;
    std::map<std::string, bool> seen_;
};

}  // namespace

PipelineConfig config_from_json(const json& doc, PipelineConfig cfg) {
    if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
    static const char* sections[] = {"control", "filter", "prf", "trial", "server"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(std::begin(sections), std::end(sections), key) == std::end(sections)) {
            throw ConfigError("config: unknown section '" + key + "'");
        }
    }

    SectionReader control(doc, "control");
    control.read("velocity_gain", cfg.control.velocity_gain);
    control.read("dt", cfg.control.dt);
    control.read("deadzone", cfg.control.deadzone);
    control.read("yaw_rate", cfg.control.yaw_rate);
    control.read("workspace_radius", cfg.control.workspace_radius);
    control.read("max_accel", cfg.control.max_accel);
    std::string frame = cfg.control.frame == StickFrame::Body ? "body" : "world";
    control.read("frame", frame);
    if (frame == "body") {
        cfg.control.frame = StickFrame::Body;
    } else if (frame == "world") {
        cfg.control.frame = StickFrame::World;
    } else {
        throw ConfigError("control.frame: expected 'body' or 'world'");
    }
    control.finish();

    SectionReader filter(doc, "filter");
    filter.read("p", cfg.filter.gain_p);
    filter.read("force_gain", cfg.filter.force_gain);
    filter.read("max_force", cfg.filter.max_force);
    filter.read("slack_weight", cfg.filter.slack_weight);
    filter.finish();

    SectionReader prf(doc, "prf");
    prf.read("boundary_width", cfg.prf.boundary_width);
    prf.read("force_gain", cfg.prf.force_gain);
    prf.read("max_force", cfg.prf.max_force);
    prf.finish();

    SectionReader trial(doc, "trial");
    trial.read("crash_depth", cfg.trial.crash.crash_depth);
    trial.read("crash_duration", cfg.trial.crash.crash_duration);
    trial.read("contact_tolerance", cfg.trial.crash.contact_tolerance);
    trial.read("timeout", cfg.trial.timeout);
    trial.finish();

    SectionReader server(doc, "server");
    server.read("port", cfg.server.port);
    server.read("bind_address", cfg.server.bind_address);
    server.read("worlds_dir", cfg.server.worlds_dir);
    server.read("stale_input", cfg.server.stale_input);
    server.read("input_decay", cfg.server.input_decay);
    server.read("disconnect_grace", cfg.server.disconnect_grace);
    server.read("log_dir", cfg.server.log_dir);
    server.finish();

    validate(cfg);
    return cfg;
}

ordered_json config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["control"] = {{"velocity_gain", cfg.control.velocity_gain},
                    {"dt", cfg.control.dt},
                    {"deadzone", cfg.control.deadzone},
                    {"yaw_rate", cfg.control.yaw_rate},
                    {"frame", cfg.control.frame == StickFrame::Body ? "body" : "world"},
                    {"workspace_radius", cfg.control.workspace_radius},
                    {"max_accel", cfg.control.max_accel}};
    j["filter"] = {{"p", cfg.filter.gain_p},
                   {"force_gain", cfg.filter.force_gain},
                   {"max_force", cfg.filter.max_force},
                   {"slack_weight", cfg.filter.slack_weight}};
    j["prf"] = {{"boundary_width", cfg.prf.boundary_width},
                {"force_gain", cfg.prf.force_gain},
                {"max_force", cfg.prf.max_force}};
    j["trial"] = {{"crash_depth", cfg.trial.crash.crash_depth},
                  {"crash_duration", cfg.trial.crash.crash_duration},
                  {"contact_tolerance", cfg.trial.crash.contact_tolerance},
                  {"timeout", cfg.trial.timeout}};
    j["server"] = {{"port", cfg.server.port},
                   {"bind_address", cfg.server.bind_address},
                   {"worlds_dir", cfg.server.worlds_dir},
                   {"stale_input", cfg.server.stale_input},
                   {"input_decay", cfg.server.input_decay},
                   {"disconnect_grace", cfg.server.disconnect_grace},
                   {"log_dir", cfg.server.log_dir}};
    return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

void validate(const PipelineConfig& cfg) {
    try {
        validate(cfg.control);
        validate(cfg.filter);
        validate(cfg.prf);
        validate(cfg.trial);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.server.stale_input >= 0.0) || !(cfg.server.input_decay >= 0.0) ||
        !(cfg.server.disconnect_grace >= 0.0)) {
        throw ConfigError("server: timing fields must be >= 0");
    }
}

}  // namespace cbft
