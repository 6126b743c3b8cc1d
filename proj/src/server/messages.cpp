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
#include "cbft/server/messages.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace cbft::server {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(TrialEventKind kind) {
    switch (kind) {
        case TrialEventKind::Started: return "started";
        case TrialEventKind::TargetReached: return "target_reached";
        case TrialEventKind::Ended: return "ended";
        case TrialEventKind::SessionReady: return "session_ready";
    }
    return "?";
}

TrialEventKind parse_trial_event(std::string_view text) {
    if (text == "started") return TrialEventKind::Started;
    if (text == "target_reached") return TrialEventKind::TargetReached;
    if (text == "ended") return TrialEventKind::Ended;
    if (text == "session_ready") return TrialEventKind::SessionReady;
    throw MessageError("unknown trial event '" + std::string(text) + "'");
}

namespace {

ordered_json vec(const Vec2& v) { return ordered_json::array({v.x(), v.y()}); }

const json& field(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw MessageError(std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) throw MessageError(std::string("field '") + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw MessageError(std::string("field '") + key + "' must be finite");
    return x;
}

std::uint64_t count(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw MessageError(std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool flag(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_boolean()) throw MessageError(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

std::string text(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw MessageError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Vec2 vec(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw MessageError(std::string("field '") + key + "' must be [x, y]");
    }
    const Vec2 out(v[0].get<double>(), v[1].get<double>());
    if (!is_finite(out)) throw MessageError(std::string("field '") + key + "' must be finite");
    return out;
}

// Enum parsers throw std::invalid_argument; report those as message errors.
template <class F>
auto parsed(const json& j, const char* key, F parse) {
    const std::string s = text(j, key);
    try {
        return parse(s);
    } catch (const std::invalid_argument& e) {
        throw MessageError(e.what());
    }
}

ordered_json to_json(const InputMessage& m) {
    return {{"type", "input"}, {"seq", m.seq}, {"stick", vec(m.stick)}, {"yaw_button", m.yaw_button},
            {"client_time", m.client_time}};
}

ordered_json to_json(const TelemetryMessage& m) {
    ordered_json j = {{"type", "telemetry"},  {"session", m.session},   {"tick", m.tick},
                      {"t", m.t},             {"position", vec(m.position)}, {"velocity", vec(m.velocity)},
                      {"yaw", m.yaw},         {"force", vec(m.force)},  {"u_ref", vec(m.u_ref)},
                      {"u_safe", vec(m.u_safe)}, {"margins", m.margins}};
    if (m.risk) {
        ordered_json r = {{"risk", m.risk->risk}, {"direction", vec(m.risk->direction)}, {"distance", m.risk->distance}};
        r["worst_obstacle"] = m.risk->worst_obstacle ? json(*m.risk->worst_obstacle) : json(nullptr);
        j["risk"] = std::move(r);
    } else {
        j["risk"] = nullptr;
    }
    j["phase"] = to_string(m.phase);
    j["next_target"] = m.next_target;
    j["contact"] = m.contact;
    j["min_barrier"] = m.min_barrier;
    j["metrics"] = {{"D_total", m.metrics.total_distance},
                    {"T_trial", m.metrics.trial_time},
                    {"V_avg", m.metrics.average_speed},
                    {"T_collision", m.metrics.collision_time}};
    j["input_seq"] = m.input_seq;
    j["input_client_time"] = m.input_client_time;
    return j;
}

ordered_json to_json(const ConfigureMessage& m) {
    return {{"type", "configure"}, {"world", m.world}, {"condition", to_string(m.condition)}, {"mode", to_string(m.mode)}};
}

ordered_json to_json(const TrialEventMessage& m) {
    return {{"type", "trial_event"}, {"session", m.session},          {"event", to_string(m.event)},
            {"t", m.t},              {"target", m.target},            {"phase", to_string(m.phase)},
            {"reason", to_string(m.reason)}, {"barriers", m.barriers}};
}

ordered_json to_json(const ErrorMessage& m) { return {{"type", "error"}, {"message", m.message}}; }

InputMessage input_from(const json& j) {
    InputMessage m;
    m.seq = count(j, "seq");
    m.stick = vec(j, "stick");
    const json& yb = field(j, "yaw_button");
    if (!yb.is_number_integer() || yb.get<std::int64_t>() < -1 || yb.get<std::int64_t>() > 1) {
        throw MessageError("field 'yaw_button' must be -1, 0 or 1");
    }
    m.yaw_button = yb.get<int>();
    if (j.contains("client_time")) m.client_time = number(j, "client_time");
    return m;
}

TelemetryMessage telemetry_from(const json& j) {
    TelemetryMessage m;
    m.session = count(j, "session");
    m.tick = count(j, "tick");
    m.t = number(j, "t");
    m.position = vec(j, "position");
    m.velocity = vec(j, "velocity");
    m.yaw = number(j, "yaw");
    m.force = vec(j, "force");
    m.u_ref = vec(j, "u_ref");
    m.u_safe = vec(j, "u_safe");
    const json& margins = field(j, "margins");
    if (!margins.is_array()) throw MessageError("field 'margins' must be an array");
    for (const json& v : margins) {
        if (!v.is_number()) throw MessageError("margins must be numbers");
        m.margins.push_back(v.get<double>());
    }
    const json& risk = field(j, "risk");
    if (!risk.is_null()) {
        if (!risk.is_object()) throw MessageError("field 'risk' must be an object or null");
        RiskReport r;
        r.risk = number(risk, "risk");
        r.direction = vec(risk, "direction");
        r.distance = number(risk, "distance");
        if (!field(risk, "worst_obstacle").is_null()) r.worst_obstacle = count(risk, "worst_obstacle");
        m.risk = r;
    }
    m.phase = parsed(j, "phase", parse_phase);
    m.next_target = count(j, "next_target");
    m.contact = flag(j, "contact");
    m.min_barrier = number(j, "min_barrier");
    const json& metrics = field(j, "metrics");
    m.metrics.total_distance = number(metrics, "D_total");
    m.metrics.trial_time = number(metrics, "T_trial");
    m.metrics.average_speed = number(metrics, "V_avg");
    m.metrics.collision_time = number(metrics, "T_collision");
    m.input_seq = count(j, "input_seq");
    m.input_client_time = number(j, "input_client_time");
    return m;
}

ConfigureMessage configure_from(const json& j) {
    ConfigureMessage m;
    if (j.contains("world")) m.world = text(j, "world");
    if (j.contains("condition")) m.condition = parsed(j, "condition", parse_condition);
    if (j.contains("mode")) m.mode = parsed(j, "mode", parse_mode);
    return m;
}

TrialEventMessage trial_event_from(const json& j) {
    TrialEventMessage m;
    m.session = count(j, "session");
    m.event = parse_trial_event(text(j, "event"));
    m.t = number(j, "t");
    m.target = count(j, "target");
    m.phase = parsed(j, "phase", parse_phase);
    m.reason = parsed(j, "reason", parse_failure_reason);
    m.barriers = count(j, "barriers");
    return m;
}

}  // namespace

std::string encode(const Message& msg) {
    return std::visit([](const auto& m) { return to_json(m).dump(); }, msg);
}

Message decode(std::string_view text_in) {
    json j;
    try {
        j = json::parse(text_in);
    } catch (const json::exception& e) {
        throw MessageError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw MessageError("message must be a JSON object");
    try {
        const std::string type = text(j, "type");
        if (type == "input") return input_from(j);
        if (type == "telemetry") return telemetry_from(j);
        if (type == "configure") return configure_from(j);
        if (type == "trial_event") return trial_event_from(j);
        if (type == "error") return ErrorMessage{text(j, "message")};
        throw MessageError("unknown message type '" + type + "'");
    } catch (const json::exception& e) {
        throw MessageError(e.what());
    }
}

}  // namespace cbft::server
