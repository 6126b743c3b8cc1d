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
#include "cbft/trial_log.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace cbft {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json sample_to_json(const Sample& s) {
    ordered_json j;
    j["type"] = "sample";
    j["t"] = s.t;
    j["x"] = s.position.x();
    j["y"] = s.position.y();
    j["yaw"] = s.yaw;
    j["vx"] = s.velocity.x();
    j["vy"] = s.velocity.y();
    j["urx"] = s.u_ref.x();
    j["ury"] = s.u_ref.y();
    j["ux"] = s.u_safe.x();
    j["uy"] = s.u_safe.y();
    j["fx"] = s.force.x();
    j["fy"] = s.force.y();
    j["contact"] = s.contact;
    j["condition"] = to_string(s.condition);
    return j;
}

Sample sample_from_json(const json& j) {
    Sample s;
    try {
        s.t = j.at("t").get<double>();
        s.position = {j.at("x").get<double>(), j.at("y").get<double>()};
        s.yaw = j.at("yaw").get<double>();
        s.velocity = {j.at("vx").get<double>(), j.at("vy").get<double>()};
        s.u_ref = {j.at("urx").get<double>(), j.at("ury").get<double>()};
        s.u_safe = {j.at("ux").get<double>(), j.at("uy").get<double>()};
        s.force = {j.at("fx").get<double>(), j.at("fy").get<double>()};
        s.contact = j.at("contact").get<bool>();
        s.condition = parse_condition(j.at("condition").get<std::string>());
    } catch (const std::exception& e) {
        throw LogError(std::string("malformed sample record: ") + e.what());
    }
    return s;
}

ordered_json metrics_to_json(const Metrics& m) {
    return {{"D_total", m.total_distance},
            {"T_trial", m.trial_time},
            {"V_avg", m.average_speed},
            {"T_collision", m.collision_time}};
}

ordered_json summary_to_json(const TrialLog& log) {
    ordered_json j;
    j["type"] = "summary";
    j["trial"] = log.trial_index;
    j["seed"] = log.seed;
    j["condition"] = to_string(log.condition);
    j["mode"] = to_string(log.mode);
    j["outcome"] = to_string(log.outcome);
    j["reason"] = to_string(log.reason);
    j["samples"] = log.samples.size();
    j["min_barrier"] = log.min_barrier;
    j["crash_events"] = log.crash_events;
    j["metrics"] = metrics_to_json(log.metrics);
    return j;
}

void write_jsonl(std::ostream& out, const TrialLog& log) {
    for (const auto& s : log.samples) out << sample_to_json(s).dump() << '\n';
    out << summary_to_json(log).dump() << '\n';
}

void write_jsonl(const std::filesystem::path& path, const TrialLog& log) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LogError("cannot write log file: " + path.string());
    write_jsonl(out, log);
}

TrialLog read_jsonl(std::istream& in) {
    TrialLog log;
    bool have_summary = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw LogError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string type = j.value("type", "");
        if (type == "sample") {
            log.samples.push_back(sample_from_json(j));
        } else if (type == "summary") {
            try {
                log.trial_index = j.at("trial").get<std::size_t>();
                log.seed = j.at("seed").get<std::uint64_t>();
                log.condition = parse_condition(j.at("condition").get<std::string>());
                log.mode = parse_mode(j.at("mode").get<std::string>());
                log.outcome = j.at("outcome").get<std::string>() == "success" ? Outcome::Success : Outcome::Failure;
                log.reason = parse_failure_reason(j.at("reason").get<std::string>());
                log.min_barrier = j.value("min_barrier", 0.0);
                log.crash_events = j.value("crash_events", std::size_t{0});
                const json& m = j.at("metrics");
                log.metrics = {m.at("D_total").get<double>(), m.at("T_trial").get<double>(),
                               m.at("V_avg").get<double>(), m.at("T_collision").get<double>()};
            } catch (const std::exception& e) {
                throw LogError("line " + std::to_string(line_no) + ": malformed summary: " + e.what());
            }
            have_summary = true;
        } else {
            throw LogError("line " + std::to_string(line_no) + ": unknown record type '" + type + "'");
        }
    }
    if (!have_summary) throw LogError("log has no summary record");
    return log;
}

TrialLog read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LogError("cannot open log file: " + path.string());
    return read_jsonl(in);
}

void write_csv(std::ostream& out, std::span<const Sample> samples) {
    out << "t,x,y,yaw,vx,vy,urx,ury,ux,uy,fx,fy,contact,condition\n";
    char buf[512];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s\n",
                      s.t, s.position.x(), s.position.y(), s.yaw, s.velocity.x(), s.velocity.y(), s.u_ref.x(),
                      s.u_ref.y(), s.u_safe.x(), s.u_safe.y(), s.force.x(), s.force.y(), s.contact ? 1 : 0,
                      to_string(s.condition));
        out << buf;
    }
}

}  // namespace cbft
