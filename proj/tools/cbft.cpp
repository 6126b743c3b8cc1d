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
// cbft: batch runs with scripted pilots, log replay and metrics, and the live teleop server.

#include "cbft/config.hpp"
#include "cbft/harness.hpp"
#include "cbft/server/server.hpp"
#include "cbft/trial_log.hpp"
#include "cbft/world.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace cbft;

constexpr int kConfigError = 2;

struct RunOptions {
    std::string world = "data/worlds/hallway.json";
    std::string condition = "CBF";
    std::string mode = "haptic_only";
    std::string pilot = "compliant";
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string config;
    std::optional<double> p;
    std::optional<double> noise;
    std::optional<double> admittance;
    std::optional<double> delay;
    std::optional<double> cruise;
    unsigned jobs = 0;
};

PipelineConfig read_config(const std::string& path) { return path.empty() ? PipelineConfig{} : load_config(path); }

int run(const RunOptions& o) {
    RunSpec spec;
    spec.world_path = o.world;
    spec.world = load_world(o.world);
    spec.mode = parse_mode(o.mode);
    spec.pilot = pilot_preset(parse_pilot_kind(o.pilot));
    if (o.noise) spec.pilot.noise_std = *o.noise;
    if (o.admittance) spec.pilot.hand_admittance = *o.admittance;
    if (o.delay) spec.pilot.visual_delay = *o.delay;
    if (o.cruise) spec.pilot.cruise_speed = *o.cruise;
    validate(spec.pilot);
    spec.trials = o.trials;
    spec.seed = o.seed;
    spec.config = read_config(o.config);
    if (o.p) spec.config.filter.gain_p = *o.p;
    validate(spec.config);

    std::vector<Condition> conditions;
    if (o.condition == "all") {
        conditions = {Condition::N, Condition::PRF, Condition::CBF};
    } else {
        conditions = {parse_condition(o.condition)};
    }
    const unsigned workers = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());

    std::vector<BatchSummary> rows;
    for (Condition c : conditions) {
        spec.condition = c;
        const BatchResult result = run_batch(spec, workers);
        rows.push_back(result.summary);
        if (!o.out.empty()) {
            const std::filesystem::path dir =
                conditions.size() > 1 ? std::filesystem::path(o.out) / to_string(c) : std::filesystem::path(o.out);
            write_batch(result, dir);
        }
    }
    if (!o.out.empty() && conditions.size() > 1) {
        std::ofstream csv(std::filesystem::path(o.out) / "summary.csv", std::ios::binary);
        write_summary_csv(csv, rows);
    }
    write_summary_csv(std::cout, rows);
    return 0;
}

int replay(const std::string& path, const std::string& csv_out) {
    const TrialLog log = read_jsonl(std::filesystem::path(path));
    if (!csv_out.empty()) {
        std::ofstream out(csv_out, std::ios::binary);
        if (!out) throw LogError("cannot write " + csv_out);
        write_csv(out, log.samples);
    }
    std::printf("trial %zu seed %llu condition %s mode %s\n", log.trial_index,
                static_cast<unsigned long long>(log.seed), to_string(log.condition), to_string(log.mode));
    std::printf("outcome %s reason %s samples %zu crash_events %zu min_barrier %.6g\n", to_string(log.outcome),
                to_string(log.reason), log.samples.size(), log.crash_events, log.min_barrier);
    if (log.samples.size() < 2) {
        std::printf("too few samples for metrics\n");
        return 0;
    }
    const Metrics m = compute_metrics(log.samples);
    std::printf("D_total %.6f m  T_trial %.6f s  V_avg %.6f m/s  T_collision %.6f s\n", m.total_distance,
                m.trial_time, m.average_speed, m.collision_time);
    // The stored summary is rounded through JSON; recomputation must agree closely.
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); };
    if (!close(m.total_distance, log.metrics.total_distance) || !close(m.trial_time, log.metrics.trial_time) ||
        !close(m.average_speed, log.metrics.average_speed) || !close(m.collision_time, log.metrics.collision_time)) {
        std::fprintf(stderr, "stored metrics disagree with the samples\n");
        return 1;
    }
    return 0;
}

int metrics(const std::string& dir, const std::string& out_path) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw LogError("cannot write " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;
    out << "file,trial,seed,condition,mode,outcome,reason,samples,D_total,T_trial,V_avg,T_collision,min_barrier,"
           "crash_events\n";
    for (const auto& f : files) {
        const TrialLog log = read_jsonl(f);
        const Metrics m = log.samples.size() >= 2 ? compute_metrics(log.samples) : Metrics{};
        char buf[512];
        std::snprintf(buf, sizeof buf, ",%zu,%llu,%s,%s,%s,%s,%zu,%.6f,%.6f,%.6f,%.6f,%.6g,%zu\n", log.trial_index,
                      static_cast<unsigned long long>(log.seed), to_string(log.condition), to_string(log.mode),
                      to_string(log.outcome), to_string(log.reason), log.samples.size(), m.total_distance,
                      m.trial_time, m.average_speed, m.collision_time, log.min_barrier, log.crash_events);
        out << std::filesystem::relative(f, dir).generic_string() << buf;
    }
    return 0;
}

int serve(const std::string& config_path, std::optional<unsigned short> port, const std::string& worlds_dir,
          const std::string& log_dir) {
    PipelineConfig cfg = read_config(config_path);
    if (port) cfg.server.port = *port;
    if (!worlds_dir.empty()) cfg.server.worlds_dir = worlds_dir;
    if (!log_dir.empty()) cfg.server.log_dir = log_dir;
    validate(cfg);
    server::TeleopServer srv(cfg);
    srv.start(true);
    std::printf("listening on http://%s:%u (WebSocket /ws)\n", cfg.server.bind_address.c_str(), srv.port());
    std::fflush(stdout);
    srv.wait();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Haptic teleoperation simulator with a CBF safety filter"};
    app.require_subcommand(1);

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Run seeded batches with a scripted pilot");
    run_cmd->add_option("--world", ro.world, "World JSON file")->capture_default_str();
    run_cmd->add_option("--condition", ro.condition, "N, PRF, CBF or all")->capture_default_str();
    run_cmd->add_option("--mode", ro.mode, "haptic_only or override")->capture_default_str();
    run_cmd->add_option("--pilot", ro.pilot, "waypoint, charger, noisy or compliant")->capture_default_str();
    run_cmd->add_option("--trials", ro.trials, "Trials per condition")->capture_default_str()->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", ro.seed, "Batch seed")->capture_default_str();
    run_cmd->add_option("--out", ro.out, "Directory for trial logs and summary.csv");
    run_cmd->add_option("--config", ro.config, "Pipeline config JSON");
    run_cmd->add_option("--p", ro.p, "HOCBF gain p (1/s), overrides the config");
    run_cmd->add_option("--noise", ro.noise, "Pilot stick noise std (cm)");
    run_cmd->add_option("--admittance", ro.admittance, "Pilot hand admittance (cm/N)");
    run_cmd->add_option("--delay", ro.delay, "Pilot visual delay (s)");
    run_cmd->add_option("--cruise", ro.cruise, "Pilot cruise speed (m/s)");
    run_cmd->add_option("--jobs", ro.jobs, "Worker threads (0 = all cores)");

    std::string log_path, csv_out;
    auto* replay_cmd = app.add_subcommand("replay", "Print a trial log and recompute its metrics");
    replay_cmd->add_option("--log", log_path, "Trial log (.jsonl)")->required();
    replay_cmd->add_option("--csv", csv_out, "Also export the samples as CSV");

    std::string log_dir, metrics_out;
    auto* metrics_cmd = app.add_subcommand("metrics", "CSV summary of every trial log under a directory");
    metrics_cmd->add_option("--log-dir", log_dir, "Directory searched recursively for .jsonl logs")->required();
    metrics_cmd->add_option("--out", metrics_out, "Write the CSV here instead of stdout");

    std::string serve_config, serve_worlds, serve_logs;
    std::optional<unsigned short> serve_port;
    auto* serve_cmd = app.add_subcommand("serve", "Live teleoperation server (HTTP + WebSocket)");
    serve_cmd->add_option("--config", serve_config, "Pipeline config JSON");
    serve_cmd->add_option("--port", serve_port, "Listen port, overrides the config");
    serve_cmd->add_option("--worlds-dir", serve_worlds, "Directory of world JSON files");
    serve_cmd->add_option("--log-dir", serve_logs, "Write finished session logs here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run(ro);
        if (*replay_cmd) return replay(log_path, csv_out);
        if (*metrics_cmd) return metrics(log_dir, metrics_out);
        if (*serve_cmd) return serve(serve_config, serve_port, serve_worlds, serve_logs);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const WorldError& e) {
        std::fprintf(stderr, "world error: %s\n", e.what());
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
