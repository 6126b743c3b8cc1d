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
#include "cbft/harness.hpp"

#include "cbft/simulation.hpp"
#include "cbft/trial_log.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

namespace cbft {

std::uint64_t trial_seed(std::uint64_t batch_seed, std::size_t trial_index) {
    // splitmix64 finalizer
    std::uint64_t z = batch_seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial_index) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TrialLog run_trial(const RunSpec& spec, std::size_t trial_index) {
    const std::uint64_t seed = trial_seed(spec.seed, trial_index);
    Simulation sim(spec.world, spec.condition, spec.mode, spec.config);
    PilotSpec pilot_spec = spec.pilot;
    pilot_spec.seed = seed;
    Pilot pilot(pilot_spec, spec.world, spec.config.control);
    std::mt19937_64 rng(seed);

    const std::uint64_t cap = spec.max_ticks.value_or(
        static_cast<std::uint64_t>(std::ceil(spec.config.trial.timeout / spec.config.control.dt)) + 1);
    while (!sim.trial().terminal() && sim.ticks() < cap) {
        sim.tick(pilot.step(sim.state(), sim.last_force(), sim.world(), rng));
    }
    TrialLog log = sim.make_log(trial_index, seed);
    if (!sim.trial().terminal()) log.reason = FailureReason::Timeout;
    return log;
}

BatchSummary summarize(const std::vector<TrialLog>& logs) {
    BatchSummary s;
    s.trials = logs.size();
    if (!logs.empty()) {
        s.condition = logs.front().condition;
        s.mode = logs.front().mode;
        s.min_barrier = logs.front().min_barrier;
    }
    for (const auto& log : logs) {
        s.min_barrier = std::min(s.min_barrier, log.min_barrier);
        if (log.outcome == Outcome::Success) {
            ++s.successes;
            s.mean_success.total_distance += log.metrics.total_distance;
            s.mean_success.trial_time += log.metrics.trial_time;
            s.mean_success.average_speed += log.metrics.average_speed;
            s.mean_success.collision_time += log.metrics.collision_time;
            continue;
        }
        ++s.failures;
        if (log.reason == FailureReason::Timeout) {
            ++s.timeouts;
        } else {
            ++s.crashes;
        }
    }
    if (s.successes > 0) {
        const double n = static_cast<double>(s.successes);
        s.mean_success.total_distance /= n;
        s.mean_success.trial_time /= n;
        s.mean_success.average_speed /= n;
        s.mean_success.collision_time /= n;
    }
    return s;
}

BatchResult run_batch(const RunSpec& spec, unsigned workers) {
    validate(spec.config);
    validate(spec.pilot);
    BatchResult result;
    result.logs.resize(spec.trials);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(spec.trials)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < spec.trials; ++i) result.logs[i] = run_trial(spec, i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < spec.trials; i = next++) result.logs[i] = run_trial(spec, i);
            });
        }
    }
    result.summary = summarize(result.logs);
    if (spec.trials == 0) {
        result.summary.condition = spec.condition;
        result.summary.mode = spec.mode;
    }
    return result;
}

void write_summary_csv(std::ostream& out, const std::vector<BatchSummary>& rows) {
    out << "condition,mode,trials,successes,failures,crashes,timeouts,D_total,T_trial,V_avg,T_collision,min_barrier\n";
    char buf[512];
    for (const auto& s : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.6f,%.6g\n", to_string(s.condition),
                      to_string(s.mode), s.trials, s.successes, s.failures, s.crashes, s.timeouts,
                      s.mean_success.total_distance, s.mean_success.trial_time, s.mean_success.average_speed,
                      s.mean_success.collision_time, s.min_barrier);
        out << buf;
    }
}

void write_batch(const BatchResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& log : result.logs) {
        char name[64];
        std::snprintf(name, sizeof name, "trial_%03zu.jsonl", log.trial_index);
        write_jsonl(out_dir / name, log);
    }
    std::ofstream csv(out_dir / "summary.csv", std::ios::binary);
    if (!csv) throw LogError("cannot write " + (out_dir / "summary.csv").string());
    write_summary_csv(csv, {result.summary});
}

}  // namespace cbft
