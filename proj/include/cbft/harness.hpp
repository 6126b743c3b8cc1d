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
#ifndef CBFT_HARNESS_HPP
#define CBFT_HARNESS_HPP

#include "cbft/config.hpp"
#include "cbft/pilots.hpp"
#include "cbft/trial.hpp"
#include "cbft/world.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cbft {

struct RunSpec {
    std::filesystem::path world_path;  ///< informational once `world` is loaded
    World world;
    Condition condition = Condition::CBF;
    Mode mode = Mode::HapticOnly;
    PilotSpec pilot;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    PipelineConfig config;
    /// Hard cap on ticks per trial; defaults to the trial timeout plus one tick.
    std::optional<std::uint64_t> max_ticks;
};

struct BatchSummary {
    Condition condition = Condition::N;
    Mode mode = Mode::HapticOnly;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::size_t crashes = 0;   ///< failures from penetration or sustained contact
    std::size_t timeouts = 0;
    Metrics mean_success;      ///< averaged over successful trials
    double min_barrier = 0.0;
};

struct BatchResult {
    std::vector<TrialLog> logs;
    BatchSummary summary;
};

/// Per-trial RNG seed derived from the batch seed.
std::uint64_t trial_seed(std::uint64_t batch_seed, std::size_t trial_index);

TrialLog run_trial(const RunSpec& spec, std::size_t trial_index);

/// Output depends only on `spec`; `workers` > 1 runs trials concurrently.
BatchResult run_batch(const RunSpec& spec, unsigned workers = 1);

BatchSummary summarize(const std::vector<TrialLog>& logs);

void write_summary_csv(std::ostream& out, const std::vector<BatchSummary>& rows);
/// trial_NNN.jsonl per trial plus summary.csv.
void write_batch(const BatchResult& result, const std::filesystem::path& out_dir);

}  // namespace cbft

#endif  // CBFT_HARNESS_HPP
