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
#ifndef CBFT_TRIAL_LOG_HPP
#define CBFT_TRIAL_LOG_HPP

#include "cbft/trial.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>

namespace cbft {

nlohmann::ordered_json sample_to_json(const Sample& s);
Sample sample_from_json(const nlohmann::json& j);
nlohmann::ordered_json metrics_to_json(const Metrics& m);
nlohmann::ordered_json summary_to_json(const TrialLog& log);

/// JSON lines: one {"type":"sample"} record per sample, then one {"type":"summary"}.
void write_jsonl(std::ostream& out, const TrialLog& log);
void write_jsonl(const std::filesystem::path& path, const TrialLog& log);
/// Throws LogError on malformed input.
TrialLog read_jsonl(std::istream& in);
TrialLog read_jsonl(const std::filesystem::path& path);

/// Columns: t, x, y, yaw, vx, vy, urx, ury, ux, uy, fx, fy, contact, condition.
void write_csv(std::ostream& out, std::span<const Sample> samples);

}  // namespace cbft

#endif  // CBFT_TRIAL_LOG_HPP
