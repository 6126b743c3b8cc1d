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
#ifndef CBFT_WORLD_HPP
#define CBFT_WORLD_HPP

#include "cbft/geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbft {

inline constexpr int kWorldSchemaVersion = 1;

struct Target {
    Vec2 center{0.0, 0.0};
    double radius = 0.25;
};

struct Pose2 {
    Vec2 position{0.0, 0.0};
    double yaw = 0.0;
};

/// Hallway world: an outer rectangle the UAV must stay inside, inner rectangles it
/// must stay out of, and an ordered list of targets to fly over.
struct World {
    std::string name;
    Rect outer;
    std::vector<Rect> inner;
    std::vector<Target> targets;
    double uav_radius = 0.25;
    Pose2 start;
    /// Corridor centerline used by scripted pilots; optional.
    std::vector<Vec2> route;
};

class WorldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws WorldError listing every violated constraint.
void validate_world(const World& world);

World world_from_json(const nlohmann::json& doc);
nlohmann::json world_to_json(const World& world);
World load_world(const std::filesystem::path& path);

/// Obstacles in a fixed order: left, right, bottom, top wall, then inner rectangles.
/// Barrier sets, PRF clearances and collision reports all share this indexing.
inline std::size_t obstacle_count(const World& world) { return 4 + world.inner.size(); }
std::string obstacle_name(const World& world, std::size_t index);

enum class ContactKind { Clear, Contact, Crash };

struct CrashConfig {
    double crash_depth = 0.1;     ///< penetration (m) beyond which the UAV loses flight
    double crash_duration = 1.0;  ///< continuous contact (s) treated as a crash
    double contact_tolerance = 1e-6;
};

struct CollisionResult {
    ContactKind kind = ContactKind::Clear;
    double depth = 0.0;  ///< deepest penetration of the UAV disk into any obstacle
    std::optional<std::size_t> obstacle;
};

CollisionResult collision_query(const Vec2& position, const World& world, const CrashConfig& cfg = {});

const char* to_string(ContactKind kind);

}  // namespace cbft

#endif  // CBFT_WORLD_HPP
