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
#include "cbft/world.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace cbft {

namespace {

using nlohmann::json;

Vec2 vec_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw WorldError(where + ": expected [x, y] number pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json vec_to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw WorldError(where + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw WorldError(where + ": expected a number");
    return j.get<double>();
}

Rect rect_from_json(const json& j, const std::string& where) {
    return {vec_from_json(require(j, "min", where), where + ".min"),
            vec_from_json(require(j, "max", where), where + ".max")};
}

json rect_to_json(const Rect& r) { return {{"min", vec_to_json(r.min)}, {"max", vec_to_json(r.max)}}; }

}  // namespace

void validate_world(const World& w) {
    std::vector<std::string> problems;
    const double r = w.uav_radius;
    if (!(r > 0.0) || !std::isfinite(r)) problems.push_back("uav_radius must be positive");
    if (!is_finite(w.outer.min) || !is_finite(w.outer.max) || !(w.outer.width() > 2.0 * r) ||
        !(w.outer.height() > 2.0 * r)) {
        problems.push_back("outer rectangle must be finite and wider than the UAV diameter");
    }
    for (std::size_t i = 0; i < w.inner.size(); ++i) {
        const Rect& rect = w.inner[i];
        const std::string tag = "inner[" + std::to_string(i) + "]";
        if (!is_finite(rect.min) || !is_finite(rect.max) || !(rect.width() > 0.0) || !(rect.height() > 0.0)) {
            problems.push_back(tag + ": degenerate rectangle");
            continue;
        }
        const double gap = std::min({rect.min.x() - w.outer.min.x(), w.outer.max.x() - rect.max.x(),
                                     rect.min.y() - w.outer.min.y(), w.outer.max.y() - rect.max.y()});
        if (!(gap >= 2.0 * r)) {
            problems.push_back(tag + ": touches the outer boundary (gap " + std::to_string(gap) +
                               " m leaves no corridor for the UAV)");
        }
    }
    auto occupied = [&](const Vec2& q) {
        return collision_query(q, w).kind != ContactKind::Clear;
    };
    for (std::size_t i = 0; i < w.targets.size(); ++i) {
        const Target& t = w.targets[i];
        const std::string tag = "targets[" + std::to_string(i) + "]";
        if (!is_finite(t.center) || !(t.radius > 0.0)) {
            problems.push_back(tag + ": needs a finite center and positive radius");
        } else if (!w.outer.contains(t.center) || occupied(t.center)) {
            problems.push_back(tag + ": not in the collision-free corridor");
        }
    }
    if (!is_finite(w.start.position) || !std::isfinite(w.start.yaw)) {
        problems.push_back("start_pose must be finite");
    } else if (!w.outer.contains(w.start.position) || occupied(w.start.position)) {
        problems.push_back("start_pose is not collision-free");
    }
    for (std::size_t i = 0; i < w.route.size(); ++i) {
        if (!is_finite(w.route[i]) || !w.outer.contains(w.route[i])) {
            problems.push_back("route[" + std::to_string(i) + "]: outside the outer rectangle");
        }
    }
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid world '" << w.name << "':";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw WorldError(msg.str());
    }
}

World world_from_json(const json& doc) {
    if (!doc.is_object()) throw WorldError("world: document must be a JSON object");
    const int version = static_cast<int>(number(require(doc, "schema_version", "world"), "schema_version"));
    if (version != kWorldSchemaVersion) {
        throw WorldError("world: unsupported schema_version " + std::to_string(version));
    }
    World w;
    w.name = doc.value("name", std::string{"unnamed"});
    w.uav_radius = number(require(doc, "uav_radius", "world"), "uav_radius");
    w.outer = rect_from_json(require(doc, "outer", "world"), "outer");
    if (doc.contains("inner")) {
        const json& inner = doc.at("inner");
        if (!inner.is_array()) throw WorldError("inner: expected an array");
        for (std::size_t i = 0; i < inner.size(); ++i) {
            w.inner.push_back(rect_from_json(inner[i], "inner[" + std::to_string(i) + "]"));
        }
    }
    const json& targets = require(doc, "targets", "world");
    if (!targets.is_array()) throw WorldError("targets: expected an array");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::string tag = "targets[" + std::to_string(i) + "]";
        Target t;
        t.center = vec_from_json(require(targets[i], "center", tag), tag + ".center");
        if (targets[i].contains("radius")) t.radius = number(targets[i].at("radius"), tag + ".radius");
        w.targets.push_back(t);
    }
    const json& start = require(doc, "start_pose", "world");
    w.start.position = vec_from_json(require(start, "position", "start_pose"), "start_pose.position");
    w.start.yaw = start.contains("yaw") ? number(start.at("yaw"), "start_pose.yaw") : 0.0;
    if (doc.contains("route")) {
        const json& route = doc.at("route");
        if (!route.is_array()) throw WorldError("route: expected an array");
        for (std::size_t i = 0; i < route.size(); ++i) {
            w.route.push_back(vec_from_json(route[i], "route[" + std::to_string(i) + "]"));
        }
    }
    validate_world(w);
    return w;
}

json world_to_json(const World& w) {
    json doc;
    doc["schema_version"] = kWorldSchemaVersion;
    doc["name"] = w.name;
    doc["uav_radius"] = w.uav_radius;
    doc["outer"] = rect_to_json(w.outer);
    doc["inner"] = json::array();
    for (const auto& r : w.inner) doc["inner"].push_back(rect_to_json(r));
    doc["targets"] = json::array();
    for (const auto& t : w.targets) doc["targets"].push_back({{"center", vec_to_json(t.center)}, {"radius", t.radius}});
    doc["start_pose"] = {{"position", vec_to_json(w.start.position)}, {"yaw", w.start.yaw}};
    doc["route"] = json::array();
    for (const auto& p : w.route) doc["route"].push_back(vec_to_json(p));
    return doc;
}

World load_world(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw WorldError("cannot open world file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw WorldError(path.string() + ": " + e.what());
    }
    World w = world_from_json(doc);
    if (w.name == "unnamed") w.name = path.stem().string();
    return w;
}

std::string obstacle_name(const World& world, std::size_t index) {
    static const char* walls[] = {"left wall", "right wall", "bottom wall", "top wall"};
    if (index < 4) return walls[index];
    if (index < obstacle_count(world)) return "inner[" + std::to_string(index - 4) + "]";
    return "unknown";
}

CollisionResult collision_query(const Vec2& q, const World& world, const CrashConfig& cfg) {
    const double r = world.uav_radius;
    const double clearances[4] = {q.x() - world.outer.min.x(), world.outer.max.x() - q.x(),
                                  q.y() - world.outer.min.y(), world.outer.max.y() - q.y()};
    CollisionResult out;
    double deepest = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double pen = r - clearances[i];
        if (pen > deepest) {
            deepest = pen;
            out.obstacle = i;
        }
    }
    for (std::size_t i = 0; i < world.inner.size(); ++i) {
        const double pen = r - world.inner[i].signed_distance(q);
        if (pen > deepest) {
            deepest = pen;
            out.obstacle = 4 + i;
        }
    }
    out.depth = deepest;
    if (deepest > cfg.crash_depth) {
        out.kind = ContactKind::Crash;
    } else if (deepest > cfg.contact_tolerance) {
        out.kind = ContactKind::Contact;
    } else {
        out.kind = ContactKind::Clear;
    }
    return out;
}

const char* to_string(ContactKind kind) {
    switch (kind) {
        case ContactKind::Clear: return "clear";
        case ContactKind::Contact: return "contact";
        case ContactKind::Crash: return "crash";
    }
    return "unknown";
}

}  // namespace cbft
