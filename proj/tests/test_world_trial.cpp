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
#include "cbft/trial.hpp"
#include "cbft/trial_log.hpp"
#include "cbft/world.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <random>
#include <sstream>

using namespace cbft;
using nlohmann::json;

namespace {

World hallway() { return load_world(CBFT_SOURCE_DIR "/data/worlds/hallway.json"); }

UAVState at(const Vec2& q, double t) {
    UAVState s;
    s.position = q;
    s.time = t;
    return s;
}

Sample sample(double t, double x, double y, bool contact = false) {
    Sample s;
    s.t = t;
    s.position = {x, y};
    s.contact = contact;
    return s;
}

const CollisionResult clear{};

}  // namespace

TEST_CASE("collision_query examples") {
    const World world = hallway();
    // Corridor between the left wall and the first pillar is 2 m wide.
    const auto mid = collision_query({1.0, 4.5}, world);
    CHECK(mid.kind == ContactKind::Clear);
    CHECK(mid.depth == 0.0);
    CHECK_FALSE(mid.obstacle.has_value());

    const auto touch = collision_query({0.24, 4.5}, world);
    CHECK(touch.kind == ContactKind::Contact);
    CHECK(touch.depth == doctest::Approx(0.01));
    REQUIRE(touch.obstacle.has_value());
    CHECK(*touch.obstacle == 0);

    const auto crash = collision_query({0.10, 4.5}, world);
    CHECK(crash.kind == ContactKind::Crash);
    CHECK(crash.depth == doctest::Approx(0.15));

    // Pillar corner, diagonal approach.
    const double s = 0.2 / std::sqrt(2.0);
    const auto corner = collision_query({2.0 - s, 2.0 - s}, world);
    CHECK(corner.kind == ContactKind::Contact);
    CHECK(corner.depth == doctest::Approx(0.05));
    CHECK(*corner.obstacle == 4);
}

TEST_CASE("collision depth matches a sampled clearance") {
    const World world = hallway();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.0, 12.0), uy(0.0, 9.0);
    // Perimeter step is at most 5 m / 20000; the sampled distance is off by at most half of it.
    const double tol = 0.5 * 5.0 / 20000 + 1e-12;
    for (int i = 0; i < 500; ++i) {
        const Vec2 q(ux(rng), uy(rng));
        bool inside = false;
        for (const auto& rect : world.inner) inside = inside || rect.contains(q);
        if (inside) continue;
        double clearance = std::min({q.x(), 12.0 - q.x(), q.y(), 9.0 - q.y()});
        for (const auto& rect : world.inner) {
            clearance = std::min(clearance, oracle::rect_clearance_sampled(q, rect, 20000));
        }
        const double expected = std::max(0.0, world.uav_radius - clearance);
        CHECK(std::abs(collision_query(q, world).depth - expected) <= tol);
    }
}

TEST_CASE("trial waits for the first non-zero command") {
    const World world = hallway();
    const TrialConfig cfg;
    TrialState t;
    t = update_trial(t, at({1.0, 1.0}, 0.02), false, clear, world, cfg, 0.02);
    CHECK(t.phase == Phase::Idle);
    CHECK(t.start_time == 0.0);
    t = update_trial(t, at({1.0, 1.0}, 0.04), true, clear, world, cfg, 0.02);
    CHECK(t.phase == Phase::Running);
    CHECK(t.start_time == doctest::Approx(0.02));
}

TEST_CASE("targets are visited in order") {
    const World world = hallway();
    const TrialConfig cfg;
    TrialState t;
    t.phase = Phase::Running;
    t.next_target = 3;
    // Over target 3.
    auto a = update_trial(t, at(world.targets[3].center, 1.0), true, clear, world, cfg, 0.02);
    CHECK(a.next_target == 4);
    CHECK(a.phase == Phase::Running);
    // Over target 4 while 2 is next: nothing.
    t.next_target = 2;
    auto b = update_trial(t, at(world.targets[4].center, 1.0), true, clear, world, cfg, 0.02);
    CHECK(b.next_target == 2);
    // Final target finishes the trial.
    t.next_target = 4;
    auto c = update_trial(t, at(world.targets[4].center, 7.0), true, clear, world, cfg, 0.02);
    CHECK(c.phase == Phase::Succeeded);
    CHECK(c.next_target == 5);
    CHECK(c.end_time == 7.0);
    // Terminal states stay put.
    auto d = update_trial(c, at({0.1, 0.1}, 8.0), true, collision_query({0.1, 0.1}, world), world, cfg, 0.02);
    CHECK(d.phase == Phase::Succeeded);
    CHECK(d.end_time == 7.0);
}

TEST_CASE("crash, contact timeout and timeout fail the trial") {
    const World world = hallway();
    const TrialConfig cfg;
    TrialState t;
    t.phase = Phase::Running;

    const CollisionResult crash = collision_query({0.1, 4.5}, world);
    auto a = update_trial(t, at({0.1, 4.5}, 1.0), true, crash, world, cfg, 0.02);
    CHECK(a.phase == Phase::Failed);
    CHECK(a.reason == FailureReason::Crash);

    const CollisionResult touch = collision_query({0.24, 4.5}, world);
    TrialState c = t;
    int ticks = 0;
    while (!c.terminal() && ticks < 1000) {
        ++ticks;
        c = update_trial(c, at({0.24, 4.5}, ticks * 0.02), true, touch, world, cfg, 0.02);
    }
    CHECK(c.reason == FailureReason::ContactTimeout);
    CHECK(ticks == 51);

    // Leaving contact resets the timer.
    TrialState r = t;
    for (int i = 0; i < 40; ++i) r = update_trial(r, at({0.24, 4.5}, i * 0.02), true, touch, world, cfg, 0.02);
    r = update_trial(r, at({1.0, 4.5}, 0.82), true, clear, world, cfg, 0.02);
    CHECK(r.crash_timer == 0.0);
    CHECK_FALSE(r.contact);

    TrialConfig short_cfg;
    short_cfg.timeout = 1.0;
    auto z = update_trial(t, at({1.0, 4.5}, 1.5), true, clear, world, short_cfg, 0.02);
    CHECK(z.phase == Phase::Failed);
    CHECK(z.reason == FailureReason::Timeout);
}

TEST_CASE("next_target advances by at most one per tick") {
    // Two overlapping targets: standing on both only counts the first.
    World world = hallway();
    world.targets = {{{1.0, 4.5}, 0.5}, {{1.1, 4.5}, 0.5}, {{11.0, 1.0}, 0.25}};
    const TrialConfig cfg;
    TrialState t;
    t.phase = Phase::Running;
    t = update_trial(t, at({1.05, 4.5}, 1.0), true, clear, world, cfg, 0.02);
    CHECK(t.next_target == 1);
    t = update_trial(t, at({1.05, 4.5}, 1.02), true, clear, world, cfg, 0.02);
    CHECK(t.next_target == 2);
}

TEST_CASE("compute_metrics examples") {
    std::vector<Sample> straight;
    for (int i = 0; i <= 200; ++i) straight.push_back(sample(i * 0.05, 1.0 + i * 0.05, 1.0));
    const Metrics m = compute_metrics(straight);
    CHECK(m.total_distance == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(m.trial_time == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(m.average_speed == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.collision_time == 0.0);

    const std::vector<Sample> still = {sample(0, 2, 2), sample(1, 2, 2), sample(2, 2, 2)};
    CHECK(compute_metrics(still).total_distance == 0.0);
    CHECK(compute_metrics(still).average_speed == 0.0);

    const std::vector<Sample> poly = {sample(0, 0, 0), sample(1, 3, 0), sample(2, 3, 4)};
    const Metrics p = compute_metrics(poly);
    CHECK(p.total_distance == 7.0);
    CHECK(p.trial_time == 2.0);
    CHECK(p.average_speed == 3.5);

    const std::vector<Sample> touching = {sample(0, 0, 0, true), sample(0.5, 0, 0, false), sample(1.5, 0, 0, true),
                                          sample(2.0, 0, 0)};
    CHECK(compute_metrics(touching).collision_time == doctest::Approx(1.0));
}

TEST_CASE("compute_metrics rejects short or non-monotone logs") {
    const std::vector<Sample> one = {sample(0, 0, 0)};
    CHECK_THROWS_AS(compute_metrics(one), LogError);
    const std::vector<Sample> back = {sample(0, 0, 0), sample(1, 1, 0), sample(0.5, 2, 0)};
    CHECK_THROWS_AS(compute_metrics(back), LogError);
}

TEST_CASE("metrics survive re-chunking the sample stream") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> step(0.0, 0.05);
    std::bernoulli_distribution touch(0.1);
    std::vector<Sample> samples;
    double x = 1.0, y = 1.0;
    for (int i = 0; i < 3000; ++i) {
        x += step(rng);
        y += step(rng);
        samples.push_back(sample(i * 0.05, x, y, touch(rng)));
    }
    const Metrics whole = compute_metrics(samples);
    std::uniform_int_distribution<std::size_t> cut(1, samples.size() - 2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> cuts = {0, cut(rng), cut(rng), cut(rng), samples.size() - 1};
        std::sort(cuts.begin(), cuts.end());
        Metrics sum;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] == cuts[k]) continue;
            const std::span<const Sample> part(samples.data() + cuts[k], cuts[k + 1] - cuts[k] + 1);
            const Metrics m = compute_metrics(part);
            sum.total_distance += m.total_distance;
            sum.trial_time += m.trial_time;
            sum.collision_time += m.collision_time;
        }
        CHECK(std::abs(sum.total_distance - whole.total_distance) <= 1e-9);
        CHECK(std::abs(sum.trial_time - whole.trial_time) <= 1e-9);
        CHECK(std::abs(sum.collision_time - whole.collision_time) <= 1e-9);
        CHECK(std::abs(sum.total_distance / sum.trial_time - whole.average_speed) <= 1e-9);
    }
}

TEST_CASE("shipped hallway matches the stated dimensions") {
    const World world = hallway();
    CHECK(world.uav_radius == 0.25);
    CHECK(world.outer.width() == 12.0);
    CHECK(world.outer.height() == 9.0);
    CHECK(world.inner.size() == 3);
    CHECK(world.targets.size() == 5);
    // Every corridor is 2 m wide.
    CHECK(world.inner[0].min.x() - world.outer.min.x() == doctest::Approx(2.0));
    CHECK(world.inner[1].min.x() - world.inner[0].max.x() == doctest::Approx(2.0));
    CHECK(world.inner[2].min.x() - world.inner[1].max.x() == doctest::Approx(2.0));
    CHECK(world.outer.max.x() - world.inner[2].max.x() == doctest::Approx(2.0));
    CHECK(world.inner[0].min.y() == doctest::Approx(2.0));
    CHECK(world.outer.max.y() - world.inner[0].max.y() == doctest::Approx(2.0));
    for (const auto& t : world.targets) CHECK(collision_query(t.center, world).kind == ContactKind::Clear);
}

TEST_CASE("world JSON round-trips") {
    const World world = hallway();
    const World back = world_from_json(world_to_json(world));
    CHECK(back.name == world.name);
    CHECK(back.outer.min == world.outer.min);
    CHECK(back.outer.max == world.outer.max);
    REQUIRE(back.inner.size() == world.inner.size());
    for (std::size_t i = 0; i < world.inner.size(); ++i) {
        CHECK(back.inner[i].min == world.inner[i].min);
        CHECK(back.inner[i].max == world.inner[i].max);
    }
    REQUIRE(back.targets.size() == world.targets.size());
    CHECK(back.targets[2].center == world.targets[2].center);
    CHECK(back.start.position == world.start.position);
    CHECK(back.start.yaw == world.start.yaw);
    CHECK(back.route == world.route);
}

TEST_CASE("world loading rejects bad documents") {
    const json good = world_to_json(hallway());
    auto rejects = [](const json& doc, const std::string& needle) {
        try {
            world_from_json(doc);
        } catch (const WorldError& e) {
            const std::string what = e.what();
            CHECK_MESSAGE(what.find(needle) != std::string::npos, what);
            return;
        }
        FAIL("accepted an invalid world: " << doc.dump());
    };
    json doc = good;
    doc["schema_version"] = 2;
    rejects(doc, "schema_version");
    doc = good;
    doc.erase("outer");
    rejects(doc, "outer");
    doc = good;
    doc["uav_radius"] = -1.0;
    rejects(doc, "uav_radius");
    doc = good;
    doc["inner"][0]["min"] = {0.2, 2.0};
    rejects(doc, "inner[0]");
    doc = good;
    doc["targets"][1]["center"] = {2.5, 4.5};
    rejects(doc, "targets[1]");
    doc = good;
    doc["start_pose"]["position"] = {0.1, 0.1};
    rejects(doc, "start_pose");
    doc = good;
    doc["targets"][0]["center"] = "left";
    rejects(doc, "targets[0].center");
    // Several problems are all reported.
    doc = good;
    doc["targets"][1]["center"] = {2.5, 4.5};
    doc["start_pose"]["position"] = {0.1, 0.1};
    try {
        world_from_json(doc);
        FAIL("accepted");
    } catch (const WorldError& e) {
        const std::string what = e.what();
        CHECK(what.find("targets[1]") != std::string::npos);
        CHECK(what.find("start_pose") != std::string::npos);
    }
    CHECK_THROWS_AS(load_world("/nonexistent/world.json"), WorldError);
}

TEST_CASE("JSON lines log round-trips") {
    TrialLog log;
    log.trial_index = 7;
    log.seed = 123456789012345ULL;
    log.condition = Condition::PRF;
    log.mode = Mode::Override;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 50; ++i) {
        Sample s = sample(i * 0.05, u(rng), u(rng), i % 7 == 0);
        s.velocity = {u(rng), u(rng)};
        s.yaw = u(rng);
        s.u_ref = {u(rng), u(rng)};
        s.u_safe = {u(rng), u(rng)};
        s.force = {u(rng), u(rng)};
        s.condition = Condition::PRF;
        log.samples.push_back(s);
    }
    log.metrics = compute_metrics(log.samples);
    log.outcome = Outcome::Failure;
    log.reason = FailureReason::ContactTimeout;
    log.min_barrier = -0.125;
    log.crash_events = 1;

    std::stringstream io;
    write_jsonl(io, log);
    const TrialLog back = read_jsonl(io);
    CHECK(back.trial_index == 7);
    CHECK(back.seed == log.seed);
    CHECK(back.condition == Condition::PRF);
    CHECK(back.mode == Mode::Override);
    CHECK(back.metrics == log.metrics);
    CHECK(back.outcome == Outcome::Failure);
    CHECK(back.reason == FailureReason::ContactTimeout);
    CHECK(back.min_barrier == -0.125);
    CHECK(back.crash_events == 1);
    REQUIRE(back.samples.size() == log.samples.size());
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        CHECK(back.samples[i].position == log.samples[i].position);
        CHECK(back.samples[i].force == log.samples[i].force);
        CHECK(back.samples[i].u_safe == log.samples[i].u_safe);
        CHECK(back.samples[i].contact == log.samples[i].contact);
    }
    CHECK(compute_metrics(back.samples) == log.metrics);
}

TEST_CASE("malformed logs are rejected") {
    std::istringstream no_summary(R"({"type":"sample","t":0,"x":0,"y":0,"yaw":0,"vx":0,"vy":0,"urx":0,"ury":0,"ux":0,"uy":0,"fx":0,"fy":0,"contact":false,"condition":"N"})"
                                  "\n");
    CHECK_THROWS_AS(read_jsonl(no_summary), LogError);
    std::istringstream garbage("{not json\n");
    CHECK_THROWS_AS(read_jsonl(garbage), LogError);
    std::istringstream missing(R"({"type":"sample","t":0})" "\n");
    CHECK_THROWS_AS(read_jsonl(missing), LogError);
    std::istringstream unknown(R"({"type":"header"})" "\n");
    CHECK_THROWS_AS(read_jsonl(unknown), LogError);
}

TEST_CASE("CSV export has the documented columns") {
    const std::vector<Sample> samples = {sample(0, 1, 2), sample(0.05, 1.5, 2, true)};
    std::ostringstream out;
    write_csv(out, samples);
    std::istringstream lines(out.str());
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(header == "t,x,y,yaw,vx,vy,urx,ury,ux,uy,fx,fy,contact,condition");
    CHECK(first == "0,1,2,0,0,0,0,0,0,0,0,0,0,N");
    CHECK(second == "0.050000000000000003,1.5,2,0,0,0,0,0,0,0,0,0,1,N");
}
