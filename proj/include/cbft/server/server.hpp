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
#ifndef CBFT_SERVER_SERVER_HPP
#define CBFT_SERVER_SERVER_HPP

#include "cbft/config.hpp"
#include "cbft/server/session.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

namespace cbft::server {

/// Outcome of configure_session: a session id or the reason there is none.
struct ConfigureResult {
    std::optional<std::uint64_t> session;
    std::size_t barriers = 0;
    std::string error;
};

/// Owns the live session and the finished logs. Not thread-safe; the server calls it from
/// its single I/O thread.
class SessionRegistry {
public:
    explicit SessionRegistry(PipelineConfig config);

    /// World names (file stems) available in the worlds directory, sorted.
    std::vector<std::string> worlds() const;

    /// Finalizes the current session (log kept, and written to log_dir when set) and starts a new one.
    ConfigureResult configure_session(const ConfigureMessage& msg);

    Session* active() { return active_.get(); }
    /// JSON-lines log of a live or finished session.
    std::optional<std::string> log(std::uint64_t id) const;

    const PipelineConfig& config() const { return config_; }

    void finalize_active();

private:
    PipelineConfig config_;
    std::unique_ptr<Session> active_;
    std::map<std::uint64_t, std::string> finished_;
    std::uint64_t next_id_ = 1;
};

/// HTTP + WebSocket front end: GET /worlds, POST /session, GET /session/<id>/log, and /ws for
/// input, configure and telemetry frames. Ticks are paced by a steady timer at dt.
class TeleopServer {
public:
    explicit TeleopServer(PipelineConfig config);
    ~TeleopServer();
    TeleopServer(const TeleopServer&) = delete;
    TeleopServer& operator=(const TeleopServer&) = delete;

    /// Binds and starts serving on a background thread. Port 0 picks a free port.
    void start(bool handle_signals = false);
    /// Blocks until stop() is called from another thread, or a signal arrives when start() was
    /// asked to handle them. Finalizes
    /// the live session.
    void wait();
    void stop();
    unsigned short port() const;

    struct Impl;  // opaque; public only so connection classes can name it

private:
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
};

}  // namespace cbft::server

#endif  // CBFT_SERVER_SERVER_HPP
