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
#include "cbft/server/server.hpp"

#include "cbft/world.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <deque>
#include <fstream>
#include <set>

namespace cbft::server {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

// ---------------------------------------------------------------------------------------
// SessionRegistry

SessionRegistry::SessionRegistry(PipelineConfig config) : config_(std::move(config)) {}

std::vector<std::string> SessionRegistry::worlds() const {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(config_.server.worlds_dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

namespace {

bool plain_name(const std::string& name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

}  // namespace

ConfigureResult SessionRegistry::configure_session(const ConfigureMessage& msg) {
    ConfigureResult res;
    if (!plain_name(msg.world)) {
        res.error = "world name '" + msg.world + "' may only contain letters, digits, '_' and '-'";
        return res;
    }
    const auto path = std::filesystem::path(config_.server.worlds_dir) / (msg.world + ".json");
    if (!std::filesystem::is_regular_file(path)) {
        res.error = "world '" + msg.world + "' not found in " + config_.server.worlds_dir;
        return res;
    }
    std::unique_ptr<Session> next;
    try {
        next = std::make_unique<Session>(next_id_, msg.world, load_world(path), msg.condition, msg.mode, config_);
    } catch (const std::exception& e) {
        res.error = e.what();
        return res;
    }
    finalize_active();
    ++next_id_;
    active_ = std::move(next);
    res.session = active_->id();
    res.barriers = active_->simulation().barriers().size();
    return res;
}

void SessionRegistry::finalize_active() {
    if (!active_) return;
    std::string text = active_->log_jsonl();
    if (!config_.server.log_dir.empty()) {
        std::filesystem::create_directories(config_.server.log_dir);
        std::ofstream out(std::filesystem::path(config_.server.log_dir) /
                          ("session_" + std::to_string(active_->id()) + ".jsonl"));
        out << text;
    }
    finished_[active_->id()] = std::move(text);
    active_.reset();
}

std::optional<std::string> SessionRegistry::log(std::uint64_t id) const {
    if (active_ && active_->id() == id) return active_->log_jsonl();
    const auto it = finished_.find(id);
    if (it == finished_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------------------
// Connections

namespace {

class WsConnection;

}  // namespace

struct TeleopServer::Impl {
    explicit Impl(PipelineConfig cfg)
        : config(cfg), acceptor(ioc), timer(ioc), signals(ioc), registry(std::move(cfg)),
          epoch(std::chrono::steady_clock::now()) {}

    double now() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch).count();
    }

    void accept();
    void schedule_tick();
    void on_tick();
    void broadcast(const Message& msg);
    http::response<http::string_body> handle(const http::request<http::string_body>& req);
    json configure(const ConfigureMessage& msg, std::string* error);

    void on_ws_open(const std::shared_ptr<WsConnection>& c);
    void on_ws_close(const std::shared_ptr<WsConnection>& c);
    void on_ws_message(const std::shared_ptr<WsConnection>& c, const std::string& text);

    PipelineConfig config;
    net::io_context ioc{1};
    tcp::acceptor acceptor;
    net::steady_timer timer;
    net::signal_set signals;
    SessionRegistry registry;
    std::set<std::shared_ptr<WsConnection>> clients;
    std::chrono::steady_clock::time_point epoch;
    std::chrono::steady_clock::time_point next_tick;
    unsigned short bound_port = 0;
};

namespace {

constexpr std::size_t kMaxQueuedFrames = 256;

class WsConnection : public std::enable_shared_from_this<WsConnection> {
public:
    WsConnection(tcp::socket&& socket, TeleopServer::Impl& srv) : ws_(std::move(socket)), srv_(srv) {}

    void run(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->open_ = true;
            self->srv_.on_ws_open(self);
            self->read();
        });
    }

    void send(std::shared_ptr<const std::string> frame) {
        if (!open_) return;
        // A client that stops reading loses its oldest queued frames, never the one in flight.
        if (queue_.size() >= kMaxQueuedFrames) queue_.erase(queue_.begin() + 1);
        queue_.push_back(std::move(frame));
        if (queue_.size() == 1) write();
    }

    void close() {
        if (!open_) return;
        open_ = false;
        srv_.on_ws_close(shared_from_this());
        beast::error_code ec;
        beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            const std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->srv_.on_ws_message(self, text);
            self->read();
        });
    }

    void write() {
        ws_.text(true);
        ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->close();
                return;
            }
            self->queue_.pop_front();
            if (!self->queue_.empty()) self->write();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    TeleopServer::Impl& srv_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    bool open_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket&& socket, TeleopServer::Impl& srv) : stream_(std::move(socket)), srv_(srv) {}

    void read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

private:
    void on_read(beast::error_code ec) {
        if (ec == http::error::end_of_stream) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (ec) return;
        if (websocket::is_upgrade(req_) && req_.target() == "/ws") {
            stream_.expires_never();
            std::make_shared<WsConnection>(stream_.release_socket(), srv_)->run(std::move(req_));
            return;
        }
        auto res = std::make_shared<http::response<http::string_body>>(srv_.handle(req_));
        res->keep_alive(req_.keep_alive());
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
            if (wec) return;
            if (!res->keep_alive()) {
                beast::error_code sec;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, sec);
                return;
            }
            self->read();
        });
    }

    beast::tcp_stream stream_;
    TeleopServer::Impl& srv_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
};

http::response<http::string_body> reply(http::status status, unsigned version, std::string body,
                                        const char* content_type = "application/json") {
    http::response<http::string_body> res{status, version};
    res.set(http::field::server, "cbft");
    res.set(http::field::content_type, content_type);
    res.set(http::field::access_control_allow_origin, "*");
    res.body() = std::move(body);
    return res;
}

std::string error_body(const std::string& message) { return json{{"error", message}}.dump(); }

}  // namespace

void TeleopServer::Impl::accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) return;  // acceptor closed
        std::make_shared<HttpConnection>(std::move(socket), *this)->read();
        accept();
    });
}

void TeleopServer::Impl::schedule_tick() {
    timer.expires_at(next_tick);
    timer.async_wait([this](beast::error_code ec) {
        if (!ec) on_tick();
    });
}

void TeleopServer::Impl::on_tick() {
    if (Session* s = registry.active()) {
        if (auto out = s->tick(now())) {
            broadcast(out->telemetry);
            for (const auto& e : out->events) broadcast(e);
        }
    }
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(config.control.dt));
    next_tick += period;
    // After a stall, resume the cadence from now instead of bursting to catch up.
    const auto current = std::chrono::steady_clock::now();
    if (next_tick < current - period) next_tick = current + period;
    schedule_tick();
}

void TeleopServer::Impl::broadcast(const Message& msg) {
    if (clients.empty()) return;
    auto frame = std::make_shared<const std::string>(encode(msg));
    // Copy: a failed send may detach a client while we iterate.
    const auto targets = clients;
    for (const auto& c : targets) c->send(frame);
}

json TeleopServer::Impl::configure(const ConfigureMessage& msg, std::string* error) {
    const ConfigureResult res = registry.configure_session(msg);
    if (!res.session) {
        *error = res.error;
        return {};
    }
    Session* s = registry.active();
    for (std::size_t i = 0; i < clients.size(); ++i) s->client_connected(now());
    TrialEventMessage ready;
    ready.session = *res.session;
    ready.event = TrialEventKind::SessionReady;
    ready.barriers = res.barriers;
    broadcast(ready);
    return {{"session", *res.session},
            {"world", msg.world},
            {"condition", to_string(msg.condition)},
            {"mode", to_string(msg.mode)},
            {"barriers", res.barriers}};
}

http::response<http::string_body> TeleopServer::Impl::handle(const http::request<http::string_body>& req) {
    std::string target(req.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    const unsigned v = req.version();

    if (req.method() == http::verb::options) {
        auto res = reply(http::status::no_content, v, "");
        res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
        res.set(http::field::access_control_allow_headers, "Content-Type");
        return res;
    }
    if (target == "/worlds") {
        if (req.method() != http::verb::get) return reply(http::status::method_not_allowed, v, error_body("use GET"));
        return reply(http::status::ok, v, json{{"worlds", registry.worlds()}}.dump());
    }
    if (target == "/session") {
        if (req.method() != http::verb::post) return reply(http::status::method_not_allowed, v, error_body("use POST"));
        ConfigureMessage msg;
        try {
            json body = req.body().empty() ? json::object() : json::parse(req.body());
            if (!body.is_object()) return reply(http::status::bad_request, v, error_body("body must be a JSON object"));
            body["type"] = "configure";
            msg = std::get<ConfigureMessage>(decode(body.dump()));
        } catch (const json::exception& e) {
            return reply(http::status::bad_request, v, error_body(std::string("malformed JSON: ") + e.what()));
        } catch (const MessageError& e) {
            return reply(http::status::bad_request, v, error_body(e.what()));
        }
        std::string error;
        const json ok = configure(msg, &error);
        if (!error.empty()) return reply(http::status::bad_request, v, error_body(error));
        return reply(http::status::ok, v, ok.dump());
    }
    constexpr std::string_view prefix = "/session/";
    constexpr std::string_view suffix = "/log";
    if (target.size() > prefix.size() + suffix.size() && target.starts_with(prefix) && target.ends_with(suffix)) {
        if (req.method() != http::verb::get) return reply(http::status::method_not_allowed, v, error_body("use GET"));
        const std::string id_text = target.substr(prefix.size(), target.size() - prefix.size() - suffix.size());
        std::uint64_t id = 0;
        const auto [end, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
        if (ec != std::errc() || end != id_text.data() + id_text.size()) {
            return reply(http::status::bad_request, v, error_body("session id must be an integer"));
        }
        if (auto text = registry.log(id)) {
            auto res = reply(http::status::ok, v, std::move(*text), "application/x-ndjson");
            res.set(http::field::content_disposition, "attachment; filename=\"session_" + id_text + ".jsonl\"");
            return res;
        }
        return reply(http::status::not_found, v, error_body("no session " + id_text));
    }
    return reply(http::status::not_found, v, error_body("no route " + target));
}

void TeleopServer::Impl::on_ws_open(const std::shared_ptr<WsConnection>& c) {
    clients.insert(c);
    if (Session* s = registry.active()) s->client_connected(now());
}

void TeleopServer::Impl::on_ws_close(const std::shared_ptr<WsConnection>& c) {
    if (clients.erase(c) == 0) return;
    if (Session* s = registry.active()) s->client_disconnected(now());
}

void TeleopServer::Impl::on_ws_message(const std::shared_ptr<WsConnection>& c, const std::string& text) {
    auto fail = [&](const std::string& message) {
        c->send(std::make_shared<const std::string>(encode(ErrorMessage{message})));
    };
    Message msg;
    try {
        msg = decode(text);
    } catch (const MessageError& e) {
        fail(e.what());
        return;
    }
    if (const auto* in = std::get_if<InputMessage>(&msg)) {
        Session* s = registry.active();
        if (!s) {
            fail("no session configured");
            return;
        }
        s->submit_input(*in, now());
        return;
    }
    if (const auto* cfg = std::get_if<ConfigureMessage>(&msg)) {
        std::string error;
        configure(*cfg, &error);
        if (!error.empty()) fail(error);
        return;
    }
    fail("clients may only send input and configure messages");
}

// ---------------------------------------------------------------------------------------
// TeleopServer

TeleopServer::TeleopServer(PipelineConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
    validate(impl_->config);
}

TeleopServer::~TeleopServer() { stop(); }

void TeleopServer::start(bool handle_signals) {
    Impl& m = *impl_;
    const auto address = net::ip::make_address(m.config.server.bind_address);
    const tcp::endpoint endpoint(address, m.config.server.port);
    m.acceptor.open(endpoint.protocol());
    m.acceptor.set_option(net::socket_base::reuse_address(true));
    m.acceptor.bind(endpoint);
    m.acceptor.listen(net::socket_base::max_listen_connections);
    m.bound_port = m.acceptor.local_endpoint().port();
    m.accept();
    m.next_tick = std::chrono::steady_clock::now();
    m.schedule_tick();
    if (handle_signals) {
        m.signals.add(SIGINT);
        m.signals.add(SIGTERM);
        m.signals.async_wait([&m](beast::error_code ec, int) {
            if (!ec) m.ioc.stop();
        });
    }
    thread_ = std::thread([&m] { m.ioc.run(); });
}

void TeleopServer::wait() {
    if (thread_.joinable()) thread_.join();
    impl_->registry.finalize_active();
}

void TeleopServer::stop() {
    Impl& m = *impl_;
    if (thread_.joinable()) {
        // Hang up on every client from the I/O thread so their reads see EOF, then stop.
        net::post(m.ioc, [&m] {
            beast::error_code ec;
            m.acceptor.close(ec);
            m.timer.cancel();
            const auto open = m.clients;
            for (const auto& c : open) c->close();
            m.ioc.stop();
        });
    } else {
        m.ioc.stop();
    }
    wait();
}

unsigned short TeleopServer::port() const { return impl_->bound_port; }

}  // namespace cbft::server
