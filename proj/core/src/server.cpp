#include "confassist/server.hpp"

#include <condition_variable>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "confassist/error.hpp"

namespace confassist {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

struct Closable {
  virtual ~Closable() = default;
  virtual void close() = 0;
};

// Lives on the io thread only.
struct Registry {
  std::map<std::uint64_t, std::weak_ptr<Closable>> open;
  std::uint64_t next = 1;
  bool stopping = false;

  std::uint64_t add(std::weak_ptr<Closable> c) {
    open[next] = std::move(c);
    return next++;
  }
  void remove(std::uint64_t id) { open.erase(id); }
};

using Response = http::response<http::string_body>;
using Request = http::request<http::string_body>;

Response json_response(const Request& req, http::status status, const nlohmann::json& body) {
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.set(http::field::cache_control, "no-store");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

Response error_response(const Request& req, http::status status, std::string_view code,
                        const std::string& message) {
  return json_response(req, status, {{"error", {{"code", code}, {"message", message}}}});
}

http::status status_for(const WireError& e) {
  const auto& c = e.code();
  if (c == wire_error::kUnknownSession) return http::status::not_found;
  if (c == wire_error::kCapacity) return http::status::service_unavailable;
  if (c == wire_error::kInternal) return http::status::internal_server_error;
  return http::status::bad_request;
}

const char* mime_type(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".woff2") return "font/woff2";
  return "application/octet-stream";
}

// Maps "/chat/a/b.js" onto static_dir; nullopt for anything escaping it.
std::optional<std::filesystem::path> static_path(const std::filesystem::path& root,
                                                 std::string_view target) {
  if (root.empty()) return std::nullopt;
  auto rel = std::string(target.substr(std::string_view("/chat").size()));
  if (const auto q = rel.find_first_of("?#"); q != std::string::npos) rel.resize(q);
  while (!rel.empty() && rel.front() == '/') rel.erase(rel.begin());
  if (rel.empty()) rel = "index.html";
  if (rel.find('\\') != std::string::npos || rel.find('\0') != std::string::npos) {
    return std::nullopt;
  }
  std::filesystem::path p(rel);
  for (const auto& part : p) {
    if (part == ".." || part == ".") return std::nullopt;
  }
  std::error_code ec;
  const auto base = std::filesystem::weakly_canonical(root, ec);
  if (ec) return std::nullopt;
  auto full = std::filesystem::weakly_canonical(base / p, ec);
  if (ec) return std::nullopt;
  const auto [mismatch, _] = std::mismatch(base.begin(), base.end(), full.begin(), full.end());
  if (mismatch != base.end()) return std::nullopt;
  if (std::filesystem::is_directory(full, ec)) full /= "index.html";
  if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

class WsSession : public Connection,
                  public Closable,
                  public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, Gateway& gateway, Registry& registry)
      : ws_(std::move(socket)), gateway_(gateway), registry_(registry) {}

  void run(Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.read_message_max(64 * 1024);
    reg_id_ = registry_.add(shared_from_this());
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_ || self->registry_.stopping) {
        self->registry_.remove(self->reg_id_);
        if (!ec) self->close();
        return;
      }
      self->conn_id_ = self->gateway_.attach(self);
      self->do_read();
    });
  }

  void send(const WireMessage& message) override {
    net::post(ws_.get_executor(),
              [self = shared_from_this(), text = serialize(message)]() mutable {
                if (self->closed_) return;
                self->queue_.push_back(std::move(text));
                if (self->queue_.size() == 1) self->do_write();
              });
  }

  void close() override {
    if (closed_) return;
    closed_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).close();
  }

 private:
  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->finish();
      const auto text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->gateway_.on_frame(self->conn_id_, text);
      self->do_read();
    });
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->queue_.clear();
                        return self->close();
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) self->do_write();
                    });
  }

  void finish() {
    if (conn_id_ != 0) gateway_.detach(conn_id_);
    conn_id_ = 0;
    registry_.remove(reg_id_);
    closed_ = true;
    queue_.clear();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  Gateway& gateway_;
  Registry& registry_;
  std::deque<std::string> queue_;
  ConnectionId conn_id_ = 0;
  std::uint64_t reg_id_ = 0;
  bool closed_ = false;
};

class HttpSession : public Closable, public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, Gateway& gateway, const ServerOptions& options,
              Registry& registry)
      : stream_(std::move(socket)), gateway_(gateway), options_(options), registry_(registry) {}

  void run() {
    reg_id_ = registry_.add(shared_from_this());
    do_read();
  }

  void close() override {
    beast::error_code ec;
    stream_.socket().shutdown(tcp::socket::shutdown_both, ec);
    stream_.close();
  }

 private:
  void do_read() {
    parser_.emplace();
    parser_->body_limit(options_.body_limit);
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, *parser_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      registry_.remove(reg_id_);
      if (ec == http::error::body_limit) {
        Request req;
        write(error_response(req, http::status::payload_too_large, wire_error::kMalformed,
                             "request body too large"),
              false);
      }
      return;
    }
    auto req = parser_->release();
    if (websocket::is_upgrade(req)) {
      registry_.remove(reg_id_);
      if (req.target() != "/ws") {
        write(error_response(req, http::status::not_found, "NOT_FOUND", "no such endpoint"),
              false);
        return;
      }
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), gateway_, registry_)
          ->run(std::move(req));
      return;
    }
    const bool keep = req.keep_alive();
    write(route(req), keep);
  }

  void write(Response res, bool keep) {
    auto shared = std::make_shared<Response>(std::move(res));
    http::async_write(stream_, *shared,
                      [self = shared_from_this(), shared, keep](beast::error_code ec,
                                                                std::size_t) {
                        if (ec || !keep || self->registry_.stopping) {
                          self->registry_.remove(self->reg_id_);
                          return self->close();
                        }
                        self->do_read();
                      });
  }

  Response route(const Request& req) {
    const std::string target(req.target());
    const auto path = target.substr(0, target.find('?'));
    try {
      if (path == "/api/message") {
        if (req.method() != http::verb::post) return not_allowed(req);
        return post_message(req);
      }
      if (path == "/api/health") {
        if (req.method() != http::verb::get) return not_allowed(req);
        return json_response(req, http::status::ok, gateway_.health());
      }
      static constexpr std::string_view kSessions = "/api/sessions/";
      static constexpr std::string_view kTranscript = "/transcript";
      if (path.size() > kSessions.size() + kTranscript.size() &&
          path.compare(0, kSessions.size(), kSessions) == 0 &&
          path.compare(path.size() - kTranscript.size(), kTranscript.size(), kTranscript) == 0) {
        if (req.method() != http::verb::get) return not_allowed(req);
        const auto id = path.substr(kSessions.size(),
                                    path.size() - kSessions.size() - kTranscript.size());
        return transcript(req, id);
      }
      if (path == "/chat" || path.rfind("/chat/", 0) == 0) {
        if (req.method() != http::verb::get && req.method() != http::verb::head) {
          return not_allowed(req);
        }
        return serve_static(req, path);
      }
      if (path == "/") {
        Response res{http::status::found, req.version()};
        res.set(http::field::location, "/chat/");
        res.keep_alive(req.keep_alive());
        res.prepare_payload();
        return res;
      }
      return error_response(req, http::status::not_found, "NOT_FOUND", "no such endpoint");
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", std::string(req.method_string()), target, e.what());
      return error_response(req, http::status::internal_server_error, wire_error::kInternal,
                            "internal error");
    }
  }

  static Response not_allowed(const Request& req) {
    return error_response(req, http::status::method_not_allowed, "METHOD_NOT_ALLOWED",
                          "method not allowed");
  }

  Response post_message(const Request& req) {
    const auto body = nlohmann::json::parse(req.body(), nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      return error_response(req, http::status::bad_request, wire_error::kMalformed,
                            "body must be a JSON object");
    }
    std::optional<std::string> session;
    if (body.contains("session") && !body.at("session").is_null()) {
      if (!body.at("session").is_string()) {
        return error_response(req, http::status::bad_request, wire_error::kMalformed,
                              "'session' must be a string");
      }
      session = body.at("session").get<std::string>();
    }
    if (!body.contains("text")) {
      return error_response(req, http::status::bad_request, wire_error::kMalformed,
                            "'text' is required");
    }
    try {
      const auto reply = gateway_.post_message(session, body.at("text"));
      nlohmann::json out = {{"session", reply.session}, {"responses", reply.responses}};
      if (reply.group_token) out["group_token"] = *reply.group_token;
      return json_response(req, http::status::ok, out);
    } catch (const WireError& e) {
      nlohmann::json err = {{"code", e.code()}, {"message", e.what()}};
      if (e.retry_after_ms()) err["retry_after_ms"] = *e.retry_after_ms();
      auto res = json_response(req, status_for(e), {{"error", err}});
      if (e.retry_after_ms()) {
        res.set(http::field::retry_after, std::to_string((*e.retry_after_ms() + 999) / 1000));
      }
      return res;
    }
  }

  Response transcript(const Request& req, const std::string& id) {
    if (options_.admin_token.empty()) {
      return error_response(req, http::status::forbidden, "FORBIDDEN",
                            "transcripts are disabled: no admin token configured");
    }
    const auto given = req["X-Admin-Token"];
    if (given != options_.admin_token) {
      return error_response(req, http::status::unauthorized, "UNAUTHORIZED",
                            "missing or wrong X-Admin-Token");
    }
    const auto records = gateway_.transcript(id);
    if (!records) {
      return error_response(req, http::status::not_found, wire_error::kUnknownSession,
                            "unknown session '" + id + "'");
    }
    auto out = nlohmann::json::array();
    for (const auto& r : *records) out.push_back(to_json(r));
    return json_response(req, http::status::ok, out);
  }

  Response serve_static(const Request& req, const std::string& path) {
    if (path == "/chat") {
      Response res{http::status::moved_permanently, req.version()};
      const std::string target(req.target());
      res.set(http::field::location, "/chat/" + target.substr(path.size()));
      res.keep_alive(req.keep_alive());
      res.prepare_payload();
      return res;
    }
    const auto file = static_path(options_.static_dir, path);
    if (!file) {
      return error_response(req, http::status::not_found, "NOT_FOUND", "no such file");
    }
    std::ifstream in(*file, std::ios::binary);
    std::ostringstream data;
    data << in.rdbuf();
    Response res{http::status::ok, req.version()};
    res.set(http::field::content_type, mime_type(*file));
    res.keep_alive(req.keep_alive());
    if (req.method() == http::verb::head) {
      res.content_length(data.str().size());
    } else {
      res.body() = data.str();
      res.prepare_payload();
    }
    return res;
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
  Gateway& gateway_;
  const ServerOptions& options_;
  Registry& registry_;
  std::uint64_t reg_id_ = 0;
};

}  // namespace

struct Server::Impl {
  Impl(Gateway& g, ServerOptions o)
      : gateway(g), options(std::move(o)), acceptor(ioc), sweep(ioc) {}

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket s) {
      if (ec) {
        if (ec != net::error::operation_aborted) spdlog::warn("accept: {}", ec.message());
        if (!acceptor.is_open()) return;
      } else {
        std::make_shared<HttpSession>(std::move(s), gateway, options, registry)->run();
      }
      accept();
    });
  }

  void schedule_sweep() {
    sweep.expires_after(options.sweep_interval);
    sweep.async_wait([this](beast::error_code ec) {
      if (ec) return;
      if (const auto n = gateway.expire_idle()) spdlog::info("expired {} idle sessions", n);
      schedule_sweep();
    });
  }

  void shutdown() {
    registry.stopping = true;
    beast::error_code ec;
    acceptor.close(ec);
    sweep.cancel();
    const auto open = registry.open;
    for (const auto& [id, weak] : open) {
      if (auto c = weak.lock()) c->close();
    }
  }

  Gateway& gateway;
  ServerOptions options;
  net::io_context ioc{1};
  Registry registry;
  tcp::acceptor acceptor;
  net::steady_timer sweep;
  std::thread thread;
  std::uint16_t bound_port = 0;
  std::mutex mutex;
  std::condition_variable done_cv;
  bool done = false;
  bool stopped = false;
};

Server::Server(Gateway& gateway, ServerOptions options)
    : impl_(std::make_unique<Impl>(gateway, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  auto& i = *impl_;
  const auto address = net::ip::make_address(i.options.host);
  const tcp::endpoint endpoint{address, i.options.port};
  i.acceptor.open(endpoint.protocol());
  i.acceptor.set_option(net::socket_base::reuse_address(true));
  i.acceptor.bind(endpoint);
  i.acceptor.listen(net::socket_base::max_listen_connections);
  i.bound_port = i.acceptor.local_endpoint().port();
  i.accept();
  i.schedule_sweep();
  i.thread = std::thread([&i] {
    try {
      i.ioc.run();
    } catch (const std::exception& e) {
      spdlog::error("io thread: {}", e.what());
    }
    std::lock_guard lock(i.mutex);
    i.done = true;
    i.done_cv.notify_all();
  });
  spdlog::info("listening on {}:{}", i.options.host, i.bound_port);
}

void Server::stop() {
  auto& i = *impl_;
  {
    std::lock_guard lock(i.mutex);
    if (i.stopped) return;
    i.stopped = true;
  }
  if (!i.thread.joinable()) return;
  net::post(i.ioc, [&i] { i.shutdown(); });
  {
    std::unique_lock lock(i.mutex);
    if (!i.done_cv.wait_for(lock, std::chrono::seconds(5), [&i] { return i.done; })) {
      lock.unlock();
      i.ioc.stop();
    }
  }
  i.thread.join();
}

void Server::wait() {
  auto& i = *impl_;
  std::unique_lock lock(i.mutex);
  i.done_cv.wait(lock, [&i] { return i.done; });
}

std::uint16_t Server::port() const { return impl_->bound_port; }

}  // namespace confassist
