// Copyright 2026 The sls-rl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP + WebSocket front end for SessionManager (Boost.Beast).
//
//   POST /sessions                 create; 201 with the session snapshot
//   GET  /sessions/{id}            snapshot
//   POST /sessions/{id}/moves      {"seat": s, "move": {"kind", "value"}}
//                                  or {"seat": s, "action": 0..9}
//   GET  /sessions/{id}/stream     WebSocket: first a {"type": "snapshot",
//                                  ...} message, then one {version, event,
//                                  state, legal_actions} message per frame
//   GET  /healthz                  "ok"
//   anything else under GET        static files from the configured root
//
// Errors are JSON {"error": ...} with 400 (malformed), 404 (unknown),
// 405 (method), 409 (turn / game over) or 422 (illegal or unloadable).

#ifndef SLS_HTTP_SERVER_HPP_
#define SLS_HTTP_SERVER_HPP_

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <csignal>
#include <cstdint>
#include <deque>
#include <fstream>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sls/session.hpp"

namespace sls {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct HttpOptions {
  std::string host = "127.0.0.1";
  unsigned short port = 8080;  // 0: pick a free port
  std::filesystem::path static_dir;
  int threads = 2;
  bool stop_on_signals = false;  // SIGINT/SIGTERM stop the server
};

namespace internal {

inline std::vector<std::string_view> SplitPath(std::string_view target) {
  target = target.substr(0, target.find('?'));
  std::vector<std::string_view> parts;
  while (!target.empty()) {
    while (!target.empty() && target.front() == '/') target.remove_prefix(1);
    const auto slash = target.find('/');
    if (!target.empty()) parts.push_back(target.substr(0, slash));
    if (slash == std::string_view::npos) break;
    target.remove_prefix(slash);
  }
  return parts;
}

inline std::string_view MimeType(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

inline Response JsonResponse(const Request& req, http::status status, const Json& body) {
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

inline Json ParseBody(const Request& req) {
  try {
    return Json::parse(req.body());
  } catch (const Json::exception&) {
    throw ApiError(400, "request body is not valid JSON");
  }
}

inline Move MoveFromRequest(const Json& body) {
  try {
    if (body.contains("move")) return MoveFromJson(body.at("move"));
    if (body.contains("action")) {
      const int a = body.at("action").get<int>();
      if (a < 0 || a >= kNumActions) throw ApiError(400, "action must lie in [0, 10)");
      return ActionToMove(a);
    }
  } catch (const Json::exception& e) {
    throw ApiError(400, std::string("malformed move: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, e.what());
  }
  throw ApiError(400, "body needs 'move' or 'action'");
}

}  // namespace internal

class HttpServer;

// One upgraded WebSocket subscribed to a session.
class StreamConnection : public std::enable_shared_from_this<StreamConnection> {
 public:
  StreamConnection(tcp::socket&& socket, std::shared_ptr<Session> session)
      : ws_(std::move(socket)), session_(std::move(session)) {}

  ~StreamConnection() {
    if (token_) session_->Unsubscribe(*token_);
  }

  void Start(internal::Request req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&StreamConnection::OnAccept,
                                                    shared_from_this()));
  }

 private:
  void OnAccept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<StreamConnection> weak = shared_from_this();
    auto executor = ws_.get_executor();
    auto sub = session_->Subscribe([weak, executor](const Frame& f) {
      auto text = std::make_shared<std::string>(ToJson(f).dump());
      net::post(executor, [weak, text] {
        if (auto self = weak.lock()) self->Enqueue(text);
      });
    });
    token_ = sub.token;
    Json hello = sub.snapshot;
    hello["type"] = "snapshot";
    Enqueue(std::make_shared<std::string>(hello.dump()));
    DoRead();
  }

  void DoRead() {
    ws_.async_read(buffer_, beast::bind_front_handler(&StreamConnection::OnRead,
                                                      shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec) {
      Close();
      return;
    }
    buffer_.consume(buffer_.size());  // client messages are ignored
    DoRead();
  }

  void Enqueue(std::shared_ptr<std::string> text) {
    if (closed_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) DoWrite();
  }

  void DoWrite() {
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()),
                    beast::bind_front_handler(&StreamConnection::OnWrite,
                                              shared_from_this()));
  }

  void OnWrite(beast::error_code ec, std::size_t) {
    if (ec) {
      Close();
      return;
    }
    queue_.pop_front();
    if (!closed_ && !queue_.empty()) DoWrite();
  }

  void Close() {
    closed_ = true;  // an in-flight write still owns queue_.front()
    if (token_) {
      session_->Unsubscribe(*token_);
      token_.reset();
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<Session> session_;
  std::optional<std::uint64_t> token_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<std::string>> queue_;
  bool closed_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, SessionManager& sessions,
                 const HttpOptions& options)
      : stream_(std::move(socket)), sessions_(sessions), options_(options) {}

  void Start() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpConnection::DoRead, shared_from_this()));
  }

 private:
  void DoRead() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpConnection::OnRead, shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;

    const auto target = req_.target();
    const auto parts = internal::SplitPath(std::string_view(target.data(), target.size()));
    if (websocket::is_upgrade(req_)) {
      if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "stream") {
        try {
          auto session = sessions_.Get(std::string(parts[1]));
          stream_.expires_never();
          std::make_shared<StreamConnection>(stream_.release_socket(), std::move(session))
              ->Start(std::move(req_));
          return;
        } catch (const ApiError& e) {
          return Send(internal::JsonResponse(req_, http::int_to_status(e.status()), e.body()));
        }
      }
      return Send(internal::JsonResponse(req_, http::status::not_found,
                                         Json{{"error", "no WebSocket endpoint here"}}));
    }
    Send(Handle(parts));
  }

  internal::Response Handle(const std::vector<std::string_view>& parts) {
    const auto method = req_.method();
    try {
      if (!parts.empty() && parts[0] == "sessions") {
        if (parts.size() == 1) {
          if (method != http::verb::post) throw ApiError(405, "use POST /sessions");
          auto request = SessionRequestFromJson(internal::ParseBody(req_));
          auto session = sessions_.Create(request);
          return internal::JsonResponse(req_, http::status::created, session->Snapshot());
        }
        auto session = sessions_.Get(std::string(parts[1]));
        if (parts.size() == 2) {
          if (method != http::verb::get) throw ApiError(405, "use GET /sessions/{id}");
          return internal::JsonResponse(req_, http::status::ok, session->Snapshot());
        }
        if (parts.size() == 3 && parts[2] == "moves") {
          if (method != http::verb::post) throw ApiError(405, "use POST /sessions/{id}/moves");
          const Json body = internal::ParseBody(req_);
          if (!body.is_object() || !body.contains("seat") || !body["seat"].is_number_integer()) {
            throw ApiError(400, "body needs an integer 'seat'");
          }
          const Move move = internal::MoveFromRequest(body);
          const auto version = session->Submit(body["seat"].get<int>(), move);
          return internal::JsonResponse(req_, http::status::ok,
                                        Json{{"accepted", true}, {"version", version}});
        }
        if (parts.size() == 3 && parts[2] == "stream") {
          throw ApiError(400, "the stream endpoint needs a WebSocket upgrade");
        }
        throw ApiError(404, "unknown endpoint");
      }
      if (parts.size() == 1 && parts[0] == "healthz") {
        return internal::JsonResponse(req_, http::status::ok, Json{{"status", "ok"}});
      }
      if (method == http::verb::get || method == http::verb::head) return ServeStatic(parts);
      throw ApiError(404, "unknown endpoint");
    } catch (const ApiError& e) {
      return internal::JsonResponse(req_, http::int_to_status(e.status()), e.body());
    } catch (const std::exception& e) {
      return internal::JsonResponse(req_, http::status::internal_server_error,
                                    Json{{"error", e.what()}});
    }
  }

  internal::Response ServeStatic(const std::vector<std::string_view>& parts) {
    namespace fs = std::filesystem;
    if (options_.static_dir.empty()) throw ApiError(404, "not found");
    fs::path rel;
    for (auto p : parts) {
      if (p == ".." || p == ".") throw ApiError(404, "not found");
      rel /= std::string(p);
    }
    fs::path path = options_.static_dir / rel;
    std::error_code ec;
    if (fs::is_directory(path, ec)) path /= "index.html";
    if (!fs::is_regular_file(path, ec)) throw ApiError(404, "not found");
    std::ifstream is(path, std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    internal::Response res{http::status::ok, req_.version()};
    res.set(http::field::content_type, std::string(internal::MimeType(path)));
    res.keep_alive(req_.keep_alive());
    if (req_.method() != http::verb::head) res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  void Send(internal::Response res) {
    auto sp = std::make_shared<internal::Response>(std::move(res));
    const bool close = sp->need_eof();
    http::async_write(stream_, *sp,
                      [self = shared_from_this(), sp, close](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (close) {
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                          return;
                        }
                        self->DoRead();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  internal::Request req_;
  SessionManager& sessions_;
  const HttpOptions& options_;
};

class HttpServer {
 public:
  HttpServer(SessionManager& sessions, HttpOptions options)
      : sessions_(sessions), options_(std::move(options)), acceptor_(ioc_) {}

  ~HttpServer() { Stop(); }

  // Binds and starts serving on background threads. Throws on bind errors.
  void Start() {
    const auto address = net::ip::make_address(options_.host);
    tcp::endpoint endpoint{address, options_.port};
    acceptor_.open(endpoint.protocol());
    acceptor_.set_option(net::socket_base::reuse_address(true));
    acceptor_.bind(endpoint);
    acceptor_.listen(net::socket_base::max_listen_connections);
    port_ = acceptor_.local_endpoint().port();
    DoAccept();
    if (options_.stop_on_signals) {
      signals_.emplace(ioc_, SIGINT, SIGTERM);
      signals_->async_wait([this](beast::error_code, int) { ioc_.stop(); });
    }
    for (int i = 0; i < std::max(1, options_.threads); ++i) {
      threads_.emplace_back([this] { ioc_.run(); });
    }
  }

  void Stop() {
    if (stopped_) return;
    stopped_ = true;
    ioc_.stop();
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

  // Blocks the calling thread until Stop() is called from elsewhere.
  void Wait() {
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

  unsigned short port() const { return port_; }

 private:
  void DoAccept() {
    acceptor_.async_accept(net::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpConnection>(std::move(socket), sessions_, options_)->Start();
      if (acceptor_.is_open()) DoAccept();
    });
  }

  SessionManager& sessions_;
  HttpOptions options_;
  net::io_context ioc_;
  tcp::acceptor acceptor_;
  std::optional<net::signal_set> signals_;
  std::vector<std::thread> threads_;
  unsigned short port_ = 0;
  bool stopped_ = false;
};

}  // namespace sls

#endif  // SLS_HTTP_SERVER_HPP_
