#include "dusk/server.hpp"

#include "dusk/service.hpp"
#include "dusk/tuio.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <array>
#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dusk {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using udp = asio::ip::udp;

namespace {

constexpr const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>dusk</title></head>
<body>
<p>The dusk service is running. Connect a client to <code>/ws</code>; see docs/protocol.md.</p>
<p>Start the server with <code>--static-dir</code> to serve a web client from here.</p>
</body></html>
)";

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

// Resolves a request target inside `root`; empty when it escapes or is absent.
std::optional<std::filesystem::path> resolve(const std::filesystem::path& root,
                                             std::string_view target) {
  std::string path(target.substr(0, target.find('?')));
  if (path.empty() || path[0] != '/' || path.find("..") != std::string::npos) return std::nullopt;
  if (path.back() == '/') path += "index.html";
  auto full = root / path.substr(1);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

}  // namespace

class WsSession;
using detail::ServerState;

struct detail::ServerState : std::enable_shared_from_this<ServerState> {
  ServerState(std::shared_ptr<const DecoderModel> m, ServerOptions o)
      : model(std::move(m)),
        options(std::move(o)),
        acceptor(io, tcp::endpoint(asio::ip::make_address(options.address), options.port)),
        ingest(model->profile().pad) {
    if (options.tuio_port) {
      tuio.emplace(io, udp::endpoint(asio::ip::make_address(options.address), *options.tuio_port));
    }
  }

  void accept();
  void receive_tuio();
  void route_contacts(const std::vector<ContactEvent>& events);

  std::shared_ptr<const DecoderModel> model;
  ServerOptions options;
  asio::io_context io;
  tcp::acceptor acceptor;
  std::optional<udp::socket> tuio;
  udp::endpoint tuio_sender;
  std::array<std::uint8_t, 65536> tuio_buffer{};
  TuioIngest ingest;
  std::chrono::steady_clock::time_point epoch = std::chrono::steady_clock::now();
  std::vector<std::weak_ptr<WsSession>> sessions;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, std::shared_ptr<ServerState> server)
      : ws_(std::move(socket)),
        server_(std::move(server)),
        service_(server_->model, server_->options.session) {}

  void start(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_->sessions.push_back(self);
      self->send(self->service_.hello());
      self->read();
    });
  }

  void deliver(const std::vector<nlohmann::json>& messages) {
    for (const auto& m : messages) send(m);
  }

  ServiceSession& service() { return service_; }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      const std::string frame = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->deliver(self->service_.handle_text(frame));
      self->read();
    });
  }

  void send(const nlohmann::json& message) {
    outbox_.push_back(message.dump());
    if (outbox_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) return;
                      self->outbox_.pop_front();
                      if (!self->outbox_.empty()) self->write_next();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<ServerState> server_;
  ServiceSession service_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, std::shared_ptr<ServerState> server)
      : stream_(std::move(socket)), server_(std::move(server)) {}

  void read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       if (ec) return;
                       self->on_request();
                     });
  }

 private:
  void on_request() {
    if (websocket::is_upgrade(request_)) {
      if (request_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), server_)->start(std::move(request_));
      }
      return;
    }
    auto response = std::make_shared<http::response<http::string_body>>(respond());
    http::async_write(stream_, *response,
                      [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (response->keep_alive()) {
                          self->read();
                        } else {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                        }
                      });
  }

  http::response<http::string_body> respond() {
    http::response<http::string_body> res;
    res.version(request_.version());
    res.keep_alive(request_.keep_alive());
    res.set(http::field::server, "dusk");
    if (request_.method() != http::verb::get && request_.method() != http::verb::head) {
      res.result(http::status::method_not_allowed);
      res.set(http::field::content_type, "text/plain");
      res.body() = "method not allowed\n";
    } else if (auto file = server_->options.static_dir
                               ? resolve(*server_->options.static_dir,
                                         std::string_view(request_.target().data(), request_.target().size()))
                               : std::nullopt) {
      std::ifstream in(*file, std::ios::binary);
      std::ostringstream body;
      body << in.rdbuf();
      res.result(http::status::ok);
      res.set(http::field::content_type, std::string(mime_type(*file)));
      res.body() = body.str();
    } else if (request_.target() == "/" || request_.target() == "/index.html") {
      res.result(http::status::ok);
      res.set(http::field::content_type, "text/html; charset=utf-8");
      res.body() = kFallbackPage;
    } else {
      res.result(http::status::not_found);
      res.set(http::field::content_type, "text/plain");
      res.body() = "not found\n";
    }
    res.prepare_payload();
    if (request_.method() == http::verb::head) res.body().clear();
    return res;
  }

  beast::tcp_stream stream_;
  std::shared_ptr<ServerState> server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

void ServerState::accept() {
  acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
    if (ec == asio::error::operation_aborted) return;
    if (!ec) std::make_shared<HttpSession>(std::move(socket), self)->read();
    self->accept();
  });
}

void ServerState::receive_tuio() {
  tuio->async_receive_from(
      asio::buffer(tuio_buffer), tuio_sender,
      [self = shared_from_this()](beast::error_code ec, std::size_t n) {
        if (ec == asio::error::operation_aborted) return;
        if (!ec) {
          const double arrival = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - self->epoch)
                                     .count();
          self->route_contacts(self->ingest.datagram(std::span(self->tuio_buffer.data(), n), arrival));
        }
        self->receive_tuio();
      });
}

void ServerState::route_contacts(const std::vector<ContactEvent>& events) {
  std::erase_if(sessions, [](const auto& w) { return w.expired(); });
  if (sessions.empty() || events.empty()) return;
  auto target = sessions.back().lock();
  for (const auto& e : events) target->deliver(target->service().handle_contact(e));
}

Server::Server(std::shared_ptr<const DecoderModel> model, ServerOptions options)
    : impl_(std::make_shared<ServerState>(std::move(model), std::move(options))) {
  impl_->accept();
  if (impl_->tuio) impl_->receive_tuio();
}

Server::~Server() { stop(); }

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

std::optional<std::uint16_t> Server::tuio_port() const {
  if (!impl_->tuio) return std::nullopt;
  return impl_->tuio->local_endpoint().port();
}

void Server::run() { impl_->io.run(); }

void Server::stop() { impl_->io.stop(); }

}  // namespace dusk
