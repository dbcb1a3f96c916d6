#pragma once

// `dusk serve`: HTTP static files plus a WebSocket endpoint at /ws, one
// ServiceSession per connection, and an optional TUIO/UDP bridge that feeds
// the most recently connected session. Everything runs on one thread.

#include "dusk/decoder.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace dusk {

namespace detail {
struct ServerState;
}

struct ServerOptions {
  std::string address = "0.0.0.0";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::optional<std::string> static_dir;
  std::optional<std::uint16_t> tuio_port;
  SessionOptions session;
};

class Server {
 public:
  /// Binds immediately; throws on failure.
  Server(std::shared_ptr<const DecoderModel> model, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const;
  std::optional<std::uint16_t> tuio_port() const;
  /// Serves until stop() is called.
  void run();
  /// Safe to call from any thread.
  void stop();

 private:
  std::shared_ptr<detail::ServerState> impl_;
};

}  // namespace dusk
