#include "dusk/udp_listener.hpp"

#include <boost/asio.hpp>

#include <array>
#include <thread>

namespace dusk {

namespace asio = boost::asio;
using asio::ip::udp;

struct TuioListener::Impl {
  Impl(PadSpec pad, std::uint16_t port, const std::string& address)
      : socket(io, udp::endpoint(asio::ip::make_address(address), port)), ingest(pad) {}

  void receive() {
    socket.async_receive_from(asio::buffer(buffer), sender, [this](auto ec, std::size_t n) {
      if (ec == asio::error::operation_aborted) return;
      if (!ec) {
        const double arrival =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - epoch)
                .count();
        std::vector<ContactEvent> events;
        {
          std::lock_guard lock(stats_mutex);
          events = ingest.datagram(std::span(buffer.data(), n), arrival);
        }
        for (auto& e : events) queue.push(std::move(e));
      }
      receive();
    });
  }

  asio::io_context io;
  udp::socket socket;
  udp::endpoint sender;
  std::array<std::uint8_t, 65536> buffer{};
  std::chrono::steady_clock::time_point epoch = std::chrono::steady_clock::now();
  mutable std::mutex stats_mutex;
  TuioIngest ingest;
  EventQueue<ContactEvent> queue;
  std::thread thread;
};

TuioListener::TuioListener(PadSpec pad, std::uint16_t port, const std::string& address)
    : impl_(std::make_unique<Impl>(pad, port, address)) {
  impl_->receive();
  impl_->thread = std::thread([impl = impl_.get()] { impl->io.run(); });
}

TuioListener::~TuioListener() { stop(); }

std::uint16_t TuioListener::port() const { return impl_->socket.local_endpoint().port(); }

std::optional<ContactEvent> TuioListener::pop_for(std::chrono::milliseconds timeout) {
  return impl_->queue.pop_for(timeout);
}

TuioIngestStats TuioListener::stats() const {
  std::lock_guard lock(impl_->stats_mutex);
  return impl_->ingest.stats();
}

void TuioListener::stop() {
  if (!impl_->thread.joinable()) return;
  impl_->io.stop();
  impl_->thread.join();
  impl_->queue.close();
}

}  // namespace dusk
