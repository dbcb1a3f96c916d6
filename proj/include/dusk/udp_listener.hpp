#pragma once

// Threaded TUIO/UDP receiver. The socket runs on its own thread; contact
// events cross to consumers through an ordered queue, which is the only
// shared state.

#include "dusk/tuio.hpp"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace dusk {

template <typename T>
class EventQueue {
 public:
  void push(T value) {
    {
      std::lock_guard lock(mutex_);
      items_.push_back(std::move(value));
    }
    ready_.notify_one();
  }

  /// Waits up to `timeout`; empty when nothing arrived or the queue closed.
  std::optional<T> pop_for(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    ready_.wait_for(lock, timeout, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T value = std::move(items_.front());
    items_.pop_front();
    return value;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> items_;
  bool closed_ = false;
};

class TuioListener {
 public:
  /// Binds immediately (port 0 picks a free port) and starts receiving.
  TuioListener(PadSpec pad, std::uint16_t port, const std::string& address = "0.0.0.0");
  ~TuioListener();

  TuioListener(const TuioListener&) = delete;
  TuioListener& operator=(const TuioListener&) = delete;

  std::uint16_t port() const;
  std::optional<ContactEvent> pop_for(std::chrono::milliseconds timeout);
  TuioIngestStats stats() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dusk
