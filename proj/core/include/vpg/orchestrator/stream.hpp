#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace vpg::orchestrator {

/// Newline-delimited record broadcast over a plain TCP socket.
///
/// Every connection starts as a subscriber and immediately receives the
/// campaign-metadata line, then live records from connection time onward. A
/// connection that sends a producer-hello line is reclassified as a producer:
/// its subsequent lines are ingested and re-broadcast. Slow subscribers are
/// dropped when their buffer overflows; they never block publication.
class StreamServer {
 public:
  StreamServer() = default;
  ~StreamServer();

  StreamServer(const StreamServer&) = delete;
  StreamServer& operator=(const StreamServer&) = delete;

  /// Binds "host:port" (port 0 picks a free port) and starts accepting.
  /// Throws vpg::Error on bind failure.
  void start(const std::string& bind_address, const std::string& metadata_line);

  int port() const { return port_; }
  void publish(const std::string& line);
  void stop();

  static constexpr std::size_t kSubscriberQueueCap = 8192;
  static inline const std::string kProducerHello = R"({"type":"producer_hello"})";

 private:
  struct Connection {
    int fd = -1;
    std::deque<std::string> queue;
    std::mutex mutex;
    std::condition_variable cv;
    std::atomic<bool> dead{false};
    std::atomic<bool> producer{false};
    std::thread writer;
    std::thread reader;
  };

  void accept_loop();
  void writer_loop(Connection* conn);
  void reader_loop(Connection* conn);
  void enqueue(Connection& conn, const std::string& line);

  int listen_fd_ = -1;
  int port_ = 0;
  std::string metadata_line_;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex connections_mutex_;
  std::vector<std::unique_ptr<Connection>> connections_;
};

/// Producer-side client used by workers in live-streaming mode.
class StreamProducer {
 public:
  StreamProducer() = default;
  ~StreamProducer();

  StreamProducer(const StreamProducer&) = delete;
  StreamProducer& operator=(const StreamProducer&) = delete;

  /// Connects to "host:port" and sends the producer hello.
  void connect(const std::string& address);
  void send(const std::string& line);
  bool connected() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

}  // namespace vpg::orchestrator
