#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include <doctest.h>

#include "vpg/common/errors.hpp"
#include "vpg/orchestrator/stream.hpp"

using namespace vpg;
using namespace vpg::orchestrator;

namespace {

/// Blocking line-reading subscriber for tests.
class TestSubscriber {
 public:
  explicit TestSubscriber(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd_ >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  }
  ~TestSubscriber() {
    if (fd_ >= 0) ::close(fd_);
  }

  std::string read_line(int timeout_ms = 2000) {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      const auto newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      if (std::chrono::steady_clock::now() > deadline) return {};
      char chunk[512];
      const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), MSG_DONTWAIT);
      if (n > 0) {
        buffer_.append(chunk, static_cast<std::size_t>(n));
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
    }
  }

 private:
  int fd_ = -1;
  std::string buffer_;
};

}  // namespace

TEST_CASE("subscribers receive the metadata line first, then live records") {
  StreamServer server;
  server.start("127.0.0.1:0", R"({"type":"campaign_meta","campaign":"t"})");
  REQUIRE(server.port() > 0);

  TestSubscriber sub(server.port());
  CHECK(sub.read_line().find("campaign_meta") != std::string::npos);

  server.publish("record-1");
  server.publish("record-2");
  CHECK(sub.read_line() == "record-1");
  CHECK(sub.read_line() == "record-2");
  server.stop();
}

TEST_CASE("two subscribers receive identical streams; mid-stream join sees later records") {
  StreamServer server;
  server.start("127.0.0.1:0", "meta");

  TestSubscriber early(server.port());
  CHECK(early.read_line() == "meta");
  server.publish("a");
  CHECK(early.read_line() == "a");

  TestSubscriber late(server.port());
  CHECK(late.read_line() == "meta");  // metadata always first
  server.publish("b");
  server.publish("c");

  CHECK(early.read_line() == "b");
  CHECK(early.read_line() == "c");
  CHECK(late.read_line() == "b");  // joined after "a": sees records from join time on
  CHECK(late.read_line() == "c");
  server.stop();
}

TEST_CASE("producer lines are ingested and re-broadcast to subscribers") {
  StreamServer server;
  server.start("127.0.0.1:0", "meta");

  TestSubscriber sub(server.port());
  CHECK(sub.read_line() == "meta");

  StreamProducer producer;
  producer.connect("127.0.0.1:" + std::to_string(server.port()));
  producer.send("tick-record-42");
  CHECK(sub.read_line() == "tick-record-42");
  server.stop();
}

TEST_CASE("bind failure throws before anything runs") {
  StreamServer a;
  a.start("127.0.0.1:0", "meta");
  StreamServer b;
  CHECK_THROWS_AS(b.start("127.0.0.1:" + std::to_string(a.port()), "meta"), Error);
  a.stop();
}

TEST_CASE("slow subscriber is dropped without blocking publication") {
  StreamServer server;
  server.start("127.0.0.1:0", "meta");
  TestSubscriber stalled(server.port());  // never reads

  const auto start = std::chrono::steady_clock::now();
  const std::string big_line(512, 'x');
  for (std::size_t i = 0; i < StreamServer::kSubscriberQueueCap + 4096; ++i) {
    server.publish(big_line);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(elapsed < 10.0);  // publication never stalls on the dead consumer

  // A fresh subscriber still works after the stalled one was dropped.
  TestSubscriber healthy(server.port());
  CHECK(healthy.read_line() == "meta");
  server.publish("after-drop");
  bool got = false;
  for (int i = 0; i < 50 && !got; ++i) got = healthy.read_line() == "after-drop";
  CHECK(got);
  server.stop();
}
