#include "vpg/orchestrator/stream.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "vpg/common/errors.hpp"

namespace vpg::orchestrator {

namespace {

struct HostPort {
  std::string host;
  int port = 0;
};

HostPort split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) {
    throw Error("stream address must be host:port, got '" + address + "'");
  }
  HostPort out;
  out.host = address.substr(0, colon);
  out.port = std::stoi(address.substr(colon + 1));
  return out;
}

bool write_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

StreamServer::~StreamServer() { stop(); }

void StreamServer::start(const std::string& bind_address, const std::string& metadata_line) {
  const HostPort hp = split_address(bind_address);
  metadata_line_ = metadata_line;

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error("stream server: socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(hp.port));
  if (::inet_pton(AF_INET, hp.host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("stream server: bad bind host '" + hp.host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("stream server: cannot bind " + bind_address + ": " + std::strerror(errno));
  }
  if (::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("stream server: listen() failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);

  running_ = true;
  accept_thread_ = std::thread(&StreamServer::accept_loop, this);
}

void StreamServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      if (errno == EINTR) continue;
      break;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

    auto conn = std::make_unique<Connection>();
    conn->fd = fd;
    Connection* raw = conn.get();
    {
      std::lock_guard<std::mutex> lock(connections_mutex_);
      connections_.push_back(std::move(conn));
    }
    enqueue(*raw, metadata_line_);
    raw->writer = std::thread(&StreamServer::writer_loop, this, raw);
    raw->reader = std::thread(&StreamServer::reader_loop, this, raw);
  }
}

void StreamServer::enqueue(Connection& conn, const std::string& line) {
  if (conn.dead || conn.producer) return;
  {
    std::lock_guard<std::mutex> lock(conn.mutex);
    if (conn.queue.size() >= kSubscriberQueueCap) {
      conn.dead = true;  // slow subscriber: drop, never block
      ::shutdown(conn.fd, SHUT_RDWR);
    } else {
      conn.queue.push_back(line);
    }
  }
  conn.cv.notify_one();
}

void StreamServer::writer_loop(Connection* conn) {
  while (!conn->dead) {
    std::string line;
    {
      std::unique_lock<std::mutex> lock(conn->mutex);
      conn->cv.wait(lock, [&] { return conn->dead || !conn->queue.empty() || !running_; });
      if (conn->dead || (!running_ && conn->queue.empty())) break;
      if (conn->queue.empty()) continue;
      line = std::move(conn->queue.front());
      conn->queue.pop_front();
    }
    if (!write_all(conn->fd, line + "\n")) {
      conn->dead = true;
      break;
    }
  }
}

void StreamServer::reader_loop(Connection* conn) {
  std::string buffer;
  char chunk[1024];
  while (!conn->dead) {
    const ssize_t n = ::recv(conn->fd, chunk, sizeof(chunk), 0);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      break;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t newline;
    while ((newline = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, newline);
      buffer.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line == kProducerHello) {
        conn->producer = true;
        std::lock_guard<std::mutex> lock(conn->mutex);
        conn->queue.clear();
        conn->cv.notify_one();
      } else if (conn->producer) {
        publish(line);  // ingest worker records
      }
    }
  }
}

void StreamServer::publish(const std::string& line) {
  std::lock_guard<std::mutex> lock(connections_mutex_);
  for (auto& conn : connections_) {
    enqueue(*conn, line);
  }
}

void StreamServer::stop() {
  if (!running_.exchange(false)) {
    if (listen_fd_ >= 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
    }
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (accept_thread_.joinable()) accept_thread_.join();

  // Detach the connection list under the lock, then join unlocked: a reader
  // thread may be blocked in publish() waiting for the same mutex.
  std::vector<std::unique_ptr<Connection>> doomed;
  {
    std::lock_guard<std::mutex> lock(connections_mutex_);
    doomed.swap(connections_);
  }
  for (auto& conn : doomed) {
    conn->dead = true;
    ::shutdown(conn->fd, SHUT_RDWR);
    conn->cv.notify_all();
    if (conn->writer.joinable()) conn->writer.join();
    if (conn->reader.joinable()) conn->reader.join();
    ::close(conn->fd);
  }
}

StreamProducer::~StreamProducer() {
  if (fd_ >= 0) ::close(fd_);
}

void StreamProducer::connect(const std::string& address) {
  const HostPort hp = split_address(address);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw Error("stream producer: socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(hp.port));
  if (::inet_pton(AF_INET, hp.host.c_str(), &addr.sin_addr) != 1) {
    throw Error("stream producer: bad host '" + hp.host + "'");
  }
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error("stream producer: cannot connect to " + address);
  }
  send(StreamServer::kProducerHello);
}

void StreamProducer::send(const std::string& line) {
  if (fd_ < 0) return;
  if (!write_all(fd_, line + "\n")) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace vpg::orchestrator
