#pragma once

#include <memory>
#include <string>

#include "jisa/supervisor.hpp"

namespace jisa {

struct ListenAddress {
  std::string host;
  unsigned short port = 0;
};

// "host:port"; throws InputError when malformed.
ListenAddress parse_listen(const std::string& text);

// WebSocket endpoint carrying the wire protocol for one ChannelSupervisor.
// One client at a time; a new connection replaces the previous one and is
// sent any outstanding request. Runs its own I/O thread.
class LiveServer {
 public:
  LiveServer(ChannelSupervisor& supervisor, const ListenAddress& address);
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  // Bound port (useful when listening on port 0).
  unsigned short port() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace jisa
