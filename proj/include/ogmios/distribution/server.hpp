// Copyright 2026 The Ogmios Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "ogmios/distribution/coordinator.hpp"
#include "ogmios/distribution/net.hpp"
#include "ogmios/distribution/protocol.hpp"

namespace ogmios::distribution {

// Answers one request against the coordinator. Transport-free, so the
// protocol can be exercised without sockets.
inline Message handle_request(Coordinator& coord, const Message& req) {
  Message reply;
  switch (req.type) {
    case MessageType::hello: {
      coord.register_worker(req.require("worker"));
      reply.type = MessageType::ack;
      reply.header["status"] = "ok";
      reply.header["lease_seconds"] = std::to_string(coord.options().lease_seconds);
      return reply;
    }
    case MessageType::dispatch: {
      reply.type = MessageType::dispatch;
      auto grant = coord.dispatch(req.require("worker"));
      if (!grant) {
        reply.header["status"] = coord.finished() ? "finished" : "wait";
        return reply;
      }
      reply.header["status"] = "unit";
      reply.header["unit"] = std::to_string(grant->unit_id);
      reply.header["doc"] = grant->doc_id;
      reply.header["attempt"] = std::to_string(grant->attempt);
      reply.header["format"] = grant->format;
      reply.payload = std::move(grant->payload);
      return reply;
    }
    case MessageType::result: {
      WorkResult r;
      r.unit_id = req.require_number("unit");
      r.worker_id = req.require("worker");
      r.attempt = static_cast<std::uint32_t>(req.require_number("attempt"));
      const std::string& status = req.require("status");
      if (status != "ok" && status != "error") throw ProtocolError("bad result status '" + status + "'");
      r.ok = status == "ok";
      if (const auto* v = req.get("step")) r.step = *v;
      if (const auto* v = req.get("message")) r.message = *v;
      if (const auto* v = req.get("timings")) r.timings = *v;
      r.document = req.payload;
      reply.type = MessageType::ack;
      reply.header["status"] = "ok";
      reply.header["outcome"] = std::string(to_string(coord.submit(r)));
      return reply;
    }
    case MessageType::ack: break;
  }
  throw ProtocolError("unexpected message type from worker");
}

inline Message error_reply(const std::string& what) {
  Message m;
  m.type = MessageType::ack;
  m.header["status"] = "error";
  std::string line = what;
  std::replace(line.begin(), line.end(), '\n', ' ');
  m.header["message"] = line;
  return m;
}

// TCP front end: one thread per connection plus a lease sweeper. Protocol
// errors are answered with an error ACK and the connection is closed.
class Server {
 public:
  Server(Coordinator& coord, const Address& listen) : coord_(coord), listener_(listen) {}
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  std::uint16_t port() const { return listener_.port(); }

  void start() {
    acceptor_ = std::thread([this] { accept_loop(); });
    sweeper_ = std::thread([this] { sweep_loop(); });
  }

  // Blocks until every unit is done or failed-permanent, or stop() is called.
  void wait_until_finished(std::chrono::milliseconds poll = std::chrono::milliseconds(50)) {
    std::unique_lock lock(mu_);
    while (!stopping_ && !coord_.finished()) cv_.wait_for(lock, poll);
  }

  void stop() {
    {
      std::lock_guard lock(mu_);
      if (stopping_) return;
      stopping_ = true;
      for (auto& c : connections_) c->socket.shutdown();
    }
    cv_.notify_all();
    listener_.shutdown();
    if (acceptor_.joinable()) acceptor_.join();
    if (sweeper_.joinable()) sweeper_.join();
    std::list<std::shared_ptr<Connection>> remaining;
    {
      std::lock_guard lock(mu_);
      remaining.swap(connections_);
    }
    for (auto& c : remaining) {
      if (c->thread.joinable()) c->thread.join();
    }
  }

 private:
  struct Connection {
    Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop() {
    while (auto s = listener_.accept()) {
      std::lock_guard lock(mu_);
      if (stopping_) break;
      reap_locked();
      auto c = std::make_shared<Connection>();
      c->socket = std::move(*s);
      c->thread = std::thread([this, c] { serve(*c); });
      connections_.push_back(std::move(c));
    }
  }

  // Joins finished connection threads. Caller holds mu_.
  void reap_locked() {
    for (auto it = connections_.begin(); it != connections_.end();) {
      if ((*it)->done) {
        (*it)->thread.join();
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void serve(Connection& c) {
    try {
      while (auto req = c.socket.receive_message()) {
        Message reply;
        bool fatal = false;
        try {
          reply = handle_request(coord_, *req);
        } catch (const ProtocolError& e) {
          reply = error_reply(e.what());
          fatal = true;
        } catch (const Error& e) {
          // Could not persist or journal a transition; the worker may retry.
          reply = error_reply(e.what());
        }
        c.socket.send_message(reply);
        if (fatal) break;
        if (coord_.finished()) cv_.notify_all();
      }
    } catch (const ProtocolError& e) {
      try {
        c.socket.send_message(error_reply(e.what()));
      } catch (const Error&) {
      }
    } catch (const Error&) {
      // Connection lost; any lease it held will expire.
    }
    c.socket.shutdown();
    c.done = true;
  }

  void sweep_loop() {
    const auto period = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::duration<double>(std::clamp(coord_.options().lease_seconds / 4, 0.01, 1.0)));
    std::unique_lock lock(mu_);
    while (!stopping_) {
      cv_.wait_for(lock, period);
      if (stopping_) break;
      lock.unlock();
      try {
        coord_.expire_leases();
      } catch (const Error&) {
      }
      lock.lock();
      if (coord_.finished()) cv_.notify_all();
    }
  }

  Coordinator& coord_;
  Listener listener_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::list<std::shared_ptr<Connection>> connections_;
  std::thread acceptor_;
  std::thread sweeper_;
};

}  // namespace ogmios::distribution
