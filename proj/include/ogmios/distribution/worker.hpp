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
#include <functional>
#include <optional>
#include <string>
#include <thread>

#include "ogmios/distribution/coordinator.hpp"
#include "ogmios/distribution/net.hpp"
#include "ogmios/distribution/protocol.hpp"
#include "ogmios/pipeline.hpp"
#include "ogmios/serialization.hpp"

namespace ogmios::distribution {

enum class WorkerExit { finished, stopped, abandoned, unreachable, protocol_error };

// 0 for a normal end, 1 for a simulated crash, 2 when the server could not
// be used.
inline int exit_status(WorkerExit e) {
  switch (e) {
    case WorkerExit::finished:
    case WorkerExit::stopped: return 0;
    case WorkerExit::abandoned: return 1;
    case WorkerExit::unreachable:
    case WorkerExit::protocol_error: return 2;
  }
  return 2;
}

struct WorkerOptions {
  Address server;
  std::string worker_id;
  // Consecutive connection failures tolerated before giving up.
  int max_retries = 5;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds max_backoff{5000};
  // Delay between dispatch requests while all remaining units are leased.
  std::chrono::milliseconds poll_interval{200};
  const std::atomic<bool>* stop = nullptr;

  // Test hooks. `abandon` drops the unit and the connection without a
  // result, as if the process had been killed. `inject_failure` makes the
  // worker report an error for the unit instead of running the pipeline.
  std::function<bool(const DispatchGrant&)> abandon;
  std::function<bool(const DispatchGrant&)> inject_failure;
};

struct WorkerReport {
  WorkerExit exit = WorkerExit::finished;
  std::size_t processed = 0;  // results acknowledged by the server
  std::size_t failed = 0;     // of which error results
  std::string diagnostic;
};

inline std::string encode_timings(const std::vector<TimingRecord>& timings) {
  std::string out;
  for (const auto& t : timings) {
    if (!out.empty()) out += ';';
    out += t.step + "=" + format_double(t.wall_seconds);
  }
  return out;
}

inline Message make_result_message(const WorkResult& r) {
  Message m;
  m.type = MessageType::result;
  m.header["unit"] = std::to_string(r.unit_id);
  m.header["worker"] = r.worker_id;
  m.header["attempt"] = std::to_string(r.attempt);
  m.header["status"] = r.ok ? "ok" : "error";
  if (!r.ok) {
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    m.header["step"] = r.step;
    m.header["message"] = msg;
  }
  if (!r.timings.empty()) m.header["timings"] = r.timings;
  m.payload = r.document;
  return m;
}

inline WorkResult run_unit(const Pipeline& pipeline, const DispatchGrant& g, const std::string& worker_id) {
  WorkResult r;
  r.unit_id = g.unit_id;
  r.worker_id = worker_id;
  r.attempt = g.attempt;
  const PipelineResult p = pipeline.run(g.doc_id, g.payload, g.format == "xml" ? InputFormat::xml : InputFormat::text);
  r.ok = p.ok();
  if (p.ok()) {
    r.document = p.xml;
    r.timings = encode_timings(p.document->timings);
  } else {
    r.step = p.failure->step;
    r.message = p.failure->message;
  }
  return r;
}

// dispatch -> run -> submit until the server reports that the corpus is
// finished. Connection losses are retried with exponential backoff; a result
// that could not be delivered is resent after reconnecting.
inline WorkerReport worker_loop(const Pipeline& pipeline, const WorkerOptions& opt) {
  WorkerReport report;
  std::optional<WorkResult> pending;
  int failures = 0;
  auto backoff = opt.initial_backoff;
  auto stopped = [&] { return opt.stop && opt.stop->load(); };

  while (!stopped()) {
    try {
      Socket s = connect_to(opt.server);
      Message hello;
      hello.type = MessageType::hello;
      hello.header["worker"] = opt.worker_id;
      s.send_message(hello);
      auto reply = s.receive_message();
      if (!reply) throw NetworkError("server closed the connection");
      if (reply->type != MessageType::ack || reply->require("status") != "ok") {
        report.exit = WorkerExit::protocol_error;
        const auto* m = reply->get("message");
        report.diagnostic = m ? *m : "handshake rejected";
        return report;
      }
      failures = 0;
      backoff = opt.initial_backoff;

      while (!stopped()) {
        if (pending) {
          s.send_message(make_result_message(*pending));
          reply = s.receive_message();
          if (!reply) throw NetworkError("server closed the connection");
          if (reply->type != MessageType::ack || reply->require("status") != "ok") {
            report.exit = WorkerExit::protocol_error;
            const auto* m = reply->get("message");
            report.diagnostic = m ? *m : "result rejected";
            return report;
          }
          ++report.processed;
          if (!pending->ok) ++report.failed;
          pending.reset();
        }

        Message req;
        req.type = MessageType::dispatch;
        req.header["worker"] = opt.worker_id;
        s.send_message(req);
        reply = s.receive_message();
        if (!reply) throw NetworkError("server closed the connection");
        if (reply->type != MessageType::dispatch) {
          report.exit = WorkerExit::protocol_error;
          const auto* m = reply->get("message");
          report.diagnostic = m ? *m : "unexpected reply to dispatch";
          return report;
        }
        const std::string& status = reply->require("status");
        if (status == "finished") {
          report.exit = WorkerExit::finished;
          return report;
        }
        if (status == "wait") {
          std::this_thread::sleep_for(opt.poll_interval);
          continue;
        }
        if (status != "unit") throw ProtocolError("unknown dispatch status '" + status + "'");

        DispatchGrant g;
        g.unit_id = reply->require_number("unit");
        g.doc_id = reply->require("doc");
        g.attempt = static_cast<std::uint32_t>(reply->require_number("attempt"));
        g.format = reply->require("format");
        g.payload = std::move(reply->payload);

        if (opt.abandon && opt.abandon(g)) {
          report.exit = WorkerExit::abandoned;
          return report;
        }
        if (opt.inject_failure && opt.inject_failure(g)) {
          WorkResult r;
          r.unit_id = g.unit_id;
          r.worker_id = opt.worker_id;
          r.attempt = g.attempt;
          r.step = "injected";
          r.message = "injected failure";
          pending = std::move(r);
        } else {
          pending = run_unit(pipeline, g, opt.worker_id);
        }
      }
    } catch (const NetworkError& e) {
      if (++failures > opt.max_retries) {
        report.exit = WorkerExit::unreachable;
        report.diagnostic = e.what();
        return report;
      }
      std::this_thread::sleep_for(backoff);
      backoff = std::min(backoff * 2, opt.max_backoff);
    } catch (const ProtocolError& e) {
      report.exit = WorkerExit::protocol_error;
      report.diagnostic = e.what();
      return report;
    }
  }
  report.exit = WorkerExit::stopped;
  return report;
}

}  // namespace ogmios::distribution
