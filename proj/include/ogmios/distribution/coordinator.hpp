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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ogmios/errors.hpp"
#include "ogmios/io.hpp"

namespace ogmios::distribution {

using Clock = std::chrono::steady_clock;

enum class UnitState { queued, leased, done, failed_permanent };

inline std::string_view to_string(UnitState s) {
  switch (s) {
    case UnitState::queued: return "queued";
    case UnitState::leased: return "leased";
    case UnitState::done: return "done";
    case UnitState::failed_permanent: return "failed-permanent";
  }
  return "";
}

// Inline bytes or a file read when the unit is dispatched.
using PayloadSource = std::variant<std::string, std::filesystem::path>;

struct PendingDocument {
  std::string doc_id;
  PayloadSource payload;
  std::string format = "text";  // "text" or "xml"
};

struct WorkUnit {
  std::uint64_t id = 0;
  std::string doc_id;
  PayloadSource payload;
  std::string format;
  std::uint32_t attempt = 1;
  UnitState state = UnitState::queued;
  std::optional<Clock::time_point> lease_deadline;
  std::string worker;  // lease holder, or who completed it
};

struct DispatchGrant {
  std::uint64_t unit_id = 0;
  std::string doc_id;
  std::uint32_t attempt = 1;
  std::string format;
  std::string payload;
};

struct WorkResult {
  std::uint64_t unit_id = 0;
  std::string worker_id;
  std::uint32_t attempt = 1;
  bool ok = false;
  std::string step;      // failing step when !ok
  std::string message;   // error description when !ok
  std::string document;  // annotated XML when ok
  std::string timings;   // "step=seconds;..." as reported by the worker
};

enum class SubmitOutcome { accepted, requeued, failed_permanent, discarded };

inline std::string_view to_string(SubmitOutcome s) {
  switch (s) {
    case SubmitOutcome::accepted: return "accepted";
    case SubmitOutcome::requeued: return "requeued";
    case SubmitOutcome::failed_permanent: return "failed-permanent";
    case SubmitOutcome::discarded: return "discarded";
  }
  return "";
}

struct UnitCounts {
  std::size_t queued = 0;
  std::size_t leased = 0;
  std::size_t done = 0;
  std::size_t failed_permanent = 0;
  std::size_t total = 0;

  bool conserved() const { return queued + leased + done + failed_permanent == total; }
  bool operator==(const UnitCounts&) const = default;
};

class DuplicateDocumentError : public Error {
 public:
  explicit DuplicateDocumentError(std::string doc_id)
      : Error("duplicate document id '" + doc_id + "'"), doc_id_(std::move(doc_id)) {}
  const std::string& doc_id() const { return doc_id_; }

 private:
  std::string doc_id_;
};

// Where completed documents go. Called once per unit that reaches done.
class OutputStore {
 public:
  virtual ~OutputStore() = default;
  virtual void persist(const WorkUnit& unit, const std::string& document) = 0;
};

// Writes `<doc_id>.xml` files atomically into a directory.
class DirectoryOutputStore final : public OutputStore {
 public:
  explicit DirectoryOutputStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  void persist(const WorkUnit& unit, const std::string& document) override {
    io::write_file_atomic(dir_ / (unit.doc_id + ".xml"), document);
  }

 private:
  std::filesystem::path dir_;
};

// Append-only log of state transitions, one tab-separated record per line:
//
//   ENQUEUE <unit> <doc_id>
//   LEASE   <unit> <attempt> <worker>
//   DONE    <unit> <attempt> <worker>
//   REQUEUE <unit> <attempt>      (attempt number of the next try)
//   FAILED  <unit> <attempt>
class Journal {
 public:
  explicit Journal(const std::filesystem::path& path) : path_(path), out_(path, std::ios::app | std::ios::binary) {
    if (!out_) throw ResourceError(path.string(), 0, "cannot open journal for appending");
  }

  void record(std::string_view line) {
    out_ << line << '\n';
    out_.flush();
    if (!out_) throw ResourceError(path_.string(), 0, "journal write failed");
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

struct CoordinatorOptions {
  double lease_seconds = 300;
  std::uint32_t max_attempts = 3;
  // Throws if an ok result's document is unacceptable; such a result is
  // then handled like an error result.
  std::function<void(const std::string&)> check_document;
};

// The server's single state machine. Every transition happens under one
// mutex, so concurrent connections observe a serial history.
class Coordinator {
 public:
  using Now = std::function<Clock::time_point()>;

  Coordinator(CoordinatorOptions options, OutputStore* store, Journal* journal = nullptr,
              Now now = [] { return Clock::now(); })
      : options_(options), store_(store), journal_(journal), now_(std::move(now)) {
    if (options_.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
    if (!(options_.lease_seconds > 0)) throw ConfigError("lease_seconds must be positive");
  }

  // One queued unit per document, attempt 1. Rejects the whole batch if any
  // id is already known or repeated.
  std::size_t enqueue(std::vector<PendingDocument> docs) {
    std::lock_guard lock(mu_);
    std::set<std::string> batch;
    for (const auto& d : docs) {
      if (by_doc_.count(d.doc_id) || !batch.insert(d.doc_id).second) throw DuplicateDocumentError(d.doc_id);
      if (d.doc_id.empty() || d.doc_id.find_first_of("\t\n\r/") != std::string::npos) {
        throw ConfigError("invalid document id '" + d.doc_id + "'");
      }
    }
    for (auto& d : docs) {
      WorkUnit u;
      u.id = units_.size();
      u.doc_id = std::move(d.doc_id);
      u.payload = std::move(d.payload);
      u.format = std::move(d.format);
      by_doc_.emplace(u.doc_id, u.id);
      log("ENQUEUE\t" + std::to_string(u.id) + "\t" + u.doc_id);
      queue_.insert(u.id);
      units_.push_back(std::move(u));
      ++counts_.queued;
      ++counts_.total;
    }
    return docs.size();
  }

  // Re-applies a journal written by an earlier run over the same corpus.
  // Units matched by document id keep their terminal state; units that were
  // queued or leased go back to the queue with their attempt number.
  void recover(std::string_view journal_content) {
    std::lock_guard lock(mu_);
    std::unordered_map<std::uint64_t, std::string> old_ids;
    io::for_each_record(journal_content, [&](std::size_t line, std::string_view record) {
      const auto f = io::split(record, '\t');
      auto number = [&](std::size_t i) -> std::uint64_t {
        if (i >= f.size()) throw ResourceError("journal", line, "missing field");
        const std::string s(f[i]);
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
          throw ResourceError("journal", line, "bad number '" + s + "'");
        }
        return std::stoull(s);
      };
      if (f[0] == "ENQUEUE") {
        if (f.size() != 3) throw ResourceError("journal", line, "malformed ENQUEUE");
        old_ids[number(1)] = std::string(f[2]);
        return;
      }
      const auto old = old_ids.find(number(1));
      if (old == old_ids.end()) throw ResourceError("journal", line, "unit never enqueued");
      const auto it = by_doc_.find(old->second);
      if (it == by_doc_.end()) return;  // document no longer in the corpus
      WorkUnit& u = units_[it->second];
      const auto attempt = static_cast<std::uint32_t>(number(2));
      if (f[0] == "DONE") {
        move(u, UnitState::done);
        u.worker = f.size() > 3 ? std::string(f[3]) : std::string();
      } else if (f[0] == "FAILED") {
        move(u, UnitState::failed_permanent);
      } else if (f[0] == "LEASE" || f[0] == "REQUEUE") {
        move(u, UnitState::queued);
      } else {
        throw ResourceError("journal", line, "unknown record '" + std::string(f[0]) + "'");
      }
      u.attempt = attempt;
    });
  }

  void register_worker(const std::string& worker_id) {
    if (worker_id.empty() || worker_id.find_first_of("\t\n\r") != std::string::npos) {
      throw ProtocolError("invalid worker id");
    }
    std::lock_guard lock(mu_);
    workers_.insert(worker_id);
  }

  // Leases the oldest queued unit to `worker_id`, or returns nullopt when
  // nothing is queued. Expired leases are reclaimed first.
  std::optional<DispatchGrant> dispatch(const std::string& worker_id) {
    std::unique_lock lock(mu_);
    if (!workers_.count(worker_id)) throw ProtocolError("unknown worker '" + worker_id + "'");
    expire_locked();
    while (!queue_.empty()) {
      WorkUnit& u = units_[*queue_.begin()];
      DispatchGrant g{u.id, u.doc_id, u.attempt, u.format, {}};
      if (const auto* inline_bytes = std::get_if<std::string>(&u.payload)) {
        g.payload = *inline_bytes;
      } else {
        try {
          g.payload = io::read_file(std::get<std::filesystem::path>(u.payload));
        } catch (const Error&) {
          // Unreadable input can never succeed.
          log("FAILED\t" + std::to_string(u.id) + "\t" + std::to_string(u.attempt));
          move(u, UnitState::failed_permanent);
          continue;
        }
      }
      move(u, UnitState::leased);
      u.worker = worker_id;
      u.lease_deadline = now_() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(options_.lease_seconds));
      log("LEASE\t" + std::to_string(u.id) + "\t" + std::to_string(u.attempt) + "\t" + worker_id);
      return g;
    }
    return std::nullopt;
  }

  // Applies a worker's result. An ok result completes any unit that is not
  // terminal yet (the first one wins); an error result only counts when it
  // comes from the current lease holder for the current attempt.
  SubmitOutcome submit(const WorkResult& r) {
    std::lock_guard lock(mu_);
    if (r.unit_id >= units_.size()) throw ProtocolError("unknown unit " + std::to_string(r.unit_id));
    WorkUnit& u = units_[r.unit_id];
    if (u.state == UnitState::done || u.state == UnitState::failed_permanent) return SubmitOutcome::discarded;
    bool ok = r.ok;
    std::string step = r.step, message = r.message;
    if (ok && options_.check_document) {
      try {
        options_.check_document(r.document);
      } catch (const std::exception& e) {
        ok = false;
        step = "result";
        message = e.what();
      }
    }
    if (ok) {
      if (store_) store_->persist(u, r.document);
      log("DONE\t" + std::to_string(u.id) + "\t" + std::to_string(r.attempt) + "\t" + r.worker_id);
      move(u, UnitState::done);
      u.worker = r.worker_id;
      u.lease_deadline.reset();
      ++persisted_;
      return SubmitOutcome::accepted;
    }
    if (u.state != UnitState::leased || u.worker != r.worker_id || u.attempt != r.attempt) {
      return SubmitOutcome::discarded;
    }
    last_errors_[u.id] = step + ": " + message;
    return retry_or_fail(u);
  }

  // Reclaims every lease whose deadline has passed. Returns how many.
  std::size_t expire_leases() {
    std::lock_guard lock(mu_);
    return expire_locked();
  }

  UnitCounts counts() const {
    std::lock_guard lock(mu_);
    return counts_;
  }

  // Counts recomputed from the units themselves.
  UnitCounts audit() const {
    std::lock_guard lock(mu_);
    UnitCounts c;
    for (const auto& u : units_) {
      ++c.total;
      switch (u.state) {
        case UnitState::queued: ++c.queued; break;
        case UnitState::leased: ++c.leased; break;
        case UnitState::done: ++c.done; break;
        case UnitState::failed_permanent: ++c.failed_permanent; break;
      }
    }
    return c;
  }

  bool finished() const {
    std::lock_guard lock(mu_);
    return counts_.queued == 0 && counts_.leased == 0;
  }

  std::vector<WorkUnit> units() const {
    std::lock_guard lock(mu_);
    return units_;
  }

  std::map<std::uint64_t, std::string> last_errors() const {
    std::lock_guard lock(mu_);
    return last_errors_;
  }

  std::size_t persisted() const {
    std::lock_guard lock(mu_);
    return persisted_;
  }

  const CoordinatorOptions& options() const { return options_; }

 private:
  void log(const std::string& line) {
    if (journal_) journal_->record(line);
  }

  std::size_t& counter(UnitState s) {
    switch (s) {
      case UnitState::queued: return counts_.queued;
      case UnitState::leased: return counts_.leased;
      case UnitState::done: return counts_.done;
      case UnitState::failed_permanent: return counts_.failed_permanent;
    }
    return counts_.queued;
  }

  void move(WorkUnit& u, UnitState to) {
    if (u.state == to) return;
    --counter(u.state);
    ++counter(to);
    if (u.state == UnitState::queued) queue_.erase(u.id);
    if (to == UnitState::queued) queue_.insert(u.id);
    u.state = to;
  }

  SubmitOutcome retry_or_fail(WorkUnit& u) {
    u.lease_deadline.reset();
    if (u.attempt < options_.max_attempts) {
      ++u.attempt;
      log("REQUEUE\t" + std::to_string(u.id) + "\t" + std::to_string(u.attempt));
      move(u, UnitState::queued);
      return SubmitOutcome::requeued;
    }
    log("FAILED\t" + std::to_string(u.id) + "\t" + std::to_string(u.attempt));
    move(u, UnitState::failed_permanent);
    return SubmitOutcome::failed_permanent;
  }

  std::size_t expire_locked() {
    const auto now = now_();
    std::size_t n = 0;
    for (auto& u : units_) {
      if (u.state == UnitState::leased && u.lease_deadline && *u.lease_deadline <= now) {
        last_errors_[u.id] = "lease expired";
        retry_or_fail(u);
        ++n;
      }
    }
    return n;
  }

  CoordinatorOptions options_;
  OutputStore* store_;
  Journal* journal_;
  Now now_;

  mutable std::mutex mu_;
  std::vector<WorkUnit> units_;
  std::unordered_map<std::string, std::uint64_t> by_doc_;
  std::set<std::uint64_t> queue_;
  std::set<std::string> workers_;
  std::map<std::uint64_t, std::string> last_errors_;
  UnitCounts counts_;
  std::size_t persisted_ = 0;
};

}  // namespace ogmios::distribution
