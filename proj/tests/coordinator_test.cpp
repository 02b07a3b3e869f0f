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

#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <random>
#include <thread>

#include "ogmios/distribution/coordinator.hpp"
#include "support/fixtures.hpp"

namespace ogmios::distribution {
namespace {

class FakeClock {
 public:
  Clock::time_point now() const { return now_; }
  void advance(double seconds) {
    now_ += std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  }
  Coordinator::Now fn() {
    return [this] { return now_; };
  }

 private:
  Clock::time_point now_{};
};

// Counts persists per unit.
class CountingStore final : public OutputStore {
 public:
  void persist(const WorkUnit& unit, const std::string& document) override {
    std::lock_guard lock(mu_);
    ++writes[unit.id];
    last[unit.id] = document;
  }
  std::map<std::uint64_t, int> writes;
  std::map<std::uint64_t, std::string> last;

 private:
  std::mutex mu_;
};

std::vector<PendingDocument> docs(std::size_t n) {
  std::vector<PendingDocument> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({"doc" + std::to_string(i), std::string("text ") + std::to_string(i)});
  return out;
}

WorkResult ok_result(const DispatchGrant& g, const std::string& worker, std::string doc = "<document/>") {
  WorkResult r;
  r.unit_id = g.unit_id;
  r.worker_id = worker;
  r.attempt = g.attempt;
  r.ok = true;
  r.document = std::move(doc);
  return r;
}

WorkResult error_result(const DispatchGrant& g, const std::string& worker) {
  WorkResult r;
  r.unit_id = g.unit_id;
  r.worker_id = worker;
  r.attempt = g.attempt;
  r.step = "terms";
  r.message = "boom";
  return r;
}

TEST(Enqueue, CountsAndDuplicates) {
  Coordinator c({}, nullptr);
  EXPECT_EQ(c.enqueue(docs(3)), 3u);
  EXPECT_EQ(c.counts().queued, 3u);
  EXPECT_EQ(c.enqueue({}), 0u);
  EXPECT_EQ(c.counts().total, 3u);
  try {
    c.enqueue({{"new", std::string("x")}, {"doc1", std::string("y")}});
    FAIL();
  } catch (const DuplicateDocumentError& e) {
    EXPECT_EQ(e.doc_id(), "doc1");
  }
  EXPECT_EQ(c.counts().total, 3u);
  EXPECT_THROW(c.enqueue({{"a", std::string("x")}, {"a", std::string("y")}}), DuplicateDocumentError);
  EXPECT_THROW(c.enqueue({{"a/b", std::string("x")}}), ConfigError);
  EXPECT_THROW(c.enqueue({{"", std::string("x")}}), ConfigError);
  for (const auto& u : c.units()) {
    EXPECT_EQ(u.state, UnitState::queued);
    EXPECT_EQ(u.attempt, 1u);
  }
}

TEST(Enqueue, EmptyCorpusIsFinished) {
  Coordinator c({}, nullptr);
  c.enqueue({});
  EXPECT_TRUE(c.finished());
}

TEST(Dispatch, UnknownWorkerAndEmptyQueue) {
  Coordinator c({}, nullptr);
  EXPECT_THROW(c.dispatch("w"), ProtocolError);
  c.register_worker("w");
  EXPECT_FALSE(c.dispatch("w").has_value());
  EXPECT_THROW(c.register_worker(""), ProtocolError);
  EXPECT_THROW(c.register_worker("a\tb"), ProtocolError);
}

TEST(Dispatch, ConcurrentCallsGrantOnce) {
  for (int round = 0; round < 200; ++round) {
    Coordinator c({}, nullptr);
    c.enqueue(docs(1));
    for (int w = 0; w < 4; ++w) c.register_worker("w" + std::to_string(w));
    std::atomic<int> grants{0};
    std::vector<std::thread> threads;
    for (int w = 0; w < 4; ++w) {
      threads.emplace_back([&, w] {
        if (c.dispatch("w" + std::to_string(w))) ++grants;
      });
    }
    for (auto& t : threads) t.join();
    ASSERT_EQ(grants.load(), 1);
    ASSERT_EQ(c.counts().leased, 1u);
  }
}

TEST(Dispatch, OldestFirstAndLeaseDeadline) {
  FakeClock clock;
  Coordinator c({10, 3, {}}, nullptr, nullptr, clock.fn());
  c.enqueue(docs(2));
  c.register_worker("w");
  const auto g = c.dispatch("w");
  ASSERT_TRUE(g);
  EXPECT_EQ(g->doc_id, "doc0");
  EXPECT_EQ(g->payload, "text 0");
  const auto u = c.units()[0];
  EXPECT_EQ(u.state, UnitState::leased);
  EXPECT_EQ(u.worker, "w");
  EXPECT_EQ(*u.lease_deadline, clock.now() + std::chrono::seconds(10));
}

TEST(Dispatch, ExpiredLeaseReturnsWithNextAttempt) {
  FakeClock clock;
  Coordinator c({10, 3, {}}, nullptr, nullptr, clock.fn());
  c.enqueue(docs(1));
  c.register_worker("a");
  c.register_worker("b");
  const auto first = c.dispatch("a");
  ASSERT_TRUE(first);
  clock.advance(9.9);
  EXPECT_FALSE(c.dispatch("b").has_value());
  clock.advance(0.2);
  const auto second = c.dispatch("b");
  ASSERT_TRUE(second);
  EXPECT_EQ(second->unit_id, first->unit_id);
  EXPECT_EQ(second->attempt, 2u);
}

TEST(Dispatch, UnreadablePayloadFailsPermanently) {
  Coordinator c({}, nullptr);
  c.enqueue({{"gone", std::filesystem::path("/nonexistent/ogmios/gone.txt")}, {"here", std::string("x")}});
  c.register_worker("w");
  const auto g = c.dispatch("w");
  ASSERT_TRUE(g);
  EXPECT_EQ(g->doc_id, "here");
  EXPECT_EQ(c.counts().failed_permanent, 1u);
}

TEST(Submit, OkPersistsOnce) {
  CountingStore store;
  Coordinator c({}, &store);
  c.enqueue(docs(1));
  c.register_worker("w");
  const auto g = *c.dispatch("w");
  EXPECT_EQ(c.submit(ok_result(g, "w")), SubmitOutcome::accepted);
  EXPECT_EQ(c.submit(ok_result(g, "w")), SubmitOutcome::discarded);
  EXPECT_EQ(store.writes[g.unit_id], 1);
  EXPECT_EQ(c.counts().done, 1u);
  EXPECT_TRUE(c.finished());
  EXPECT_THROW(c.submit(WorkResult{42, "w", 1, true, {}, {}, {}, {}}), ProtocolError);
}

TEST(Submit, ErrorsRequeueThenFail) {
  Coordinator c({300, 3, {}}, nullptr);
  c.enqueue(docs(1));
  c.register_worker("w");
  for (std::uint32_t attempt = 1; attempt <= 3; ++attempt) {
    const auto g = *c.dispatch("w");
    ASSERT_EQ(g.attempt, attempt);
    const auto outcome = c.submit(error_result(g, "w"));
    EXPECT_EQ(outcome, attempt < 3 ? SubmitOutcome::requeued : SubmitOutcome::failed_permanent);
  }
  EXPECT_EQ(c.counts().failed_permanent, 1u);
  EXPECT_EQ(c.last_errors().at(0), "terms: boom");
  EXPECT_FALSE(c.dispatch("w").has_value());
  EXPECT_TRUE(c.finished());
}

TEST(Submit, StaleErrorIsDiscarded) {
  FakeClock clock;
  Coordinator c({10, 3, {}}, nullptr, nullptr, clock.fn());
  c.enqueue(docs(1));
  c.register_worker("a");
  c.register_worker("b");
  const auto ga = *c.dispatch("a");
  clock.advance(11);
  const auto gb = *c.dispatch("b");
  EXPECT_EQ(c.submit(error_result(ga, "a")), SubmitOutcome::discarded);
  EXPECT_EQ(c.units()[0].state, UnitState::leased);
  EXPECT_EQ(c.submit(error_result(gb, "b")), SubmitOutcome::requeued);
}

TEST(Submit, LeaseExpiryRaceFirstOkWins) {
  FakeClock clock;
  CountingStore store;
  Coordinator c({10, 3, {}}, &store, nullptr, clock.fn());
  c.enqueue(docs(1));
  c.register_worker("slow");
  c.register_worker("fast");
  const auto g1 = *c.dispatch("slow");
  clock.advance(10);
  const auto g2 = *c.dispatch("fast");
  ASSERT_EQ(g1.unit_id, g2.unit_id);
  EXPECT_EQ(c.submit(ok_result(g1, "slow", "first")), SubmitOutcome::accepted);
  EXPECT_EQ(c.submit(ok_result(g2, "fast", "second")), SubmitOutcome::discarded);
  EXPECT_EQ(store.writes[g1.unit_id], 1);
  EXPECT_EQ(store.last[g1.unit_id], "first");
  EXPECT_EQ(c.units()[0].worker, "slow");
}

TEST(Submit, RejectedDocumentCountsAsError) {
  CoordinatorOptions opts;
  opts.max_attempts = 2;
  opts.check_document = [](const std::string& doc) {
    if (doc != "good") throw ValidationError({});
  };
  CountingStore store;
  Coordinator c(opts, &store);
  c.enqueue(docs(1));
  c.register_worker("w");
  EXPECT_EQ(c.submit(ok_result(*c.dispatch("w"), "w", "bad")), SubmitOutcome::requeued);
  EXPECT_EQ(c.last_errors().at(0).rfind("result: ", 0), 0u);
  EXPECT_EQ(c.submit(ok_result(*c.dispatch("w"), "w", "good")), SubmitOutcome::accepted);
  EXPECT_EQ(store.writes.size(), 1u);
}

TEST(Journal, RecoveryResumesRun) {
  testing::TempDir dir("journal");
  const auto path = dir / "run.journal";
  {
    Journal j(path);
    Coordinator c({300, 3, {}}, nullptr, &j);
    c.enqueue(docs(4));
    c.register_worker("w");
    const auto g0 = *c.dispatch("w");
    c.submit(ok_result(g0, "w"));
    const auto g1 = *c.dispatch("w");
    c.submit(error_result(g1, "w"));  // doc1 back to queue, attempt 2
    const auto g2 = *c.dispatch("w");
    ASSERT_EQ(g2.doc_id, "doc1");     // leased when the server stops
    const auto g3 = *c.dispatch("w");
    ASSERT_EQ(g3.doc_id, "doc2");
    c.submit(error_result(g3, "w"));
  }
  // Same corpus in a different order: recovery matches by document id.
  auto corpus = docs(4);
  std::reverse(corpus.begin(), corpus.end());
  Journal j(path);
  Coordinator c({300, 3, {}}, nullptr, &j);
  c.enqueue(corpus);
  c.recover(io::read_file(path));
  std::map<std::string, WorkUnit> by_doc;
  for (const auto& u : c.units()) by_doc[u.doc_id] = u;
  EXPECT_EQ(by_doc["doc0"].state, UnitState::done);
  EXPECT_EQ(by_doc["doc1"].state, UnitState::queued);
  EXPECT_EQ(by_doc["doc1"].attempt, 2u);
  EXPECT_EQ(by_doc["doc2"].state, UnitState::queued);
  EXPECT_EQ(by_doc["doc2"].attempt, 2u);
  EXPECT_EQ(by_doc["doc3"].state, UnitState::queued);
  EXPECT_EQ(by_doc["doc3"].attempt, 1u);
  EXPECT_EQ(c.counts(), c.audit());
  EXPECT_EQ(c.counts().done, 1u);

  // Appending the second run to the same journal still recovers.
  c.register_worker("v");
  while (auto g = c.dispatch("v")) c.submit(ok_result(*g, "v"));
  Coordinator again({300, 3, {}}, nullptr);
  again.enqueue(docs(4));
  again.recover(io::read_file(path));
  EXPECT_EQ(again.counts().done, 4u);
}

TEST(Journal, MalformedRecordsAreReported) {
  Coordinator c({}, nullptr);
  c.enqueue(docs(1));
  EXPECT_THROW(c.recover("DONE\t0\t1\tw\n"), ResourceError);
  EXPECT_THROW(c.recover("ENQUEUE\t0\tdoc0\nLEASE\tx\t1\tw\n"), ResourceError);
  EXPECT_THROW(c.recover("ENQUEUE\t0\tdoc0\nTELEPORT\t0\t1\n"), ResourceError);
  EXPECT_NO_THROW(c.recover("ENQUEUE\t0\tother\nDONE\t0\t1\tw\n"));
  EXPECT_EQ(c.counts().queued, 1u);
}

// Random interleavings of dispatch, expiry, ok/error/late submissions and
// clock jumps. After every step the incremental counts equal a recount from
// the units, the total is conserved and no unit was persisted twice.
TEST(Scheduler, RandomInterleavingsKeepInvariants) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(seed);
    FakeClock clock;
    CountingStore store;
    Coordinator c({5, 3, {}}, &store, nullptr, clock.fn());
    const std::size_t n = 30;
    c.enqueue(docs(n));
    const std::vector<std::string> workers = {"a", "b", "c"};
    for (const auto& w : workers) c.register_worker(w);
    std::vector<std::pair<DispatchGrant, std::string>> outstanding;
    for (int step = 0; step < 3000 && !c.finished(); ++step) {
      switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0:
        case 1: {
          const auto& w = workers[rng() % workers.size()];
          if (auto g = c.dispatch(w)) outstanding.push_back({*g, w});
          break;
        }
        case 2:
        case 3: {
          if (outstanding.empty()) break;
          const std::size_t i = rng() % outstanding.size();
          auto [g, w] = outstanding[i];
          // Sometimes keep the grant around to deliver it again later.
          if (rng() % 4 != 0) outstanding.erase(outstanding.begin() + static_cast<std::ptrdiff_t>(i));
          c.submit(rng() % 10 < 2 ? error_result(g, w) : ok_result(g, w, g.doc_id));
          break;
        }
        case 4:
          clock.advance(std::uniform_real_distribution<double>(0, 4)(rng));
          c.expire_leases();
          break;
      }
      const auto counts = c.counts();
      ASSERT_EQ(counts, c.audit());
      ASSERT_TRUE(counts.conserved());
      ASSERT_EQ(counts.total, n);
    }
    // Drain whatever is left with a well-behaved worker.
    clock.advance(100);
    while (auto g = c.dispatch("a")) c.submit(ok_result(*g, "a", g->doc_id));
    ASSERT_TRUE(c.finished());
    std::size_t done = 0;
    for (const auto& u : c.units()) {
      ASSERT_TRUE(u.state == UnitState::done || u.state == UnitState::failed_permanent);
      if (u.state == UnitState::done) {
        ++done;
        ASSERT_EQ(store.writes[u.id], 1);
        ASSERT_EQ(store.last[u.id], u.doc_id);
      } else {
        ASSERT_EQ(store.writes.count(u.id), 0u);
      }
    }
    ASSERT_EQ(done, c.persisted());
  }
}

}  // namespace
}  // namespace ogmios::distribution
