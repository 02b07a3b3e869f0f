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

#include "support/cluster.hpp"

namespace ogmios::distribution {
namespace {

using testing::ClusterOptions;
using testing::run_cluster;

void expect_clean(const testing::ClusterOutcome& o) {
  for (const auto& f : o.audit_failures) ADD_FAILURE() << f;
  EXPECT_EQ(o.conservation_violations, 0u);
  EXPECT_GT(o.samples, 0u);
}

TEST(Cluster, HundredDocumentsFourWorkers) {
  ClusterOptions opt;
  opt.documents = testing::tiny_corpus(100, 1);
  const auto o = run_cluster(opt);
  expect_clean(o);
  EXPECT_EQ(o.counts.done, 100u);
  std::size_t processed = 0;
  for (const auto& r : o.reports) {
    EXPECT_EQ(r.exit, WorkerExit::finished) << r.diagnostic;
    processed += r.processed;
  }
  EXPECT_EQ(processed, 100u);
}

TEST(Cluster, KilledWorkerUnitsFinishElsewhere) {
  ClusterOptions opt;
  opt.documents = testing::tiny_corpus(60, 2);
  opt.lease_seconds = 0.3;
  opt.kill_after = 5;
  opt.poisoned = {"d00007", "d00031"};
  const auto o = run_cluster(opt);
  expect_clean(o);
  EXPECT_EQ(o.reports[0].exit, WorkerExit::abandoned);
  EXPECT_EQ(exit_status(o.reports[0].exit), 1);
  EXPECT_EQ(o.counts.failed_permanent, 2u);
  EXPECT_EQ(o.counts.done, o.counts.total - o.counts.failed_permanent);
  std::size_t retried = 0;
  for (const auto& u : o.units) {
    if (u.state == UnitState::failed_permanent) {
      EXPECT_TRUE(opt.poisoned.count(u.doc_id)) << u.doc_id;
      EXPECT_EQ(u.attempt, 3u);
    }
    if (u.state == UnitState::done && u.attempt > 1) ++retried;
  }
  EXPECT_GE(retried, 1u);  // the abandoned unit
}

TEST(Cluster, FlakyDocumentsSucceedOnRetry) {
  ClusterOptions opt;
  opt.documents = testing::tiny_corpus(30, 3);
  opt.workers = 2;
  opt.flaky = {"d00000", "d00010", "d00020"};
  const auto o = run_cluster(opt);
  expect_clean(o);
  EXPECT_EQ(o.counts.done, 30u);
  for (const auto& u : o.units) EXPECT_EQ(u.attempt, opt.flaky.count(u.doc_id) ? 2u : 1u) << u.doc_id;
}

TEST(Cluster, SingleDocumentMatchesLocalRun) {
  testing::TempDir out("single");
  const std::string text = "Gene expression of sigK in B. subtilis. The mother cell grows!";
  const auto& pipeline = *testing::cluster_pipeline();
  DirectoryOutputStore store(out.path());
  Coordinator coord({}, &store);
  coord.enqueue({{"one", text, "text"}});
  Server server(coord, Address{"127.0.0.1", 0});
  server.start();
  WorkerOptions wo;
  wo.server = Address{"127.0.0.1", server.port()};
  wo.worker_id = "solo";
  const auto report = worker_loop(pipeline, wo);
  server.stop();
  EXPECT_EQ(report.exit, WorkerExit::finished);
  EXPECT_EQ(report.processed, 1u);
  const Document remote = deserialize(io::read_file(out / "one.xml"));
  const auto local = pipeline.run("one", text);
  ASSERT_TRUE(local.ok());
  EXPECT_EQ(serialize(remote, {false}), serialize(*local.document, {false}));
  EXPECT_EQ(remote.timings.size(), local.document->timings.size());
}

TEST(Worker, UnreachableServerExitsWithStatusTwo) {
  std::uint16_t port;
  {
    Listener l(Address{"127.0.0.1", 0});
    port = l.port();
  }
  WorkerOptions wo;
  wo.server = Address{"127.0.0.1", port};
  wo.worker_id = "lost";
  wo.max_retries = 2;
  wo.initial_backoff = std::chrono::milliseconds(5);
  const auto report = worker_loop(*testing::cluster_pipeline(), wo);
  EXPECT_EQ(report.exit, WorkerExit::unreachable);
  EXPECT_EQ(exit_status(report.exit), 2);
  EXPECT_FALSE(report.diagnostic.empty());
}

TEST(Worker, StopFlagEndsTheLoop) {
  Coordinator coord({}, nullptr);
  coord.enqueue({{"a", std::string("x")}});
  coord.register_worker("hog");
  ASSERT_TRUE(coord.dispatch("hog"));  // keeps the only unit leased
  Server server(coord, Address{"127.0.0.1", 0});
  server.start();
  std::atomic<bool> stop{false};
  WorkerOptions wo;
  wo.server = Address{"127.0.0.1", server.port()};
  wo.worker_id = "idle";
  wo.poll_interval = std::chrono::milliseconds(10);
  wo.stop = &stop;
  std::thread t([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    stop = true;
  });
  const auto report = worker_loop(*testing::cluster_pipeline(), wo);
  t.join();
  server.stop();
  EXPECT_EQ(report.exit, WorkerExit::stopped);
  EXPECT_EQ(report.processed, 0u);
}

TEST(Server, GarbageGetsErrorAckThenClose) {
  Coordinator coord({}, nullptr);
  Server server(coord, Address{"127.0.0.1", 0});
  server.start();
  Socket s = connect_to(Address{"127.0.0.1", server.port()});
  s.send_all("GARBAGE-GARBAGE-GARBAGE");
  const auto reply = s.receive_message();
  ASSERT_TRUE(reply.has_value());
  EXPECT_EQ(reply->type, MessageType::ack);
  EXPECT_EQ(reply->header.at("status"), "error");
  EXPECT_FALSE(s.receive_message().has_value());

  // An unknown worker is a protocol error too.
  Socket t = connect_to(Address{"127.0.0.1", server.port()});
  Message m;
  m.type = MessageType::dispatch;
  m.header["worker"] = "nobody";
  t.send_message(m);
  const auto r2 = t.receive_message();
  ASSERT_TRUE(r2.has_value());
  EXPECT_EQ(r2->header.at("status"), "error");
  server.stop();
}

TEST(Address, Parsing) {
  EXPECT_EQ(parse_address("127.0.0.1:7000").port, 7000);
  EXPECT_EQ(parse_address(":80").host, "");
  EXPECT_EQ(parse_address("[::1]:9").host, "::1");
  EXPECT_THROW(parse_address("localhost"), ConfigError);
  EXPECT_THROW(parse_address("h:70000"), ConfigError);
  EXPECT_THROW(parse_address("h:"), ConfigError);
}

}  // namespace
}  // namespace ogmios::distribution
