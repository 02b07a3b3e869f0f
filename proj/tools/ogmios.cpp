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

// Command-line entry point: annotate, serve, work, stats, parser-eval and
// validate. Exit status: 0 success, 1 per-document failures, 2 configuration
// or protocol errors.

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "ogmios/ogmios.hpp"

namespace fs = std::filesystem;
namespace dist = ogmios::distribution;

namespace {

constexpr int kOk = 0;
constexpr int kDocumentFailures = 1;
constexpr int kUsage = 2;

// Flag value, then $OGMIOS_CONFIG.
fs::path config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(std::string(ogmios::kConfigEnv).c_str()); env && *env) return env;
  throw ogmios::ConfigError("no configuration: pass --config or set " + std::string(ogmios::kConfigEnv));
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

bool same_directory(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::exists(a, ec) && fs::exists(b, ec) && fs::equivalent(a, b, ec);
}

ogmios::InputFormat format_of(const fs::path& p) {
  return p.extension() == ".xml" ? ogmios::InputFormat::xml : ogmios::InputFormat::text;
}

int annotate(const fs::path& in, const fs::path& out, const std::string& config_flag, std::size_t jobs) {
  const ogmios::Pipeline pipeline(ogmios::load_config(config_path(config_flag)));
  std::error_code ec;
  if (fs::is_regular_file(in, ec)) {
    const fs::path target = out.extension() == ".xml" ? out : out / (in.stem().string() + ".xml");
    if (same_directory(in, target)) throw ogmios::ConfigError("output would overwrite the input " + in.string());
    const auto result = pipeline.run(in.stem().string(), ogmios::io::read_file(in), format_of(in));
    if (!result.ok()) {
      std::cerr << in.stem().string() << ": failed in " << result.failure->step << ": "
                << one_line(result.failure->message) << "\n";
      std::cout << "annotated 0 of 1 documents\n";
      return kDocumentFailures;
    }
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    ogmios::io::write_file_atomic(target, result.xml);
    std::cout << "annotated 1 of 1 documents -> " << target.string() << "\n";
    return kOk;
  }
  if (!fs::is_directory(in, ec)) throw ogmios::ConfigError("input not found: " + in.string());
  fs::create_directories(out);
  if (same_directory(in, out)) throw ogmios::ConfigError("output directory must differ from the input directory");
  const auto summary = ogmios::run_corpus_local(in, pipeline, jobs, [&](const ogmios::PipelineResult& r) {
    if (r.ok()) ogmios::io::write_file_atomic(out / (r.doc_id + ".xml"), r.xml);
  });
  for (const auto& d : summary.documents) {
    if (d.failure) {
      std::cerr << d.doc_id << ": failed in " << d.failure->step << ": " << one_line(d.failure->message) << "\n";
    }
  }
  std::cout << "annotated " << summary.succeeded << " of " << summary.documents.size() << " documents -> "
            << out.string() << " (" << summary.failed << " failed, "
            << ogmios::metrics::format_fixed(summary.wall_seconds, 2) << " s)\n";
  return summary.failed ? kDocumentFailures : kOk;
}

struct ServeOptions {
  std::string listen;
  fs::path journal;
  fs::path corpus;
  fs::path out;
  double lease_seconds = 300;
  std::uint32_t max_attempts = 3;
  double linger_seconds = 2;
  double progress_seconds = 10;
};

int serve(const ServeOptions& o) {
  const auto entries = ogmios::list_corpus(o.corpus);
  const fs::path out = o.out.empty() ? (o.journal.has_parent_path() ? o.journal.parent_path() : fs::path("."))
                                     : o.out;
  if (same_directory(out, o.corpus)) throw ogmios::ConfigError("output directory must differ from the corpus");
  std::optional<std::string> previous;
  if (fs::exists(o.journal)) previous = ogmios::io::read_file(o.journal);

  dist::DirectoryOutputStore store(out);
  dist::Journal journal(o.journal);
  dist::CoordinatorOptions copts;
  copts.lease_seconds = o.lease_seconds;
  copts.max_attempts = o.max_attempts;
  copts.check_document = [](const std::string& xml) { ogmios::deserialize(xml); };
  dist::Coordinator coord(copts, &store, &journal);

  std::vector<dist::PendingDocument> docs;
  docs.reserve(entries.size());
  for (const auto& e : entries) {
    docs.push_back({e.doc_id, e.path, e.format == ogmios::InputFormat::xml ? "xml" : "text"});
  }
  coord.enqueue(std::move(docs));
  if (previous) coord.recover(*previous);

  dist::Server server(coord, dist::parse_address(o.listen));
  server.start();
  const auto addr = dist::parse_address(o.listen);
  std::cerr << "listening on " << (addr.host.empty() ? "*" : addr.host) << ":" << server.port() << " with "
            << coord.counts().total << " units\n";

  std::thread progress;
  std::atomic<bool> finished{false};
  if (o.progress_seconds > 0) {
    progress = std::thread([&] {
      const auto period = std::chrono::duration<double>(o.progress_seconds);
      auto next = std::chrono::steady_clock::now() + period;
      while (!finished) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        if (std::chrono::steady_clock::now() < next) continue;
        next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
        const auto c = coord.counts();
        std::cerr << "progress: queued " << c.queued << ", leased " << c.leased << ", done " << c.done
                  << ", failed " << c.failed_permanent << " of " << c.total << "\n";
      }
    });
  }
  server.wait_until_finished();
  // Let polling workers learn that the run is over.
  std::this_thread::sleep_for(std::chrono::duration<double>(o.linger_seconds));
  server.stop();
  finished = true;
  if (progress.joinable()) progress.join();

  const auto c = coord.counts();
  const auto units = coord.units();
  for (const auto& [unit, error] : coord.last_errors()) {
    if (units[unit].state == dist::UnitState::failed_permanent) {
      std::cerr << units[unit].doc_id << ": failed permanently: " << one_line(error) << "\n";
    }
  }
  std::cout << "served " << c.total << " documents: " << c.done << " done, " << c.failed_permanent
            << " failed permanently -> " << out.string() << "\n";
  return c.failed_permanent ? kDocumentFailures : kOk;
}

std::string default_worker_id() {
  char host[256] = {};
  if (::gethostname(host, sizeof host - 1) != 0) host[0] = '\0';
  return std::string(*host ? host : "worker") + "-" + std::to_string(::getpid());
}

int work(const std::string& server, const std::string& config_flag, const std::string& id, int retries) {
  const ogmios::Pipeline pipeline(ogmios::load_config(config_path(config_flag)));
  dist::WorkerOptions opt;
  opt.server = dist::parse_address(server);
  opt.worker_id = id.empty() ? default_worker_id() : id;
  opt.max_retries = retries;
  const auto report = dist::worker_loop(pipeline, opt);
  const int status = dist::exit_status(report.exit);
  if (status == kUsage) {
    std::cerr << "ogmios: " << one_line(report.diagnostic) << "\n";
    return status;
  }
  std::cout << "worker " << opt.worker_id << " submitted " << report.processed << " results (" << report.failed
            << " errors)\n";
  return status;
}

int stats(const fs::path& dir, bool timing, bool sizes, bool tsv) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ogmios::ConfigError("not a readable directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".xml" && e.path().filename().string().front() != '.') {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  ogmios::metrics::StatsAccumulator acc;
  ogmios::metrics::TimingAccumulator times;
  std::size_t rejected = 0;
  for (const auto& f : files) {
    try {
      const auto doc = ogmios::deserialize(ogmios::io::read_file(f));
      acc.add(doc);
      times.add(doc);
    } catch (const ogmios::Error& e) {
      std::cerr << f.string() << ": " << one_line(e.what()) << "\n";
      ++rejected;
    }
  }
  const auto& s = acc.stats();
  std::cout << (tsv ? ogmios::metrics::render_tsv(s) : ogmios::metrics::render_text(s));
  if (sizes) std::cout << "\n" << ogmios::metrics::render_size_bins(s);
  if (timing) {
    const auto report = times.report();
    std::cout << "\n";
    if (report.empty()) {
      std::cout << "no timing records\n";
    } else {
      std::cout << (tsv ? ogmios::metrics::render_tsv(report) : ogmios::metrics::render_text(report));
    }
  }
  std::cerr << "read " << s.documents << " documents (" << rejected << " rejected)\n";
  return rejected ? kDocumentFailures : kOk;
}

int parser_eval(const fs::path& baseline, const fs::path& variant, bool tsv) {
  const auto b = ogmios::metrics::parse_parser_eval(ogmios::io::read_file(baseline), baseline.string());
  const auto v = ogmios::metrics::parse_parser_eval(ogmios::io::read_file(variant), variant.string());
  const auto report = ogmios::metrics::parser_eval_report(b, v);
  std::cout << (tsv ? ogmios::metrics::render_tsv(report) : ogmios::metrics::render_text(report));
  for (const auto& n : report.notices) std::cerr << "notice: " << n << "\n";
  return kOk;
}

int validate_file(const fs::path& path) {
  const std::string bytes = ogmios::io::read_file(path);
  try {
    const auto doc = ogmios::deserialize(bytes);
    std::cout << path.string() << ": valid (" << (doc.tokens ? doc.tokens->size() : 0) << " tokens)\n";
    return kOk;
  } catch (const ogmios::ValidationError& e) {
    for (const auto& v : e.report()) std::cout << path.string() << ": " << ogmios::format_violation(v) << "\n";
  } catch (const ogmios::ParseError& e) {
    std::cout << path.string() << ": " << e.what() << "\n";
  } catch (const ogmios::SchemaError& e) {
    std::cout << path.string() << ": schema: " << e.what() << "\n";
  }
  return kDocumentFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stand-off linguistic annotation of large document collections"};
  app.require_subcommand(1);

  std::string in, out, config;
  std::size_t jobs = 1;
  auto* annotate_cmd = app.add_subcommand("annotate", "Annotate a document or a directory locally");
  annotate_cmd->add_option("input", in, "Text or XML document, or a directory of them")->required();
  annotate_cmd->add_option("output", out, "Output directory (or .xml file for a single document)")->required();
  annotate_cmd->add_option("--config", config, "Pipeline configuration file");
  annotate_cmd->add_option("--jobs", jobs, "Documents processed concurrently")->check(CLI::PositiveNumber);

  ServeOptions so;
  std::string corpus, journal, serve_out;
  auto* serve_cmd = app.add_subcommand("serve", "Distribute a corpus to workers");
  serve_cmd->add_option("corpus", corpus, "Directory of input documents")->required();
  serve_cmd->add_option("--listen", so.listen, "host:port to listen on")->required();
  serve_cmd->add_option("--journal", journal, "Append-only state journal")->required();
  serve_cmd->add_option("--out", serve_out, "Output directory (default: the journal's directory)");
  serve_cmd->add_option("--lease-seconds", so.lease_seconds, "Lease duration")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--max-attempts", so.max_attempts, "Attempts per document")->check(CLI::PositiveNumber);
  serve_cmd->add_option("--linger-seconds", so.linger_seconds, "Time to keep answering after completion")
      ->check(CLI::NonNegativeNumber);
  serve_cmd->add_option("--progress-seconds", so.progress_seconds, "Progress report period, 0 to disable")
      ->check(CLI::NonNegativeNumber);

  std::string server, worker_id;
  int retries = 5;
  auto* work_cmd = app.add_subcommand("work", "Process documents handed out by a server");
  work_cmd->add_option("--server", server, "host:port of the server")->required();
  work_cmd->add_option("--config", config, "Pipeline configuration file");
  work_cmd->add_option("--id", worker_id, "Worker identifier (default: host-pid)");
  work_cmd->add_option("--retries", retries, "Connection attempts before giving up")->check(CLI::NonNegativeNumber);

  std::string stats_dir;
  bool timing = false, sizes = false, tsv = false;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics over annotated documents");
  stats_cmd->add_option("directory", stats_dir, "Directory of annotated XML documents")->required();
  stats_cmd->add_flag("--timing", timing, "Add the per-step timing breakdown");
  stats_cmd->add_flag("--sizes", sizes, "Add the document size histogram");
  stats_cmd->add_flag("--tsv", tsv, "Tab-separated output");

  std::string baseline, variant;
  auto* eval_cmd = app.add_subcommand("parser-eval", "Compare parser evaluation records");
  eval_cmd->add_option("baseline", baseline, "Baseline records")->required();
  eval_cmd->add_option("variant", variant, "Variant records")->required();
  eval_cmd->add_flag("--tsv", tsv, "Tab-separated output");

  std::string xml_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check an annotated document");
  validate_cmd->add_option("file", xml_file, "Annotated XML document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ogmios: " << one_line(e.what()) << "\n";
    return kUsage;
  }

  try {
    if (*annotate_cmd) return annotate(in, out, config, jobs);
    if (*serve_cmd) {
      so.corpus = corpus;
      so.journal = journal;
      so.out = serve_out;
      return serve(so);
    }
    if (*work_cmd) return work(server, config, worker_id, retries);
    if (*stats_cmd) return stats(stats_dir, timing, sizes, tsv);
    if (*eval_cmd) return parser_eval(baseline, variant, tsv);
    if (*validate_cmd) return validate_file(xml_file);
  } catch (const std::exception& e) {
    std::cerr << "ogmios: " << one_line(e.what()) << "\n";
    return kUsage;
  }
  return kUsage;
}
