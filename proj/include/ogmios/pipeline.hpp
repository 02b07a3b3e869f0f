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
#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/gazetteer.hpp"
#include "ogmios/io.hpp"
#include "ogmios/morphology.hpp"
#include "ogmios/parser.hpp"
#include "ogmios/segmentation.hpp"
#include "ogmios/serialization.hpp"
#include "ogmios/terminology.hpp"
#include "ogmios/tokenizer.hpp"

namespace ogmios {

enum class Step { tokenize, ne, words, sentences, morpho, terms, parse };

// Execution order is fixed; configurations only switch steps on or off.
inline constexpr std::array<Step, 7> kStepOrder = {Step::tokenize, Step::ne,     Step::words, Step::sentences,
                                                   Step::morpho,   Step::terms, Step::parse};

inline std::string_view to_string(Step step) {
  switch (step) {
    case Step::tokenize: return "tokenize";
    case Step::ne: return "ne";
    case Step::words: return "words";
    case Step::sentences: return "sentences";
    case Step::morpho: return "morpho";
    case Step::terms: return "terms";
    case Step::parse: return "parse";
  }
  return "";
}

inline std::optional<Step> parse_step(std::string_view name) {
  for (Step s : kStepOrder) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

// Direct prerequisites of each step.
inline std::vector<Step> prerequisites(Step step) {
  switch (step) {
    case Step::tokenize: return {};
    case Step::ne: return {Step::tokenize};
    case Step::words: return {Step::tokenize, Step::ne};
    case Step::sentences: return {Step::words};
    case Step::morpho: return {Step::sentences, Step::words};
    case Step::terms: return {Step::morpho, Step::words, Step::ne};
    case Step::parse: return {Step::terms, Step::sentences};
  }
  return {};
}

inline constexpr std::string_view kLoadStep = "load";
inline constexpr std::string_view kRenderStep = "render";
inline constexpr std::string_view kConfigEnv = "OGMIOS_CONFIG";
inline constexpr std::string_view kResourceRootEnv = "OGMIOS_RESOURCE_ROOT";

struct ResourcePaths {
  std::optional<std::filesystem::path> gazetteer;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> suffix_rules;
  std::optional<std::filesystem::path> terminology;
};

// Makes a step fail on documents whose text contains `marker`.
struct FaultInjection {
  Step step;
  std::string marker;
};

struct PipelineConfig {
  std::vector<Step> steps;  // canonical order, no duplicates
  ResourcePaths resources;
  bool case_fold = false;
  bool term_variants = true;
  std::optional<FaultInjection> fault;
  // Relative resource paths resolve against $OGMIOS_RESOURCE_ROOT when set,
  // otherwise against this directory.
  std::filesystem::path base_dir = ".";

  bool enabled(Step s) const { return std::find(steps.begin(), steps.end(), s) != steps.end(); }

  void enable(Step s) {
    if (enabled(s)) return;
    steps.push_back(s);
    std::sort(steps.begin(), steps.end());
  }

  static PipelineConfig full() {
    PipelineConfig c;
    c.steps = {Step::tokenize, Step::ne, Step::words, Step::sentences, Step::morpho, Step::terms};
    return c;
  }

  std::filesystem::path resolve(const std::filesystem::path& p) const {
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv(std::string(kResourceRootEnv).c_str()); root && *root) {
      return std::filesystem::path(root) / p;
    }
    return base_dir / p;
  }
};

namespace detail {

inline bool parse_bool(std::string_view v, const std::string& where) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(where + ": expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace detail

// `key = value` lines; '#' starts a comment line. Keys: steps, gazetteer,
// lexicon, suffix_rules, terminology, case_fold, term_variants, fault_step,
// fault_marker.
inline PipelineConfig parse_config(std::string_view content, const std::string& origin = "<config>",
                                   const std::filesystem::path& base_dir = ".") {
  PipelineConfig cfg;
  cfg.base_dir = base_dir;
  std::optional<Step> fault_step;
  std::optional<std::string> fault_marker;
  io::for_each_record(content, [&](std::size_t line, std::string_view record) {
    const std::string where = origin + ":" + std::to_string(line);
    const auto eq = record.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const auto key = io::trim(record.substr(0, eq));
    const auto value = io::trim(record.substr(eq + 1));
    if (key == "steps") {
      cfg.steps.clear();
      for (auto name : io::split(value, ',')) {
        name = io::trim(name);
        if (name.empty()) continue;
        const auto step = parse_step(name);
        if (!step) throw ConfigError(where + ": unknown step '" + std::string(name) + "'");
        if (cfg.enabled(*step)) throw ConfigError(where + ": step '" + std::string(name) + "' listed twice");
        cfg.enable(*step);
      }
    } else if (key == "gazetteer") {
      cfg.resources.gazetteer = std::filesystem::path(value);
    } else if (key == "lexicon") {
      cfg.resources.lexicon = std::filesystem::path(value);
    } else if (key == "suffix_rules") {
      cfg.resources.suffix_rules = std::filesystem::path(value);
    } else if (key == "terminology") {
      cfg.resources.terminology = std::filesystem::path(value);
    } else if (key == "case_fold") {
      cfg.case_fold = detail::parse_bool(value, where);
    } else if (key == "term_variants") {
      cfg.term_variants = detail::parse_bool(value, where);
    } else if (key == "fault_step") {
      fault_step = parse_step(value);
      if (!fault_step) throw ConfigError(where + ": unknown step '" + std::string(value) + "'");
    } else if (key == "fault_marker") {
      fault_marker = std::string(value);
    } else {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
  });
  if (fault_step.has_value() != fault_marker.has_value()) {
    throw ConfigError(origin + ": fault_step and fault_marker must be set together");
  }
  if (fault_step) cfg.fault = FaultInjection{*fault_step, *fault_marker};
  return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path), path.string(), path.parent_path().empty() ? "." : path.parent_path());
}

// Read-only linguistic resources, shared by all documents and threads.
struct Resources {
  Gazetteer gazetteer;
  MorphLexicon lexicon;
  Terminology terminology;
};

inline std::shared_ptr<const Resources> load_resources(const PipelineConfig& cfg) {
  auto r = std::make_shared<Resources>();
  r->gazetteer = cfg.resources.gazetteer ? Gazetteer::load(cfg.resolve(*cfg.resources.gazetteer), cfg.case_fold)
                                         : Gazetteer(cfg.case_fold);
  if (cfg.resources.lexicon) {
    const auto path = cfg.resolve(*cfg.resources.lexicon);
    r->lexicon.parse_entries(io::read_file(path), path.string());
  }
  if (cfg.resources.suffix_rules) {
    const auto path = cfg.resolve(*cfg.resources.suffix_rules);
    r->lexicon.set_suffix_rules(MorphLexicon::parse_suffix_rules(io::read_file(path), path.string()));
  }
  const TerminologyOptions topts{cfg.term_variants};
  r->terminology = cfg.resources.terminology ? Terminology::load(cfg.resolve(*cfg.resources.terminology), topts)
                                             : Terminology(topts);
  return r;
}

struct MissingPrerequisite {
  Step step;
  Step missing;

  bool operator==(const MissingPrerequisite&) const = default;
};

struct ConfigReport {
  std::vector<MissingPrerequisite> missing;
  std::vector<std::string> resource_errors;  // "path[:line]: message"

  bool ok() const { return missing.empty() && resource_errors.empty(); }

  std::string describe() const {
    std::string out;
    for (const auto& m : missing) {
      if (!out.empty()) out += "; ";
      out += std::string(to_string(m.step)) + " needs " + std::string(to_string(m.missing));
    }
    for (const auto& e : resource_errors) {
      if (!out.empty()) out += "; ";
      out += e;
    }
    return out;
  }
};

// Checks prerequisite closure. With `resources` non-null the configured
// resource files are also loaded into it.
inline ConfigReport validate_config(const PipelineConfig& cfg,
                                    std::shared_ptr<const Resources>* resources = nullptr) {
  ConfigReport report;
  for (Step s : cfg.steps) {
    for (Step p : prerequisites(s)) {
      if (!cfg.enabled(p)) report.missing.push_back({s, p});
    }
  }
  try {
    auto loaded = load_resources(cfg);
    if (resources) *resources = std::move(loaded);
  } catch (const Error& e) {
    report.resource_errors.emplace_back(e.what());
  }
  return report;
}

enum class InputFormat { text, xml };

struct StepFailure {
  std::string step;
  std::string message;

  bool operator==(const StepFailure&) const = default;
};

struct PipelineResult {
  std::string doc_id;
  std::optional<Document> document;  // set on success
  std::string xml;                   // set on success
  std::optional<StepFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

// Runs the enabled steps over one document at a time, timing each one, and
// renders the XML once all steps have succeeded.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg, std::shared_ptr<const ParserAdapter> parser = std::make_shared<NullParser>())
      : cfg_(std::move(cfg)), parser_(std::move(parser)) {
    const ConfigReport report = validate_config(cfg_, &resources_);
    if (!report.ok()) throw ConfigError("invalid pipeline configuration: " + report.describe());
  }

  Pipeline(PipelineConfig cfg, std::shared_ptr<const Resources> resources,
           std::shared_ptr<const ParserAdapter> parser = std::make_shared<NullParser>())
      : cfg_(std::move(cfg)), resources_(std::move(resources)), parser_(std::move(parser)) {
    ConfigReport report;
    for (Step s : cfg_.steps) {
      for (Step p : prerequisites(s)) {
        if (!cfg_.enabled(p)) report.missing.push_back({s, p});
      }
    }
    if (!report.ok()) throw ConfigError("invalid pipeline configuration: " + report.describe());
  }

  const PipelineConfig& config() const { return cfg_; }
  const Resources& resources() const { return *resources_; }

  PipelineResult run(std::string doc_id, std::string_view input, InputFormat format = InputFormat::text) const {
    using Clock = std::chrono::steady_clock;
    PipelineResult result;
    result.doc_id = doc_id;
    std::vector<TimingRecord> timings;
    auto elapsed = [](Clock::time_point since) {
      return std::chrono::duration<double>(Clock::now() - since).count();
    };

    Document doc;
    std::string current(kLoadStep);
    try {
      auto t0 = Clock::now();
      if (format == InputFormat::xml) {
        Document parsed = deserialize(input);
        doc.text = std::move(parsed.text);
        doc.meta = std::move(parsed.meta);
      } else {
        unicode::decode_utf8(input);
        doc.text = std::string(input);
      }
      doc.id = std::move(doc_id);
      timings.push_back({current, elapsed(t0)});

      for (Step step : kStepOrder) {
        if (!cfg_.enabled(step)) continue;
        current = std::string(to_string(step));
        t0 = Clock::now();
        if (cfg_.fault && cfg_.fault->step == step && doc.text.find(cfg_.fault->marker) != std::string::npos) {
          throw Error("injected fault");
        }
        doc = apply(step, std::move(doc));
        timings.push_back({current, elapsed(t0)});
      }

      current = std::string(kRenderStep);
      t0 = Clock::now();
      std::string xml = render_annotations(doc);
      timings.push_back({current, elapsed(t0)});
      doc.timings = std::move(timings);
      append_timings(xml, doc.timings);
      result.xml = std::move(xml);
      result.document = std::move(doc);
    } catch (const std::exception& e) {
      result.failure = StepFailure{current, e.what()};
      result.document.reset();
      result.xml.clear();
    }
    return result;
  }

 private:
  Document apply(Step step, Document doc) const {
    switch (step) {
      case Step::tokenize: return tokenize_document(std::move(doc));
      case Step::ne: return tag_named_entities(std::move(doc), resources_->gazetteer);
      case Step::words: return segment_words(std::move(doc));
      case Step::sentences: return segment_sentences(std::move(doc));
      case Step::morpho: return pos_tag_and_lemmatize(std::move(doc), resources_->lexicon);
      case Step::terms: return tag_terms(std::move(doc), resources_->terminology);
      case Step::parse: return parse_sentences(std::move(doc), *parser_);
    }
    return doc;
  }

  PipelineConfig cfg_;
  std::shared_ptr<const Resources> resources_;
  std::shared_ptr<const ParserAdapter> parser_;
};

struct CorpusEntry {
  std::string doc_id;
  std::filesystem::path path;
  InputFormat format;
};

// Regular, non-hidden files of `dir` sorted by name; `.xml` files are read
// as platform XML, anything else as plain UTF-8 text. The document id is the
// file stem.
inline std::vector<CorpusEntry> list_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw ConfigError("not a readable directory: " + dir.string());
  std::vector<CorpusEntry> out;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw ConfigError("cannot list " + dir.string() + ": " + ec.message());
  for (const auto& e : it) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    if (name.empty() || name.front() == '.' || name.find(".tmp.") != std::string::npos) continue;
    out.push_back({e.path().stem().string(), e.path(),
                   e.path().extension() == ".xml" ? InputFormat::xml : InputFormat::text});
  }
  std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].doc_id == out[i - 1].doc_id) throw ConfigError("duplicate document id '" + out[i].doc_id + "'");
  }
  return out;
}

struct DocumentOutcome {
  std::string doc_id;
  std::optional<StepFailure> failure;
  std::vector<TimingRecord> timings;
};

struct CorpusSummary {
  std::vector<DocumentOutcome> documents;  // in corpus order
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::map<std::string, double> step_seconds;  // summed over documents
  double wall_seconds = 0;
};

// Receives each finished document; called concurrently from worker threads.
using ResultSink = std::function<void(const PipelineResult&)>;

// Processes every document of `dir` with `concurrency` threads. A failing
// document is recorded and never stops the others. Only one document per
// thread is held in memory at a time.
inline CorpusSummary run_corpus_local(const std::filesystem::path& dir, const Pipeline& pipeline,
                                      std::size_t concurrency, const ResultSink& sink = {}) {
  const auto entries = list_corpus(dir);
  const auto started = std::chrono::steady_clock::now();
  CorpusSummary summary;
  summary.documents.resize(entries.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      const auto& entry = entries[i];
      PipelineResult result;
      try {
        result = pipeline.run(entry.doc_id, io::read_file(entry.path), entry.format);
      } catch (const std::exception& e) {
        result.doc_id = entry.doc_id;
        result.failure = StepFailure{std::string(kLoadStep), e.what()};
      }
      if (sink) {
        try {
          sink(result);
        } catch (const std::exception& e) {
          if (result.ok()) result.failure = StepFailure{"write", e.what()};
        }
      }
      DocumentOutcome& out = summary.documents[i];
      out.doc_id = entry.doc_id;
      out.failure = result.failure;
      if (result.document) out.timings = result.document->timings;
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(concurrency, entries.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }

  for (const auto& d : summary.documents) {
    if (d.failure) {
      ++summary.failed;
    } else {
      ++summary.succeeded;
    }
    for (const auto& t : d.timings) summary.step_seconds[t.step] += t.wall_seconds;
  }
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return summary;
}

}  // namespace ogmios
