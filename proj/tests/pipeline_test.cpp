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

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>

#include "ogmios/pipeline.hpp"
#include "ogmios/serialization.hpp"
#include "ogmios/validate.hpp"
#include "support/fixtures.hpp"

namespace ogmios {
namespace {

using testing::TempDir;

void write(const std::filesystem::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

PipelineConfig config_with(std::vector<Step> steps) {
  PipelineConfig cfg;
  for (Step s : steps) cfg.enable(s);
  return cfg;
}

TEST(ValidateConfig, MissingPrerequisitesAreListed) {
  const auto report = validate_config(config_with({Step::tokenize, Step::terms}));
  EXPECT_FALSE(report.ok());
  std::vector<Step> missing;
  for (const auto& m : report.missing) {
    EXPECT_EQ(m.step, Step::terms);
    missing.push_back(m.missing);
  }
  std::sort(missing.begin(), missing.end());
  EXPECT_EQ(missing, (std::vector<Step>{Step::ne, Step::words, Step::morpho}));
  EXPECT_THROW(Pipeline(config_with({Step::tokenize, Step::terms})), ConfigError);
}

TEST(ValidateConfig, TokenizeAloneIsValid) {
  EXPECT_TRUE(validate_config(config_with({Step::tokenize})).ok());
  EXPECT_TRUE(validate_config(testing::full_config()).ok());
  EXPECT_FALSE(validate_config(config_with({Step::parse})).ok());
}

TEST(ValidateConfig, ResourceErrorsAreReported) {
  TempDir dir("cfg");
  write(dir / "terms.tsv", "T1\tgene expression\tgene expression\t7\n");
  PipelineConfig cfg = testing::full_config(false);
  cfg.base_dir = dir.path();
  cfg.resources.terminology = "terms.tsv";
  const auto report = validate_config(cfg);
  ASSERT_EQ(report.resource_errors.size(), 1u);
  EXPECT_NE(report.resource_errors[0].find("terms.tsv"), std::string::npos);
  cfg.resources.terminology = "absent.tsv";
  EXPECT_FALSE(validate_config(cfg).ok());
}

TEST(ParseConfig, KeysAndCanonicalOrder) {
  const auto cfg = parse_config(
      "# comment\nsteps = words, tokenize, ne\ncase_fold = yes\nterm_variants = off\n"
      "fault_step = ne\nfault_marker = POISON\n");
  EXPECT_EQ(cfg.steps, (std::vector<Step>{Step::tokenize, Step::ne, Step::words}));
  EXPECT_TRUE(cfg.case_fold);
  EXPECT_FALSE(cfg.term_variants);
  ASSERT_TRUE(cfg.fault.has_value());
  EXPECT_EQ(cfg.fault->marker, "POISON");
  EXPECT_THROW(parse_config("steps = tokenize, lemmatize\n"), ConfigError);
  EXPECT_THROW(parse_config("steps = tokenize, tokenize\n"), ConfigError);
  EXPECT_THROW(parse_config("colour = blue\n"), ConfigError);
  EXPECT_THROW(parse_config("case_fold = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("fault_step = ne\n"), ConfigError);
  EXPECT_THROW(parse_config("steps\n"), ConfigError);
}

TEST(ParseConfig, ResourceRootOverridesConfigDirectory) {
  TempDir a("cfg-a"), b("cfg-b");
  write(a / "g.tsv", "E. coli\tspecies\n");
  write(b / "g.tsv", "B. subtilis\tspecies\n");
  write(a / "x.cfg", "steps = tokenize, ne\ngazetteer = g.tsv\n");
  const auto cfg = load_config(a / "x.cfg");
  EXPECT_EQ(cfg.resolve("g.tsv"), a / "g.tsv");
  ::setenv("OGMIOS_RESOURCE_ROOT", b.path().c_str(), 1);
  EXPECT_EQ(cfg.resolve("g.tsv"), b / "g.tsv");
  const Pipeline p(cfg);
  ::unsetenv("OGMIOS_RESOURCE_ROOT");
  const auto r = p.run("d", "B. subtilis and E. coli");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.document->named_entities->size(), 1u);
  EXPECT_EQ(r.document->named_entities->front().type, "species");
}

TEST(Pipeline, EmptyTextRecordsEveryStep) {
  const Pipeline p(testing::full_config(false), testing::sample_resources());
  const auto r = p.run("empty", "");
  ASSERT_TRUE(r.ok());
  const auto& t = r.document->timings;
  ASSERT_EQ(t.size(), 8u);
  EXPECT_EQ(t.front().step, "load");
  EXPECT_EQ(t.back().step, "render");
  EXPECT_EQ(r.document->tokens->size(), 0u);
  EXPECT_TRUE(validate(*r.document).empty());

  const Pipeline with_parse(testing::full_config(true), testing::sample_resources());
  EXPECT_EQ(with_parse.run("empty", "").document->timings.size(), 9u);
}

TEST(Pipeline, OutputIsDeterministic) {
  const auto res = testing::sample_resources();
  const Pipeline p(testing::full_config(true), res, std::make_shared<testing::ChainParser>());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const std::string text = testing::random_prose(rng, 4);
    const auto a = p.run("d", text);
    const auto b = p.run("d", text);
    ASSERT_TRUE(a.ok()) << a.failure->step << ": " << a.failure->message;
    EXPECT_EQ(serialize(*a.document, {false}), serialize(*b.document, {false}));
    EXPECT_TRUE(validate(*a.document).empty());
    EXPECT_EQ(deserialize(a.xml), *a.document);
  }
}

TEST(Pipeline, StepFailureNamesTheStep) {
  PipelineConfig cfg = testing::full_config(false);
  cfg.fault = FaultInjection{Step::morpho, "POISON"};
  const Pipeline p(cfg, testing::sample_resources());
  const auto bad = p.run("bad", "This is POISON.");
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.failure->step, "morpho");
  EXPECT_FALSE(bad.document.has_value());
  EXPECT_TRUE(p.run("good", "This is fine.").ok());

  const auto invalid = p.run("utf8", std::string("\xff\xfe"));
  ASSERT_FALSE(invalid.ok());
  EXPECT_EQ(invalid.failure->step, "load");
}

TEST(Pipeline, XmlInputKeepsTextAndMeta) {
  const Pipeline p(testing::full_config(false), testing::sample_resources());
  Document src;
  src.id = "other";
  src.text = "Gene expression in B. subtilis.";
  src.meta = {{"journal", "J. Bact."}};
  src.tokens = tokenize_document(src).tokens;
  const auto r = p.run("x", serialize(src), InputFormat::xml);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.document->id, "x");
  EXPECT_EQ(r.document->text, src.text);
  EXPECT_EQ(r.document->meta, src.meta);
  EXPECT_EQ(r.document->terms->size(), 1u);
}

class CorpusRun : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
      std::string text = testing::random_prose(rng, 3);
      if (i == 6) text += " POISON here.";
      char name[32];
      std::snprintf(name, sizeof name, "doc-%02d.txt", i);
      write(corpus_ / name, text);
    }
  }

  std::map<std::string, std::string> run(std::size_t jobs, CorpusSummary* summary) {
    PipelineConfig cfg = testing::full_config(false);
    cfg.fault = FaultInjection{Step::terms, "POISON"};
    const Pipeline p(cfg, testing::sample_resources());
    std::map<std::string, std::string> out;
    std::mutex mu;
    *summary = run_corpus_local(corpus_.path(), p, jobs, [&](const PipelineResult& r) {
      if (!r.ok()) return;
      std::lock_guard lock(mu);
      out[r.doc_id] = serialize(*r.document, {false});
    });
    return out;
  }

  TempDir corpus_{"corpus"};
};

TEST_F(CorpusRun, PoisonedDocumentFailsAlone) {
  CorpusSummary s;
  const auto out = run(4, &s);
  EXPECT_EQ(s.succeeded, 9u);
  EXPECT_EQ(s.failed, 1u);
  ASSERT_EQ(s.documents.size(), 10u);
  ASSERT_TRUE(s.documents[6].failure.has_value());
  EXPECT_EQ(s.documents[6].doc_id, "doc-06");
  EXPECT_EQ(s.documents[6].failure->step, "terms");
  EXPECT_EQ(out.size(), 9u);
  EXPECT_FALSE(out.count("doc-06"));
}

TEST_F(CorpusRun, ConcurrencyDoesNotChangeOutput) {
  CorpusSummary s1, s4;
  const auto one = run(1, &s1);
  const auto four = run(4, &s4);
  EXPECT_EQ(one, four);
  EXPECT_EQ(run(32, &s4), one);
}

TEST(ListCorpus, SortedAndFiltered) {
  TempDir dir("list");
  write(dir / "b.txt", "b");
  write(dir / "a.xml", "<document/>");
  write(dir / ".hidden", "h");
  write(dir / "c.xml.tmp.1", "partial");
  std::filesystem::create_directory(dir / "sub");
  const auto entries = list_corpus(dir.path());
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].doc_id, "a");
  EXPECT_EQ(entries[0].format, InputFormat::xml);
  EXPECT_EQ(entries[1].doc_id, "b");
  write(dir / "b.xml", "<document/>");
  EXPECT_THROW(list_corpus(dir.path()), ConfigError);
  EXPECT_THROW(list_corpus(dir / "missing"), ConfigError);
}

}  // namespace
}  // namespace ogmios
