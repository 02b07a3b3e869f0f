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

// Shared builders for the test binaries: small in-memory resources, random
// texts and random valid documents.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ogmios/ogmios.hpp"

namespace ogmios::testing {

inline const char* kGazetteer =
    "B. subtilis\tspecies\n"
    "E. coli\tspecies\n"
    "S. Typhimurium\tspecies\n"
    "sigma K\tprotein\n"
    "SpoIIID\tprotein\n"
    "GerE\tprotein\n"
    "sigK\tgene\n";

inline const char* kLexicon =
    "the\tDET\tthe\n"
    "a\tDET\ta\n"
    "of\tPREP\tof\n"
    "in\tPREP\tin\n"
    "by\tPREP\tby\n"
    "and\tCONJ\tand\n"
    "is\tVERB\tbe\n"
    "binds\tVERB\tbind\n"
    "activates\tVERB\tactivate\n"
    "gene\tNOUN\tgene\n"
    "genes\tNOUN\tgene\n"
    "expression\tNOUN\texpression\n"
    "transcription\tNOUN\ttranscription\n"
    "factor\tNOUN\tfactor\n"
    "factors\tNOUN\tfactor\n"
    "promoter\tNOUN\tpromoter\n"
    "region\tNOUN\tregion\n"
    "mother\tNOUN\tmother\n"
    "cell\tNOUN\tcell\n"
    "cells\tNOUN\tcell\n";

inline const char* kTerminology =
    "T1\tgene expression\tgene expression\n"
    "T2\ttranscription factor\ttranscription factor\n"
    "T3\tmother cell\tmother cell\n"
    "T4\tpromoter region\tpromoter region\n";

inline std::shared_ptr<const Resources> sample_resources(bool case_fold = false, bool variants = true) {
  auto r = std::make_shared<Resources>();
  r->gazetteer = Gazetteer::parse(kGazetteer, "gazetteer", case_fold);
  r->lexicon.parse_entries(kLexicon, "lexicon");
  r->terminology = Terminology::parse(kTerminology, "terminology", TerminologyOptions{variants});
  return r;
}

inline PipelineConfig full_config(bool with_parse = true) {
  PipelineConfig cfg = PipelineConfig::full();
  if (with_parse) cfg.enable(Step::parse);
  return cfg;
}

// Links every word to its predecessor: a deterministic stand-in for a real
// parser that produces one link per adjacent pair.
class ChainParser final : public ParserAdapter {
 public:
  std::vector<Link> parse(std::span<const std::string> words) const override {
    std::vector<Link> out;
    for (std::size_t i = 1; i < words.size(); ++i) out.push_back({i - 1, i, "next"});
    return out;
  }
};

// Writes a throwaway directory under the system temp dir, removed on
// destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ogmios-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Code points drawn from several scripts and classes, including characters
// that need escaping in XML.
inline char32_t random_codepoint(std::mt19937_64& rng) {
  static const std::vector<std::pair<char32_t, char32_t>> kRanges = {
      {U'a', U'z'}, {U'A', U'Z'}, {U'0', U'9'}, {U' ', U' '}, {U'\t', U'\n'}, {U'\r', U'\r'},
      {U'!', U'/'}, {U':', U'@'}, {U'[', U'`'}, {U'{', U'~'}, {0x00C0, 0x024F}, {0x0370, 0x03FF},
      {0x0400, 0x04FF}, {0x0300, 0x036F}, {0x0660, 0x0669}, {0x0966, 0x096F}, {0x2000, 0x200A},
      {0x2010, 0x2027}, {0x3000, 0x3000}, {0x4E00, 0x4E50}, {0x1F600, 0x1F64F}, {0x00A0, 0x00BF},
      {0x0001, 0x0008}, {0xFFF9, 0xFFFD}, {0x10000, 0x1000B}, {0x1D400, 0x1D44F}};
  const auto& [lo, hi] = kRanges[std::uniform_int_distribution<std::size_t>(0, kRanges.size() - 1)(rng)];
  return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
}

inline std::u32string random_unicode(std::mt19937_64& rng, std::size_t max_length) {
  std::u32string s(std::uniform_int_distribution<std::size_t>(0, max_length)(rng), U' ');
  for (auto& c : s) c = random_codepoint(rng);
  return s;
}

// Domain-flavoured prose: sentences drawn from a small vocabulary that
// includes gazetteer entries, terms and their variants, suffix-guessable
// words and abbreviation dots.
inline std::string random_prose(std::mt19937_64& rng, std::size_t sentences) {
  static const std::vector<std::string> kVocabulary = {
      "the", "a", "of", "in", "by", "and", "is", "binds", "activates", "gene", "expression",
      "transcription factor", "mother cell", "promoter region", "expression of gene", "B. subtilis",
      "E. coli", "S. Typhimurium", "sigma K", "SpoIIID", "GerE", "sigK", "kinase", "activity",
      "dorsal", "numerous", "p53", "3.5", "(", ")", ",", "x-ray", "cells", "Gene expression",
      "\xC3\xA9tude", "\xCE\xB1-helix", "&", "<tag>", "\"quoted\""};
  std::uniform_int_distribution<std::size_t> pick(0, kVocabulary.size() - 1);
  std::uniform_int_distribution<int> length(1, 12);
  std::string out;
  for (std::size_t s = 0; s < sentences; ++s) {
    if (!out.empty()) out += std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? "\n" : " ";
    std::string sentence = "The";
    for (int i = length(rng); i > 0; --i) sentence += " " + kVocabulary[pick(rng)];
    sentence += std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? "!" : ".";
    out += sentence;
  }
  return out;
}

// A valid document with a random subset of layers (always prerequisite
// closed), random timings and metadata.
inline Document random_document(std::mt19937_64& rng, std::size_t index) {
  static const auto resources = sample_resources();
  static const auto parser = std::make_shared<ChainParser>();

  std::string text;
  if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
    text = unicode::encode_utf8(random_unicode(rng, 60));
  } else {
    text = random_prose(rng, std::uniform_int_distribution<std::size_t>(0, 6)(rng));
  }
  const int depth = std::uniform_int_distribution<int>(0, 7)(rng);  // number of steps run
  Document doc;
  doc.id = "doc-" + std::to_string(index);
  doc.text = text;
  if (depth >= 1) doc = tokenize_document(std::move(doc));
  if (depth >= 2) doc = tag_named_entities(std::move(doc), resources->gazetteer);
  if (depth >= 3) doc = segment_words(std::move(doc));
  if (depth >= 4) doc = segment_sentences(std::move(doc));
  if (depth >= 5) doc = pos_tag_and_lemmatize(std::move(doc), resources->lexicon);
  if (depth >= 6) doc = tag_terms(std::move(doc), resources->terminology);
  if (depth >= 7) doc = parse_sentences(std::move(doc), *parser);

  std::uniform_real_distribution<double> seconds(0.0, 3.0);
  for (int i = std::uniform_int_distribution<int>(0, 4)(rng); i > 0; --i) {
    doc.timings.push_back({"step" + std::to_string(i), seconds(rng)});
  }
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
    doc.meta["source"] = "gen <" + std::to_string(index) + "> & \"co\"\t'x'\n";
  }
  return doc;
}

}  // namespace ogmios::testing
