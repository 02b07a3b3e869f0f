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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ogmios {

enum class TokenKind { alphabetical, numerical, separating, symbolic };

inline std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::alphabetical: return "alphabetical";
    case TokenKind::numerical: return "numerical";
    case TokenKind::separating: return "separating";
    case TokenKind::symbolic: return "symbolic";
  }
  return "";
}

inline std::optional<TokenKind> parse_token_kind(std::string_view s) {
  if (s == "alphabetical") return TokenKind::alphabetical;
  if (s == "numerical") return TokenKind::numerical;
  if (s == "separating") return TokenKind::separating;
  if (s == "symbolic") return TokenKind::symbolic;
  return std::nullopt;
}

// Offsets count Unicode scalar values; `end` is exclusive.
struct Token {
  std::size_t id = 0;
  TokenKind kind = TokenKind::symbolic;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  bool operator==(const Token&) const = default;
};

// Inclusive token range shared by every span layer.
struct TokenSpan {
  std::size_t first_token = 0;
  std::size_t last_token = 0;

  bool operator==(const TokenSpan&) const = default;
  bool overlaps(const TokenSpan& other) const {
    return first_token <= other.last_token && other.first_token <= last_token;
  }
  bool contains(const TokenSpan& other) const {
    return first_token <= other.first_token && other.last_token <= last_token;
  }
};

struct Word {
  std::size_t id = 0;
  TokenSpan span;

  bool operator==(const Word&) const = default;
};

struct Sentence {
  std::size_t id = 0;
  TokenSpan span;

  bool operator==(const Sentence&) const = default;
};

struct NamedEntity {
  std::size_t id = 0;
  TokenSpan span;
  std::string type;

  bool operator==(const NamedEntity&) const = default;
};

struct Term {
  std::size_t id = 0;
  TokenSpan span;
  std::string entry_id;
  std::string canonical;
  // Offset of the syntactic head among the words the term covers.
  std::size_t head = 0;

  bool operator==(const Term&) const = default;
};

enum class PartOfSpeech { NOUN, VERB, ADJ, ADV, DET, PREP, CONJ, PRON, NUM, PUNCT, OTHER };

inline std::string_view to_string(PartOfSpeech pos) {
  switch (pos) {
    case PartOfSpeech::NOUN: return "NOUN";
    case PartOfSpeech::VERB: return "VERB";
    case PartOfSpeech::ADJ: return "ADJ";
    case PartOfSpeech::ADV: return "ADV";
    case PartOfSpeech::DET: return "DET";
    case PartOfSpeech::PREP: return "PREP";
    case PartOfSpeech::CONJ: return "CONJ";
    case PartOfSpeech::PRON: return "PRON";
    case PartOfSpeech::NUM: return "NUM";
    case PartOfSpeech::PUNCT: return "PUNCT";
    case PartOfSpeech::OTHER: return "OTHER";
  }
  return "";
}

inline std::optional<PartOfSpeech> parse_pos(std::string_view s) {
  static constexpr PartOfSpeech kAll[] = {
      PartOfSpeech::NOUN, PartOfSpeech::VERB, PartOfSpeech::ADJ,  PartOfSpeech::ADV,
      PartOfSpeech::DET,  PartOfSpeech::PREP, PartOfSpeech::CONJ, PartOfSpeech::PRON,
      PartOfSpeech::NUM,  PartOfSpeech::PUNCT, PartOfSpeech::OTHER};
  for (auto pos : kAll) {
    if (to_string(pos) == s) return pos;
  }
  return std::nullopt;
}

enum class MorphoSource { lexicon, guesser, fallback };

inline std::string_view to_string(MorphoSource source) {
  switch (source) {
    case MorphoSource::lexicon: return "lexicon";
    case MorphoSource::guesser: return "guesser";
    case MorphoSource::fallback: return "fallback";
  }
  return "";
}

inline std::optional<MorphoSource> parse_morpho_source(std::string_view s) {
  if (s == "lexicon") return MorphoSource::lexicon;
  if (s == "guesser") return MorphoSource::guesser;
  if (s == "fallback") return MorphoSource::fallback;
  return std::nullopt;
}

struct Morpho {
  std::size_t word_id = 0;
  PartOfSpeech pos = PartOfSpeech::OTHER;
  std::optional<std::string> lemma;
  MorphoSource source = MorphoSource::fallback;

  bool operator==(const Morpho&) const = default;
};

// A dependency link between two words (document word ids) of one sentence.
struct Dependency {
  std::size_t id = 0;
  std::size_t sentence_id = 0;
  std::size_t governor = 0;
  std::size_t dependent = 0;
  std::string label;

  bool operator==(const Dependency&) const = default;
};

struct TimingRecord {
  std::string step;
  double wall_seconds = 0.0;

  bool operator==(const TimingRecord&) const = default;
};

namespace layer {
inline constexpr std::string_view kTokens = "tokens";
inline constexpr std::string_view kNamedEntities = "named_entities";
inline constexpr std::string_view kWords = "words";
inline constexpr std::string_view kSentences = "sentences";
inline constexpr std::string_view kMorpho = "morpho";
inline constexpr std::string_view kTerms = "terms";
inline constexpr std::string_view kDependencies = "dependencies";
}  // namespace layer

// A text and its stand-off annotation layers. An absent layer (nullopt) has
// not been computed; an empty one has been computed and found nothing.
struct Document {
  std::string id;
  std::string text;  // UTF-8
  std::optional<std::vector<Token>> tokens;
  std::optional<std::vector<NamedEntity>> named_entities;
  std::optional<std::vector<Word>> words;
  std::optional<std::vector<Sentence>> sentences;
  std::optional<std::vector<Morpho>> morpho;
  std::optional<std::vector<Term>> terms;
  std::optional<std::vector<Dependency>> dependencies;
  std::vector<TimingRecord> timings;
  std::map<std::string, std::string> meta;

  bool operator==(const Document&) const = default;
};

// Equality on everything but the timing records.
inline bool same_annotations(const Document& a, const Document& b) {
  Document x = a;
  Document y = b;
  x.timings.clear();
  y.timings.clear();
  return x == y;
}

}  // namespace ogmios
