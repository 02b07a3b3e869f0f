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

#include <optional>
#include <string>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios {

// Boundary rules for word and sentence segmentation, kept in one place so
// they can be revised without touching the algorithms.
struct SegmentationRules {
  // Symbols that join two alphanumeric tokens into one word.
  std::u32string word_joiners = U"-'‐‑’";
  // Symbols that may end a sentence.
  std::u32string sentence_terminals = U".!?";
};

namespace detail {

inline bool is_alnum(const Token& t) {
  return t.kind == TokenKind::alphabetical || t.kind == TokenKind::numerical;
}

inline bool is_one_of(const Token& t, const std::u32string& set) {
  if (t.kind != TokenKind::symbolic) return false;
  const auto cp = unicode::decode_utf8(t.surface);
  return cp.size() == 1 && set.find(cp.front()) != std::u32string::npos;
}

// Entity index per token, or nullopt outside entities.
inline std::vector<std::optional<std::size_t>> entity_map(const Document& doc) {
  std::vector<std::optional<std::size_t>> out(doc.tokens->size());
  for (const auto& e : *doc.named_entities) {
    for (std::size_t t = e.span.first_token; t <= e.span.last_token && t < out.size(); ++t) out[t] = e.id;
  }
  return out;
}

}  // namespace detail

// Groups tokens into words. Each named entity becomes exactly one word;
// outside entities, alphanumeric tokens join across letter/digit changes and
// across single joiner symbols; whitespace belongs to no word; any other
// symbol is a word of its own.
inline Document segment_words(Document doc, const SegmentationRules& rules = {}) {
  if (!doc.tokens || !doc.named_entities) {
    throw PreconditionError("word segmentation requires the token and named entity layers");
  }
  const auto& tokens = *doc.tokens;
  const auto in_entity = detail::entity_map(doc);
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (in_entity[i]) {
      const auto& e = (*doc.named_entities)[*in_entity[i]];
      words.push_back({words.size(), e.span});
      i = e.span.last_token + 1;
      continue;
    }
    const Token& t = tokens[i];
    if (t.kind == TokenKind::separating) {
      ++i;
      continue;
    }
    if (t.kind == TokenKind::symbolic) {
      words.push_back({words.size(), {i, i}});
      ++i;
      continue;
    }
    std::size_t j = i;
    for (;;) {
      if (j + 1 < tokens.size() && !in_entity[j + 1] && detail::is_alnum(tokens[j + 1])) {
        ++j;
      } else if (j + 2 < tokens.size() && !in_entity[j + 1] && !in_entity[j + 2] &&
                 detail::is_one_of(tokens[j + 1], rules.word_joiners) &&
                 detail::is_alnum(tokens[j + 2])) {
        j += 2;
      } else {
        break;
      }
    }
    words.push_back({words.size(), {i, j}});
    i = j + 1;
  }
  doc.words = std::move(words);
  return doc;
}

// Splits after a terminal symbol that is followed by whitespace and then by
// a word starting with an uppercase letter, a digit, or a named entity. A
// dot inside an entity is part of the entity's word and never terminal.
inline Document segment_sentences(Document doc, const SegmentationRules& rules = {}) {
  if (!doc.tokens || !doc.named_entities || !doc.words) {
    throw PreconditionError("sentence segmentation requires the token, named entity and word layers");
  }
  const auto& tokens = *doc.tokens;
  const auto& words = *doc.words;
  const auto in_entity = detail::entity_map(doc);

  auto starts_sentence = [&](const Word& w) {
    const std::size_t t = w.span.first_token;
    if (in_entity[t]) return true;
    const auto cp = unicode::decode_utf8(tokens[t].surface);
    return !cp.empty() && (unicode::is_upper(cp.front()) || unicode::is_digit(cp.front()));
  };

  std::vector<Sentence> sentences;
  std::optional<std::size_t> open;  // first word of the current sentence
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (!open) open = k;
    const Word& w = words[k];
    const std::size_t last = w.span.last_token;
    const bool terminal = w.span.first_token == last && !in_entity[last] &&
                          detail::is_one_of(tokens[last], rules.sentence_terminals);
    const bool boundary = terminal && k + 1 < words.size() && last + 1 < tokens.size() &&
                          tokens[last + 1].kind == TokenKind::separating &&
                          words[k + 1].span.first_token == last + 2 && starts_sentence(words[k + 1]);
    if (boundary || k + 1 == words.size()) {
      sentences.push_back({sentences.size(), {words[*open].span.first_token, last}});
      open.reset();
    }
  }
  doc.sentences = std::move(sentences);
  return doc;
}

}  // namespace ogmios
