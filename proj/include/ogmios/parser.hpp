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

#include <span>
#include <string>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/terminology.hpp"

namespace ogmios {

// Boundary to an external dependency parser. Receives the (simplified)
// word sequence of one sentence and returns links over its positions.
class ParserAdapter {
 public:
  virtual ~ParserAdapter() = default;
  virtual std::vector<Link> parse(std::span<const std::string> words) const = 0;
};

// Produces no links; keeps the parse step runnable without a parser.
class NullParser final : public ParserAdapter {
 public:
  std::vector<Link> parse(std::span<const std::string>) const override { return {}; }
};

// Simplifies each sentence, hands it to `parser`, re-expands the result and
// stores it as the dependency layer.
inline Document parse_sentences(Document doc, const ParserAdapter& parser) {
  if (!doc.tokens || !doc.words || !doc.sentences || !doc.terms) {
    throw PreconditionError("parsing requires the token, word, sentence and term layers");
  }
  const auto& words = *doc.words;
  std::vector<Dependency> deps;
  std::size_t w = 0, t = 0;
  for (const auto& sentence : *doc.sentences) {
    while (w < words.size() && words[w].span.first_token < sentence.span.first_token) ++w;
    std::size_t end = w;
    while (end < words.size() && words[end].span.last_token <= sentence.span.last_token) ++end;
    while (t < doc.terms->size() && (*doc.terms)[t].span.first_token < sentence.span.first_token) ++t;
    std::size_t t_end = t;
    while (t_end < doc.terms->size() && (*doc.terms)[t_end].span.last_token <= sentence.span.last_token) ++t_end;

    const std::span<const Word> sentence_words(words.data() + w, end - w);
    const std::span<const Term> sentence_terms(doc.terms->data() + t, t_end - t);
    const SimplifiedSentence simplified = simplify_terms(sentence_words, sentence_terms);
    std::vector<std::string> reduced;
    reduced.reserve(simplified.kept.size());
    for (std::size_t p : simplified.kept) reduced.push_back(word_surface(doc, sentence_words[p]));
    const auto links = reattach_term_structure(parser.parse(reduced), simplified);
    for (const auto& l : links) {
      deps.push_back({deps.size(), sentence.id, w + l.governor, w + l.dependent, l.label});
    }
    w = end;
    t = t_end;
  }
  doc.dependencies = std::move(deps);
  return doc;
}

}  // namespace ogmios
