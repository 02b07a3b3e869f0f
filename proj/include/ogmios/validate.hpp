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
#include <cmath>
#include <utility>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios {

// Names of the invariants checked by validate().
namespace rule {
inline constexpr std::string_view kTextEncoding = "text.encoding";
inline constexpr std::string_view kTokenId = "token.id";
inline constexpr std::string_view kTokenEmpty = "token.empty";
inline constexpr std::string_view kTokenContiguity = "token.contiguity";
inline constexpr std::string_view kTokenCoverage = "token.coverage";
inline constexpr std::string_view kTokenSurface = "token.surface";
inline constexpr std::string_view kTokenKind = "token.kind";
inline constexpr std::string_view kLayerPrerequisite = "layer.prerequisite";
inline constexpr std::string_view kAnnotationId = "annotation.id";
inline constexpr std::string_view kSpanOrder = "span.order";
inline constexpr std::string_view kSpanBounds = "span.bounds";
inline constexpr std::string_view kLayerOverlap = "layer.overlap";
inline constexpr std::string_view kWordSentence = "word.sentence";
inline constexpr std::string_view kEntityTermOverlap = "entity_term.overlap";
inline constexpr std::string_view kMorphoCoverage = "morpho.coverage";
inline constexpr std::string_view kTermAlignment = "term.alignment";
inline constexpr std::string_view kTermHead = "term.head";
inline constexpr std::string_view kDependencyReference = "dependency.reference";
inline constexpr std::string_view kTimingValue = "timing.value";
}  // namespace rule

struct Violation {
  std::string layer;
  std::optional<std::size_t> id;
  std::string rule;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

inline std::string format_violation(const Violation& v);

// Raised when an operation that requires a valid document receives an
// invalid one.
class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report)
      : Error(summarize(report)), report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  static std::string summarize(const ValidationReport& report) {
    std::string out = "document is invalid (" + std::to_string(report.size()) + " violations)";
    if (!report.empty()) out += ": " + format_violation(report.front());
    return out;
  }

  ValidationReport report_;
};

inline std::string format_violation(const Violation& v) {
  std::string out = v.layer;
  if (v.id) out += "[" + std::to_string(*v.id) + "]";
  out += ": " + v.rule;
  if (!v.detail.empty()) out += " (" + v.detail + ")";
  return out;
}

// Does `surface` fit the character class of `kind`?
inline bool kind_matches(TokenKind kind, std::u32string_view surface) {
  if (surface.empty()) return true;
  auto all = [&](auto pred) { return std::all_of(surface.begin(), surface.end(), pred); };
  switch (kind) {
    case TokenKind::alphabetical: return all(unicode::is_letter);
    case TokenKind::numerical: return all(unicode::is_digit);
    case TokenKind::separating: return all(unicode::is_whitespace);
    case TokenKind::symbolic: {
      const char32_t c = surface.front();
      return surface.size() == 1 && !unicode::is_letter(c) && !unicode::is_digit(c) &&
             !unicode::is_whitespace(c);
    }
  }
  return false;
}

namespace detail {

// Spans sorted by first token with a running maximum of last tokens, so that
// every span overlapping a query can be enumerated without a full scan.
class SpanIndex {
 public:
  void add(const TokenSpan& span) { spans_.push_back(span); }

  void build() {
    std::stable_sort(spans_.begin(), spans_.end(), [](const TokenSpan& a, const TokenSpan& b) {
      return a.first_token < b.first_token;
    });
    max_last_.resize(spans_.size());
    std::size_t running = 0;
    for (std::size_t i = 0; i < spans_.size(); ++i) {
      running = std::max(running, spans_[i].last_token);
      max_last_[i] = running;
    }
  }

  template <typename Fn>
  void for_each_overlapping(const TokenSpan& query, Fn&& fn) const {
    auto it = std::upper_bound(spans_.begin(), spans_.end(), query.last_token,
                               [](std::size_t v, const TokenSpan& s) { return v < s.first_token; });
    for (auto j = static_cast<std::ptrdiff_t>(it - spans_.begin()) - 1; j >= 0; --j) {
      if (max_last_[j] < query.first_token) break;
      if (spans_[j].overlaps(query)) fn(spans_[j]);
    }
  }

 private:
  std::vector<TokenSpan> spans_;
  std::vector<std::size_t> max_last_;
};

template <typename Annotation>
std::vector<bool> check_span_layer(std::string_view name, const std::vector<Annotation>& items,
                                   std::size_t token_count, ValidationReport& out) {
  std::vector<bool> usable(items.size(), true);
  const TokenSpan* previous = nullptr;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& a = items[i];
    if (a.id != i) {
      out.push_back({std::string(name), a.id, std::string(rule::kAnnotationId),
                     "expected " + std::to_string(i)});
    }
    if (a.span.first_token > a.span.last_token) {
      out.push_back({std::string(name), a.id, std::string(rule::kSpanOrder), ""});
      usable[i] = false;
      continue;
    }
    if (a.span.last_token >= token_count) {
      out.push_back({std::string(name), a.id, std::string(rule::kSpanBounds),
                     "token " + std::to_string(a.span.last_token) + " of " +
                         std::to_string(token_count)});
      usable[i] = false;
      continue;
    }
    if (previous && previous->last_token >= a.span.first_token) {
      out.push_back({std::string(name), a.id, std::string(rule::kLayerOverlap), ""});
    }
    previous = &a.span;
  }
  return usable;
}

inline void check_tokens(const Document& doc, const std::u32string& text, ValidationReport& out) {
  const auto& tokens = *doc.tokens;
  const std::string name(layer::kTokens);
  if (tokens.empty()) {
    if (!text.empty()) out.push_back({name, std::nullopt, std::string(rule::kTokenCoverage), "no tokens"});
    return;
  }
  if (tokens.front().start != 0) {
    out.push_back({name, tokens.front().id, std::string(rule::kTokenCoverage), "first token does not start at 0"});
  }
  if (tokens.back().end != text.size()) {
    out.push_back({name, tokens.back().id, std::string(rule::kTokenCoverage),
                   "last token does not end at text length"});
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.id != i) {
      out.push_back({name, t.id, std::string(rule::kTokenId), "expected " + std::to_string(i)});
    }
    if (t.start >= t.end) {
      out.push_back({name, t.id, std::string(rule::kTokenEmpty), ""});
    }
    if (i > 0 && tokens[i - 1].end != t.start) {
      out.push_back({name, t.id, std::string(rule::kTokenContiguity), ""});
    }
    std::u32string surface;
    bool surface_ok = true;
    try {
      surface = unicode::decode_utf8(t.surface);
    } catch (const ParseError&) {
      surface_ok = false;
    }
    if (!surface_ok || t.start > t.end || t.end > text.size() ||
        std::u32string_view(text).substr(t.start, t.end - t.start) != surface) {
      out.push_back({name, t.id, std::string(rule::kTokenSurface), ""});
    }
    if (surface_ok && !kind_matches(t.kind, surface)) {
      out.push_back({name, t.id, std::string(rule::kTokenKind), std::string(to_string(t.kind))});
    }
  }
}

}  // namespace detail

// Returns every invariant violation of `doc`; an empty report means valid.
inline ValidationReport validate(const Document& doc) {
  ValidationReport out;
  std::u32string text;
  try {
    text = unicode::decode_utf8(doc.text);
  } catch (const ParseError& e) {
    out.push_back({"text", std::nullopt, std::string(rule::kTextEncoding), e.what()});
    return out;
  }

  const std::size_t token_count = doc.tokens ? doc.tokens->size() : 0;
  if (doc.tokens) detail::check_tokens(doc, text, out);

  auto require = [&](std::string_view name, bool present, std::string_view needed) {
    if (!present) {
      out.push_back({std::string(name), std::nullopt, std::string(rule::kLayerPrerequisite),
                     "requires " + std::string(needed)});
    }
  };

  std::vector<bool> ne_ok, word_ok, sentence_ok, term_ok;
  if (doc.named_entities) {
    require(layer::kNamedEntities, doc.tokens.has_value(), layer::kTokens);
    ne_ok = detail::check_span_layer(layer::kNamedEntities, *doc.named_entities, token_count, out);
  }
  if (doc.words) {
    require(layer::kWords, doc.tokens.has_value(), layer::kTokens);
    word_ok = detail::check_span_layer(layer::kWords, *doc.words, token_count, out);
  }
  if (doc.sentences) {
    require(layer::kSentences, doc.tokens.has_value(), layer::kTokens);
    sentence_ok = detail::check_span_layer(layer::kSentences, *doc.sentences, token_count, out);
  }
  if (doc.terms) {
    require(layer::kTerms, doc.tokens.has_value(), layer::kTokens);
    require(layer::kTerms, doc.words.has_value(), layer::kWords);
    term_ok = detail::check_span_layer(layer::kTerms, *doc.terms, token_count, out);
  }

  if (doc.words && doc.sentences) {
    detail::SpanIndex index;
    for (std::size_t i = 0; i < doc.sentences->size(); ++i) {
      if (sentence_ok[i]) index.add((*doc.sentences)[i].span);
    }
    index.build();
    for (std::size_t i = 0; i < doc.words->size(); ++i) {
      if (!word_ok[i]) continue;
      const auto& w = (*doc.words)[i];
      std::size_t containing = 0;
      index.for_each_overlapping(w.span, [&](const TokenSpan& s) {
        if (s.contains(w.span)) ++containing;
      });
      if (containing != 1) {
        out.push_back({std::string(layer::kWords), w.id, std::string(rule::kWordSentence),
                       "contained in " + std::to_string(containing) + " sentences"});
      }
    }
  }

  if (doc.named_entities && doc.terms) {
    detail::SpanIndex index;
    for (std::size_t i = 0; i < doc.named_entities->size(); ++i) {
      if (ne_ok[i]) index.add((*doc.named_entities)[i].span);
    }
    index.build();
    for (std::size_t i = 0; i < doc.terms->size(); ++i) {
      if (!term_ok[i]) continue;
      const auto& t = (*doc.terms)[i];
      bool hit = false;
      index.for_each_overlapping(t.span, [&](const TokenSpan&) { hit = true; });
      if (hit) {
        out.push_back({std::string(layer::kTerms), t.id, std::string(rule::kEntityTermOverlap), ""});
      }
    }
  }

  if (doc.terms && doc.words) {
    // Word boundaries, by token, for alignment and head checks.
    std::vector<std::size_t> starts, ends;
    for (std::size_t i = 0; i < doc.words->size(); ++i) {
      if (!word_ok[i]) continue;
      starts.push_back((*doc.words)[i].span.first_token);
      ends.push_back((*doc.words)[i].span.last_token);
    }
    std::sort(starts.begin(), starts.end());
    std::sort(ends.begin(), ends.end());
    for (std::size_t i = 0; i < doc.terms->size(); ++i) {
      if (!term_ok[i]) continue;
      const auto& t = (*doc.terms)[i];
      if (!std::binary_search(starts.begin(), starts.end(), t.span.first_token) ||
          !std::binary_search(ends.begin(), ends.end(), t.span.last_token)) {
        out.push_back({std::string(layer::kTerms), t.id, std::string(rule::kTermAlignment), ""});
        continue;
      }
      auto lo = std::lower_bound(starts.begin(), starts.end(), t.span.first_token);
      auto hi = std::upper_bound(starts.begin(), starts.end(), t.span.last_token);
      const auto covered = static_cast<std::size_t>(hi - lo);
      if (t.head >= covered) {
        out.push_back({std::string(layer::kTerms), t.id, std::string(rule::kTermHead),
                       "head " + std::to_string(t.head) + " of " + std::to_string(covered) + " words"});
      }
    }
  }

  if (doc.morpho) {
    require(layer::kMorpho, doc.words.has_value(), layer::kWords);
    const std::size_t word_count = doc.words ? doc.words->size() : 0;
    std::vector<std::size_t> seen(word_count, 0);
    for (const auto& m : *doc.morpho) {
      if (m.word_id >= word_count) {
        out.push_back({std::string(layer::kMorpho), m.word_id, std::string(rule::kMorphoCoverage),
                       "unknown word"});
      } else {
        ++seen[m.word_id];
      }
    }
    if (doc.words) {
      for (std::size_t w = 0; w < word_count; ++w) {
        if (seen[w] != 1) {
          out.push_back({std::string(layer::kMorpho), w, std::string(rule::kMorphoCoverage),
                         std::to_string(seen[w]) + " annotations for word"});
        }
      }
    }
  }

  if (doc.dependencies) {
    require(layer::kDependencies, doc.words.has_value(), layer::kWords);
    require(layer::kDependencies, doc.sentences.has_value(), layer::kSentences);
    const std::size_t word_count = doc.words ? doc.words->size() : 0;
    const std::size_t sentence_count = doc.sentences ? doc.sentences->size() : 0;
    for (std::size_t i = 0; i < doc.dependencies->size(); ++i) {
      const auto& d = (*doc.dependencies)[i];
      const std::string name(layer::kDependencies);
      if (d.id != i) {
        out.push_back({name, d.id, std::string(rule::kAnnotationId), "expected " + std::to_string(i)});
      }
      bool ok = d.sentence_id < sentence_count && d.governor < word_count &&
                d.dependent < word_count && d.governor != d.dependent;
      if (ok) {
        const auto& s = (*doc.sentences)[d.sentence_id].span;
        ok = s.contains((*doc.words)[d.governor].span) && s.contains((*doc.words)[d.dependent].span);
      }
      if (!ok) out.push_back({name, d.id, std::string(rule::kDependencyReference), ""});
    }
  }
  for (std::size_t i = 0; i < doc.timings.size(); ++i) {
    const double v = doc.timings[i].wall_seconds;
    if (!std::isfinite(v) || v < 0.0) {
      out.push_back({"timings", i, std::string(rule::kTimingValue), doc.timings[i].step});
    }
  }
  return out;
}

}  // namespace ogmios
