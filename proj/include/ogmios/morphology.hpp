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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/io.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios {

// A morpho-guessing class: words ending in `suffix` get `pos`.
struct SuffixRule {
  std::string suffix;  // lowercase, without the leading '-'
  PartOfSpeech pos;
};

struct SuffixMatch {
  PartOfSpeech pos;
  std::size_t rule;  // index into the rule list

  bool operator==(const SuffixMatch&) const = default;
};

// The cited classes: -ase and -ity for nouns, -al and -ous for adjectives.
inline std::vector<SuffixRule> default_suffix_rules() {
  return {{"ase", PartOfSpeech::NOUN},
          {"ity", PartOfSpeech::NOUN},
          {"al", PartOfSpeech::ADJ},
          {"ous", PartOfSpeech::ADJ}};
}

// Longest matching suffix wins; among equal suffixes the first-listed rule.
// The suffix must leave a non-empty stem. `surface` must be non-empty and
// made of letters only.
inline std::optional<SuffixMatch> guess_category(std::string_view surface,
                                                 std::span<const SuffixRule> rules) {
  if (surface.empty()) throw PreconditionError("cannot guess the category of an empty word");
  const std::u32string word = unicode::decode_utf8(surface);
  if (!std::all_of(word.begin(), word.end(), unicode::is_letter)) {
    throw PreconditionError("guesser input must be alphabetic: '" + std::string(surface) + "'");
  }
  std::u32string lower;
  lower.reserve(word.size());
  for (char32_t c : word) lower.push_back(unicode::to_lower(c));

  std::optional<SuffixMatch> best;
  std::size_t best_length = 0;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const std::u32string suffix = unicode::decode_utf8(rules[r].suffix);
    if (suffix.empty() || suffix.size() >= lower.size() || suffix.size() <= best_length) continue;
    if (std::u32string_view(lower).substr(lower.size() - suffix.size()) == suffix) {
      best = SuffixMatch{rules[r].pos, r};
      best_length = suffix.size();
    }
  }
  return best;
}

struct LexiconEntry {
  PartOfSpeech pos;
  std::optional<std::string> lemma;
};

// Known word forms plus the suffix rules used for everything else. Keys are
// lowercased surfaces.
class MorphLexicon {
 public:
  MorphLexicon() : rules_(default_suffix_rules()) {}
  MorphLexicon(std::unordered_map<std::string, LexiconEntry> entries, std::vector<SuffixRule> rules)
      : entries_(std::move(entries)), rules_(std::move(rules)) {}

  void add(std::string_view surface, PartOfSpeech pos, std::optional<std::string> lemma) {
    entries_.insert_or_assign(unicode::to_lower_utf8(surface), LexiconEntry{pos, std::move(lemma)});
  }

  const LexiconEntry* lookup(std::string_view surface) const {
    const auto it = entries_.find(unicode::to_lower_utf8(surface));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::span<const SuffixRule> suffix_rules() const { return rules_; }
  void set_suffix_rules(std::vector<SuffixRule> rules) { rules_ = std::move(rules); }
  std::size_t size() const { return entries_.size(); }

  // `surface<TAB>pos<TAB>lemma`; an empty lemma or "-" means none. A later
  // line for the same surface replaces the earlier one.
  void parse_entries(std::string_view content, const std::string& origin) {
    io::for_each_record(content, [&](std::size_t line, std::string_view record) {
      const auto fields = io::split(record, '\t');
      if (fields.size() < 2 || fields.size() > 3) {
        throw ResourceError(origin, line, "expected surface<TAB>pos<TAB>lemma");
      }
      const auto surface = io::trim(fields[0]);
      if (surface.empty()) throw ResourceError(origin, line, "empty surface");
      const auto pos = parse_pos(io::trim(fields[1]));
      if (!pos) throw ResourceError(origin, line, "unknown part of speech '" + std::string(fields[1]) + "'");
      std::optional<std::string> lemma;
      if (fields.size() == 3) {
        const auto l = io::trim(fields[2]);
        if (!l.empty() && l != "-") lemma = std::string(l);
      }
      try {
        add(surface, *pos, std::move(lemma));
      } catch (const ParseError& e) {
        throw ResourceError(origin, line, e.what());
      }
    });
  }

  // `suffix<TAB>pos`, in priority order for equal suffixes. A leading '-'
  // on the suffix is optional.
  static std::vector<SuffixRule> parse_suffix_rules(std::string_view content, const std::string& origin) {
    std::vector<SuffixRule> rules;
    io::for_each_record(content, [&](std::size_t line, std::string_view record) {
      const auto fields = io::split(record, '\t');
      if (fields.size() != 2) throw ResourceError(origin, line, "expected suffix<TAB>pos");
      auto suffix = io::trim(fields[0]);
      if (!suffix.empty() && suffix.front() == '-') suffix.remove_prefix(1);
      if (suffix.empty()) throw ResourceError(origin, line, "empty suffix");
      const auto pos = parse_pos(io::trim(fields[1]));
      if (!pos) throw ResourceError(origin, line, "unknown part of speech '" + std::string(fields[1]) + "'");
      try {
        rules.push_back({unicode::to_lower_utf8(suffix), *pos});
      } catch (const ParseError& e) {
        throw ResourceError(origin, line, e.what());
      }
    });
    return rules;
  }

 private:
  std::unordered_map<std::string, LexiconEntry> entries_;
  std::vector<SuffixRule> rules_;
};

// Surface of a word as the text between its first and last token.
inline std::string word_surface(const Document& doc, const Word& w) {
  std::string out;
  for (std::size_t t = w.span.first_token; t <= w.span.last_token; ++t) out += (*doc.tokens)[t].surface;
  return out;
}

// One part of speech and optional lemma per word: lexicon first, then the
// suffix guesser on the word's final alphabetic token, then a fallback by
// character class (NOUN with letters, NUM with digits, PUNCT otherwise).
inline Document pos_tag_and_lemmatize(Document doc, const MorphLexicon& lexicon) {
  if (!doc.tokens || !doc.words || !doc.sentences) {
    throw PreconditionError("tagging requires the token, word and sentence layers");
  }
  const auto& tokens = *doc.tokens;
  std::vector<Morpho> out;
  out.reserve(doc.words->size());
  for (const Word& w : *doc.words) {
    const std::string surface = word_surface(doc, w);
    if (const LexiconEntry* entry = lexicon.lookup(surface)) {
      out.push_back({w.id, entry->pos, entry->lemma, MorphoSource::lexicon});
      continue;
    }
    const Token& tail = tokens[w.span.last_token];
    if (tail.kind == TokenKind::alphabetical) {
      if (const auto guess = guess_category(tail.surface, lexicon.suffix_rules())) {
        out.push_back({w.id, guess->pos, std::nullopt, MorphoSource::guesser});
        continue;
      }
    }
    bool letters = false, digits = false;
    for (std::size_t t = w.span.first_token; t <= w.span.last_token; ++t) {
      letters |= tokens[t].kind == TokenKind::alphabetical;
      digits |= tokens[t].kind == TokenKind::numerical;
    }
    const PartOfSpeech pos = letters ? PartOfSpeech::NOUN : digits ? PartOfSpeech::NUM : PartOfSpeech::PUNCT;
    out.push_back({w.id, pos, std::nullopt, MorphoSource::fallback});
  }
  doc.morpho = std::move(out);
  return doc;
}

}  // namespace ogmios
