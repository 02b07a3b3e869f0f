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
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/io.hpp"
#include "ogmios/morphology.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios {

struct TermPattern {
  std::vector<std::string> items;  // lemma sequence
  std::size_t head = 0;
  bool derived = false;  // generated "N2 of N1" variant

  bool operator==(const TermPattern&) const = default;
};

struct TermEntry {
  std::string id;
  std::string canonical;
  std::vector<TermPattern> patterns;
};

struct TerminologyOptions {
  // Also match "N2 of N1" for every right-headed pattern "N1 N2".
  bool variants = true;
};

// Lowercases and splits a phrase on whitespace.
inline std::vector<std::string> lemma_items(std::string_view phrase) {
  std::vector<std::string> items;
  std::string current;
  for (char32_t c : unicode::decode_utf8(phrase)) {
    if (unicode::is_whitespace(c)) {
      if (!current.empty()) items.push_back(std::move(current));
      current.clear();
    } else {
      unicode::append_utf8(current, unicode::to_lower(c));
    }
  }
  if (!current.empty()) items.push_back(std::move(current));
  return items;
}

inline std::string join_items(std::span<const std::string> items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ' ';
    out += item;
  }
  return out;
}

// Domain terms with their variant patterns, indexed for longest match over
// lemma sequences.
class Terminology {
 public:
  struct Match {
    std::size_t length;
    std::size_t entry;
    std::size_t pattern;
  };

  explicit Terminology(TerminologyOptions options = {}) : options_(options), nodes_(1) {}

  // Adds one pattern for `entry_id`. `head` defaults to the last item.
  void add(std::string_view entry_id, std::string_view canonical, std::string_view pattern,
           std::optional<std::size_t> head = std::nullopt) {
    if (entry_id.empty()) throw ConfigError("term entry without id");
    auto items = lemma_items(pattern);
    if (items.empty()) throw ConfigError("term entry '" + std::string(entry_id) + "' has an empty pattern");
    const std::size_t h = head.value_or(items.size() - 1);
    if (h >= items.size()) {
      throw ConfigError("head index " + std::to_string(h) + " outside pattern of " +
                        std::to_string(items.size()) + " words");
    }
    const std::string canon = join_items(lemma_items(canonical));
    if (canon.empty()) throw ConfigError("term entry '" + std::string(entry_id) + "' has an empty canonical form");

    std::size_t index;
    if (auto it = by_id_.find(std::string(entry_id)); it != by_id_.end()) {
      index = it->second;
      if (entries_[index].canonical != canon) {
        throw ConfigError("entry '" + std::string(entry_id) + "' redeclared with canonical form '" + canon +
                          "' (was '" + entries_[index].canonical + "')");
      }
    } else {
      index = entries_.size();
      by_id_.emplace(std::string(entry_id), index);
      entries_.push_back({std::string(entry_id), canon, {}});
      pending_.push_back(index);
    }
    insert(index, {std::move(items), h, false});
  }

  // Registers canonical forms and derived variants. Called by parse(); call
  // it after manual add()s. Explicit patterns keep priority over derived ones.
  void finalize() {
    for (std::size_t index : pending_) {
      TermPattern canonical{lemma_items(entries_[index].canonical), 0, false};
      canonical.head = canonical.items.size() - 1;
      const auto& ps = entries_[index].patterns;
      if (std::none_of(ps.begin(), ps.end(), [&](const TermPattern& p) { return p.items == canonical.items; })) {
        insert(index, std::move(canonical));
      }
    }
    if (options_.variants) {
      for (std::size_t index : pending_) {
        const auto explicit_patterns = entries_[index].patterns;
        for (const auto& p : explicit_patterns) {
          if (p.derived || p.items.size() < 2 || p.head != p.items.size() - 1) continue;
          TermPattern v;
          v.items.push_back(p.items.back());
          v.items.push_back("of");
          v.items.insert(v.items.end(), p.items.begin(), p.items.end() - 1);
          v.head = 0;
          v.derived = true;
          insert(index, std::move(v));
        }
      }
    }
    pending_.clear();
  }

  // `entry_id<TAB>canonical<TAB>pattern[<TAB>head_index]`. Several lines may
  // share an entry id to list variants. An empty or "-" head means the last
  // word of the pattern.
  static Terminology parse(std::string_view content, const std::string& origin,
                           TerminologyOptions options = {}) {
    Terminology t(options);
    io::for_each_record(content, [&](std::size_t line, std::string_view record) {
      const auto fields = io::split(record, '\t');
      if (fields.size() < 3 || fields.size() > 4) {
        throw ResourceError(origin, line, "expected entry_id<TAB>canonical<TAB>pattern<TAB>head_index");
      }
      std::optional<std::size_t> head;
      if (fields.size() == 4) {
        const auto h = io::trim(fields[3]);
        if (!h.empty() && h != "-") {
          std::size_t v = 0;
          auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), v);
          if (ec != std::errc() || ptr != h.data() + h.size()) {
            throw ResourceError(origin, line, "head index is not a non-negative integer: '" + std::string(h) + "'");
          }
          head = v;
        }
      }
      try {
        t.add(io::trim(fields[0]), fields[1], fields[2], head);
      } catch (const Error& e) {
        throw ResourceError(origin, line, e.what());
      }
    });
    t.finalize();
    return t;
  }

  static Terminology load(const std::filesystem::path& path, TerminologyOptions options = {}) {
    return parse(io::read_file(path), path.string(), options);
  }

  // Longest pattern matching keys[start..] using only positions for which
  // allowed(i) holds. Ties go to the first-inserted pattern.
  template <typename Allowed>
  std::optional<Match> longest_match(std::span<const std::string> keys, std::size_t start,
                                     Allowed&& allowed) const {
    std::optional<Match> best;
    std::uint32_t node = 0;
    for (std::size_t i = start; i < keys.size() && allowed(i); ++i) {
      const auto it = nodes_[node].next.find(keys[i]);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      if (nodes_[node].target) best = Match{i - start + 1, nodes_[node].target->first, nodes_[node].target->second};
    }
    return best;
  }

  std::optional<Match> longest_match(std::span<const std::string> keys, std::size_t start) const {
    return longest_match(keys, start, [](std::size_t) { return true; });
  }

  // Canonical form of a phrase that is exactly one of the known patterns;
  // any other phrase is returned in lemma-item form unchanged.
  std::string normalize(std::string_view phrase) const {
    const auto items = lemma_items(phrase);
    if (const auto m = longest_match(items, 0); m && m->length == items.size()) {
      return entries_[m->entry].canonical;
    }
    return join_items(items);
  }

  const std::vector<TermEntry>& entries() const { return entries_; }
  const TermEntry* find(std::string_view id) const {
    const auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &entries_[it->second];
  }
  const TerminologyOptions& options() const { return options_; }

 private:
  struct Node {
    std::map<std::string, std::uint32_t, std::less<>> next;
    std::optional<std::pair<std::size_t, std::size_t>> target;  // entry, pattern
  };

  void insert(std::size_t entry, TermPattern pattern) {
    std::uint32_t node = 0;
    for (const auto& item : pattern.items) {
      auto it = nodes_[node].next.find(item);
      if (it == nodes_[node].next.end()) {
        nodes_.emplace_back();
        it = nodes_[node].next.emplace(item, static_cast<std::uint32_t>(nodes_.size() - 1)).first;
      }
      node = it->second;
    }
    auto& patterns = entries_[entry].patterns;
    if (std::find(patterns.begin(), patterns.end(), pattern) != patterns.end()) return;
    if (!nodes_[node].target) nodes_[node].target = {entry, patterns.size()};
    patterns.push_back(std::move(pattern));
  }

  TerminologyOptions options_;
  std::vector<Node> nodes_;
  std::vector<TermEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::vector<std::size_t> pending_;
};

// Canonical form for words that matched one of `entry`'s patterns.
inline std::string normalize_term(std::span<const std::string> matched, const TermEntry& entry) {
  for (const auto& p : entry.patterns) {
    if (std::equal(p.items.begin(), p.items.end(), matched.begin(), matched.end())) return entry.canonical;
  }
  throw PreconditionError("'" + join_items(matched) + "' does not match term entry '" + entry.id + "'");
}

// Matching key of each word: its lemma, or its lowercased surface.
inline std::vector<std::string> word_keys(const Document& doc) {
  std::vector<std::string> keys(doc.words->size());
  for (const auto& m : *doc.morpho) {
    if (m.word_id >= keys.size()) continue;
    keys[m.word_id] = m.lemma ? unicode::to_lower_utf8(*m.lemma)
                              : unicode::to_lower_utf8(word_surface(doc, (*doc.words)[m.word_id]));
  }
  return keys;
}

// Leftmost-longest term tagging within sentences over lemma keys. Terms
// never include a word that overlaps a named entity.
inline Document tag_terms(Document doc, const Terminology& terminology) {
  std::vector<std::string> missing;
  if (!doc.words) missing.emplace_back(layer::kWords);
  if (!doc.morpho) missing.emplace_back(layer::kMorpho);
  if (!doc.named_entities) missing.emplace_back(layer::kNamedEntities);
  if (!doc.sentences) missing.emplace_back(layer::kSentences);
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw PreconditionError("term tagging requires missing layers: " + names);
  }
  const auto& words = *doc.words;
  const auto keys = word_keys(doc);

  std::vector<bool> blocked(words.size(), false);
  {
    std::size_t e = 0;
    const auto& entities = *doc.named_entities;
    for (std::size_t w = 0; w < words.size(); ++w) {
      while (e < entities.size() && entities[e].span.last_token < words[w].span.first_token) ++e;
      blocked[w] = e < entities.size() && entities[e].span.overlaps(words[w].span);
    }
  }

  std::vector<Term> terms;
  std::size_t w = 0;
  for (const auto& sentence : *doc.sentences) {
    while (w < words.size() && words[w].span.first_token < sentence.span.first_token) ++w;
    std::size_t end = w;
    while (end < words.size() && words[end].span.last_token <= sentence.span.last_token) ++end;
    const std::span<const std::string> sentence_keys(keys.data() + w, end - w);
    std::size_t i = 0;
    while (i < sentence_keys.size()) {
      const auto m = terminology.longest_match(sentence_keys, i, [&](std::size_t k) { return !blocked[w + k]; });
      if (!m) {
        ++i;
        continue;
      }
      const auto& entry = terminology.entries()[m->entry];
      terms.push_back({terms.size(),
                       {words[w + i].span.first_token, words[w + i + m->length - 1].span.last_token},
                       entry.id,
                       entry.canonical,
                       entry.patterns[m->pattern].head});
      i += m->length;
    }
    w = end;
  }
  doc.terms = std::move(terms);
  return doc;
}

// A dependency between two word positions of one sentence.
struct Link {
  std::size_t governor = 0;
  std::size_t dependent = 0;
  std::string label;

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

inline constexpr std::string_view kTermInternalLabel = "term-mod";

struct SimplifiedTerm {
  std::size_t term_id = 0;
  std::size_t first = 0;  // sentence word positions, inclusive
  std::size_t last = 0;
  std::size_t head = 0;
  std::vector<Link> internal;

  bool operator==(const SimplifiedTerm&) const = default;
};

struct TermSimplificationMap {
  std::vector<SimplifiedTerm> terms;

  bool operator==(const TermSimplificationMap&) const = default;
};

struct SimplifiedSentence {
  // Original position of each reduced word.
  std::vector<std::size_t> kept;
  std::size_t original_size = 0;
  TermSimplificationMap map;
};

// Replaces each multiword term by its head word. Internal structure is a
// left-branching chain: every non-head word depends on its neighbour on the
// head's side.
inline SimplifiedSentence simplify_terms(std::span<const Word> sentence_words, std::span<const Term> terms) {
  SimplifiedSentence out;
  out.original_size = sentence_words.size();
  if (sentence_words.empty()) return out;
  const TokenSpan extent{sentence_words.front().span.first_token, sentence_words.back().span.last_token};

  auto position_of = [&](std::size_t token, bool first) -> std::optional<std::size_t> {
    const auto it = std::lower_bound(sentence_words.begin(), sentence_words.end(), token,
                                     [&](const Word& w, std::size_t t) {
                                       return (first ? w.span.first_token : w.span.last_token) < t;
                                     });
    if (it == sentence_words.end() || (first ? it->span.first_token : it->span.last_token) != token) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - sentence_words.begin());
  };

  std::vector<std::optional<std::size_t>> owner(sentence_words.size());
  for (const Term& t : terms) {
    if (!extent.contains(t.span)) continue;
    const auto first = position_of(t.span.first_token, true);
    const auto last = position_of(t.span.last_token, false);
    if (!first || !last || *first > *last) {
      throw IntegrityError("term " + std::to_string(t.id) + " is not aligned with word boundaries");
    }
    const std::size_t length = *last - *first + 1;
    if (t.head >= length) throw IntegrityError("term " + std::to_string(t.id) + " head outside the term");
    SimplifiedTerm s{t.id, *first, *last, *first + t.head, {}};
    for (std::size_t p = s.first; p <= s.last; ++p) {
      if (owner[p]) throw IntegrityError("terms " + std::to_string(t.id) + " overlap");
      owner[p] = out.map.terms.size();
      if (p == s.head) continue;
      s.internal.push_back({p < s.head ? p + 1 : p - 1, p, std::string(kTermInternalLabel)});
    }
    out.map.terms.push_back(std::move(s));
  }
  for (std::size_t p = 0; p < sentence_words.size(); ++p) {
    if (!owner[p] || out.map.terms[*owner[p]].head == p) out.kept.push_back(p);
  }
  return out;
}

// Maps links over reduced positions back to original positions and adds the
// terms' internal links.
inline std::vector<Link> reattach_term_structure(std::span<const Link> reduced_links,
                                                 const SimplifiedSentence& simplified) {
  std::vector<Link> out;
  out.reserve(reduced_links.size());
  for (const Link& l : reduced_links) {
    if (l.governor >= simplified.kept.size() || l.dependent >= simplified.kept.size()) {
      throw IntegrityError("link " + std::to_string(l.governor) + "->" + std::to_string(l.dependent) +
                           " outside the reduced sentence of " + std::to_string(simplified.kept.size()) +
                           " words");
    }
    out.push_back({simplified.kept[l.governor], simplified.kept[l.dependent], l.label});
  }
  for (const auto& t : simplified.map.terms) out.insert(out.end(), t.internal.begin(), t.internal.end());
  return out;
}

}  // namespace ogmios
