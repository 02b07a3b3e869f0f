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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/io.hpp"
#include "ogmios/tokenizer.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios {

struct GazetteerEntry {
  std::string surface;
  std::string type;
};

// Dictionary of named entities matched over token sequences. Runs of
// whitespace match any whitespace run; with case folding enabled, letters
// compare by their lowercase mapping.
class Gazetteer {
 public:
  struct Match {
    std::size_t first_token;
    std::size_t last_token;
    std::size_t entry;
  };

  explicit Gazetteer(bool case_fold = false) : case_fold_(case_fold), nodes_(1) {}

  // Returns false when an earlier entry already claimed the same token
  // sequence; the first-listed entry keeps it.
  bool add(std::string_view surface, std::string_view type) {
    std::vector<Token> tokens = tokenize(surface);
    while (!tokens.empty() && tokens.back().kind == TokenKind::separating) tokens.pop_back();
    std::size_t skip = 0;
    while (skip < tokens.size() && tokens[skip].kind == TokenKind::separating) ++skip;
    if (skip == tokens.size()) throw ConfigError("empty gazetteer entry");
    if (type.empty()) throw ConfigError("gazetteer entry '" + std::string(surface) + "' has no type");

    std::uint32_t node = 0;
    for (std::size_t i = skip; i < tokens.size(); ++i) {
      std::string k = key(tokens[i]);
      auto it = nodes_[node].next.find(k);
      if (it == nodes_[node].next.end()) {
        nodes_.emplace_back();
        it = nodes_[node].next.emplace(std::move(k), static_cast<std::uint32_t>(nodes_.size() - 1)).first;
      }
      node = it->second;
    }
    if (nodes_[node].entry) return false;
    nodes_[node].entry = entries_.size();
    entries_.push_back({std::string(surface), std::string(type)});
    return true;
  }

  // File format: `surface<TAB>type`, one entry per line, UTF-8. Blank lines
  // and lines starting with '#' are skipped.
  static Gazetteer parse(std::string_view content, const std::string& origin, bool case_fold) {
    Gazetteer g(case_fold);
    io::for_each_record(content, [&](std::size_t line, std::string_view record) {
      const auto fields = io::split(record, '\t');
      if (fields.size() != 2) throw ResourceError(origin, line, "expected surface<TAB>type");
      try {
        g.add(fields[0], io::trim(fields[1]));
      } catch (const Error& e) {
        throw ResourceError(origin, line, e.what());
      }
    });
    return g;
  }

  static Gazetteer load(const std::filesystem::path& path, bool case_fold) {
    return parse(io::read_file(path), path.string(), case_fold);
  }

  // Longest entry starting at token `start` whose boundaries do not cut
  // through an alphanumeric run ("p" does not match inside "p53").
  std::optional<Match> longest_match(const std::vector<Token>& tokens, std::size_t start) const {
    if (start >= tokens.size() || tokens[start].kind == TokenKind::separating) return std::nullopt;
    if (start > 0 && alnum(tokens[start - 1]) && alnum(tokens[start])) return std::nullopt;
    std::optional<Match> best;
    std::uint32_t node = 0;
    for (std::size_t i = start; i < tokens.size(); ++i) {
      const auto it = nodes_[node].next.find(key(tokens[i]));
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      if (nodes_[node].entry) {
        const bool cuts = i + 1 < tokens.size() && alnum(tokens[i]) && alnum(tokens[i + 1]);
        if (!cuts) best = Match{start, i, *nodes_[node].entry};
      }
    }
    return best;
  }

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  bool case_fold() const { return case_fold_; }
  bool empty() const { return entries_.empty(); }

 private:
  struct Node {
    std::map<std::string, std::uint32_t, std::less<>> next;
    std::optional<std::size_t> entry;
  };

  static bool alnum(const Token& t) {
    return t.kind == TokenKind::alphabetical || t.kind == TokenKind::numerical;
  }

  std::string key(const Token& t) const {
    if (t.kind == TokenKind::separating) return " ";
    return case_fold_ ? unicode::to_lower_utf8(t.surface) : t.surface;
  }

  bool case_fold_;
  std::vector<Node> nodes_;
  std::vector<GazetteerEntry> entries_;
};

// Leftmost-longest, non-overlapping dictionary tagging over the token layer.
inline Document tag_named_entities(Document doc, const Gazetteer& gazetteer) {
  if (!doc.tokens) throw PreconditionError("named entity tagging requires the token layer");
  if (doc.words || doc.sentences) {
    throw PreconditionError("named entity tagging must run before word and sentence segmentation");
  }
  std::vector<NamedEntity> entities;
  const auto& tokens = *doc.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (const auto m = gazetteer.longest_match(tokens, i)) {
      entities.push_back({entities.size(), {m->first_token, m->last_token},
                          gazetteer.entries()[m->entry].type});
      i = m->last_token + 1;
    } else {
      ++i;
    }
  }
  doc.named_entities = std::move(entities);
  return doc;
}

}  // namespace ogmios
