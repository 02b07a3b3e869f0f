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

#include <string>
#include <string_view>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios {

// Character class driving token boundaries.
inline TokenKind classify(char32_t c) {
  if (unicode::is_letter(c)) return TokenKind::alphabetical;
  if (unicode::is_digit(c)) return TokenKind::numerical;
  if (unicode::is_whitespace(c)) return TokenKind::separating;
  return TokenKind::symbolic;
}

// Partitions `text` into maximal runs of letters, digits and whitespace;
// every other character is a token of its own.
inline std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const TokenKind kind = classify(text[i]);
    std::size_t j = i + 1;
    if (kind != TokenKind::symbolic) {
      while (j < text.size() && classify(text[j]) == kind) ++j;
    }
    tokens.push_back({tokens.size(), kind, i, j, unicode::encode_utf8(text.substr(i, j - i))});
    i = j;
  }
  return tokens;
}

inline std::vector<Token> tokenize(std::string_view utf8) {
  return tokenize(std::u32string_view(unicode::decode_utf8(utf8)));
}

// Sets the token layer; later layers are dropped since they index tokens.
inline Document tokenize_document(Document doc) {
  doc.tokens = tokenize(std::string_view(doc.text));
  doc.named_entities.reset();
  doc.words.reset();
  doc.sentences.reset();
  doc.morpho.reset();
  doc.terms.reset();
  doc.dependencies.reset();
  return doc;
}

}  // namespace ogmios
