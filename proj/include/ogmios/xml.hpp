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

// Minimal XML 1.0 reader and writer helpers: elements, attributes, character
// data, CDATA, comments, processing instructions, predefined and numeric
// character references. DTDs are rejected.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ogmios/errors.hpp"
#include "ogmios/unicode.hpp"

namespace ogmios::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data of this element
  std::size_t offset = 0;  // byte offset of '<' in the input

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

// Appends `value` escaped for use in character data (in_attribute=false) or
// inside a double-quoted attribute value. Characters an XML parser would
// normalize (CR, and TAB/LF inside attributes) and C0 controls are written as
// character references so that they survive a round trip.
inline void append_escaped(std::string& out, std::string_view value, bool in_attribute) {
  for (char ch : value) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (in_attribute) {
          out += "&quot;";
        } else {
          out += ch;
        }
        break;
      default:
        if ((c < 0x20 && !(c == '\n' || c == '\t')) || (in_attribute && (c == '\n' || c == '\t'))) {
          static constexpr char kHex[] = "0123456789ABCDEF";
          out += "&#x";
          if (c >= 0x10) out += kHex[c >> 4];
          out += kHex[c & 0xF];
          out += ';';
        } else {
          out += ch;
        }
    }
  }
}

class Reader {
 public:
  explicit Reader(std::string_view input) : in_(input) {}

  Element parse_document() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element");
    Element root = parse_element();
    skip_misc();
    if (!at_end()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }

  [[noreturn]] void fail_at(const std::string& message, std::size_t offset) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < in_.size(); ++i) {
      if (in_[i] == '\n') {
        ++line;
        column = 1;
      } else if ((static_cast<unsigned char>(in_[i]) & 0xC0) != 0x80) {
        ++column;
      }
    }
    throw ParseError(message, line, column);
  }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  static bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) || c == '_' || c == ':' || c == '-' || c == '.';
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  void skip_until(std::string_view terminator, const char* what) {
    const auto found = in_.find(terminator, pos_);
    if (found == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = found + terminator.size();
  }

  // Whitespace, comments and processing instructions outside the root.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<!DOCTYPE")) {
        fail("DOCTYPE is not supported");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    const std::size_t begin = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    if (begin == pos_) fail("expected a name");
    return std::string(in_.substr(begin, pos_ - begin));
  }

  void append_reference(std::string& out) {
    const std::size_t begin = pos_;
    ++pos_;  // '&'
    const auto semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 10) fail_at("unterminated reference", begin);
    const std::string_view ref = in_.substr(pos_, semi - pos_);
    pos_ = semi + 1;
    if (ref == "amp") {
      out += '&';
    } else if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref.size() > 1 && ref[0] == '#') {
      const bool hex = ref[1] == 'x';
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) fail_at("bad character reference", begin);
      char32_t cp = 0;
      for (char d : digits) {
        int v;
        if (d >= '0' && d <= '9') {
          v = d - '0';
        } else if (hex && d >= 'a' && d <= 'f') {
          v = d - 'a' + 10;
        } else if (hex && d >= 'A' && d <= 'F') {
          v = d - 'A' + 10;
        } else {
          fail_at("bad character reference", begin);
        }
        cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
        if (cp > 0x10FFFF) fail_at("character reference out of range", begin);
      }
      if (cp >= 0xD800 && cp <= 0xDFFF) fail_at("character reference to a surrogate", begin);
      unicode::append_utf8(out, cp);
    } else {
      fail_at("unknown entity '" + std::string(ref) + "'", begin);
    }
  }

  std::string parse_attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    const char quote = peek();
    ++pos_;
    std::string value;
    for (;;) {
      if (at_end()) fail("unterminated attribute value");
      const char c = peek();
      if (c == quote) {
        ++pos_;
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        append_reference(value);
      } else if (c == '\r') {
        value += ' ';
        ++pos_;
        if (!at_end() && peek() == '\n') ++pos_;
      } else {
        value += (c == '\t' || c == '\n') ? ' ' : c;
        ++pos_;
      }
    }
  }

  Element parse_element() {
    Element e;
    e.offset = pos_;
    expect("<");
    e.name = parse_name();
    for (;;) {
      const std::size_t before = pos_;
      skip_space();
      if (at_end()) fail("unterminated start tag");
      if (starts_with("/>")) {
        pos_ += 2;
        return e;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (before == pos_) fail("expected whitespace before attribute");
      const std::size_t attr_pos = pos_;
      std::string key = parse_name();
      skip_space();
      expect("=");
      skip_space();
      std::string value = parse_attribute_value();
      if (e.attribute(key)) fail_at("duplicate attribute '" + key + "'", attr_pos);
      e.attributes.emplace_back(std::move(key), std::move(value));
    }
    for (;;) {
      if (at_end()) fail("unterminated element <" + e.name + ">");
      const char c = peek();
      if (c == '<') {
        if (starts_with("</")) {
          pos_ += 2;
          const std::size_t name_pos = pos_;
          const std::string closing = parse_name();
          if (closing != e.name) {
            fail_at("mismatched closing tag </" + closing + "> for <" + e.name + ">", name_pos);
          }
          skip_space();
          expect(">");
          return e;
        }
        if (starts_with("<!--")) {
          skip_until("-->", "comment");
        } else if (starts_with("<![CDATA[")) {
          pos_ += 9;
          const auto end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          e.text.append(in_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          skip_until("?>", "processing instruction");
        } else {
          e.children.push_back(parse_element());
        }
      } else if (c == '&') {
        append_reference(e.text);
      } else if (c == '\r') {
        e.text += '\n';
        ++pos_;
        if (!at_end() && peek() == '\n') ++pos_;
      } else {
        e.text += c;
        ++pos_;
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

inline Element parse(std::string_view input) { return Reader(input).parse_document(); }

}  // namespace ogmios::xml
