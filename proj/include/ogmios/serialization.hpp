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

// Stand-off XML format. See docs/standoff-format.md for the schema.

#include <algorithm>
#include <charconv>
#include <initializer_list>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/validate.hpp"
#include "ogmios/xml.hpp"

namespace ogmios {

struct SerializeOptions {
  bool include_timings = true;
};

// Shortest decimal form that reads back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, static_cast<std::size_t>(res.ptr - buf));
}

namespace detail {

class XmlOut {
 public:
  explicit XmlOut(std::string& out) : out_(out) {}

  XmlOut& open(std::string_view indent, std::string_view name) {
    out_ += indent;
    out_ += '<';
    out_ += name;
    return *this;
  }
  XmlOut& attr(std::string_view key, std::string_view value) {
    out_ += ' ';
    out_ += key;
    out_ += "=\"";
    xml::append_escaped(out_, value, true);
    out_ += '"';
    return *this;
  }
  XmlOut& attr(std::string_view key, std::size_t value) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return attr(key, std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  XmlOut& attr(std::string_view key, double value) { return attr(key, std::string_view(format_double(value))); }
  void close_empty() { out_ += "/>\n"; }
  void close_open() { out_ += ">\n"; }
  void end(std::string_view indent, std::string_view name) {
    out_ += indent;
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

 private:
  std::string& out_;
};

template <typename Annotation, typename Extra>
void write_span_layer(XmlOut& x, std::string_view layer_name, std::string_view element,
                      const std::vector<Annotation>& items, Extra&& extra) {
  x.open("  ", "layer").attr("name", layer_name);
  if (items.empty()) {
    x.close_empty();
    return;
  }
  x.close_open();
  for (const auto& a : items) {
    x.open("    ", element)
        .attr("id", a.id)
        .attr("first", a.span.first_token)
        .attr("last", a.span.last_token);
    extra(x, a);
    x.close_empty();
  }
  x.end("  ", "layer");
}

}  // namespace detail

// Everything up to, but excluding, the timing block. Refuses invalid
// documents.
inline std::string render_annotations(const Document& doc) {
  if (auto report = validate(doc); !report.empty()) throw ValidationError(std::move(report));

  std::string out;
  out.reserve(doc.text.size() * 4 + 256);
  detail::XmlOut x(out);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  x.open("", "document").attr("id", doc.id).close_open();

  if (!doc.meta.empty()) {
    x.open("  ", "meta").close_open();
    for (const auto& [k, v] : doc.meta) x.open("    ", "entry").attr("key", k).attr("value", v).close_empty();
    x.end("  ", "meta");
  }

  out += "  <text>";
  xml::append_escaped(out, doc.text, false);
  out += "</text>\n";

  if (doc.tokens) {
    if (doc.tokens->empty()) {
      x.open("  ", "tokens").close_empty();
    } else {
      x.open("  ", "tokens").close_open();
      for (const auto& t : *doc.tokens) {
        x.open("    ", "token")
            .attr("id", t.id)
            .attr("start", t.start)
            .attr("end", t.end)
            .attr("kind", to_string(t.kind))
            .close_empty();
      }
      x.end("  ", "tokens");
    }
  }

  auto none = [](detail::XmlOut&, const auto&) {};
  if (doc.named_entities) {
    detail::write_span_layer(x, layer::kNamedEntities, "entity", *doc.named_entities,
                             [](detail::XmlOut& o, const NamedEntity& e) { o.attr("type", e.type); });
  }
  if (doc.words) detail::write_span_layer(x, layer::kWords, "word", *doc.words, none);
  if (doc.sentences) detail::write_span_layer(x, layer::kSentences, "sentence", *doc.sentences, none);
  if (doc.morpho) {
    x.open("  ", "layer").attr("name", layer::kMorpho);
    if (doc.morpho->empty()) {
      x.close_empty();
    } else {
      x.close_open();
      for (const auto& m : *doc.morpho) {
        x.open("    ", "morpho").attr("word", m.word_id).attr("pos", to_string(m.pos));
        if (m.lemma) x.attr("lemma", *m.lemma);
        x.attr("source", to_string(m.source)).close_empty();
      }
      x.end("  ", "layer");
    }
  }
  if (doc.terms) {
    detail::write_span_layer(x, layer::kTerms, "term", *doc.terms, [](detail::XmlOut& o, const Term& t) {
      o.attr("entry", t.entry_id).attr("canonical", t.canonical).attr("head", t.head);
    });
  }
  if (doc.dependencies) {
    x.open("  ", "layer").attr("name", layer::kDependencies);
    if (doc.dependencies->empty()) {
      x.close_empty();
    } else {
      x.close_open();
      for (const auto& d : *doc.dependencies) {
        x.open("    ", "link")
            .attr("id", d.id)
            .attr("sentence", d.sentence_id)
            .attr("governor", d.governor)
            .attr("dependent", d.dependent)
            .attr("label", d.label)
            .close_empty();
      }
      x.end("  ", "layer");
    }
  }
  return out;
}

// Completes a rendering started by render_annotations().
inline void append_timings(std::string& out, const std::vector<TimingRecord>& timings,
                           const SerializeOptions& options = {}) {
  detail::XmlOut x(out);
  if (options.include_timings) {
    if (timings.empty()) {
      x.open("  ", "timings").close_empty();
    } else {
      x.open("  ", "timings").close_open();
      for (const auto& t : timings) {
        x.open("    ", "timing").attr("step", t.step).attr("seconds", t.wall_seconds).close_empty();
      }
      x.end("  ", "timings");
    }
  }
  x.end("", "document");
}

inline std::string serialize(const Document& doc, const SerializeOptions& options = {}) {
  std::string out = render_annotations(doc);
  append_timings(out, doc.timings, options);
  return out;
}

namespace detail {

class SchemaReader {
 public:
  [[noreturn]] static void fail(const xml::Element& e, const std::string& message) {
    throw SchemaError("<" + e.name + ">: " + message);
  }

  static void only_attributes(const xml::Element& e, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : e.attributes) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        fail(e, "unexpected attribute '" + k + "'");
      }
    }
  }

  static const std::string& required(const xml::Element& e, std::string_view key) {
    const std::string* v = e.attribute(key);
    if (!v) fail(e, "missing attribute '" + std::string(key) + "'");
    return *v;
  }

  static std::size_t index(const xml::Element& e, std::string_view key) {
    const std::string& v = required(e, key);
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      fail(e, "attribute '" + std::string(key) + "' is not a non-negative integer: '" + v + "'");
    }
    return out;
  }

  static double decimal(const xml::Element& e, std::string_view key) {
    const std::string& v = required(e, key);
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      fail(e, "attribute '" + std::string(key) + "' is not a number: '" + v + "'");
    }
    return out;
  }

  static void no_children(const xml::Element& e) {
    if (!e.children.empty()) fail(e, "unexpected child <" + e.children.front().name + ">");
  }

  static TokenSpan span(const xml::Element& e) { return {index(e, "first"), index(e, "last")}; }

  template <typename Annotation, typename Fill>
  static std::vector<Annotation> span_layer(const xml::Element& layer_el, std::string_view element,
                                            std::initializer_list<std::string_view> attrs, Fill&& fill) {
    std::vector<Annotation> out;
    out.reserve(layer_el.children.size());
    for (const auto& c : layer_el.children) {
      if (c.name != element) fail(layer_el, "unexpected child <" + c.name + ">");
      only_attributes(c, attrs);
      no_children(c);
      Annotation a;
      a.id = index(c, "id");
      a.span = span(c);
      fill(c, a);
      out.push_back(std::move(a));
    }
    return out;
  }
};

}  // namespace detail

// Parses and validates a document. Throws ParseError for malformed XML,
// SchemaError for unexpected structure, ValidationError for broken
// invariants.
inline Document deserialize(std::string_view bytes) {
  using R = detail::SchemaReader;
  const xml::Element root = xml::parse(bytes);
  if (root.name != "document") R::fail(root, "root element must be <document>");
  R::only_attributes(root, {"id"});

  Document doc;
  doc.id = R::required(root, "id");
  bool seen_text = false, seen_tokens = false, seen_timings = false, seen_meta = false;
  std::vector<std::string> seen_layers;

  for (const auto& el : root.children) {
    if (el.name == "meta") {
      if (seen_meta) R::fail(el, "duplicate element");
      seen_meta = true;
      R::only_attributes(el, {});
      for (const auto& entry : el.children) {
        if (entry.name != "entry") R::fail(el, "unexpected child <" + entry.name + ">");
        R::only_attributes(entry, {"key", "value"});
        doc.meta[R::required(entry, "key")] = R::required(entry, "value");
      }
    } else if (el.name == "text") {
      if (seen_text) R::fail(el, "duplicate element");
      seen_text = true;
      R::only_attributes(el, {});
      R::no_children(el);
      doc.text = el.text;
    } else if (el.name == "tokens") {
      if (seen_tokens) R::fail(el, "duplicate element");
      seen_tokens = true;
      R::only_attributes(el, {});
      std::vector<Token> tokens;
      tokens.reserve(el.children.size());
      for (const auto& t : el.children) {
        if (t.name != "token") R::fail(el, "unexpected child <" + t.name + ">");
        R::only_attributes(t, {"id", "start", "end", "kind"});
        R::no_children(t);
        Token token;
        token.id = R::index(t, "id");
        token.start = R::index(t, "start");
        token.end = R::index(t, "end");
        const auto kind = parse_token_kind(R::required(t, "kind"));
        if (!kind) R::fail(t, "unknown token kind '" + R::required(t, "kind") + "'");
        token.kind = *kind;
        tokens.push_back(std::move(token));
      }
      doc.tokens = std::move(tokens);
    } else if (el.name == "layer") {
      R::only_attributes(el, {"name"});
      const std::string& name = R::required(el, "name");
      if (std::find(seen_layers.begin(), seen_layers.end(), name) != seen_layers.end()) {
        R::fail(el, "duplicate layer '" + name + "'");
      }
      seen_layers.push_back(name);
      if (name == layer::kNamedEntities) {
        doc.named_entities = R::span_layer<NamedEntity>(
            el, "entity", {"id", "first", "last", "type"},
            [](const xml::Element& c, NamedEntity& a) { a.type = R::required(c, "type"); });
      } else if (name == layer::kWords) {
        doc.words = R::span_layer<Word>(el, "word", {"id", "first", "last"}, [](const auto&, auto&) {});
      } else if (name == layer::kSentences) {
        doc.sentences =
            R::span_layer<Sentence>(el, "sentence", {"id", "first", "last"}, [](const auto&, auto&) {});
      } else if (name == layer::kTerms) {
        doc.terms = R::span_layer<Term>(el, "term", {"id", "first", "last", "entry", "canonical", "head"},
                                        [](const xml::Element& c, Term& a) {
                                          a.entry_id = R::required(c, "entry");
                                          a.canonical = R::required(c, "canonical");
                                          a.head = R::index(c, "head");
                                        });
      } else if (name == layer::kMorpho) {
        std::vector<Morpho> items;
        for (const auto& c : el.children) {
          if (c.name != "morpho") R::fail(el, "unexpected child <" + c.name + ">");
          R::only_attributes(c, {"word", "pos", "lemma", "source"});
          R::no_children(c);
          Morpho m;
          m.word_id = R::index(c, "word");
          const auto pos = parse_pos(R::required(c, "pos"));
          if (!pos) R::fail(c, "unknown part of speech '" + R::required(c, "pos") + "'");
          m.pos = *pos;
          if (const auto* lemma = c.attribute("lemma")) m.lemma = *lemma;
          const auto source = parse_morpho_source(R::required(c, "source"));
          if (!source) R::fail(c, "unknown source '" + R::required(c, "source") + "'");
          m.source = *source;
          items.push_back(std::move(m));
        }
        doc.morpho = std::move(items);
      } else if (name == layer::kDependencies) {
        std::vector<Dependency> items;
        for (const auto& c : el.children) {
          if (c.name != "link") R::fail(el, "unexpected child <" + c.name + ">");
          R::only_attributes(c, {"id", "sentence", "governor", "dependent", "label"});
          R::no_children(c);
          items.push_back({R::index(c, "id"), R::index(c, "sentence"), R::index(c, "governor"),
                           R::index(c, "dependent"), R::required(c, "label")});
        }
        doc.dependencies = std::move(items);
      } else {
        R::fail(el, "unknown layer '" + name + "'");
      }
    } else if (el.name == "timings") {
      if (seen_timings) R::fail(el, "duplicate element");
      seen_timings = true;
      R::only_attributes(el, {});
      for (const auto& t : el.children) {
        if (t.name != "timing") R::fail(el, "unexpected child <" + t.name + ">");
        R::only_attributes(t, {"step", "seconds"});
        R::no_children(t);
        doc.timings.push_back({R::required(t, "step"), R::decimal(t, "seconds")});
      }
    } else {
      R::fail(root, "unexpected child <" + el.name + ">");
    }
  }
  if (!seen_text) R::fail(root, "missing <text>");

  if (doc.tokens) {
    // Surfaces are not stored; recover them from the text when in range.
    std::u32string text;
    try {
      text = unicode::decode_utf8(doc.text);
    } catch (const ParseError&) {
      throw ValidationError(validate(doc));
    }
    for (auto& t : *doc.tokens) {
      if (t.start <= t.end && t.end <= text.size()) {
        t.surface = unicode::encode_utf8(std::u32string_view(text).substr(t.start, t.end - t.start));
      }
    }
  }
  if (auto report = validate(doc); !report.empty()) throw ValidationError(std::move(report));
  return doc;
}

}  // namespace ogmios
