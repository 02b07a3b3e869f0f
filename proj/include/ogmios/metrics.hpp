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

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ogmios/document.hpp"
#include "ogmios/errors.hpp"
#include "ogmios/io.hpp"

namespace ogmios::metrics {

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

inline std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

// ---------------------------------------------------------------------------
// Corpus statistics: totals and per-document averages of each unit kind.

inline constexpr int kAverageDecimals = 2;

struct UnitTotals {
  std::uint64_t tokens = 0;
  std::uint64_t named_entities = 0;
  std::uint64_t words = 0;
  std::uint64_t sentences = 0;
  std::uint64_t morpho = 0;
  std::uint64_t terms = 0;

  bool operator==(const UnitTotals&) const = default;
};

struct StatsRow {
  std::string_view label;
  std::uint64_t total;
  std::optional<double> average;  // nullopt for an empty corpus
};

struct CorpusStats {
  std::size_t documents = 0;
  UnitTotals totals;
  // Histogram of document text sizes: bin k holds sizes in [10^k, 10^(k+1))
  // bytes; bin 0 also holds empty documents.
  std::map<int, std::size_t> size_bins;

  std::vector<StatsRow> rows() const {
    auto avg = [&](std::uint64_t total) -> std::optional<double> {
      if (documents == 0) return std::nullopt;
      return static_cast<double>(total) / static_cast<double>(documents);
    };
    return {{"Tokens", totals.tokens, avg(totals.tokens)},
            {"Named entities", totals.named_entities, avg(totals.named_entities)},
            {"Words", totals.words, avg(totals.words)},
            {"Sentences", totals.sentences, avg(totals.sentences)},
            {"Part-of-speech tags and lemma", totals.morpho, avg(totals.morpho)},
            {"Terms", totals.terms, avg(totals.terms)}};
  }

  bool averages_defined() const { return documents > 0; }
};

inline int size_bin(std::size_t bytes) {
  int bin = 0;
  for (std::size_t v = bytes; v >= 10; v /= 10) ++bin;
  return bin;
}

class StatsAccumulator {
 public:
  void add(const Document& doc) {
    ++stats_.documents;
    auto count = [](const auto& layer) -> std::uint64_t { return layer ? layer->size() : 0; };
    stats_.totals.tokens += count(doc.tokens);
    stats_.totals.named_entities += count(doc.named_entities);
    stats_.totals.words += count(doc.words);
    stats_.totals.sentences += count(doc.sentences);
    stats_.totals.morpho += count(doc.morpho);
    stats_.totals.terms += count(doc.terms);
    ++stats_.size_bins[size_bin(doc.text.size())];
  }

  const CorpusStats& stats() const { return stats_; }

 private:
  CorpusStats stats_;
};

inline CorpusStats corpus_stats(std::span<const Document> docs) {
  StatsAccumulator acc;
  for (const auto& d : docs) acc.add(d);
  return acc.stats();
}

inline CorpusStats corpus_stats_from_totals(const UnitTotals& totals, std::size_t documents) {
  CorpusStats s;
  s.documents = documents;
  s.totals = totals;
  return s;
}

inline std::string render_text(const CorpusStats& s) {
  std::string out = pad_right("Unit", 32) + pad_left("Average per document", 22) + pad_left("Total", 16) + "\n";
  for (const auto& r : s.rows()) {
    out += pad_right(std::string(r.label), 32) +
           pad_left(r.average ? format_fixed(*r.average, kAverageDecimals) : "n/a", 22) +
           pad_left(std::to_string(r.total), 16) + "\n";
  }
  out += "Documents: " + std::to_string(s.documents) + "\n";
  if (!s.averages_defined()) out += "Notice: averages are undefined for an empty corpus\n";
  return out;
}

inline std::string render_tsv(const CorpusStats& s) {
  std::string out = "unit\taverage\ttotal\n";
  for (const auto& r : s.rows()) {
    out += std::string(r.label) + "\t" + (r.average ? format_fixed(*r.average, kAverageDecimals) : "NA") + "\t" +
           std::to_string(r.total) + "\n";
  }
  out += "documents\t\t" + std::to_string(s.documents) + "\n";
  return out;
}

inline std::string render_size_bins(const CorpusStats& s) {
  std::string out = "size_from_bytes\tsize_to_bytes\tdocuments\n";
  for (const auto& [bin, n] : s.size_bins) {
    std::uint64_t lo = 1;
    for (int i = 0; i < bin; ++i) lo *= 10;
    out += std::to_string(bin == 0 ? 0 : lo) + "\t" + std::to_string(lo * 10) + "\t" + std::to_string(n) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Timing breakdown: average seconds per step and share of the total.

struct TimingRow {
  std::string step;
  double average = 0;     // over documents that executed the step
  double percentage = 0;  // of the total average
  std::size_t documents = 0;
};

struct TimingReport {
  std::vector<TimingRow> rows;  // order of first appearance
  double total_average = 0;     // sum of the step averages

  bool empty() const { return rows.empty(); }
};

inline std::string_view step_label(std::string_view step) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 9> kLabels = {{
      {"load", "loading input document"},
      {"tokenize", "tokenization"},
      {"ne", "named entity recognition"},
      {"words", "word segmentation"},
      {"sentences", "sentence segmentation"},
      {"morpho", "part-of-speech tagging and lemmatization"},
      {"terms", "term tagging"},
      {"parse", "parsing"},
      {"render", "rendering XML output document"},
  }};
  for (const auto& [k, v] : kLabels) {
    if (k == step) return v;
  }
  return step;
}

inline TimingReport timing_report_from_averages(const std::vector<std::pair<std::string, double>>& averages) {
  TimingReport r;
  for (const auto& [step, avg] : averages) {
    r.rows.push_back({step, avg, 0, 0});
    r.total_average += avg;
  }
  for (auto& row : r.rows) row.percentage = r.total_average > 0 ? row.average / r.total_average * 100.0 : 0.0;
  return r;
}

class TimingAccumulator {
 public:
  void add(const Document& doc) {
    for (const auto& t : doc.timings) {
      auto it = index_.find(t.step);
      if (it == index_.end()) {
        it = index_.emplace(t.step, sums_.size()).first;
        sums_.push_back({t.step, 0.0, 0});
      }
      auto& s = sums_[it->second];
      s.seconds += t.wall_seconds;
      ++s.documents;
    }
  }

  TimingReport report() const {
    std::vector<std::pair<std::string, double>> averages;
    for (const auto& s : sums_) averages.emplace_back(s.step, s.seconds / static_cast<double>(s.documents));
    TimingReport r = timing_report_from_averages(averages);
    for (std::size_t i = 0; i < sums_.size(); ++i) r.rows[i].documents = sums_[i].documents;
    return r;
  }

 private:
  struct Sum {
    std::string step;
    double seconds;
    std::size_t documents;
  };
  std::map<std::string, std::size_t> index_;
  std::vector<Sum> sums_;
};

inline TimingReport timing_report(std::span<const Document> docs) {
  TimingAccumulator acc;
  for (const auto& d : docs) acc.add(d);
  return acc.report();
}

inline std::string render_text(const TimingReport& r) {
  if (r.empty()) return "Notice: no timing records found\n";
  std::string out = pad_right("Step", 44) + pad_left("Average (s)", 14) + pad_left("Percentage", 12) + "\n";
  for (const auto& row : r.rows) {
    out += pad_right(std::string(step_label(row.step)), 44) + pad_left(format_fixed(row.average, 6), 14) +
           pad_left(format_fixed(row.percentage, 2), 12) + "\n";
  }
  out += pad_right("Total", 44) + pad_left(format_fixed(r.total_average, 6), 14) + pad_left("100.00", 12) + "\n";
  return out;
}

inline std::string render_tsv(const TimingReport& r) {
  std::string out = "step\taverage_seconds\tpercentage\tdocuments\n";
  for (const auto& row : r.rows) {
    out += row.step + "\t" + format_fixed(row.average, 6) + "\t" + format_fixed(row.percentage, 2) + "\t" +
           std::to_string(row.documents) + "\n";
  }
  out += "total\t" + format_fixed(r.total_average, 6) + "\t" + (r.empty() ? "NA" : "100.00") + "\t\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parser evaluation: per-sentence criteria averaged per run, compared as
// variant / baseline percentages, plus out-of-lexicon assignment tallies.

inline constexpr std::array<std::string_view, 6> kCriteria = {"NbW", "NbL", "PT", "CLF", "EL", "CQ"};

struct ParserEvalRecord {
  std::array<std::optional<double>, kCriteria.size()> values;
};

// Out-of-lexicon words: unknown (no guess) and guessed, with the number of
// incorrect category assignments among each.
struct OolTally {
  std::uint64_t unknown = 0;
  std::uint64_t unknown_incorrect = 0;
  std::uint64_t guessed = 0;
  std::uint64_t guessed_incorrect = 0;
};

struct ParserEvalSet {
  std::vector<ParserEvalRecord> records;
  std::optional<OolTally> tally;
};

// Tab-separated, with a header row naming the columns. Recognized columns:
// NbW NbL PT CLF EL CQ UW UW_incorrect GW GW_incorrect; others are ignored.
// An empty cell means the value was not assessed for that sentence.
inline ParserEvalSet parse_parser_eval(std::string_view content, const std::string& origin) {
  ParserEvalSet set;
  std::vector<int> criterion_of;  // column -> criterion index or -1
  std::map<std::string, std::size_t> tally_columns;
  bool header = true;
  io::for_each_record(content, [&](std::size_t line, std::string_view record) {
    const auto cells = io::split(record, '\t');
    if (header) {
      header = false;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto name = io::trim(cells[c]);
        int idx = -1;
        for (std::size_t k = 0; k < kCriteria.size(); ++k) {
          if (kCriteria[k] == name) idx = static_cast<int>(k);
        }
        criterion_of.push_back(idx);
        if (name == "UW" || name == "UW_incorrect" || name == "GW" || name == "GW_incorrect") {
          tally_columns[std::string(name)] = c;
        }
      }
      return;
    }
    if (cells.size() > criterion_of.size()) throw ResourceError(origin, line, "more cells than header columns");
    auto number = [&](std::string_view cell) -> std::optional<double> {
      cell = io::trim(cell);
      if (cell.empty()) return std::nullopt;
      double v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ResourceError(origin, line, "not a number: '" + std::string(cell) + "'");
      }
      return v;
    };
    ParserEvalRecord r;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (criterion_of[c] >= 0) r.values[static_cast<std::size_t>(criterion_of[c])] = number(cells[c]);
    }
    if (r.values[0] && *r.values[0] < 1) throw ResourceError(origin, line, "NbW must be at least 1");
    if (r.values[3] && *r.values[3] != 0 && *r.values[3] != 1) throw ResourceError(origin, line, "CLF must be 0 or 1");
    if (r.values[4] && *r.values[4] < 0) throw ResourceError(origin, line, "EL must be non-negative");
    if (!tally_columns.empty()) {
      if (!set.tally) set.tally = OolTally{};
      auto count = [&](const char* name) -> std::uint64_t {
        const auto it = tally_columns.find(name);
        if (it == tally_columns.end() || it->second >= cells.size()) return 0;
        const auto v = number(cells[it->second]);
        if (v && (*v < 0 || std::floor(*v) != *v)) {
          throw ResourceError(origin, line, std::string(name) + " must be a non-negative integer");
        }
        return v ? static_cast<std::uint64_t>(*v) : 0;
      };
      set.tally->unknown += count("UW");
      set.tally->unknown_incorrect += count("UW_incorrect");
      set.tally->guessed += count("GW");
      set.tally->guessed_incorrect += count("GW_incorrect");
    }
    set.records.push_back(r);
  });
  if (header) throw ResourceError(origin, 0, "missing header row");
  return set;
}

struct CriterionRow {
  std::string name;
  double baseline = 0;
  double variant = 0;
  double ratio_percent = 0;  // variant / baseline * 100
};

struct OolRow {
  std::string name;  // UW, GW or OoL
  std::uint64_t baseline_total = 0;
  std::optional<double> baseline_incorrect_percent;
  std::uint64_t variant_total = 0;
  std::optional<double> variant_incorrect_percent;
};

struct ParserEvalReport {
  std::vector<CriterionRow> criteria;
  std::vector<OolRow> ool;
  std::vector<std::string> notices;
};

inline std::optional<double> criterion_average(const ParserEvalSet& set, std::size_t criterion) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& r : set.records) {
    if (r.values[criterion]) {
      sum += *r.values[criterion];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

inline ParserEvalReport parser_eval_report(const ParserEvalSet& baseline, const ParserEvalSet& variant) {
  if (baseline.records.empty() || variant.records.empty()) {
    throw PreconditionError("parser evaluation needs at least one record in each set");
  }
  ParserEvalReport report;
  for (std::size_t k = 0; k < kCriteria.size(); ++k) {
    const auto b = criterion_average(baseline, k);
    const auto v = criterion_average(variant, k);
    const std::string name(kCriteria[k]);
    if (!b || !v) {
      report.notices.push_back(name + " omitted: not present in " +
                               (!b && !v ? "either record set" : !b ? "the baseline" : "the variant"));
      continue;
    }
    if (*b == 0) {
      report.notices.push_back(name + " omitted: baseline average is zero");
      continue;
    }
    report.criteria.push_back({name, *b, *v, *v / *b * 100.0});
  }
  if (baseline.tally || variant.tally) {
    const OolTally b = baseline.tally.value_or(OolTally{});
    const OolTally v = variant.tally.value_or(OolTally{});
    auto pct = [](std::uint64_t incorrect, std::uint64_t total) -> std::optional<double> {
      if (total == 0) return std::nullopt;
      return static_cast<double>(incorrect) / static_cast<double>(total) * 100.0;
    };
    report.ool.push_back({"UW", b.unknown, pct(b.unknown_incorrect, b.unknown), v.unknown,
                          pct(v.unknown_incorrect, v.unknown)});
    report.ool.push_back({"GW", b.guessed, pct(b.guessed_incorrect, b.guessed), v.guessed,
                          pct(v.guessed_incorrect, v.guessed)});
    const auto bt = b.unknown + b.guessed, vt = v.unknown + v.guessed;
    report.ool.push_back({"OoL", bt, pct(b.unknown_incorrect + b.guessed_incorrect, bt), vt,
                          pct(v.unknown_incorrect + v.guessed_incorrect, vt)});
  }
  return report;
}

inline std::string render_text(const ParserEvalReport& r) {
  std::string out = pad_right("Criterion", 10) + pad_left("Baseline avg", 16) + pad_left("Variant avg", 16) +
                    pad_left("%/baseline", 12) + "\n";
  for (const auto& c : r.criteria) {
    out += pad_right(c.name, 10) + pad_left(format_fixed(c.baseline, 4), 16) + pad_left(format_fixed(c.variant, 4), 16) +
           pad_left(format_fixed(c.ratio_percent, 2) + "%", 12) + "\n";
  }
  if (!r.ool.empty()) {
    auto pct = [](const std::optional<double>& p) { return p ? format_fixed(*p, 1) + "%" : std::string("n/a"); };
    out += "\n" + pad_right("OoL", 10) + pad_left("Baseline a", 12) + pad_left("b", 10) + pad_left("Variant a", 12) +
           pad_left("b", 10) + "\n";
    for (const auto& o : r.ool) {
      out += pad_right(o.name, 10) + pad_left(std::to_string(o.baseline_total), 12) +
             pad_left(pct(o.baseline_incorrect_percent), 10) + pad_left(std::to_string(o.variant_total), 12) +
             pad_left(pct(o.variant_incorrect_percent), 10) + "\n";
    }
  }
  for (const auto& n : r.notices) out += "Notice: " + n + "\n";
  return out;
}

inline std::string render_tsv(const ParserEvalReport& r) {
  std::string out = "criterion\tbaseline_avg\tvariant_avg\tratio_percent\n";
  for (const auto& c : r.criteria) {
    out += c.name + "\t" + format_fixed(c.baseline, 6) + "\t" + format_fixed(c.variant, 6) + "\t" +
           format_fixed(c.ratio_percent, 2) + "\n";
  }
  if (!r.ool.empty()) out += "\nool\tbaseline_a\tbaseline_b_percent\tvariant_a\tvariant_b_percent\n";
  for (const auto& o : r.ool) {
    auto pct = [](const std::optional<double>& p) { return p ? format_fixed(*p, 2) : std::string("NA"); };
    out += o.name + "\t" + std::to_string(o.baseline_total) + "\t" + pct(o.baseline_incorrect_percent) + "\t" +
           std::to_string(o.variant_total) + "\t" + pct(o.variant_incorrect_percent) + "\n";
  }
  return out;
}

}  // namespace ogmios::metrics
