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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each check also enforces its runtime budget.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ogmios/ogmios.hpp"
#include "support/cluster.hpp"
#include "support/fixtures.hpp"
#include "support/mutations.hpp"
#include "support/oracles.hpp"
#include "support/reference_tables.hpp"

namespace fs = std::filesystem;
using namespace ogmios;

namespace {

const fs::path kData = OGMIOS_TEST_DATA;
const fs::path kSource = OGMIOS_SOURCE_DIR;
const std::string kCli = OGMIOS_CLI;

// A check returns an empty string on success, otherwise what went wrong.
struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;
  std::function<std::string()> check;
};

std::string fmt(double v, int decimals = 4) { return metrics::format_fixed(v, decimals); }

std::string ac1_unit_averages() {
  const auto stats = metrics::corpus_stats_from_totals(testing::kReferenceTotals, testing::kReferenceDocuments);
  const auto rows = stats.rows();
  std::string worst;
  double worst_rel = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = testing::kReferenceUnits[i];
    if (rows[i].total != ref.total || !rows[i].average) return std::string(ref.label) + ": total not preserved";
    const double rel = std::abs(*rows[i].average - ref.average) / ref.average;
    if (rel > worst_rel) {
      worst_rel = rel;
      worst = std::string(ref.label) + " " + fmt(*rows[i].average, 2) + " vs " + fmt(ref.average, 2);
    }
  }
  if (worst_rel > 0.005) return "deviation " + fmt(worst_rel * 100, 3) + "% (" + worst + ")";
  return {};
}

std::string ac2_step_percentages() {
  std::vector<std::pair<std::string, double>> averages;
  for (const auto& s : testing::kReferenceSteps) averages.emplace_back(s.step, s.average);
  const auto report = metrics::timing_report_from_averages(averages);
  if (std::abs(report.total_average - testing::kReferenceTotalSeconds) > 1e-9) {
    return "total " + fmt(report.total_average) + " vs " + fmt(testing::kReferenceTotalSeconds);
  }
  double sum = 0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& ref = testing::kReferenceSteps[i];
    // Compare the value as the report prints it.
    const double shown = std::stod(metrics::format_fixed(report.rows[i].percentage, 2));
    if (std::abs(shown - ref.percentage) > 0.05) {
      return std::string(ref.step) + ": " + fmt(shown, 2) + "% vs " + fmt(ref.percentage, 2) + "%";
    }
    sum += shown;
  }
  if (std::abs(sum - 100.0) > 0.2) return "percentages sum to " + fmt(sum, 2);
  return {};
}

std::string ac3_parser_ratios() {
  testing::TempDir dir("ac3");
  io::write_file_atomic(dir / "baseline.tsv", testing::eval_file(false));
  io::write_file_atomic(dir / "variant.tsv", testing::eval_file(true));
  const auto b = metrics::parse_parser_eval(io::read_file(dir / "baseline.tsv"), "baseline.tsv");
  const auto v = metrics::parse_parser_eval(io::read_file(dir / "variant.tsv"), "variant.tsv");
  const auto report = metrics::parser_eval_report(b, v);
  if (report.criteria.size() != testing::kReferenceCriteria.size()) return "criteria missing from the report";
  for (std::size_t i = 0; i < report.criteria.size(); ++i) {
    const auto& ref = testing::kReferenceCriteria[i];
    const auto& row = report.criteria[i];
    if (row.name != ref.name) return "unexpected criterion " + row.name;
    if (std::abs(row.ratio_percent - ref.ratio_percent) > 0.1) {
      return row.name + ": " + fmt(row.ratio_percent, 3) + "% vs " + fmt(ref.ratio_percent, 2) + "%";
    }
  }
  return {};
}

// Genus initial plus a capitalized epithet: the dot is followed by an
// uppercase word, which is a sentence boundary unless the entity is known.
const std::vector<std::string> kPlantedEntities = {
    "S. Typhimurium", "S. Enteritidis", "S. Paratyphi", "S. Dublin", "S. Newport",    "S. Heidelberg",
    "S. Infantis",    "S. Virchow",     "S. Hadar",     "S. Agona",  "B. subtilis",   "E. coli"};

std::string ac4_abbreviation_dots() {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> openers = {"The", "In", "Growth of", "Expression in", "Cultures of", "We studied"};
  const std::vector<std::string> fillers = {"grows", "in the mother cell", "requires sigK", "binds DNA",
                                            "was isolated", "expresses the gene", "at 37 degrees", "and"};
  std::string text;
  const std::size_t planted = 1000;
  for (std::size_t s = 0; s < planted; ++s) {
    std::string sentence = openers[rng() % openers.size()];
    const int entities = 1 + static_cast<int>(rng() % 2);
    for (int e = 0; e < entities; ++e) {
      sentence += " " + kPlantedEntities[rng() % kPlantedEntities.size()];
      sentence += " " + fillers[rng() % fillers.size()];
    }
    // Some sentences end on the entity itself.
    if (rng() % 5 == 0) sentence += " with " + kPlantedEntities[rng() % kPlantedEntities.size()];
    sentence += rng() % 4 == 0 ? "!" : ".";
    text += (s ? (rng() % 10 == 0 ? "\n" : " ") : "") + sentence;
  }

  PipelineConfig cfg;
  for (Step step : {Step::tokenize, Step::ne, Step::words, Step::sentences}) cfg.enable(step);
  auto with = std::make_shared<Resources>();
  for (const auto& e : kPlantedEntities) with->gazetteer.add(e, "species");
  const auto without = std::make_shared<Resources>();

  const auto a = Pipeline(cfg, with).run("ac4", text);
  const auto b = Pipeline(cfg, without).run("ac4", text);
  if (!a.ok() || !b.ok()) return "pipeline failed";
  const std::size_t with_gazetteer = a.document->sentences->size();
  const std::size_t without_gazetteer = b.document->sentences->size();
  if (with_gazetteer != planted) {
    return std::to_string(with_gazetteer) + " sentences with the gazetteer, expected " + std::to_string(planted);
  }
  if (without_gazetteer <= planted) {
    return "disabling entity tagging did not add splits (" + std::to_string(without_gazetteer) + ")";
  }
  std::cout << "     sentences: " << planted << " planted, " << with_gazetteer << " with gazetteer, "
            << without_gazetteer << " without\n";
  return {};
}

struct SentenceSlice {
  std::span<const Word> words;
  std::span<const Term> terms;
};

std::vector<SentenceSlice> slices(const Document& doc) {
  std::vector<SentenceSlice> out;
  const auto& words = *doc.words;
  const auto& terms = *doc.terms;
  std::size_t w = 0, t = 0;
  for (const auto& s : *doc.sentences) {
    while (w < words.size() && words[w].span.first_token < s.span.first_token) ++w;
    std::size_t we = w;
    while (we < words.size() && words[we].span.last_token <= s.span.last_token) ++we;
    while (t < terms.size() && terms[t].span.first_token < s.span.first_token) ++t;
    std::size_t te = t;
    while (te < terms.size() && terms[te].span.last_token <= s.span.last_token) ++te;
    out.push_back({std::span<const Word>(words.data() + w, we - w), std::span<const Term>(terms.data() + t, te - t)});
    w = we;
    t = te;
  }
  return out;
}

std::size_t words_covered(const Term& term, std::span<const Word> words) {
  std::size_t n = 0;
  for (const auto& w : words) {
    if (w.span.first_token >= term.span.first_token && w.span.last_token <= term.span.last_token) ++n;
  }
  return n;
}

std::string ac5_term_laws() {
  std::mt19937_64 rng(55);
  const std::vector<std::string> planted = {"gene expression", "transcription factor", "mother cell",
                                            "promoter region", "expression of genes", "Gene expression"};
  const Pipeline pipeline(testing::full_config(false), testing::sample_resources());
  const NullParser null_parser;
  const testing::ChainParser chain;
  std::size_t sentences = 0, multiword = 0, term_free = 0;
  for (int d = 0; d < 100; ++d) {
    std::string text;
    for (int s = 0; s < 100; ++s) {
      std::string sentence = testing::random_prose(rng, 1);
      sentence.pop_back();
      std::replace(sentence.begin(), sentence.end(), '.', ',');  // one sentence per draw
      std::replace(sentence.begin(), sentence.end(), '!', ',');
      std::replace(sentence.begin(), sentence.end(), '\n', ' ');
      if (rng() % 5 != 0) sentence += " " + planted[rng() % planted.size()];
      if (rng() % 3 == 0) sentence += " in the " + planted[rng() % planted.size()];
      text += (s ? " " : "") + sentence + ".";
    }
    const auto r = pipeline.run("ac5-" + std::to_string(d), text);
    if (!r.ok()) return "pipeline failed: " + r.failure->message;
    for (const auto& slice : slices(*r.document)) {
      ++sentences;
      const auto simplified = simplify_terms(slice.words, slice.terms);
      std::size_t elided = 0;
      for (const auto& term : slice.terms) {
        const std::size_t len = words_covered(term, slice.words);
        elided += len - 1;
        if (len > 1) ++multiword;
      }
      if (simplified.kept.size() != slice.words.size() - elided) {
        return "reduced length " + std::to_string(simplified.kept.size()) + " != " +
               std::to_string(slice.words.size()) + " - " + std::to_string(elided);
      }
      if (slice.terms.empty()) {
        ++term_free;
        std::vector<std::string> all(slice.words.size(), "w"), reduced(simplified.kept.size(), "w");
        for (const ParserAdapter* p : {static_cast<const ParserAdapter*>(&null_parser),
                                       static_cast<const ParserAdapter*>(&chain)}) {
          if (reattach_term_structure(p->parse(reduced), simplified) != p->parse(all)) {
            return "reattach is not the identity on a term-free sentence";
          }
        }
      }
    }
  }
  if (sentences != 10000) return std::to_string(sentences) + " sentences segmented, expected 10000";
  if (multiword == 0 || term_free == 0) return "generator produced no multiword terms or no term-free sentences";
  std::cout << "     " << sentences << " sentences, " << multiword << " multiword terms, " << term_free
            << " term-free sentences\n";
  return {};
}

std::string ac6_tokenizer_oracle() {
  std::mt19937_64 rng(66);
  for (int i = 0; i < 100000; ++i) {
    const std::u32string text = testing::random_unicode(rng, 200);
    const auto tokens = tokenize(std::u32string_view(text));
    if (tokens != testing::brute_force_tokens(text)) return "mismatch on string " + std::to_string(i);
    std::string joined;
    for (const auto& t : tokens) joined += t.surface;
    if (joined != unicode::encode_utf8(text)) return "surfaces do not reconstruct string " + std::to_string(i);
  }
  return {};
}

std::string ac7_distribution() {
  std::size_t total_done = 0, total_failed = 0, samples = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed * 7919);
    testing::ClusterOptions opt;
    opt.documents = testing::tiny_corpus(1000, seed);
    opt.workers = 4;
    opt.max_attempts = 3;
    opt.lease_seconds = 1.0;
    opt.kill_after = 1 + rng() % 200;
    for (const auto& [id, text] : opt.documents) {
      if (rng() % 100 < 5) opt.poisoned.insert(id);
    }
    const auto o = testing::run_cluster(opt);
    const std::string where = "seed " + std::to_string(seed) + ": ";
    if (!o.audit_failures.empty()) return where + o.audit_failures.front();
    if (o.conservation_violations) return where + "conservation violated in " + std::to_string(o.conservation_violations) + " samples";
    if (o.reports[0].exit != distribution::WorkerExit::abandoned) return where + "worker 0 was not killed";
    for (std::size_t w = 1; w < o.reports.size(); ++w) {
      if (o.reports[w].exit != distribution::WorkerExit::finished) return where + "worker did not finish: " + o.reports[w].diagnostic;
    }
    if (o.counts.done + o.counts.failed_permanent != o.counts.total) return where + "units left unfinished";
    if (o.counts.failed_permanent != opt.poisoned.size()) {
      return where + std::to_string(o.counts.failed_permanent) + " permanent failures for " +
             std::to_string(opt.poisoned.size()) + " poisoned documents";
    }
    total_done += o.counts.done;
    total_failed += o.counts.failed_permanent;
    samples += o.samples;
  }
  std::cout << "     20 runs: " << total_done << " done, " << total_failed << " failed permanently, " << samples
            << " conservation samples\n";
  return {};
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string without_timings(std::string xml) {
  const auto begin = xml.find("  <timings");
  if (begin == std::string::npos) return xml;
  auto end = xml.find("</timings>\n", begin);
  end = end == std::string::npos ? xml.find('\n', begin) + 1 : end + 11;
  return xml.erase(begin, end - begin);
}

std::string ac8_determinism() {
  testing::TempDir corpus("ac8-corpus"), one("ac8-j1"), eight("ac8-j8");
  std::mt19937_64 rng(88);
  for (int i = 0; i < 100; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "doc-%03d.txt", i);
    io::write_file_atomic(corpus / name, testing::random_prose(rng, 1 + rng() % 12));
  }
  const std::string config = (kSource / "resources" / "full.cfg").string();
  for (auto [dir, jobs] : {std::pair{&one, 1}, std::pair{&eight, 8}}) {
    const int status = run_cli("annotate '" + corpus.path().string() + "' '" + dir->path().string() + "' --jobs " +
                               std::to_string(jobs) + " --config '" + config + "'");
    if (status != 0) return "annotate --jobs " + std::to_string(jobs) + " exited " + std::to_string(status);
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(one.path())) {
    const auto other = eight / e.path().filename().string();
    if (!fs::exists(other)) return "missing " + other.string();
    if (without_timings(io::read_file(e.path())) != without_timings(io::read_file(other))) {
      return e.path().filename().string() + " differs";
    }
    ++compared;
  }
  if (compared != 100) return std::to_string(compared) + " outputs, expected 100";
  return {};
}

std::string ac9_round_trip() {
  std::mt19937_64 rng(99);
  const auto& rules = testing::mutation_rules();
  std::map<std::string, std::size_t> mutants;
  for (std::size_t i = 0; i < 10000; ++i) {
    const Document doc = testing::random_document(rng, i);
    const std::string bytes = serialize(doc);
    const Document back = deserialize(bytes);
    if (!(back == doc)) return "round trip changed document " + std::to_string(i);
    if (serialize(back) != bytes) return "re-serialization differs for document " + std::to_string(i);
    const std::string& rule = rules[i % rules.size()];
    for (const std::string& r : {rule, rules[(i * 7 + 3) % rules.size()]}) {
      const auto m = testing::mutate(doc, r, rng);
      if (!m) continue;
      const auto report = validate(m->doc);
      if (report.empty()) return "mutant accepted (" + r + ", document " + std::to_string(i) + ")";
      if (testing::reported_rules(report) != std::set<std::string>{r}) {
        return "mutant for " + r + " reported as " + format_violation(report.front());
      }
      ++mutants[r];
    }
  }
  for (const auto& r : rules) {
    if (mutants[r] == 0) return "no mutant generated for " + r;
  }
  std::size_t n = 0;
  for (const auto& [r, c] : mutants) n += c;
  std::cout << "     10000 round trips, " << n << " mutants over " << rules.size() << " rules, all rejected\n";
  return {};
}

std::vector<std::pair<std::string, std::string>> read_pairs(const fs::path& p) {
  std::vector<std::pair<std::string, std::string>> out;
  io::for_each_record(io::read_file(p), [&](std::size_t, std::string_view record) {
    const auto f = io::split(record, '\t');
    out.emplace_back(std::string(f.at(0)), std::string(f.at(1)));
  });
  return out;
}

std::string ac10_morpho_guesser() {
  const auto fixture = read_pairs(kData / "suffix_fixture.tsv");
  const auto overrides = read_pairs(kData / "lexicon_override.tsv");
  if (fixture.size() != 50) return "fixture has " + std::to_string(fixture.size()) + " words";
  const PipelineConfig cfg = load_config(kSource / "resources" / "full.cfg");
  const auto resources = load_resources(cfg);

  auto tag_all = [](const std::vector<std::pair<std::string, std::string>>& words, const MorphLexicon& lexicon) {
    std::string text;
    for (const auto& [w, gold] : words) text += (text.empty() ? "" : " , ") + w;
    Document d;
    d.text = text;
    d = pos_tag_and_lemmatize(segment_sentences(segment_words(tag_named_entities(tokenize_document(d), Gazetteer()))),
                              lexicon);
    std::vector<std::string> tags;
    for (std::size_t i = 0; i < d.morpho->size(); i += 2) tags.emplace_back(to_string((*d.morpho)[i].pos));
    return tags;
  };

  std::size_t correct = 0;
  const auto tags = tag_all(fixture, resources->lexicon);
  for (std::size_t i = 0; i < fixture.size(); ++i) {
    if (resources->lexicon.lookup(fixture[i].first)) return fixture[i].first + " is in the lexicon";
    if (tags.at(i) == fixture[i].second) ++correct;
  }
  if (correct != fixture.size()) return std::to_string(correct) + "/50 correct";

  MorphLexicon lexicon = resources->lexicon;
  for (const auto& [w, pos] : overrides) lexicon.add(w, *parse_pos(pos), std::nullopt);
  const auto overridden = tag_all(overrides, lexicon);
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    if (!guess_category(overrides[i].first, lexicon.suffix_rules())) return overrides[i].first + " has no guess";
    if (overridden.at(i) != overrides[i].second) return "lexicon did not override the guess for " + overrides[i].first;
  }
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "corpus statistics averages from totals", 1, ac1_unit_averages},
      {"AC2", "per-step timing percentages", 1, ac2_step_percentages},
      {"AC3", "parser evaluation ratios", 1, ac3_parser_ratios},
      {"AC4", "abbreviation dots inside named entities", 10, ac4_abbreviation_dots},
      {"AC5", "term simplification laws", 30, ac5_term_laws},
      {"AC6", "tokenizer oracle equivalence", 60, ac6_tokenizer_oracle},
      {"AC7", "distribution safety and liveness", 300, ac7_distribution},
      {"AC8", "jobs-independent output", 60, ac8_determinism},
      {"AC9", "stand-off round trip and mutant rejection", 60, ac9_round_trip},
      {"AC10", "suffix guesser and lexicon override", 1, ac10_morpho_guesser},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
      problem = c.check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (problem.empty() && seconds > c.budget_seconds) {
      problem = "took " + fmt(seconds, 2) + " s, budget " + fmt(c.budget_seconds, 0) + " s";
    }
    if (!problem.empty()) ++failures;
    std::cout << (problem.empty() ? "PASS " : "FAIL ") << c.id << " " << c.title << " (" << fmt(seconds, 2) << " s)"
              << (problem.empty() ? "" : ": " + problem) << std::endl;
  }
  std::cout << (failures ? std::to_string(failures) + " of 10 criteria failed" : "all 10 criteria passed") << "\n";
  return failures ? 1 : 0;
}
