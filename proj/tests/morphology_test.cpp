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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ogmios/gazetteer.hpp"
#include "ogmios/morphology.hpp"
#include "ogmios/segmentation.hpp"
#include "ogmios/tokenizer.hpp"
#include "support/fixtures.hpp"

namespace ogmios {
namespace {

std::vector<Morpho> tag(const std::string& text, const MorphLexicon& lex) {
  Document d;
  d.text = text;
  d = segment_sentences(segment_words(tag_named_entities(tokenize_document(d), Gazetteer())));
  return *pos_tag_and_lemmatize(d, lex).morpho;
}

Morpho tag_one(const std::string& word, const MorphLexicon& lex) {
  const auto m = tag(word, lex);
  EXPECT_EQ(m.size(), 1u) << word;
  return m.at(0);
}

TEST(Morpho, LexiconLookup) {
  MorphLexicon lex;
  lex.add("binds", PartOfSpeech::VERB, "bind");
  const Morpho m = tag_one("binds", lex);
  EXPECT_EQ(m.pos, PartOfSpeech::VERB);
  EXPECT_EQ(m.lemma, "bind");
  EXPECT_EQ(m.source, MorphoSource::lexicon);
  EXPECT_EQ(tag_one("Binds", lex).lemma, "bind");  // keys are lowercased
}

TEST(Morpho, NumbersHaveNoLemma) {
  const Morpho m = tag_one("53", MorphLexicon());
  EXPECT_EQ(m.pos, PartOfSpeech::NUM);
  EXPECT_FALSE(m.lemma.has_value());
  EXPECT_EQ(m.source, MorphoSource::fallback);
}

TEST(Morpho, UnknownWordIsGuessedFromItsSuffix) {
  const Morpho m = tag_one("kinase", MorphLexicon());
  EXPECT_EQ(m.pos, PartOfSpeech::NOUN);
  EXPECT_FALSE(m.lemma.has_value());
  EXPECT_EQ(m.source, MorphoSource::guesser);
}

TEST(Morpho, Fallbacks) {
  const MorphLexicon lex;
  EXPECT_EQ(tag_one("xyzq", lex).pos, PartOfSpeech::NOUN);
  EXPECT_EQ(tag_one("xyzq", lex).source, MorphoSource::fallback);
  EXPECT_EQ(tag_one("p53", lex).pos, PartOfSpeech::NOUN);
  EXPECT_EQ(tag_one("(", lex).pos, PartOfSpeech::PUNCT);
  EXPECT_EQ(tag_one("anti-kinase", lex).source, MorphoSource::guesser);
}

TEST(Morpho, LexiconOverridesGuesser) {
  MorphLexicon lex;
  lex.add("release", PartOfSpeech::VERB, "release");
  lex.add("normal", PartOfSpeech::NOUN, std::nullopt);
  EXPECT_EQ(tag_one("release", lex).pos, PartOfSpeech::VERB);
  EXPECT_EQ(tag_one("normal", lex).pos, PartOfSpeech::NOUN);
  EXPECT_EQ(tag_one("normal", lex).source, MorphoSource::lexicon);
}

TEST(Morpho, OneAnnotationPerWord) {
  std::mt19937_64 rng(3);
  const auto resources = testing::sample_resources();
  for (int i = 0; i < 500; ++i) {
    Document d;
    d.text = testing::random_prose(rng, 3);
    d = segment_sentences(segment_words(tag_named_entities(tokenize_document(d), resources->gazetteer)));
    const auto tagged = pos_tag_and_lemmatize(d, resources->lexicon);
    ASSERT_EQ(tagged.morpho->size(), tagged.words->size());
    for (std::size_t w = 0; w < tagged.words->size(); ++w) ASSERT_EQ((*tagged.morpho)[w].word_id, w);
  }
}

TEST(Morpho, RequiresSentences) {
  Document d;
  d.text = "a";
  d = segment_words(tag_named_entities(tokenize_document(d), Gazetteer()));
  EXPECT_THROW(pos_tag_and_lemmatize(d, MorphLexicon()), PreconditionError);
}

TEST(Guess, CitedSuffixes) {
  const auto rules = default_suffix_rules();
  EXPECT_EQ(guess_category("polymerase", rules), (SuffixMatch{PartOfSpeech::NOUN, 0}));
  EXPECT_EQ(guess_category("homologous", rules), (SuffixMatch{PartOfSpeech::ADJ, 3}));
  EXPECT_EQ(guess_category("activity", rules), (SuffixMatch{PartOfSpeech::NOUN, 1}));
  EXPECT_EQ(guess_category("dorsal", rules), (SuffixMatch{PartOfSpeech::ADJ, 2}));
  EXPECT_EQ(guess_category("Polymerase", rules), (SuffixMatch{PartOfSpeech::NOUN, 0}));
  EXPECT_FALSE(guess_category("xyzq", rules).has_value());
  EXPECT_FALSE(guess_category("ase", rules).has_value());  // nothing left for a stem
}

TEST(Guess, Preconditions) {
  const auto rules = default_suffix_rules();
  EXPECT_THROW(guess_category("", rules), PreconditionError);
  EXPECT_THROW(guess_category("p53", rules), PreconditionError);
}

TEST(Guess, LongestSuffixWins) {
  const std::vector<SuffixRule> rules = {{"s", PartOfSpeech::VERB}, {"ous", PartOfSpeech::ADJ}};
  EXPECT_EQ(guess_category("famous", rules)->pos, PartOfSpeech::ADJ);
  EXPECT_EQ(guess_category("binds", rules)->pos, PartOfSpeech::VERB);
}

// Over every subset and ordering of a small rule set with distinct
// suffixes, the guess equals the longest applicable suffix's category.
TEST(Guess, OrderIndependentAndLongestFirst) {
  const std::vector<SuffixRule> all = {{"ase", PartOfSpeech::NOUN}, {"se", PartOfSpeech::VERB},
                                       {"ity", PartOfSpeech::NOUN}, {"al", PartOfSpeech::ADJ},
                                       {"ous", PartOfSpeech::ADJ},  {"e", PartOfSpeech::ADV}};
  std::mt19937_64 rng(9);
  const std::string letters = "aeioulstyr";
  std::vector<std::string> surfaces = {"kinase", "phase", "ase", "se", "ity", "normal", "famous", "e"};
  for (int i = 0; i < 300; ++i) {
    std::string s;
    for (int n = std::uniform_int_distribution<int>(1, 7)(rng); n > 0; --n) {
      s += letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)];
    }
    surfaces.push_back(s);
  }
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    std::vector<SuffixRule> subset;
    for (std::size_t r = 0; r < all.size(); ++r) {
      if (mask & (1u << r)) subset.push_back(all[r]);
    }
    for (const auto& s : surfaces) {
      std::optional<PartOfSpeech> expected;
      std::size_t best = 0;
      for (const auto& r : subset) {
        if (r.suffix.size() < s.size() && s.ends_with(r.suffix) && r.suffix.size() > best) {
          best = r.suffix.size();
          expected = r.pos;
        }
      }
      std::vector<SuffixRule> shuffled = subset;
      for (int k = 0; k < 3; ++k) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto got = guess_category(s, shuffled);
        ASSERT_EQ(got.has_value(), expected.has_value()) << s;
        if (got) {
          ASSERT_EQ(got->pos, *expected) << s;
          ASSERT_EQ(shuffled[got->rule].pos, got->pos);
        }
      }
    }
  }
}

TEST(Lexicon, FileFormats) {
  MorphLexicon lex;
  lex.parse_entries("# comment\nbinds\tVERB\tbind\n53\tNUM\t-\nfoo\tNOUN\n", "lex.tsv");
  EXPECT_EQ(lex.size(), 3u);
  EXPECT_EQ(lex.lookup("BINDS")->lemma, "bind");
  EXPECT_FALSE(lex.lookup("53")->lemma.has_value());
  EXPECT_FALSE(lex.lookup("foo")->lemma.has_value());

  const auto rules = MorphLexicon::parse_suffix_rules("-ase\tNOUN\nous\tADJ\n", "rules.tsv");
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].suffix, "ase");
  EXPECT_EQ(rules[1].pos, PartOfSpeech::ADJ);
}

TEST(Lexicon, LoadErrorsCarryLineNumbers) {
  MorphLexicon lex;
  try {
    lex.parse_entries("binds\tVERB\tbind\nx\tVERBAL\tx\n", "lex.tsv");
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(MorphLexicon::parse_suffix_rules("-\tNOUN\n", "r"), ResourceError);
  EXPECT_THROW(MorphLexicon::parse_suffix_rules("ase\n", "r"), ResourceError);
}

TEST(Lexicon, ShippedSuffixRulesAreTheCitedOnes) {
  const auto rules = MorphLexicon::parse_suffix_rules(
      io::read_file(std::string(OGMIOS_SOURCE_DIR) + "/resources/suffix_rules.tsv"), "suffix_rules.tsv");
  ASSERT_EQ(rules.size(), default_suffix_rules().size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_EQ(rules[i].suffix, default_suffix_rules()[i].suffix);
    EXPECT_EQ(rules[i].pos, default_suffix_rules()[i].pos);
  }
}

}  // namespace
}  // namespace ogmios
