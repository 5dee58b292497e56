#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "epu/error.hpp"
#include "epu/scoring.hpp"
#include "epu/synth.hpp"
#include "epu/tokenizer.hpp"

namespace fs = std::filesystem;

namespace {

epu::SynthSpec small_spec() {
  epu::SynthSpec spec;
  for (epu::Month m(2016, 1); m <= epu::Month(2016, 6); m = m.next()) spec.months.push_back(m);
  spec.base_docs_per_month = 60;
  return spec;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Synth, ZeroIntensityPlantsNothing) {
  auto spec = small_spec();
  auto s = epu::generate_synthetic(spec);
  for (const auto& [m, t] : s.truth) EXPECT_EQ(t.dense_docs, 0) << m.str();

  // Filler documents never clear the gate on all three concepts.
  auto concepts = epu::make_concepts(s.embeddings, spec.vocabulary.seeds);
  for (auto& d : s.documents) {
    auto tokens = epu::tokenize(d.title + "\n" + d.body);
    EXPECT_EQ(epu::score_tokens(tokens, concepts, s.embeddings, 0.5).score, 0.0) << d.id;
  }
}

TEST(Synth, SameSeedSameBytes) {
  auto a = fs::temp_directory_path() / "epu_synth_a";
  auto b = fs::temp_directory_path() / "epu_synth_b";
  auto spec = small_spec();
  spec.shock_months[epu::Month(2016, 3)] = 0.7;
  epu::write_synthetic(a, epu::generate_synthetic(spec));
  epu::write_synthetic(b, epu::generate_synthetic(spec));
  for (const char* f : {"corpus.jsonl", "shocks.csv", "monthly_truth.csv", "quarterly_wui.csv", "embeddings.txt",
                        "keywords.txt"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty()) << f;
  }
  spec.seed = 43;
  epu::write_synthetic(b, epu::generate_synthetic(spec));
  EXPECT_NE(slurp(a / "corpus.jsonl"), slurp(b / "corpus.jsonl"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Synth, ShockPlantsMoreDenseDocs) {
  auto on = small_spec();
  auto off = small_spec();
  on.shock_months[epu::Month(2016, 3)] = 1.0;
  off.shock_months[epu::Month(2016, 3)] = 0.0;
  auto a = epu::generate_synthetic(on);
  auto b = epu::generate_synthetic(off);
  EXPECT_GT(a.truth.at(epu::Month(2016, 3)).dense_docs, b.truth.at(epu::Month(2016, 3)).dense_docs);

  // The planted dense documents score above zero.
  auto concepts = epu::make_concepts(a.embeddings, on.vocabulary.seeds);
  int scored = 0;
  for (auto& d : a.documents) {
    if (d.month() != epu::Month(2016, 3)) continue;
    if (epu::score_tokens(epu::tokenize(d.title + "\n" + d.body), concepts, a.embeddings, 0.5).score > 0) ++scored;
  }
  EXPECT_EQ(scored, a.truth.at(epu::Month(2016, 3)).dense_docs);
}

TEST(Synth, PlantedSimilarityBands) {
  auto spec = small_spec();
  auto s = epu::generate_synthetic(spec);
  auto concepts = epu::make_concepts(s.embeddings, spec.vocabulary.seeds);
  for (int c = 0; c < 3; ++c) {
    for (const auto& w : s.near_words[c]) {
      if (w == spec.vocabulary.seeds[c]) continue;
      double sim = epu::cosine(s.embeddings.vector(w), concepts.vectors[c]);
      EXPECT_GE(sim, spec.vocabulary.near_min_sim - 1e-9) << w;
      EXPECT_LE(sim, spec.vocabulary.near_max_sim + 1e-9) << w;
    }
    for (const auto& w : s.weak_words[c]) {
      double sim = epu::cosine(s.embeddings.vector(w), concepts.vectors[c]);
      EXPECT_GE(sim, spec.vocabulary.weak_min_sim - 1e-9) << w;
      EXPECT_LE(sim, spec.vocabulary.weak_max_sim + 1e-9) << w;
    }
  }
}

TEST(Synth, EmptyMonthsIsAnError) {
  epu::SynthSpec spec;
  EXPECT_THROW(epu::generate_synthetic(spec), epu::ConfigError);
}

TEST(Synth, ParsesJsonSpec) {
  auto spec = epu::parse_synth_spec(R"({"start":"2015-01","end":"2015-12","base_docs_per_month":250,
      "shock_months":{"2015-06":0.5},"seed":9})");
  EXPECT_EQ(spec.months.size(), 12u);
  EXPECT_EQ(spec.base_docs_per_month, 250);
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_DOUBLE_EQ(spec.shock_months.at(epu::Month(2015, 6)), 0.5);
  EXPECT_THROW(epu::parse_synth_spec(R"({"start":"2015-01","end":"2015-12","shock_months":{"2015-06":1.5}})"),
               epu::ConfigError);
  EXPECT_THROW(epu::parse_synth_spec(R"({"start":"2015-01","end":"2015-12","no_such_field":1})"), epu::ConfigError);
}
