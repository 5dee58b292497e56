#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "epu/baselines.hpp"
#include "epu/error.hpp"
#include "fixtures.hpp"

using epu::Month;

namespace {

epu::KeywordSets sets() {
  std::istringstream in(
      "# keyword groups\n[economy]\neconomy\nEconomic\n\n[policy]\npolicy\ngovernment\n[uncertainty]\nuncertainty\nrisk\n");
  return epu::parse_keywords(in);
}

std::vector<std::string> toks(const std::string& s) { return epu::tokenize(s); }

std::string day(int month, int d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "2015-%02d-%02d", month, d);
  return buf;
}

}  // namespace

TEST(Keywords, ParsesAndNormalizes) {
  auto s = sets();
  EXPECT_TRUE(s.economy.contains("economic"));
  EXPECT_EQ(s.policy.size(), 2u);
  std::istringstream unknown("[economy]\na\n[foo]\nb\n");
  EXPECT_THROW(epu::parse_keywords(unknown), epu::ConfigError);
  std::istringstream empty_group("[economy]\na\n[policy]\nb\n[uncertainty]\n");
  EXPECT_THROW(epu::parse_keywords(empty_group), epu::ConfigError);
  EXPECT_THROW(epu::load_keywords("/nonexistent/keywords.txt"), epu::IoError);
}

TEST(BbdMatch, Examples) {
  auto s = sets();
  EXPECT_TRUE(epu::bbd_match(toks("the economy policy uncertainty"), s));
  EXPECT_FALSE(epu::bbd_match(toks("economy and uncertainty"), s));
  EXPECT_FALSE(epu::bbd_match({}, s));
}

TEST(BbdMatch, MonotoneUnderAddedTokens) {
  auto s = sets();
  std::mt19937 rng(3);
  const char* pool[] = {"economy", "policy", "risk", "apple", "tree", "government", "x"};
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> t;
    for (int k = 0; k < 4; ++k) t.push_back(pool[rng() % 7]);
    bool before = epu::bbd_match(t, s);
    t.push_back(pool[rng() % 7]);
    if (before) EXPECT_TRUE(epu::bbd_match(t, s));
  }
}

TEST(Bbd, FiveOfFifty) {
  std::vector<epu::Document> docs;
  for (int i = 0; i < 50; ++i)
    docs.push_back(fixture::doc("a" + std::to_string(i), day(1, 1 + i % 28), i < 5 ? "economy policy risk" : "other"));
  for (int i = 0; i < 20; ++i)
    docs.push_back(fixture::doc("b" + std::to_string(i), day(2, 1 + i % 28), i < 1 ? "economy policy risk" : "x"));
  auto c = fixture::corpus(docs);
  auto raw = epu::bbd_raw(c, sets(), 2);
  EXPECT_NEAR(*raw.at(Month(2015, 1)), 0.1, 1e-15);
  EXPECT_NEAR(*raw.at(Month(2015, 2)), 0.05, 1e-15);
  for (double v : raw.present_values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  auto z = epu::bbd_index(c, sets());
  EXPECT_EQ(z.stage, epu::Stage::Standardized);
  EXPECT_NEAR(*z.at(Month(2015, 1)), 1.0, 1e-12);
}

TEST(Bbd, ZeroMatchesSurfaceStandardizationError) {
  auto c = fixture::corpus({fixture::doc("a", day(1, 2), "nothing"), fixture::doc("b", day(2, 2), "here")});
  EXPECT_THROW(epu::bbd_index(c, sets()), epu::NumericError);
}

namespace {

// Month 1: `u` uncertainty-only docs, `p` economy+policy docs, plus filler.
epu::Corpus braun_corpus(int u1, int p1, int u2, int p2) {
  std::vector<epu::Document> docs;
  int id = 0;
  auto add = [&](int month, int n, const std::string& text) {
    for (int i = 0; i < n; ++i) docs.push_back(fixture::doc(std::to_string(id++), day(month, 1 + i % 28), text));
  };
  add(1, u1, "risk ahead");
  add(1, p1, "economy government plan");
  add(1, 3, "filler");
  add(2, u2, "uncertainty");
  add(2, p2, "economic policy");
  add(2, 3, "filler");
  return fixture::corpus(docs);
}

}  // namespace

TEST(Braun, ProductOfCounts) {
  auto raw = epu::braun_raw(braun_corpus(3, 4, 0, 5), sets());
  EXPECT_EQ(*raw.at(Month(2015, 1)), 12.0);
  EXPECT_EQ(*raw.at(Month(2015, 2)), 0.0);
  EXPECT_EQ(raw.stage, epu::Stage::Raw);
  for (double v : raw.present_values()) EXPECT_EQ(v, std::floor(v));
}

TEST(Braun, DoublingBothFactorsQuadruples) {
  auto a = epu::braun_raw(braun_corpus(3, 4, 1, 1), sets());
  auto b = epu::braun_raw(braun_corpus(6, 8, 1, 1), sets());
  EXPECT_EQ(*b.at(Month(2015, 1)), 4 * *a.at(Month(2015, 1)));
}

TEST(Braun, TopicFilterAndNormalize) {
  std::vector<epu::Document> docs{
      fixture::doc("1", day(1, 1), "risk"),
      fixture::doc("2", day(1, 2), "government budget", "economy"),
      fixture::doc("3", day(1, 3), "government budget", "sports"),
      fixture::doc("4", day(1, 4), "nothing"),
  };
  auto c = fixture::corpus(docs);
  epu::BraunOptions opts;
  opts.econ_filter.kind = epu::EconFilter::Kind::Topic;
  EXPECT_EQ(*epu::braun_raw(c, sets(), opts).at(Month(2015, 1)), 1.0);
  opts.normalize = true;
  auto n = epu::braun_raw(c, sets(), opts);
  EXPECT_EQ(n.stage, epu::Stage::Normalized);
  EXPECT_NEAR(*n.at(Month(2015, 1)), 1.0 / 16.0, 1e-15);
}

TEST(Braun, JointMode) {
  std::vector<epu::Document> docs{
      fixture::doc("1", day(1, 1), "risk economy policy"),
      fixture::doc("2", day(1, 2), "risk"),
      fixture::doc("3", day(1, 3), "economy policy"),
  };
  epu::BraunOptions opts;
  opts.mode = epu::BraunOptions::Mode::Joint;
  EXPECT_EQ(*epu::braun_raw(fixture::corpus(docs), sets(), opts).at(Month(2015, 1)), 1.0);
}

TEST(Baselines, DeterministicAndOrderIndependent) {
  std::mt19937 rng(19);
  const char* pool[] = {"economy", "policy", "risk", "uncertainty", "tree", "government", "x", "y"};
  std::vector<epu::Document> docs;
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    for (int k = 0; k < 6; ++k) text += std::string(pool[rng() % 8]) + " ";
    docs.push_back(fixture::doc(std::to_string(i), day(1 + i % 12, 1 + i % 28), text));
  }
  auto a = fixture::corpus(docs);
  std::shuffle(docs.begin(), docs.end(), rng);
  auto b = fixture::corpus(docs);
  EXPECT_EQ(epu::bbd_index(a, sets(), 1).values, epu::bbd_index(b, sets(), 3).values);
  EXPECT_EQ(epu::braun_index(a, sets(), {}, 1).values, epu::braun_index(b, sets(), {}, 3).values);
}
