#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "epu/error.hpp"
#include "epu/scoring.hpp"
#include "epu/series.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using epu::Month;

namespace {

// Orthogonal seeds plus a policy-ish word at cosine 0.45.
epu::EmbeddingTable toy_table() {
  epu::EmbeddingTable t(4);
  auto add = [&](const char* w, std::vector<double> x) { t.add(w, x); };
  add("economy", {1, 0, 0, 0});
  add("policy", {0, 1, 0, 0});
  add("uncertainty", {0, 0, 1, 0});
  add("fiscal", {0.8, 0, 0, 0.6});
  add("regulation", {0, 0.45, 0, std::sqrt(1 - 0.45 * 0.45)});
  add("noise", {0, 0, 0, 1});
  return t;
}

std::vector<std::string> toks(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST(ScoreDocument, AllThreeSeeds) {
  auto t = toy_table();
  auto c = epu::make_concepts(t, {"economy", "policy", "uncertainty"});
  auto s = epu::score_tokens(toks({"economy", "policy", "uncertainty"}), c, t, 0.5);
  EXPECT_EQ(s.triple, (epu::ConceptTriple{1, 1, 1}));
  EXPECT_NEAR(s.score, 1.29904, 1e-5);
}

TEST(ScoreDocument, NoVocabulary) {
  auto t = toy_table();
  auto c = epu::make_concepts(t, {"economy", "policy", "uncertainty"});
  auto s = epu::score_tokens(toks({"foo", "bar"}), c, t, 0.5);
  EXPECT_EQ(s.triple, (epu::ConceptTriple{0, 0, 0}));
  EXPECT_EQ(s.score, 0.0);
}

TEST(ScoreDocument, SubThresholdPolicyZeroesScore) {
  auto t = toy_table();
  auto c = epu::make_concepts(t, {"economy", "policy", "uncertainty"});
  auto s = epu::score_tokens(toks({"fiscal", "regulation", "uncertainty"}), c, t, 0.5);
  EXPECT_NEAR(s.triple.alpha, 0.8, 1e-12);
  EXPECT_EQ(s.triple.beta, 0.0);
  EXPECT_EQ(s.triple.gamma, 1.0);
  EXPECT_EQ(s.score, 0.0);
}

TEST(ScoreDocument, IndexMatchesReferencePath) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n(0, 1);
  epu::EmbeddingTable t(8);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> x(8);
    for (auto& v : x) v = n(rng);
    t.add("w" + std::to_string(i), x);
  }
  auto c = epu::make_concepts(t, {"w0", "w1", "w2"});
  std::vector<epu::Document> docs;
  std::uniform_int_distribution<int> pick(0, 320);
  for (int d = 0; d < 400; ++d) {
    epu::Document doc;
    doc.id = std::to_string(d);
    for (int k = 0; k < 30; ++k) doc.tokens.push_back("w" + std::to_string(pick(rng)));
    docs.push_back(doc);
  }
  epu::ConceptSimilarityIndex index(t, c, 2);
  auto serial = epu::score_documents_serial(docs, c, t, 0.3);
  for (int threads : {1, 2, 3}) EXPECT_EQ(epu::score_documents(docs, index, 0.3, threads), serial);
  int nonzero = std::count_if(serial.begin(), serial.end(), [](const auto& s) { return s.score > 0; });
  EXPECT_GT(nonzero, 0);
}

namespace {

epu::CorpusStats month_totals(std::initializer_list<std::pair<Month, std::uint64_t>> totals) {
  epu::CorpusStats s;
  for (auto [m, n] : totals) {
    s.docs_per_month[m] = n;
    s.total_docs += n;
  }
  return s;
}

}  // namespace

TEST(Aggregate, Examples) {
  Month jan(2015, 1), feb(2015, 2);
  auto stats = month_totals({{jan, 10}, {feb, 100}});
  std::vector<std::pair<Month, double>> scores{{jan, 1.0}, {jan, 0.5}, {jan, 0.0}};
  auto s = epu::aggregate_monthly(scores, stats, "epu");
  EXPECT_EQ(s.stage, epu::Stage::Normalized);
  EXPECT_NEAR(*s.at(jan), 0.15, 1e-15);
  EXPECT_EQ(*s.at(feb), 0.0);
}

TEST(Aggregate, IdenticalMonthsIdenticalValues) {
  Month a(2015, 1), b(2015, 2);
  auto stats = month_totals({{a, 3}, {b, 3}});
  std::vector<std::pair<Month, double>> scores{{a, 0.1}, {a, 0.7}, {b, 0.7}, {b, 0.1}};
  auto s = epu::aggregate_monthly(scores, stats, "epu");
  EXPECT_EQ(*s.at(a), *s.at(b));
}

TEST(Aggregate, ScoresWithoutArticlesIsAnError) {
  auto stats = month_totals({{Month(2015, 1), 5}});
  std::vector<std::pair<Month, double>> scores{{Month(2015, 2), 0.3}};
  EXPECT_THROW(epu::aggregate_monthly(scores, stats, "epu"), epu::Error);
}

TEST(Aggregate, GapMonthsAreMissing) {
  auto stats = month_totals({{Month(2015, 1), 5}, {Month(2015, 3), 5}});
  std::vector<std::pair<Month, double>> scores{{Month(2015, 1), 1.0}};
  auto s = epu::aggregate_monthly(scores, stats, "epu");
  ASSERT_EQ(s.values.size(), 3u);
  EXPECT_FALSE(s.at(Month(2015, 2)).has_value());
  EXPECT_EQ(s.present_values().size(), 2u);
}

TEST(Aggregate, OrderAndPartitionIndependent) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 1.3);
  std::vector<std::pair<Month, double>> scores;
  epu::CorpusStats stats;
  for (int i = 0; i < 5000; ++i) {
    Month m(2015, 1 + i % 12);
    scores.emplace_back(m, u(rng));
    stats.docs_per_month[m] += 1;
  }
  auto base = epu::aggregate_monthly(scores, stats, "x");
  std::shuffle(scores.begin(), scores.end(), rng);
  EXPECT_EQ(epu::aggregate_monthly(scores, stats, "x").values, base.values);

  epu::MonthlyAccumulator parts[3];
  for (std::size_t i = 0; i < scores.size(); ++i) parts[i % 3].add(scores[i].first, scores[i].second);
  parts[2].merge(std::move(parts[0]));
  parts[2].merge(std::move(parts[1]));
  EXPECT_EQ(epu::aggregate_monthly(parts[2], stats, "x").values, base.values);
}

TEST(Aggregate, PositiveScalingScalesRawLeavesStandardized) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0, 1.3);
  std::vector<std::pair<Month, double>> scores, scaled;
  epu::CorpusStats stats;
  for (int i = 0; i < 1000; ++i) {
    Month m(2016, 1 + i % 12);
    double v = u(rng) * (1 + i % 5);
    scores.emplace_back(m, v);
    scaled.emplace_back(m, 2.5 * v);
    stats.docs_per_month[m] += 1;
  }
  auto a = epu::aggregate_monthly(scores, stats, "x");
  auto b = epu::aggregate_monthly(scaled, stats, "x");
  for (const auto& [m, v] : a.values) EXPECT_NEAR(*b.at(m), 2.5 * *v, 1e-12);
  auto sa = epu::standardize(a), sb = epu::standardize(b);
  for (const auto& [m, v] : sa.values) EXPECT_NEAR(*sb.at(m), *v, 1e-9);
}

namespace {

epu::MonthlySeries series_of(std::vector<double> xs) {
  epu::MonthlySeries s;
  s.label = "s";
  s.stage = epu::Stage::Normalized;
  Month m(2015, 1);
  for (double x : xs) {
    s.values[m] = x;
    m = m.next();
  }
  return s;
}

}  // namespace

TEST(Standardize, OneTwoThree) {
  auto z = epu::standardize(series_of({1, 2, 3}));
  auto v = z.present_values();
  EXPECT_EQ(z.stage, epu::Stage::Standardized);
  EXPECT_NEAR(v[0], -1.2247449, 1e-7);
  EXPECT_NEAR(v[1], 0.0, 1e-15);
  EXPECT_NEAR(v[2], 1.2247449, 1e-7);
}

TEST(Standardize, FixedPointAndMoments) {
  std::mt19937_64 rng(53);
  std::lognormal_distribution<double> d(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs(48);
    for (auto& x : xs) x = d(rng) * 1e3;
    auto z = epu::standardize(series_of(xs));
    auto v = z.present_values();
    double mean = oracle::mean(v), var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    EXPECT_LT(std::abs(mean), 1e-9);
    EXPECT_NEAR(std::sqrt(var / v.size()), 1.0, 1e-9);
    auto again = epu::standardize(z).present_values();
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(again[i], v[i], 1e-9);
  }
}

TEST(Standardize, ConstantSeriesErrors) {
  EXPECT_THROW(epu::standardize(series_of({2, 2, 2, 2})), epu::NumericError);
  EXPECT_THROW(epu::standardize(series_of({2})), epu::NumericError);
  try {
    epu::standardize(series_of({0, 0, 0}));
  } catch (const epu::NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
  }
}

TEST(Standardize, MissingMonthsStayMissing) {
  auto s = series_of({1, 2, 3, 4});
  s.values[Month(2015, 2)] = std::nullopt;
  auto z = epu::standardize(s);
  EXPECT_FALSE(z.at(Month(2015, 2)).has_value());
  EXPECT_EQ(z.present_values().size(), 3u);
}

TEST(Standardize, UncenteredOption) {
  epu::StandardizeOptions opts;
  opts.center = false;
  auto v = epu::standardize(series_of({1, 2, 3}), opts).present_values();
  EXPECT_NEAR(v[0], 1.0 / std::sqrt(2.0 / 3.0), 1e-12);
}

TEST(SeriesCsv, RoundTrip) {
  auto s = series_of({0.1, -3.25e-9, 1e300});
  s.values[Month(2015, 2)] = std::nullopt;
  s.label = "epu, weekly \"v2\"";
  std::ostringstream out;
  epu::write_series_csv(out, s);
  EXPECT_EQ(out.str().substr(0, 24), "month,value,stage,label\n");
  EXPECT_NE(out.str().find("2015-02,NA,normalized"), std::string::npos);
  std::istringstream in(out.str());
  auto back = epu::read_series_csv(in);
  EXPECT_EQ(back.label, s.label);
  EXPECT_EQ(back.stage, s.stage);
  EXPECT_EQ(back.values, s.values);
}

TEST(SeriesCsv, RejectsBadInput) {
  std::istringstream bad_header("a,b\n2015-01,1,raw,x\n");
  EXPECT_THROW(epu::read_series_csv(bad_header), epu::Error);
  std::istringstream bad_month("month,value,stage,label\n2015-13,1,raw,x\n");
  EXPECT_THROW(epu::read_series_csv(bad_month), epu::Error);
}
