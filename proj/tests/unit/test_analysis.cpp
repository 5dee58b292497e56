#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "epu/analysis.hpp"
#include "epu/error.hpp"
#include "oracles.hpp"

using epu::Month;

namespace {

epu::MonthlySeries series(const std::string& label, Month start, const std::vector<double>& xs) {
  epu::MonthlySeries s;
  s.label = label;
  s.stage = epu::Stage::Standardized;
  for (double x : xs) {
    s.values[start] = x;
    start = start.next();
  }
  return s;
}

std::vector<double> noise(int n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(Align, Intersections) {
  std::vector<epu::MonthlySeries> same{series("a", Month(2015, 1), noise(48, 1)), series("b", Month(2015, 1), noise(48, 2))};
  EXPECT_EQ(epu::align(same).months.size(), 48u);
  std::vector<epu::MonthlySeries> overlap{series("a", Month(2015, 1), noise(48, 1)),
                                          series("b", Month(2016, 1), noise(36, 2))};
  auto al = epu::align(overlap);
  EXPECT_EQ(al.months.size(), 36u);
  EXPECT_EQ(al.months.front(), Month(2016, 1));
  std::vector<epu::MonthlySeries> disjoint{series("a", Month(2015, 1), noise(12, 1)),
                                           series("b", Month(2017, 1), noise(12, 2))};
  EXPECT_THROW(epu::align(disjoint), epu::Error);
}

TEST(Align, SkipsMissingMonths) {
  auto a = series("a", Month(2015, 1), noise(12, 1));
  auto b = series("b", Month(2015, 1), noise(12, 2));
  a.values[Month(2015, 4)] = std::nullopt;
  std::vector<epu::MonthlySeries> v{a, b};
  EXPECT_EQ(epu::align(v).months.size(), 11u);
}

TEST(Pearson, Examples) {
  std::vector<double> x{1, 2, 3}, y{1, 2, 4}, neg{-1, -2, -3};
  EXPECT_NEAR(epu::pearson(x, x), 1.0, 1e-15);
  EXPECT_NEAR(epu::pearson(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(epu::pearson(x, y), 0.9819805, 1e-6);
  std::vector<double> flat{2, 2, 2};
  EXPECT_THROW(epu::pearson(x, flat), epu::NumericError);
}

TEST(Pearson, AffineInvarianceAndOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto x = noise(40, seed), y = noise(40, seed + 1000);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.5 * x[i];
    double r = epu::pearson(x, y);
    EXPECT_NEAR(r, oracle::pearson(x, y), 1e-12);
    auto ax = x;
    for (auto& v : ax) v = 3.0 * v + 10.0;
    EXPECT_NEAR(epu::pearson(ax, y), r, 1e-12);
    for (auto& v : ax) v = -v;
    EXPECT_NEAR(epu::pearson(ax, y), -r, 1e-12);
  }
}

TEST(Spearman, TiesAndOracle) {
  std::vector<double> x{1, 2, 2, 3, 0, 0, 0}, y{3, 5, 4, 9, 1, 1, 2};
  EXPECT_EQ(epu::average_ranks(x), oracle::ranks(x));
  EXPECT_NEAR(epu::spearman(x, y), oracle::spearman(x, y), 1e-12);
  std::vector<double> mono{1, 4, 9, 16}, lin{1, 2, 3, 4};
  EXPECT_NEAR(epu::spearman(mono, lin), 1.0, 1e-15);
}

TEST(PValue, Examples) {
  EXPECT_EQ(epu::pearson_pvalue(0.0, 30), 1.0);
  EXPECT_EQ(epu::pearson_pvalue(1.0, 30), 0.0);
  EXPECT_EQ(epu::pearson_pvalue(-1.0, 30), 0.0);
  EXPECT_LT(epu::pearson_pvalue(0.5771, 48), 0.01);
  EXPECT_NEAR(epu::pearson_pvalue(0.9, 5), 0.037, 5e-4);
}

TEST(PValue, MatchesQuadratureOracle) {
  for (double r : {0.05, 0.2, 0.35, 0.5, 0.7, 0.9, -0.4}) {
    for (std::size_t n : {5u, 12u, 48u, 200u}) {
      double t = r * std::sqrt((n - 2.0) / (1.0 - r * r));
      EXPECT_NEAR(epu::pearson_pvalue(r, n), oracle::t_two_sided_p(t, n - 2.0), 1e-7) << r << " " << n;
    }
  }
}

TEST(Significance, Levels) {
  EXPECT_EQ(epu::significance_level(0.004), "<1%");
  EXPECT_EQ(epu::significance_level(0.03), "<5%");
  EXPECT_EQ(epu::significance_level(0.2), "ns");
}

TEST(CorrelationMatrix, IdenticalAndNegated) {
  auto x = noise(24, 3);
  std::vector<epu::MonthlySeries> same{series("a", Month(2015, 1), x), series("b", Month(2015, 1), x),
                                       series("c", Month(2015, 1), x)};
  auto m = epu::correlation_matrix(same);
  EXPECT_LT((m.r - Eigen::MatrixXd::Ones(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  auto nx = x;
  for (auto& v : nx) v = -v;
  std::vector<epu::MonthlySeries> pair{series("a", Month(2015, 1), x), series("b", Month(2015, 1), nx)};
  EXPECT_NEAR(epu::correlation_matrix(pair).r(0, 1), -1.0, 1e-12);
}

TEST(CorrelationMatrix, SymmetricUnitDiagonalPsd) {
  std::vector<epu::MonthlySeries> s;
  for (int i = 0; i < 6; ++i) s.push_back(series("s" + std::to_string(i), Month(2015, 1), noise(48, 100 + i)));
  auto m = epu::correlation_matrix(s);
  EXPECT_EQ(m.n, 48u);
  EXPECT_EQ(m.r, m.r.transpose());
  for (int i = 0; i < 6; ++i) EXPECT_EQ(m.r(i, i), 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.r);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8);
}

TEST(CorrelationMatrix, NoisyCopyBeatsIndependent) {
  auto base = noise(48, 7);
  auto noisy = base;
  auto eps = noise(48, 8, 0.05);
  for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] += eps[i];
  std::vector<epu::MonthlySeries> fam{series("s", Month(2015, 1), base), series("n", Month(2015, 1), noisy),
                                      series("i", Month(2015, 1), noise(48, 9))};
  auto m = epu::correlation_matrix(fam);
  EXPECT_GT(m.r(0, 1), m.r(0, 2));
  EXPECT_NEAR(m.r(0, 1), oracle::pearson(base, noisy), 1e-12);
}

TEST(MatrixCsv, RoundTripAndPairs) {
  std::vector<epu::MonthlySeries> s{series("a", Month(2015, 1), noise(20, 1)), series("b,c", Month(2015, 1), noise(20, 2)),
                                    series("d", Month(2015, 1), noise(20, 3))};
  auto m = epu::correlation_matrix(s);
  std::ostringstream out;
  epu::write_matrix_csv(out, m);
  std::istringstream in(out.str());
  auto back = epu::read_matrix_csv(in);
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.r, m.r);
  std::ostringstream pairs;
  epu::write_pairs_csv(pairs, m);
  const std::string text = pairs.str();
  EXPECT_EQ(text.substr(0, 15), "a,b,r,p,level,n");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Hcluster, TwoSeriesSingleMerge) {
  epu::CorrelationMatrix m;
  m.labels = {"x", "y"};
  m.r = Eigen::Matrix2d{{1, 0.3}, {0.3, 1}};
  auto d = epu::hcluster(m);
  ASSERT_EQ(d.merges.size(), 1u);
  EXPECT_NEAR(d.merges[0].distance, 0.7, 1e-15);
  EXPECT_EQ(d.merges[0].size, 2);
}

TEST(Hcluster, NearDuplicatesMergeFirst) {
  auto a = noise(48, 21), c = noise(48, 22), b = a;
  auto eps = noise(48, 23, 0.1);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += eps[i];
  std::vector<epu::MonthlySeries> s{series("C", Month(2015, 1), c), series("A", Month(2015, 1), a),
                                    series("B", Month(2015, 1), b)};
  auto d = epu::hcluster(epu::correlation_matrix(s));
  std::set<int> first{d.merges[0].left, d.merges[0].right};
  EXPECT_EQ(first, (std::set<int>{1, 2}));
}

TEST(Hcluster, MergeDistancesMonotone) {
  std::vector<epu::MonthlySeries> s;
  for (int i = 0; i < 9; ++i) s.push_back(series("s" + std::to_string(i), Month(2015, 1), noise(48, 300 + i)));
  auto m = epu::correlation_matrix(s);
  for (auto linkage : {epu::Linkage::Average, epu::Linkage::Single, epu::Linkage::Complete}) {
    auto d = epu::hcluster(m, linkage);
    ASSERT_EQ(d.merges.size(), 8u);
    for (std::size_t i = 1; i < d.merges.size(); ++i) EXPECT_GE(d.merges[i].distance, d.merges[i - 1].distance - 1e-12);
    EXPECT_EQ(d.merges.back().size, 9);
  }
}

TEST(Hcluster, LinkageRules) {
  // Leaves 0,1 at distance 1; leaf 2 at distance 2 from 0 and 4 from 1.
  Eigen::Matrix3d dist{{0, 1, 2}, {1, 0, 4}, {2, 4, 0}};
  std::vector<std::string> labels{"a", "b", "c"};
  EXPECT_DOUBLE_EQ(epu::hcluster(labels, dist, epu::Linkage::Single).merges[1].distance, 2.0);
  EXPECT_DOUBLE_EQ(epu::hcluster(labels, dist, epu::Linkage::Complete).merges[1].distance, 4.0);
  EXPECT_DOUBLE_EQ(epu::hcluster(labels, dist, epu::Linkage::Average).merges[1].distance, 3.0);
}

TEST(Hcluster, RelabelingInvariant) {
  std::vector<epu::MonthlySeries> s;
  for (int i = 0; i < 6; ++i) s.push_back(series("s" + std::to_string(i), Month(2015, 1), noise(48, 400 + i)));
  auto d1 = epu::hcluster(epu::correlation_matrix(s));
  std::vector<epu::MonthlySeries> rev(s.rbegin(), s.rend());
  auto d2 = epu::hcluster(epu::correlation_matrix(rev));
  ASSERT_EQ(d1.merges.size(), d2.merges.size());
  for (std::size_t i = 0; i < d1.merges.size(); ++i) EXPECT_NEAR(d1.merges[i].distance, d2.merges[i].distance, 1e-12);
}

TEST(Dendrogram, JsonShape) {
  Eigen::Matrix3d dist{{0, 1, 2}, {1, 0, 4}, {2, 4, 0}};
  auto d = epu::hcluster({"a", "b", "c"}, dist, epu::Linkage::Average);
  auto j = nlohmann::json::parse(d.to_json());
  EXPECT_EQ(j["labels"].size(), 3u);
  ASSERT_EQ(j["merges"].size(), 2u);
  EXPECT_EQ(j["merges"][0]["left"], 0);
  EXPECT_EQ(j["merges"][0]["right"], 1);
  EXPECT_EQ(j["merges"][1]["left"], 2);
  EXPECT_EQ(j["merges"][1]["right"], 3);
}

TEST(Linkage, Parse) {
  EXPECT_EQ(epu::parse_linkage("single"), epu::Linkage::Single);
  EXPECT_FALSE(epu::parse_linkage("ward"));
}
