#include "epu/analysis.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <ostream>

#include "epu/csv.hpp"
#include "epu/error.hpp"

namespace epu {

AlignedSeries align(std::span<const MonthlySeries> series) {
  if (series.size() < 2) throw Error("align: need at least 2 series");
  AlignedSeries out;
  for (const auto& [m, v] : series.front().values) {
    if (!v) continue;
    bool all = std::all_of(series.begin() + 1, series.end(), [&](const MonthlySeries& s) { return s.at(m).has_value(); });
    if (all) out.months.push_back(m);
  }
  if (out.months.size() < 3)
    throw Error("align: only " + std::to_string(out.months.size()) + " common months (need at least 3)");
  out.values.resize(static_cast<Eigen::Index>(out.months.size()), static_cast<Eigen::Index>(series.size()));
  for (std::size_t j = 0; j < series.size(); ++j) {
    out.labels.push_back(series[j].label);
    for (std::size_t i = 0; i < out.months.size(); ++i)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *series[j].at(out.months[i]);
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw NumericError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw NumericError("pearson: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  auto rx = average_ranks(x), ry = average_ranks(y);
  return pearson(rx, ry);
}

double pearson_pvalue(double r, std::size_t n) {
  if (n < 3) throw NumericError("pearson_pvalue: need n >= 3");
  if (std::abs(r) >= 1.0) return 0.0;
  if (r == 0.0) return 1.0;
  const double df = static_cast<double>(n - 2);
  const double t = std::abs(r) * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
}

std::string significance_level(double p) {
  if (p < 0.01) return "<1%";
  if (p < 0.05) return "<5%";
  return "ns";
}

CorrelationMatrix correlation_matrix(std::span<const MonthlySeries> series) {
  auto aligned = align(series);
  const auto k = aligned.values.cols();
  CorrelationMatrix m;
  m.labels = aligned.labels;
  m.n = aligned.months.size();
  m.r = Eigen::MatrixXd::Identity(k, k);
  m.p = Eigen::MatrixXd::Zero(k, k);
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j)
    cols[static_cast<std::size_t>(j)].assign(aligned.values.col(j).data(), aligned.values.col(j).data() + aligned.values.rows());
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      double r = pearson(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
      m.r(a, b) = m.r(b, a) = r;
      m.p(a, b) = m.p(b, a) = pearson_pvalue(r, m.n);
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const CorrelationMatrix& m) {
  out << "label";
  for (const auto& l : m.labels) out << ',' << csv_field(l);
  out << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << csv_field(m.labels[i]);
    for (std::size_t j = 0; j < m.labels.size(); ++j)
      out << ',' << format_double(m.r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

void write_pairs_csv(std::ostream& out, const CorrelationMatrix& m) {
  out << "a,b,r,p,level,n\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i)
    for (std::size_t j = i + 1; j < m.labels.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      out << csv_field(m.labels[i]) << ',' << csv_field(m.labels[j]) << ',' << format_double(m.r(a, b)) << ',' << format_double(m.p(a, b))
          << ',' << significance_level(m.p(a, b)) << ',' << m.n << '\n';
    }
}


CorrelationMatrix read_matrix_csv(std::istream& in) {
  CorrelationMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw Error("matrix CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "label") throw Error("matrix CSV: bad header");
  m.labels.assign(header.begin() + 1, header.end());
  const auto k = static_cast<Eigen::Index>(m.labels.size());
  m.r.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!std::getline(in, line)) throw Error("matrix CSV: missing rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto f = split_csv(line);
    if (static_cast<Eigen::Index>(f.size()) != k + 1 || f[0] != m.labels[static_cast<std::size_t>(i)])
      throw Error("matrix CSV: malformed row " + std::to_string(i + 2));
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& s = f[static_cast<std::size_t>(j + 1)];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), m.r(i, j));
      if (ec != std::errc() || p != s.data() + s.size()) throw Error("matrix CSV: bad value '" + s + "'");
    }
  }
  m.p = Eigen::MatrixXd::Constant(k, k, std::numeric_limits<double>::quiet_NaN());
  return m;
}

CorrelationMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path.string());
  return read_matrix_csv(in);
}

std::optional<Linkage> parse_linkage(std::string_view s) {
  if (s == "average") return Linkage::Average;
  if (s == "single") return Linkage::Single;
  if (s == "complete") return Linkage::Complete;
  return std::nullopt;
}

std::string Dendrogram::to_json() const {
  nlohmann::json j;
  j["labels"] = labels;
  j["merges"] = nlohmann::json::array();
  for (const auto& m : merges)
    j["merges"].push_back({{"left", m.left}, {"right", m.right}, {"distance", m.distance}, {"size", m.size}});
  return j.dump(2);
}

Dendrogram hcluster(const std::vector<std::string>& labels, const Eigen::MatrixXd& distance, Linkage linkage) {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(distance.rows()) != n || static_cast<std::size_t>(distance.cols()) != n)
    throw Error("hcluster: distance matrix does not match labels");
  Dendrogram out;
  out.labels = labels;
  if (n < 2) return out;

  struct Cluster {
    int id;
    int size;
    std::string key;  // smallest leaf label
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({static_cast<int>(i), 1, labels[i]});
  Eigen::MatrixXd d = distance;

  while (active.size() > 1) {
    std::size_t ba = 0, bb = 1;
    auto tie_key = [&](std::size_t a, std::size_t b) {
      const auto& ka = active[a].key;
      const auto& kb = active[b].key;
      return ka < kb ? std::make_pair(ka, kb) : std::make_pair(kb, ka);
    };
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double cur = d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        const double best = d(static_cast<Eigen::Index>(ba), static_cast<Eigen::Index>(bb));
        if (cur < best || (cur == best && tie_key(a, b) < tie_key(ba, bb))) {
          ba = a;
          bb = b;
        }
      }
    if (active[bb].key < active[ba].key) std::swap(ba, bb);
    const auto ia = static_cast<Eigen::Index>(ba), ib = static_cast<Eigen::Index>(bb);
    const int sa = active[ba].size, sb = active[bb].size;
    out.merges.push_back({std::min(active[ba].id, active[bb].id), std::max(active[ba].id, active[bb].id), d(ia, ib), sa + sb});

    // Lance–Williams update into slot ba; slot bb is removed.
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(active.size()); ++k) {
      if (k == ia || k == ib) continue;
      double v = 0.0;
      switch (linkage) {
        case Linkage::Single:
          v = std::min(d(ia, k), d(ib, k));
          break;
        case Linkage::Complete:
          v = std::max(d(ia, k), d(ib, k));
          break;
        case Linkage::Average:
          v = (sa * d(ia, k) + sb * d(ib, k)) / (sa + sb);
          break;
      }
      d(ia, k) = d(k, ia) = v;
    }
    active[ba] = {static_cast<int>(n + out.merges.size() - 1), sa + sb, std::min(active[ba].key, active[bb].key)};
    const Eigen::Index last = static_cast<Eigen::Index>(active.size()) - 1;
    if (ib != last) {
      d.row(ib).swap(d.row(last));
      d.col(ib).swap(d.col(last));
      std::swap(active[bb], active.back());
    }
    active.pop_back();
    d.conservativeResize(last, last);
  }
  return out;
}

Dendrogram hcluster(const CorrelationMatrix& matrix, Linkage linkage) {
  Eigen::MatrixXd dist = 1.0 - matrix.r.array();
  dist.diagonal().setZero();
  return hcluster(matrix.labels, dist, linkage);
}

}  // namespace epu
