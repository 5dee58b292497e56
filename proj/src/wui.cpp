#include "epu/wui.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "epu/error.hpp"

namespace epu {

TermMatrix build_bulks(const Corpus& corpus, Granularity granularity, std::span<const std::string> vocabulary,
                       const MonthRange& range, std::vector<Diagnostic>* warnings, int threads) {
  TermMatrix out;
  out.columns.assign(vocabulary.begin(), vocabulary.end());
  std::unordered_map<std::string_view, Eigen::Index> column;
  for (std::size_t j = 0; j < out.columns.size(); ++j) column.emplace(out.columns[j], static_cast<Eigen::Index>(j));

  // Period index of a month, or -1 outside the range.
  std::vector<Month> months = range.months();
  std::map<int, int> row_of_month;
  if (granularity == Granularity::Month) {
    for (std::size_t i = 0; i < months.size(); ++i) {
      row_of_month[months[i].index()] = static_cast<int>(i);
      out.row_labels.push_back(months[i].str());
    }
  } else {
    std::map<Quarter, int> qrow;
    for (Month m : months) {
      auto q = Quarter::of(m);
      auto [it, inserted] = qrow.emplace(q, static_cast<int>(qrow.size()));
      if (inserted) out.row_labels.push_back(q.str());
      row_of_month[m.index()] = it->second;
    }
  }
  const auto rows = static_cast<Eigen::Index>(out.row_labels.size());
  const auto cols = static_cast<Eigen::Index>(out.columns.size());

  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(nthreads), Eigen::MatrixXd::Zero(rows, cols));
  std::vector<std::vector<std::uint64_t>> docs_in_row(static_cast<std::size_t>(nthreads),
                                                      std::vector<std::uint64_t>(static_cast<std::size_t>(rows), 0));
  const auto n = static_cast<std::int64_t>(corpus.documents.size());
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& doc = corpus.documents[static_cast<std::size_t>(i)];
    auto it = row_of_month.find(doc.month().index());
    if (it == row_of_month.end()) continue;
    const auto tid = static_cast<std::size_t>(omp_get_thread_num());
    auto& mat = partial[tid];
    ++docs_in_row[tid][static_cast<std::size_t>(it->second)];
    for (const auto& t : doc.tokens) {
      auto c = column.find(t);
      if (c != column.end()) mat(it->second, c->second) += 1.0;
    }
  }
  // counts are integers well below 2^53, so the sum is exact in any order
  out.values = Eigen::MatrixXd::Zero(rows, cols);
  std::vector<std::uint64_t> docs(static_cast<std::size_t>(rows), 0);
  for (std::size_t t = 0; t < partial.size(); ++t) {
    out.values += partial[t];
    for (std::size_t r = 0; r < docs.size(); ++r) docs[r] += docs_in_row[t][r];
  }
  if (warnings)
    for (std::size_t r = 0; r < docs.size(); ++r)
      if (docs[r] == 0) warnings->push_back({0, "period " + out.row_labels[r] + " has no documents; zero row"});
  return out;
}

std::map<Quarter, double> read_quarterly_csv(std::istream& in) {
  std::map<Quarter, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("quarter", 0) == 0) continue;
    auto comma = line.find(',');
    auto where = "quarterly CSV line " + std::to_string(line_no) + ": ";
    if (comma == std::string::npos) throw Error(where + "expected quarter,value");
    auto q = Quarter::parse(std::string_view(line).substr(0, comma));
    if (!q) throw Error(where + "bad quarter '" + line.substr(0, comma) + "'");
    double v = 0.0;
    const char* b = line.data() + comma + 1;
    const char* e = line.data() + line.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw Error(where + "bad value");
    out[*q] = v;
  }
  return out;
}

std::map<Quarter, double> read_quarterly_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open quarterly targets: " + path.string());
  return read_quarterly_csv(in);
}

WuiEstimate estimate_monthly_from_matrices(const TermMatrix& quarterly, std::span<const double> targets,
                                           const TermMatrix& monthly, const std::vector<Month>& months,
                                           const WuiConfig& config) {
  if (config.kmax < 1) throw ConfigError("kmax must be at least 1");
  const auto rows = quarterly.values.rows();
  const auto cols = quarterly.values.cols();
  long limit = std::min<long>(rows - 1, cols);
  if (config.mse == MseMode::LeaveOneOut) limit = std::min<long>(rows - 2, cols);
  if (limit < 1) throw ConfigError("too few quarterly rows or vocabulary columns for PLS");
  std::vector<int> ks;
  for (int k = 1; k <= std::min<long>(config.kmax, limit); ++k) ks.push_back(k);

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  WuiEstimate est;
  est.vocabulary = quarterly.columns;
  est.selection = select_components(quarterly.values, y, ks, config.mse, config.pls, config.threads);
  est.model = pls_fit(quarterly, targets, est.selection.best_k, config.pls);
  Eigen::VectorXd pred = pls_predict(est.model, monthly);

  est.predicted.label = "wui";
  est.predicted.stage = Stage::Raw;
  for (std::size_t i = 0; i < months.size(); ++i) est.predicted.values[months[i]] = pred(static_cast<Eigen::Index>(i));
  est.standardized = standardize(est.predicted);
  return est;
}

WuiEstimate estimate_monthly_wui(const Corpus& corpus, const std::map<Quarter, double>& quarterly_wui,
                                 const WuiConfig& config) {
  auto range = config.range ? config.range : stats_range(corpus.stats);
  if (!range) throw ConfigError("empty corpus");
  auto vocabulary = prune_vocabulary(corpus.stats, config.prune);
  if (vocabulary.empty()) throw ConfigError("vocabulary is empty after pruning");

  std::vector<Diagnostic> warnings;
  auto quarterly = build_bulks(corpus, Granularity::Quarter, vocabulary, *range, &warnings, config.threads);
  auto monthly = build_bulks(corpus, Granularity::Month, vocabulary, *range, &warnings, config.threads);

  std::vector<double> targets;
  for (const auto& label : quarterly.row_labels) {
    auto q = Quarter::parse(label);
    auto it = q ? quarterly_wui.find(*q) : quarterly_wui.end();
    if (it == quarterly_wui.end()) throw ConfigError("no quarterly WUI target for " + label);
    targets.push_back(it->second);
  }
  auto est = estimate_monthly_from_matrices(quarterly, targets, monthly, range->months(), config);
  est.warnings = std::move(warnings);
  return est;
}

}  // namespace epu
