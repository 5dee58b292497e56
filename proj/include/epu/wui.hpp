#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epu/corpus.hpp"
#include "epu/pls.hpp"
#include "epu/series.hpp"

namespace epu {

enum class Granularity { Quarter, Month };

/// One row per period of `range` (quarters overlapping it, or its months);
/// entry (period, term) = occurrences of the term in that period's documents.
/// Periods without documents give a zero row and a warning.
TermMatrix build_bulks(const Corpus& corpus, Granularity granularity, std::span<const std::string> vocabulary,
                       const MonthRange& range, std::vector<Diagnostic>* warnings = nullptr, int threads = 0);

/// CSV `quarter,value` with quarters as YYYY-Q#.
std::map<Quarter, double> read_quarterly_csv(std::istream& in);
std::map<Quarter, double> read_quarterly_csv(const std::filesystem::path& path);

struct WuiConfig {
  PruneConfig prune;
  int kmax = 15;
  MseMode mse = MseMode::LeaveOneOut;
  PlsOptions pls;
  std::optional<MonthRange> range;  // defaults to the corpus range
  int threads = 0;
};

struct WuiEstimate {
  MonthlySeries predicted;     // raw monthly predictions
  MonthlySeries standardized;  // the estimated monthly WUI
  ComponentSelection selection;
  PlsModel model;
  std::vector<std::string> vocabulary;
  std::vector<Diagnostic> warnings;
};

/// Core estimator on prebuilt matrices: selects k in 1..min(kmax, limit),
/// fits on the quarterly rows and predicts the monthly rows.
WuiEstimate estimate_monthly_from_matrices(const TermMatrix& quarterly, std::span<const double> targets,
                                           const TermMatrix& monthly, const std::vector<Month>& months,
                                           const WuiConfig& config);

/// Builds quarterly X and monthly X′ on the shared pruned vocabulary, selects
/// the number of components, fits on the quarterly targets and predicts the
/// monthly series. Throws ConfigError when a quarter of the range has no
/// target.
WuiEstimate estimate_monthly_wui(const Corpus& corpus, const std::map<Quarter, double>& quarterly_wui,
                                 const WuiConfig& config);

}  // namespace epu
