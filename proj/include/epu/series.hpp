#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epu/corpus.hpp"
#include "epu/month.hpp"

namespace epu {

enum class Stage { Raw, Normalized, Standardized };

std::string_view stage_name(Stage s);
std::optional<Stage> parse_stage(std::string_view s);

/// Month → value over a contiguous range of months. A month without a value
/// (no published articles) holds nullopt and is written as "NA".
struct MonthlySeries {
  std::string label;
  Stage stage = Stage::Raw;
  std::map<Month, std::optional<double>> values;

  std::vector<double> present_values() const;
  std::optional<double> at(Month m) const;
};

/// Inclusive month range.
struct MonthRange {
  Month first;
  Month last;

  std::vector<Month> months() const;
};

/// First to last month present in docs_per_month.
std::optional<MonthRange> stats_range(const CorpusStats& stats);

/// Per-month score sums. Summation sorts each month's values first, so the
/// result is bit-identical however the scores were partitioned or ordered.
class MonthlyAccumulator {
 public:
  void add(Month m, double value);
  void merge(MonthlyAccumulator&& other);
  std::map<Month, double> sums() const;

 private:
  std::map<Month, std::vector<double>> values_;
};

/// value(m) = Σ scores in m / docs_per_month(m). Months of the range with
/// zero articles are missing. Throws Error when a month has scores but no
/// recorded articles.
MonthlySeries aggregate_monthly(std::span<const std::pair<Month, double>> scores, const CorpusStats& stats,
                                std::string label, std::optional<MonthRange> range = std::nullopt);

MonthlySeries aggregate_monthly(const MonthlyAccumulator& acc, const CorpusStats& stats, std::string label,
                                std::optional<MonthRange> range = std::nullopt);

struct StandardizeOptions {
  bool center = true;
};

/// (value − mean) / σ with the population σ over the present months; missing
/// months stay missing. Throws NumericError for fewer than 2 values or a
/// constant series ("zero variance").
MonthlySeries standardize(const MonthlySeries& series, const StandardizeOptions& options = {});

/// CSV with header `month,value,stage,label`.
void write_series_csv(std::ostream& out, const MonthlySeries& series);
void write_series_csv(const std::filesystem::path& path, const MonthlySeries& series);
MonthlySeries read_series_csv(std::istream& in);
MonthlySeries read_series_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace epu
