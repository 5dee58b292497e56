#include "epu/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "epu/csv.hpp"
#include "epu/error.hpp"

namespace epu {

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Raw:
      return "raw";
    case Stage::Normalized:
      return "normalized";
    case Stage::Standardized:
      return "standardized";
  }
  return "raw";
}

std::optional<Stage> parse_stage(std::string_view s) {
  if (s == "raw") return Stage::Raw;
  if (s == "normalized") return Stage::Normalized;
  if (s == "standardized") return Stage::Standardized;
  return std::nullopt;
}

std::vector<double> MonthlySeries::present_values() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& [m, v] : values)
    if (v) out.push_back(*v);
  return out;
}

std::optional<double> MonthlySeries::at(Month m) const {
  auto it = values.find(m);
  return it == values.end() ? std::nullopt : it->second;
}

std::vector<Month> MonthRange::months() const {
  std::vector<Month> out;
  for (Month m = first; m <= last; m = m.next()) out.push_back(m);
  return out;
}

std::optional<MonthRange> stats_range(const CorpusStats& stats) {
  if (stats.docs_per_month.empty()) return std::nullopt;
  return MonthRange{stats.docs_per_month.begin()->first, stats.docs_per_month.rbegin()->first};
}

void MonthlyAccumulator::add(Month m, double value) { values_[m].push_back(value); }

void MonthlyAccumulator::merge(MonthlyAccumulator&& other) {
  for (auto& [m, v] : other.values_) {
    auto& dst = values_[m];
    dst.insert(dst.end(), v.begin(), v.end());
  }
  other.values_.clear();
}

std::map<Month, double> MonthlyAccumulator::sums() const {
  std::map<Month, double> out;
  std::vector<double> buf;
  for (const auto& [m, v] : values_) {
    buf = v;
    std::sort(buf.begin(), buf.end());
    double s = 0.0;
    for (double x : buf) s += x;
    out[m] = s;
  }
  return out;
}

namespace {

MonthlySeries normalize_sums(const std::map<Month, double>& sums, const CorpusStats& stats, std::string label,
                             std::optional<MonthRange> range) {
  if (!range) range = stats_range(stats);
  MonthlySeries series;
  series.label = std::move(label);
  series.stage = Stage::Normalized;
  for (const auto& [m, s] : sums) {
    auto it = stats.docs_per_month.find(m);
    if (it == stats.docs_per_month.end() || it->second == 0)
      throw Error("month " + m.str() + " has scores but no recorded articles");
  }
  if (!range) return series;
  for (Month m : range->months()) {
    auto it = stats.docs_per_month.find(m);
    if (it == stats.docs_per_month.end() || it->second == 0) {
      series.values[m] = std::nullopt;
      continue;
    }
    auto s = sums.find(m);
    double total = s == sums.end() ? 0.0 : s->second;
    series.values[m] = total / static_cast<double>(it->second);
  }
  return series;
}

}  // namespace

MonthlySeries aggregate_monthly(std::span<const std::pair<Month, double>> scores, const CorpusStats& stats,
                                std::string label, std::optional<MonthRange> range) {
  MonthlyAccumulator acc;
  for (const auto& [m, s] : scores) acc.add(m, s);
  return aggregate_monthly(acc, stats, std::move(label), range);
}

MonthlySeries aggregate_monthly(const MonthlyAccumulator& acc, const CorpusStats& stats, std::string label,
                                std::optional<MonthRange> range) {
  return normalize_sums(acc.sums(), stats, std::move(label), range);
}

MonthlySeries standardize(const MonthlySeries& series, const StandardizeOptions& options) {
  auto xs = series.present_values();
  if (xs.size() < 2) throw NumericError("standardize: need at least 2 values");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  // mean is rounded; carry the residual mean separately so large offsets do not leak into the result
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double d = x - mean, t = sum + d;
    comp += std::abs(sum) >= std::abs(d) ? (sum - t) + d : (d - t) + sum;
    sum = t;
  }
  const double residual = (sum + comp) / n;
  double ss = 0.0;
  for (double x : xs) {
    double r = (x - mean) - residual;
    ss += r * r;
  }
  const double sigma = std::sqrt(ss / n);
  const double scale = std::max(std::abs(mean), std::abs(xs.front()));
  if (!(sigma > 1e-12 * scale) || sigma == 0.0) throw NumericError("standardize: zero variance");

  MonthlySeries out;
  out.label = series.label;
  out.stage = Stage::Standardized;
  for (const auto& [m, v] : series.values) {
    if (!v)
      out.values[m] = std::nullopt;
    else
      out.values[m] = options.center ? ((*v - mean) - residual) / sigma : *v / sigma;
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_series_csv(std::ostream& out, const MonthlySeries& series) {
  out << "month,value,stage,label\n";
  const std::string label = csv_field(series.label);
  for (const auto& [m, v] : series.values)
    out << m.str() << ',' << (v ? format_double(*v) : "NA") << ',' << stage_name(series.stage) << ',' << label
        << '\n';
}

void write_series_csv(const std::filesystem::path& path, const MonthlySeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_series_csv(out, series);
}

MonthlySeries read_series_csv(std::istream& in) {
  MonthlySeries series;
  std::string line;
  if (!std::getline(in, line)) throw Error("series CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "month,value,stage,label") throw Error("unexpected series CSV header: " + line);
  std::size_t line_no = 1;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv(line);
    auto where = "series CSV line " + std::to_string(line_no) + ": ";
    if (f.size() != 4) throw Error(where + "expected 4 fields");
    auto m = Month::parse(f[0]);
    if (!m) throw Error(where + "bad month '" + f[0] + "'");
    auto stage = parse_stage(f[2]);
    if (!stage) throw Error(where + "bad stage '" + f[2] + "'");
    if (first) {
      series.label = f[3];
      series.stage = *stage;
      first = false;
    }
    if (f[1] == "NA") {
      series.values[*m] = std::nullopt;
      continue;
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), v);
    if (ec != std::errc() || p != f[1].data() + f[1].size()) throw Error(where + "bad value '" + f[1] + "'");
    series.values[*m] = v;
  }
  return series;
}

MonthlySeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series file: " + path.string());
  return read_series_csv(in);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}


}  // namespace epu
