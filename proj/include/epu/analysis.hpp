#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "epu/series.hpp"

namespace epu {

/// Series restricted to the months where every series has a value.
struct AlignedSeries {
  std::vector<std::string> labels;
  std::vector<Month> months;
  Eigen::MatrixXd values;  // months × series
};

/// Throws Error for fewer than 2 series or fewer than 3 common months.
AlignedSeries align(std::span<const MonthlySeries> series);

/// Product-moment correlation. Throws NumericError for fewer than 3 points,
/// unequal lengths or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of tie-averaged ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Tie-averaged 1-based ranks.
std::vector<double> average_ranks(std::span<const double> x);

/// Two-sided p-value of r from t = r·√((n−2)/(1−r²)) with n−2 degrees of
/// freedom; 0 when |r| == 1.
double pearson_pvalue(double r, std::size_t n);

/// "<1%", "<5%" or "ns".
std::string significance_level(double p);

struct CorrelationMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd r;
  Eigen::MatrixXd p;
  std::size_t n = 0;
};

CorrelationMatrix correlation_matrix(std::span<const MonthlySeries> series);

/// Square CSV of r: header "label,<l1>,...", one row per label.
void write_matrix_csv(std::ostream& out, const CorrelationMatrix& m);
/// Long-form CSV: a,b,r,p,level,n for every pair a < b.
void write_pairs_csv(std::ostream& out, const CorrelationMatrix& m);
CorrelationMatrix read_matrix_csv(std::istream& in);
CorrelationMatrix read_matrix_csv(const std::filesystem::path& path);

enum class Linkage { Average, Single, Complete };
std::optional<Linkage> parse_linkage(std::string_view s);

struct Merge {
  int left = 0;   // cluster id: leaves are 0..n-1, merge i creates n+i
  int right = 0;
  double distance = 0.0;
  int size = 0;
};

struct Dendrogram {
  std::vector<std::string> labels;
  std::vector<Merge> merges;

  /// {"labels": [...], "merges": [{"left", "right", "distance", "size"}]}
  std::string to_json() const;
};

/// Agglomerative clustering on d = 1 − r. Equal distances are broken by the
/// lexicographically smallest leaf label of each cluster.
Dendrogram hcluster(const CorrelationMatrix& matrix, Linkage linkage = Linkage::Average);
Dendrogram hcluster(const std::vector<std::string>& labels, const Eigen::MatrixXd& distance, Linkage linkage);

}  // namespace epu
