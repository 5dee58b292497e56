#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace epu {

/// Row-labelled, column-labelled nonnegative count matrix.
struct TermMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows × columns
};

struct PlsOptions {
  bool scale_x = false;  // divide centered columns by their standard deviation
};

/// Single-response PLS (PLS1) fitted by NIPALS with successive deflation.
struct PlsModel {
  int n_components = 0;          // requested
  int effective_components = 0;  // fewer when X or y is exhausted earlier
  std::vector<std::string> columns;

  Eigen::RowVectorXd x_mean;
  Eigen::RowVectorXd x_scale;
  double y_mean = 0.0;

  Eigen::MatrixXd weights;     // W, columns × k
  Eigen::MatrixXd loadings;    // P, columns × k
  Eigen::MatrixXd x_scores;    // T, rows × k
  Eigen::VectorXd y_loadings;  // q, k
  Eigen::VectorXd coefficients;  // in centered/scaled X units
  double intercept = 0.0;        // prediction at x = 0, in original units
  Eigen::VectorXd raw_coefficients;  // in original X units
};

/// Throws ConfigError when n_components is outside [1, min(rows − 1, columns)]
/// or the sizes disagree, NumericError when y has zero variance.
PlsModel pls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_components, const PlsOptions& options = {});
PlsModel pls_fit(const TermMatrix& x, std::span<const double> y, int n_components, const PlsOptions& options = {});

Eigen::VectorXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& x_new);
/// Throws ConfigError naming the first column that differs from training.
Eigen::VectorXd pls_predict(const PlsModel& model, const TermMatrix& x_new);

enum class MseMode { LeaveOneOut, Training };

struct ComponentSelection {
  int best_k = 0;
  std::vector<std::pair<int, double>> mse_curve;
};

/// Fits every k in k_range, scores it by MSE and returns the smallest k whose
/// MSE ties the minimum (relative 1e-9, absolute 1e-14·var(y)). k values are
/// fitted concurrently; the result does not depend on the thread count.
ComponentSelection select_components(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const int> k_range,
                                     MseMode mode = MseMode::LeaveOneOut, const PlsOptions& options = {},
                                     int threads = 0);

}  // namespace epu
