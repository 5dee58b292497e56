#include "epu/pls.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "epu/error.hpp"

namespace epu {

PlsModel pls_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_components, const PlsOptions& options) {
  const auto rows = x.rows(), cols = x.cols();
  if (rows != y.size()) throw ConfigError("pls_fit: X has " + std::to_string(rows) + " rows but y has " +
                                          std::to_string(y.size()) + " values");
  if (rows < 2) throw ConfigError("pls_fit: need at least 2 rows");
  const long max_k = std::min<long>(rows - 1, cols);
  if (n_components < 1 || n_components > max_k)
    throw ConfigError("pls_fit: n_components " + std::to_string(n_components) + " outside [1, " +
                      std::to_string(max_k) + "]");

  PlsModel m;
  m.n_components = n_components;
  m.x_mean = x.colwise().mean();
  m.y_mean = y.mean();
  Eigen::MatrixXd xr = x.rowwise() - m.x_mean;
  m.x_scale = Eigen::RowVectorXd::Ones(cols);
  if (options.scale_x) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double sd = std::sqrt(xr.col(j).squaredNorm() / static_cast<double>(rows - 1));
      if (sd > 0.0) m.x_scale(j) = sd;
    }
    xr = xr.array().rowwise() / m.x_scale.array();
  }
  Eigen::VectorXd yr = y.array() - m.y_mean;
  const double y_ss = yr.squaredNorm();
  if (!(y_ss > 1e-24 * std::max(1.0, m.y_mean * m.y_mean) * static_cast<double>(rows)))
    throw NumericError("pls_fit: zero variance in y");

  m.weights.resize(cols, n_components);
  m.loadings.resize(cols, n_components);
  m.x_scores.resize(rows, n_components);
  m.y_loadings.resize(n_components);

  const double x_norm = xr.norm();
  double first_cov = 0.0;
  int k = 0;
  for (; k < n_components; ++k) {
    Eigen::VectorXd w = xr.transpose() * yr;
    const double wn = w.norm();
    if (k == 0) first_cov = wn;
    if (wn <= 1e-12 * first_cov || wn == 0.0) break;
    w /= wn;
    Eigen::VectorXd t = xr * w;
    const double tt = t.squaredNorm();
    if (tt <= 1e-24 * x_norm * x_norm) break;
    Eigen::VectorXd p = xr.transpose() * t / tt;
    const double q = yr.dot(t) / tt;
    xr.noalias() -= t * p.transpose();
    yr -= q * t;
    m.weights.col(k) = w;
    m.loadings.col(k) = p;
    m.x_scores.col(k) = t;
    m.y_loadings(k) = q;
  }
  m.effective_components = k;
  m.weights.conservativeResize(cols, k);
  m.loadings.conservativeResize(cols, k);
  m.x_scores.conservativeResize(rows, k);
  m.y_loadings.conservativeResize(k);

  if (k > 0) {
    // B = W (PᵀW)⁻¹ q
    Eigen::MatrixXd ptw = m.loadings.transpose() * m.weights;
    m.coefficients = m.weights * ptw.partialPivLu().solve(m.y_loadings);
  } else {
    m.coefficients = Eigen::VectorXd::Zero(cols);
  }
  m.raw_coefficients = m.coefficients.array() / m.x_scale.transpose().array();
  m.intercept = m.y_mean - m.x_mean.dot(m.raw_coefficients);
  return m;
}

PlsModel pls_fit(const TermMatrix& x, std::span<const double> y, int n_components, const PlsOptions& options) {
  Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  auto model = pls_fit(x.values, yv, n_components, options);
  model.columns = x.columns;
  return model;
}

Eigen::VectorXd pls_predict(const PlsModel& model, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != model.raw_coefficients.size())
    throw ConfigError("pls_predict: expected " + std::to_string(model.raw_coefficients.size()) + " columns, got " +
                      std::to_string(x_new.cols()));
  Eigen::MatrixXd centered = (x_new.rowwise() - model.x_mean).array().rowwise() / model.x_scale.array();
  return (centered * model.coefficients).array() + model.y_mean;
}

Eigen::VectorXd pls_predict(const PlsModel& model, const TermMatrix& x_new) {
  const auto n = std::min(model.columns.size(), x_new.columns.size());
  for (std::size_t j = 0; j < n; ++j)
    if (model.columns[j] != x_new.columns[j])
      throw ConfigError("pls_predict: column " + std::to_string(j) + " is '" + x_new.columns[j] +
                        "', model expects '" + model.columns[j] + "'");
  if (model.columns.size() != x_new.columns.size())
    throw ConfigError("pls_predict: column " + std::to_string(n) + " mismatch: model has " +
                      std::to_string(model.columns.size()) + " columns, input has " +
                      std::to_string(x_new.columns.size()));
  return pls_predict(model, x_new.values);
}

namespace {

double mse_for(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int k, MseMode mode, const PlsOptions& options) {
  const auto n = x.rows();
  if (mode == MseMode::Training) {
    auto model = pls_fit(x, y, k, options);
    return (pls_predict(model, x) - y).squaredNorm() / static_cast<double>(n);
  }
  double sse = 0.0;
  Eigen::MatrixXd xt(n - 1, x.cols());
  Eigen::VectorXd yt(n - 1);
  for (Eigen::Index held = 0; held < n; ++held) {
    for (Eigen::Index i = 0, r = 0; i < n; ++i) {
      if (i == held) continue;
      xt.row(r) = x.row(i);
      yt(r) = y(i);
      ++r;
    }
    auto model = pls_fit(xt, yt, k, options);
    double pred = pls_predict(model, Eigen::MatrixXd(x.row(held)))(0);
    sse += (pred - y(held)) * (pred - y(held));
  }
  return sse / static_cast<double>(n);
}

}  // namespace

ComponentSelection select_components(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const int> k_range,
                                     MseMode mode, const PlsOptions& options, int threads) {
  if (k_range.empty()) throw ConfigError("select_components: empty k range");
  std::vector<double> mse(k_range.size());
  std::vector<std::exception_ptr> errors(k_range.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  const auto nk = static_cast<std::int64_t>(k_range.size());
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < nk; ++i) {
    auto idx = static_cast<std::size_t>(i);
    try {
      mse[idx] = mse_for(x, y, k_range[idx], mode, options);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ComponentSelection sel;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k_range.size(); ++i) {
    sel.mse_curve.emplace_back(k_range[i], mse[i]);
    best = std::min(best, mse[i]);
  }
  const double var_y = (y.array() - y.mean()).square().mean();
  const double tol = best * 1e-9 + 1e-14 * var_y;
  sel.best_k = std::numeric_limits<int>::max();
  for (const auto& [k, v] : sel.mse_curve)
    if (v <= best + tol) sel.best_k = std::min(sel.best_k, k);
  std::sort(sel.mse_curve.begin(), sel.mse_curve.end());
  return sel;
}

}  // namespace epu
