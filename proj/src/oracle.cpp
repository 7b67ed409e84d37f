#include "poswise/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "poswise/errors.hpp"

namespace poswise::oracle {
namespace {

void check_samples(const LinearModel& model, const Matrix& xs, std::span<const double> ys) {
  if (xs.cols() != model.feature_count()) {
    throw ShapeError("linear model has " + std::to_string(model.feature_count()) +
                     " features, samples are " + xs.shape_string());
  }
  if (ys.size() != xs.rows()) {
    throw ShapeError(std::to_string(ys.size()) + " targets for " + std::to_string(xs.rows()) +
                     " samples");
  }
}

// y_i - f(x_i) per sample.
std::vector<double> residuals(const LinearModel& model, const Matrix& xs,
                              std::span<const double> ys) {
  check_samples(model, xs, ys);
  std::vector<double> r(xs.rows());
  for (std::size_t i = 0; i < xs.rows(); ++i) r[i] = ys[i] - linreg_predict(model, xs.row(i));
  return r;
}

}  // namespace

double linreg_predict(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.feature_count()) {
    throw ShapeError("linreg_predict: " + std::to_string(x.size()) + " inputs for " +
                     std::to_string(model.feature_count()) + " parameters");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += model.theta[j] * x[j];
  return sum;
}

double linreg_loss(const LinearModel& model, const Matrix& xs, std::span<const double> ys) {
  const auto r = residuals(model, xs, ys);
  double sum = 0.0;
  for (double v : r) sum += v * v;
  return sum / (2.0 * static_cast<double>(r.size()));
}

std::vector<double> linreg_gradient(const LinearModel& model, const Matrix& xs,
                                    std::span<const double> ys) {
  const auto r = residuals(model, xs, ys);
  const double n = static_cast<double>(r.size());
  std::vector<double> g(model.feature_count());
  for (std::size_t j = 0; j < g.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) sum += r[i] * xs(i, j);
    g[j] = -sum / n;
  }
  return g;
}

LinearModel linreg_step(const LinearModel& model, const Matrix& xs, std::span<const double> ys,
                        double eta) {
  if (!std::isfinite(eta)) throw std::invalid_argument("linreg_step: eta must be finite");
  const auto g = linreg_gradient(model, xs, ys);
  LinearModel next = model;
  for (std::size_t j = 0; j < g.size(); ++j) next.theta[j] = model.theta[j] - eta * g[j];
  return next;
}

Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f, const Matrix& at,
                        double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_grad: eps must be positive");
  Matrix grad(at.rows(), at.cols());
  Matrix probe = at;
  auto p = probe.values();
  auto g = grad.values();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double original = p[k];
    p[k] = original + eps;
    const double plus = f(probe);
    p[k] = original - eps;
    const double minus = f(probe);
    p[k] = original;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw std::domain_error("finite_diff_grad: objective not finite near entry " +
                              std::to_string(k));
    }
    g[k] = (plus - minus) / (2.0 * eps);
  }
  return grad;
}

double max_relative_error(const Matrix& a, const Matrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_relative_error: " + a.shape_string() + " vs " + b.shape_string());
  }
  double worst = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t k = 0; k < va.size(); ++k) {
    const double denom = std::max({std::abs(va[k]), std::abs(vb[k]), floor});
    worst = std::max(worst, std::abs(va[k] - vb[k]) / denom);
  }
  return worst;
}

}  // namespace poswise::oracle
