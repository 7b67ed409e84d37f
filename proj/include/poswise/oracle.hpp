#pragma once

// Reference computations that the optimizers are checked against: the closed
// form least-squares linear model and central finite differences.

#include <functional>
#include <span>
#include <vector>

#include "poswise/matrix.hpp"

namespace poswise::oracle {

struct LinearModel {
  std::vector<double> theta;

  std::size_t feature_count() const noexcept { return theta.size(); }
};

/// theta . x
double linreg_predict(const LinearModel& model, std::span<const double> x);

/// (1 / 2N) sum_i (y_i - f(x_i))^2, xs holding one sample per row (N x D).
double linreg_loss(const LinearModel& model, const Matrix& xs, std::span<const double> ys);

/// g_j = -(1/N) sum_i (y_i - f(x_i)) x_ij
std::vector<double> linreg_gradient(const LinearModel& model, const Matrix& xs,
                                    std::span<const double> ys);

/// theta_j + eta * (1/N) sum_i (y_i - f(x_i)) x_ij
LinearModel linreg_step(const LinearModel& model, const Matrix& xs, std::span<const double> ys,
                        double eta);

inline constexpr double kDefaultFiniteDiffEps = 1e-5;

/// Central differences (f(w + eps e_k) - f(w - eps e_k)) / 2eps for every entry k.
/// Throws std::domain_error if f is not finite at a probe point.
Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f, const Matrix& at,
                        double eps = kDefaultFiniteDiffEps);

/// max_k |a_k - b_k| / max(|a_k|, |b_k|, floor)
double max_relative_error(const Matrix& a, const Matrix& b, double floor = 1e-8);

}  // namespace poswise::oracle
