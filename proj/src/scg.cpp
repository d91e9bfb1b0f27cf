#include "skinshape/scg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace skinshape {

namespace {

constexpr double kSigma0 = 1e-4;
constexpr double kLambdaMin = 1e-15;
constexpr double kLambdaMax = 1e100;
constexpr double kTolX = 1e-12;
constexpr double kTolF = 1e-15;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

ScaledConjugateGradient::ScaledConjugateGradient(Objective objective, std::vector<double> initial)
    : objective_(std::move(objective)), w_(std::move(initial)) {
  grad_.assign(w_.size(), 0.0);
  f_ = objective_(w_, grad_);
  grad_old_ = grad_;
  dir_.resize(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) dir_[i] = -grad_[i];
}

bool ScaledConjugateGradient::iterate() {
  if (converged_) return false;
  const std::size_t n = w_.size();

  if (success_) {
    mu_ = dot(dir_, grad_);
    if (mu_ >= 0.0) {
      for (std::size_t i = 0; i < n; ++i) dir_[i] = -grad_[i];
      mu_ = dot(dir_, grad_);
    }
    kappa_ = dot(dir_, dir_);
    if (kappa_ < 1e-300) {
      converged_ = true;
      return false;
    }
    const double sigma = kSigma0 / std::sqrt(kappa_);
    std::vector<double> probe(n), grad_probe(n);
    for (std::size_t i = 0; i < n; ++i) probe[i] = w_[i] + sigma * dir_[i];
    objective_(probe, grad_probe);
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i) g += dir_[i] * (grad_probe[i] - grad_[i]);
    gamma_ = g / sigma;
  }

  double delta = gamma_ + lambda_ * kappa_;
  if (delta <= 0.0) {
    delta = lambda_ * kappa_;
    lambda_ = lambda_ - gamma_ / kappa_;
  }
  const double alpha = -mu_ / delta;

  std::vector<double> trial(n), grad_trial(n);
  for (std::size_t i = 0; i < n; ++i) trial[i] = w_[i] + alpha * dir_[i];
  const double f_trial = objective_(trial, grad_trial);
  const double comparison = 2.0 * (f_trial - f_) / (alpha * mu_);

  success_ = comparison >= 0.0 && std::isfinite(f_trial);
  if (success_) {
    ++successes_;
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) step = std::max(step, std::fabs(alpha * dir_[i]));
    const double f_prev = f_;
    w_ = std::move(trial);
    f_ = f_trial;
    grad_old_ = grad_;
    grad_ = std::move(grad_trial);
    if ((step < kTolX && std::fabs(f_ - f_prev) < kTolF) || dot(grad_, grad_) == 0.0) {
      converged_ = true;
    }
  }

  if (comparison < 0.25) lambda_ = std::min(4.0 * lambda_, kLambdaMax);
  if (comparison > 0.75) lambda_ = std::max(0.5 * lambda_, kLambdaMin);

  if (successes_ == n) {
    for (std::size_t i = 0; i < n; ++i) dir_[i] = -grad_[i];
    successes_ = 0;
  } else if (success_) {
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += (grad_old_[i] - grad_[i]) * grad_[i];
    const double beta = num / mu_;
    for (std::size_t i = 0; i < n; ++i) dir_[i] = beta * dir_[i] - grad_[i];
  }
  return success_;
}

}  // namespace skinshape
