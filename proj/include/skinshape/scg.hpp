#pragma once

#include <functional>
#include <span>
#include <vector>

namespace skinshape {

/// Scaled conjugate gradient (Moller): conjugate directions, a finite
/// difference Hessian-vector product along the search direction, and a
/// Levenberg-style scale lambda that is raised when the local quadratic model
/// predicts poorly. Restarts along steepest descent after as many successful
/// steps as there are parameters.
class ScaledConjugateGradient {
 public:
  /// Returns f(w) and writes the gradient into `grad`.
  using Objective = std::function<double(std::span<const double> w, std::span<double> grad)>;

  ScaledConjugateGradient(Objective objective, std::vector<double> initial);

  /// One iteration. Returns true when the trial step was accepted; a rejected
  /// step leaves the weights and loss untouched.
  bool iterate();

  double loss() const { return f_; }
  const std::vector<double>& weights() const { return w_; }
  bool converged() const { return converged_; }
  double lambda() const { return lambda_; }

 private:
  Objective objective_;
  std::vector<double> w_;
  std::vector<double> grad_;
  std::vector<double> grad_old_;
  std::vector<double> dir_;
  double f_ = 0.0;
  double lambda_ = 1.0;
  double mu_ = 0.0;
  double kappa_ = 0.0;
  double gamma_ = 0.0;
  bool success_ = true;
  bool converged_ = false;
  std::size_t successes_ = 0;
};

}  // namespace skinshape
