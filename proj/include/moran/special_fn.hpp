#pragma once

#include <stdexcept>

namespace moran {

/// Stopping rule shared by the iterative numerics.
struct Tolerance {
  double abs_eps = 1e-14;
  double rel_eps = 1e-14;
  int max_iter = 300;

  /// Throws std::invalid_argument unless abs_eps > 0, rel_eps > 0, max_iter >= 1.
  void validate() const;
};

/// Raised when an iterative method exhausts its iteration budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ln Gamma(t) for t > 0. Throws std::domain_error otherwise.
double log_gamma(double t);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction, using
/// I_x(a,b) = 1 - I_{1-x}(b,a) when x > (a+1)/(a+b+2).
double reg_inc_beta(double x, double a, double b, const Tolerance& tol = {});

}  // namespace moran
