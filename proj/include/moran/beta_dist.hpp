#pragma once

#include "moran/special_fn.hpp"

namespace moran {

/// Shape pair of the Beta(a, b) law on (0, 1).
struct BetaParams {
  double a;
  double b;

  /// Throws std::invalid_argument unless a > 0 and b > 0.
  BetaParams(double a_, double b_);
};

/// Density; exactly 0 outside (0,1). At an endpoint where the density
/// diverges (a < 1 at 0, b < 1 at 1) returns +infinity.
double pdf(const BetaParams& p, double x);

/// 0 for x <= 0, 1 for x >= 1, I_x(a,b) otherwise.
double cdf(const BetaParams& p, double x, const Tolerance& tol = {});

/// E[Z^r] = prod_{k<r} (a+k)/(a+b+k). Works for double and exact rational scalars.
template <class Scalar>
Scalar beta_raw_moment(const Scalar& a, const Scalar& b, int r) {
  Scalar m = 1;
  for (int k = 0; k < r; ++k) m *= (a + k) / (a + b + k);
  return m;
}

template <class Scalar>
Scalar beta_variance(const Scalar& a, const Scalar& b) {
  const Scalar s = a + b;
  return a * b / (s * s * (s + 1));
}

/// E[h(Z)] for h(x) = x(1-x)/2: ab / (2(a+b)(1+a+b)).
template <class Scalar>
Scalar beta_expected_h(const Scalar& a, const Scalar& b) {
  const Scalar s = a + b;
  return a * b / (2 * s * (1 + s));
}

/// Throws std::invalid_argument for r < 1.
double moments(const BetaParams& p, int r);

double expected_h(const BetaParams& p);

}  // namespace moran
