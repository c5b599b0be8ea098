#pragma once

#include "moran/model.hpp"

#include <vector>

namespace moran {

/// Exact verification of the exchangeable-pair conditions for the one-step
/// pair (W, W') = (I, I') / (2n) with I ~ pi.
struct SteinReport {
  Rational lambda;
  std::vector<Rational> cond1_residuals;
  std::vector<Rational> cond2_residuals;
  std::vector<Rational> s_values;
  Rational e_abs_s_exact;
  Rational e_abs_s_bound;
  Rational e_cubed_over_lambda_exact;
  Rational e_cubed_over_lambda_bound;
  /// Bound assembled from the exact E|S| and E|W'-W|^3 / lambda.
  double assembled_upper;
};

struct BoundCertificate {
  double lower;
  double gap;
  double upper;
  bool sandwich_ok;
};

/// Slack applied to both sandwich comparisons.
inline constexpr double kSandwichSlack = 1e-12;

/// Doebler's constant C(a, b). Throws std::domain_error for nonpositive input.
double c_constant(double a, double b);

/// K(a,b) = [(9a+6b) C(a,b) + C(a+1,b+1) + (a+b) C(a+1,b+1) C(a,b)] / 12.
double k_constant(double a, double b);

/// ab / (4n (a+b) (1+a+b)^2)
Rational lower_bound(const ModelParams& params);

/// S(w) = [2(a+b) w^2 - (3a+b) w + a] / (4n)
Rational s_remainder(const ModelParams& params, const Rational& w);

/// Per state: 4n^2 (1/(2n)) [p(i,i+1) - p(i,i-1)] - (a - (a+b) i/(2n)).
std::vector<Rational> verify_condition_1(const ModelParams& params);

/// Per state: 2n^2 (1/(2n))^2 [p(i,i+1) + p(i,i-1)] - (w(1-w) + S(w)).
std::vector<Rational> verify_condition_2(const ModelParams& params);

/// Per edge i -> i+1: pi(i) p(i,i+1) - pi(i+1) p(i+1,i). Requires exact pi.
std::vector<Rational> detailed_balance_residuals(const ModelParams& params, const LatticeDistribution& pi);

struct ExactWithBound {
  Rational exact;
  Rational bound;
};

/// E|S| under pi, with the bound (3a+2b)/(4n).
ExactWithBound e_abs_s(const ModelParams& params, const LatticeDistribution& pi);

/// E|W'-W|^3 / lambda under pi, with the bound 1/(2n).
ExactWithBound third_moment_ratio(const ModelParams& params, const LatticeDistribution& pi);

/// C(a,b) E|S| + (C(a+1,b+1) + (a+b) C(a+1,b+1) C(a,b)) E|W'-W|^3 / (6 lambda)
double upper_bound_assembled(const ModelParams& params, const LatticeDistribution& pi);

BoundCertificate bound_certificate(const ModelParams& params);

SteinReport stein_report(const ModelParams& params, const LatticeDistribution& pi);

/// Largest |r| over the entries; 0 for an empty vector.
Rational max_abs(const std::vector<Rational>& values);

}  // namespace moran
