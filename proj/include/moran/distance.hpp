#pragma once

#include "moran/beta_dist.hpp"
#include "moran/model.hpp"

namespace moran {

struct DistanceReport {
  double gap_h;
  double wasserstein;
  double kolmogorov;
  std::int64_t n;
  BetaParams beta;
};

/// Beta(a, b) with the chain's rescaled mutation rates.
BetaParams target_beta(const ModelParams& params);

/// E[h(W)] = ab(2n-1) / (2(a+b)(2n + a(2n-1) + b(2n-1))) for h(x) = x(1-x)/2.
Rational expected_h_w(const ModelParams& params);

/// |E h(W) - E h(Z)|, exact.
Rational gap_h(const ModelParams& params);

/// h(x - 2k) on [2k, 2k+1] and -h(x - 2k - 1) on [2k+1, 2k+2]. The extension
/// of h from [0,1] to the real line with |g'| <= 1/2 and |g''| <= 1.
double periodic_extension_g(double x);

struct GNorms {
  double max_abs_first;
  double max_abs_second;
  /// Largest jump of g, and of its one-sided difference quotients, at integers.
  double max_value_jump;
  double max_slope_jump;
};

/// Finite-difference estimates on [-3, 3] with grid_resolution points per
/// unit length. Throws std::invalid_argument for grid_resolution < 100.
GNorms g_extension_norms(int grid_resolution);

/// True iff |g'| <= 1, |g''| <= 1 and g, g' are continuous at the integer
/// junctions, each within 1e-8 on the grid.
bool membership_check_g(int grid_resolution);

/// Integral over [0,1] of |F_W - F_Z|. On each gap between atoms F_W is
/// constant and F_Z is monotone, so there is at most one sign change; it is
/// located by bisection and each side integrated with the antiderivative
/// G(x) = x I_x(a,b) - a/(a+b) I_x(a+1,b).
double wasserstein(const LatticeDistribution& pi, const BetaParams& beta, const Tolerance& tol = {});

/// sup_x |F_W(x) - F_Z(x)|, attained at an atom or its left limit.
double kolmogorov(const LatticeDistribution& pi, const BetaParams& beta, const Tolerance& tol = {});

DistanceReport distance_report(const ModelParams& params, const LatticeDistribution& pi, const Tolerance& tol = {});

}  // namespace moran
