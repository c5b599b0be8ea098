#pragma once

#include "moran/model.hpp"

#include <vector>

namespace moran {

/// Exact raw moments E[W^r], r = 1..r_max, of the stationary W = I/(2n).
struct MomentTable {
  ModelParams params;
  /// values[r - 1] = E[W^r]
  std::vector<Rational> values;

  int r_max() const { return static_cast<int>(values.size()); }
  const Rational& at(int r) const { return values.at(static_cast<std::size_t>(r - 1)); }
};

/// a / (a + b)
Rational mean(const ModelParams& params);

/// 2abn / ((a+b)^2 (2n + a(2n-1) + b(2n-1)))
Rational variance(const ModelParams& params);

/// Coefficients q_0..q_r (in powers of I) of (2n)^2 E[(I')^r - I^r | I].
/// The I^{r+1} term cancels identically and is not returned.
std::vector<Rational> moment_drift_polynomial(const ModelParams& params, int r);

/// Solves sum_k q_k E[I^k] = 0 for E[I^r], one order at a time, and rescales
/// to E[W^r]. Throws std::invalid_argument for r_max < 1 and std::logic_error
/// if a leading coefficient vanishes.
MomentTable moment_recursion(const ModelParams& params, int r_max = 8);

/// Brute-force sum_i pi(i) (i/(2n))^r over an exact distribution.
Rational moment_by_summation(const LatticeDistribution& pi, int r);

/// Positive semidefiniteness of the Hankel matrix [E W^{i+j}]_{0<=i,j<=2},
/// decided exactly from all principal minors. Needs r_max >= 4.
bool hankel_psd(const MomentTable& table);

}  // namespace moran
