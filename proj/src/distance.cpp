#include "moran/distance.hpp"

#include "moran/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moran {

namespace {

double h_unit(double x) { return 0.5 * x * (1.0 - x); }

// Antiderivative of the Beta CDF on [0,1].
double cdf_antiderivative(const BetaParams& beta, double x, const Tolerance& tol) {
  if (x <= 0.0) return 0.0;
  const double mean = beta.a / (beta.a + beta.b);
  if (x >= 1.0) return 1.0 - mean;
  return x * reg_inc_beta(x, beta.a, beta.b, tol) - mean * reg_inc_beta(x, beta.a + 1.0, beta.b, tol);
}

// Root of F_Z(x) = level on [lo, hi] with F_Z(lo) < level < F_Z(hi).
double crossing(const BetaParams& beta, double level, double lo, double hi, const Tolerance& tol) {
  for (int it = 0; it < 200 && hi - lo > tol.abs_eps * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(beta, mid, tol) < level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BetaParams target_beta(const ModelParams& params) { return BetaParams(params.a_value(), params.b_value()); }

Rational expected_h_w(const ModelParams& params) {
  const Rational& a = params.a();
  const Rational& b = params.b();
  const Rational two_n = params.two_n();
  return a * b * (two_n - 1) / (2 * (a + b) * (two_n + a * (two_n - 1) + b * (two_n - 1)));
}

Rational gap_h(const ModelParams& params) {
  return abs(Rational(expected_h_w(params) - beta_expected_h(params.a(), params.b())));
}

double periodic_extension_g(double x) {
  const double k = std::floor(x / 2.0);
  const double t = x - 2.0 * k;
  if (t <= 1.0) return h_unit(t);
  return -h_unit(t - 1.0);
}

GNorms g_extension_norms(int grid_resolution) {
  if (grid_resolution < 100) throw std::invalid_argument("g_extension_norms: grid_resolution must be >= 100");
  const double step = 1.0 / grid_resolution;
  const int points = 6 * grid_resolution;
  GNorms out{0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k <= points; ++k) {
    const double x = -3.0 + k * step;
    const double g0 = periodic_extension_g(x);
    if (k < points) {
      const double g1 = periodic_extension_g(x + step);
      out.max_abs_first = std::max(out.max_abs_first, std::fabs(g1 - g0) / step);
    }
    if (k > 0 && k < points) {
      const double gm = periodic_extension_g(x - step);
      const double gp = periodic_extension_g(x + step);
      out.max_abs_second = std::max(out.max_abs_second, std::fabs(gp - 2.0 * g0 + gm) / (step * step));
    }
  }
  for (int j = -2; j <= 2; ++j) {
    const double x = j;
    // Left and right pieces evaluated at the junction itself.
    const double left = (j % 2 == 0) ? -h_unit(1.0) : h_unit(1.0);
    const double right = (j % 2 == 0) ? h_unit(0.0) : -h_unit(0.0);
    out.max_value_jump = std::max(out.max_value_jump, std::fabs(left - right));
    const double slope_left = (periodic_extension_g(x) - periodic_extension_g(x - step)) / step;
    const double slope_right = (periodic_extension_g(x + step) - periodic_extension_g(x)) / step;
    // Each one-sided quotient is within step/2 of g'(x) because |g''| <= 1.
    out.max_slope_jump = std::max(out.max_slope_jump, std::fabs(slope_right - slope_left) - step);
  }
  return out;
}

bool membership_check_g(int grid_resolution) {
  constexpr double tol = 1e-8;
  const GNorms norms = g_extension_norms(grid_resolution);
  return norms.max_abs_first <= 1.0 + tol && norms.max_abs_second <= 1.0 + tol && norms.max_value_jump <= tol &&
         norms.max_slope_jump <= tol;
}

double wasserstein(const LatticeDistribution& pi, const BetaParams& beta, const Tolerance& tol) {
  tol.validate();
  const Eigen::VectorXd& p = pi.probs();
  const std::int64_t atoms = pi.size();
  double total = 0.0;
  double level = 0.0;
  double lo = 0.0;
  double f_lo = 0.0;
  double g_lo = 0.0;
  for (std::int64_t i = 0; i + 1 < atoms; ++i) {
    level += p(i);
    const double hi = pi.support_point(i + 1);
    const double f_hi = cdf(beta, hi, tol);
    const double g_hi = cdf_antiderivative(beta, hi, tol);
    double piece;
    if (level <= f_lo) {
      piece = (g_hi - g_lo) - level * (hi - lo);
    } else if (level >= f_hi) {
      piece = level * (hi - lo) - (g_hi - g_lo);
    } else {
      const double root = crossing(beta, level, lo, hi, tol);
      const double g_root = cdf_antiderivative(beta, root, tol);
      piece = (level * (root - lo) - (g_root - g_lo)) + ((g_hi - g_root) - level * (hi - root));
    }
    total += std::max(piece, 0.0);
    lo = hi;
    f_lo = f_hi;
    g_lo = g_hi;
  }
  return total;
}

double kolmogorov(const LatticeDistribution& pi, const BetaParams& beta, const Tolerance& tol) {
  const Eigen::VectorXd& p = pi.probs();
  double below = 0.0;
  double sup = 0.0;
  for (std::int64_t i = 0; i < pi.size(); ++i) {
    const double fz = cdf(beta, pi.support_point(i), tol);
    const double at = below + p(i);
    sup = std::max({sup, std::fabs(below - fz), std::fabs(std::min(at, 1.0) - fz)});
    below = at;
  }
  return std::min(sup, 1.0);
}

DistanceReport distance_report(const ModelParams& params, const LatticeDistribution& pi, const Tolerance& tol) {
  const BetaParams beta = target_beta(params);
  return DistanceReport{to_double(gap_h(params)), wasserstein(pi, beta, tol), kolmogorov(pi, beta, tol), params.n(), beta};
}

}  // namespace moran
