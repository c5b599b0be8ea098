#include "moran/beta_dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace moran {

BetaParams::BetaParams(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("BetaParams: a must be positive and finite");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("BetaParams: b must be positive and finite");
}

double pdf(const BetaParams& p, double x) {
  if (!(x >= 0.0 && x <= 1.0)) return 0.0;
  if (x == 0.0) {
    if (p.a < 1.0) return std::numeric_limits<double>::infinity();
    if (p.a > 1.0) return 0.0;
    return std::exp(-log_beta(p.a, p.b));
  }
  if (x == 1.0) {
    if (p.b < 1.0) return std::numeric_limits<double>::infinity();
    if (p.b > 1.0) return 0.0;
    return std::exp(-log_beta(p.a, p.b));
  }
  return std::exp((p.a - 1.0) * std::log(x) + (p.b - 1.0) * std::log1p(-x) - log_beta(p.a, p.b));
}

double cdf(const BetaParams& p, double x, const Tolerance& tol) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return reg_inc_beta(x, p.a, p.b, tol);
}

double moments(const BetaParams& p, int r) {
  if (r < 1) throw std::invalid_argument("moments: order must be >= 1");
  return beta_raw_moment(p.a, p.b, r);
}

double expected_h(const BetaParams& p) { return beta_expected_h(p.a, p.b); }

}  // namespace moran
