#include "moran/stein.hpp"

#include "moran/distance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace moran {

namespace {

void require_exact(const ModelParams& params, const LatticeDistribution& pi, const char* who) {
  if (!pi.has_exact()) throw std::invalid_argument(std::string(who) + ": exact stationary distribution required");
  if (pi.n() != params.n()) throw std::invalid_argument(std::string(who) + ": lattice size mismatch");
}

Rational lattice_point(const ModelParams& params, State i) { return Rational(i, params.two_n()); }

}  // namespace

double c_constant(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("c_constant: arguments must be positive");
  if (a == b) {
    if (a < 1.0) return 4.0;
    return 2.0 * a * std::sqrt(std::numbers::pi) * std::exp(log_gamma(a) - log_gamma(a + 0.5));
  }
  double factor;
  if (a <= 1.0 && b <= 1.0)
    factor = std::exp(log_beta(a, b));
  else if (a <= 1.0)
    factor = 1.0 / a;
  else if (b <= 1.0)
    factor = 1.0 / b;
  else
    factor = std::exp(-log_beta(a, b)) / (a * b);
  return 2.0 * (a + b) * factor;
}

double k_constant(double a, double b) {
  const double c = c_constant(a, b);
  const double c_shift = c_constant(a + 1.0, b + 1.0);
  return ((9.0 * a + 6.0 * b) * c + c_shift + (a + b) * c_shift * c) / 12.0;
}

Rational lower_bound(const ModelParams& params) {
  const Rational& a = params.a();
  const Rational& b = params.b();
  const Rational s = a + b;
  return a * b / (4 * Rational(params.n()) * s * (1 + s) * (1 + s));
}

Rational s_remainder(const ModelParams& params, const Rational& w) {
  const Rational& a = params.a();
  const Rational& b = params.b();
  return (2 * (a + b) * w * w - (3 * a + b) * w + a) / (4 * Rational(params.n()));
}

std::vector<Rational> verify_condition_1(const ModelParams& params) {
  const Rational two_n = params.two_n();
  const Rational inv_lambda = 1 / params.lambda();
  std::vector<Rational> residuals;
  residuals.reserve(static_cast<std::size_t>(params.num_states()));
  for (State i = 0; i <= params.two_n(); ++i) {
    const TransitionTriple t = transition(params, i);
    const Rational lhs = inv_lambda * (t.up - t.down) / two_n;
    const Rational rhs = params.a() - (params.a() + params.b()) * lattice_point(params, i);
    residuals.emplace_back(lhs - rhs);
  }
  return residuals;
}

std::vector<Rational> verify_condition_2(const ModelParams& params) {
  const Rational step_sq = 1 / (Rational(params.two_n()) * params.two_n());
  const Rational half_inv_lambda = 1 / (2 * params.lambda());
  std::vector<Rational> residuals;
  residuals.reserve(static_cast<std::size_t>(params.num_states()));
  for (State i = 0; i <= params.two_n(); ++i) {
    const TransitionTriple t = transition(params, i);
    const Rational w = lattice_point(params, i);
    const Rational lhs = half_inv_lambda * step_sq * (t.up + t.down);
    const Rational rhs = w * (1 - w) + s_remainder(params, w);
    residuals.emplace_back(lhs - rhs);
  }
  return residuals;
}

std::vector<Rational> detailed_balance_residuals(const ModelParams& params, const LatticeDistribution& pi) {
  require_exact(params, pi, "detailed_balance_residuals");
  const auto& w = pi.weights();
  std::vector<Rational> residuals;
  residuals.reserve(static_cast<std::size_t>(params.two_n()));
  for (State i = 0; i < params.two_n(); ++i) {
    const Rational forward = Rational(w[i]) * transition(params, i).up;
    const Rational backward = Rational(w[i + 1]) * transition(params, i + 1).down;
    residuals.emplace_back((forward - backward) / Rational(pi.total()));
  }
  return residuals;
}

ExactWithBound e_abs_s(const ModelParams& params, const LatticeDistribution& pi) {
  require_exact(params, pi, "e_abs_s");
  ExactWithBound out;
  out.exact = pi.exact_expectation([&](State i) { return Rational(abs(s_remainder(params, lattice_point(params, i)))); });
  out.bound = (3 * params.a() + 2 * params.b()) / (4 * Rational(params.n()));
  return out;
}

ExactWithBound third_moment_ratio(const ModelParams& params, const LatticeDistribution& pi) {
  require_exact(params, pi, "third_moment_ratio");
  const Rational two_n = params.two_n();
  // |W'-W|^3 is (1/(2n))^3 whenever the chain moves and 0 otherwise.
  const Rational jump_rate = pi.exact_expectation([&](State i) {
    const TransitionTriple t = transition(params, i);
    return Rational(t.up + t.down);
  });
  ExactWithBound out;
  out.exact = jump_rate / (two_n * two_n * two_n * params.lambda());
  out.bound = 1 / two_n;
  return out;
}

double upper_bound_assembled(const ModelParams& params, const LatticeDistribution& pi) {
  const double a = params.a_value();
  const double b = params.b_value();
  const double c = c_constant(a, b);
  const double c_shift = c_constant(a + 1.0, b + 1.0);
  const double abs_s = to_double(e_abs_s(params, pi).exact);
  const double cubed = to_double(third_moment_ratio(params, pi).exact);
  return c * abs_s + (c_shift + (a + b) * c_shift * c) * cubed / 6.0;
}

BoundCertificate bound_certificate(const ModelParams& params) {
  BoundCertificate cert;
  cert.lower = to_double(lower_bound(params));
  cert.gap = to_double(gap_h(params));
  cert.upper = k_constant(params.a_value(), params.b_value()) / static_cast<double>(params.n());
  cert.sandwich_ok = cert.lower <= cert.gap + kSandwichSlack && cert.gap <= cert.upper + kSandwichSlack;
  return cert;
}

SteinReport stein_report(const ModelParams& params, const LatticeDistribution& pi) {
  require_exact(params, pi, "stein_report");
  SteinReport r;
  r.lambda = params.lambda();
  r.cond1_residuals = verify_condition_1(params);
  r.cond2_residuals = verify_condition_2(params);
  r.s_values.reserve(static_cast<std::size_t>(params.num_states()));
  for (State i = 0; i <= params.two_n(); ++i) r.s_values.push_back(s_remainder(params, lattice_point(params, i)));
  const ExactWithBound s = e_abs_s(params, pi);
  r.e_abs_s_exact = s.exact;
  r.e_abs_s_bound = s.bound;
  const ExactWithBound cubed = third_moment_ratio(params, pi);
  r.e_cubed_over_lambda_exact = cubed.exact;
  r.e_cubed_over_lambda_bound = cubed.bound;
  r.assembled_upper = upper_bound_assembled(params, pi);
  return r;
}

Rational max_abs(const std::vector<Rational>& values) {
  Rational m = 0;
  for (const auto& v : values)
    if (abs(v) > m) m = abs(v);
  return m;
}

}  // namespace moran
