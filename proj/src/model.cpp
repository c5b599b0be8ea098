#include "moran/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace moran {

namespace {

// Uniform on [0,1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Integer lcm(const Integer& x, const Integer& y) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return out;
}

// (2n)^2 p(i,i+1) and (2n)^2 p(i,i-1) as exact rationals.
Rational scaled_up(const ModelParams& p, State i) {
  const Rational two_n = p.two_n();
  const Rational x = i;
  return x * (two_n - x) * (1 - p.u()) + p.v() * (two_n - x) * (two_n - x);
}

Rational scaled_down(const ModelParams& p, State i) {
  const Rational two_n = p.two_n();
  const Rational x = i;
  return x * (two_n - x) * (1 - p.v()) + p.u() * x * x;
}

}  // namespace

ModelParams::ModelParams(std::int64_t n, Rational a, Rational b) : n_(n), a_(std::move(a)), b_(std::move(b)) {
  a_.canonicalize();
  b_.canonicalize();
  if (n_ < 1) throw std::invalid_argument("invalid parameters: n must be >= 1 (got " + std::to_string(n_) + ")");
  if (sgn(a_) <= 0) throw std::invalid_argument("invalid parameters: a must be > 0 (got " + to_fraction_string(a_) + ")");
  if (sgn(b_) <= 0) throw std::invalid_argument("invalid parameters: b must be > 0 (got " + to_fraction_string(b_) + ")");
  if (a_ + b_ >= Rational(2 * n_))
    throw std::invalid_argument("invalid parameters: a + b must be < 2n (got a + b = " + to_fraction_string(Rational(a_ + b_)) +
                                ", 2n = " + std::to_string(2 * n_) + ")");
  const Rational two_n = 2 * n_;
  u_ = b_ / two_n;
  v_ = a_ / two_n;
  lambda_ = Rational(1, 4) / (Rational(n_) * Rational(n_));

  const Rational denom = two_n * two_n;
  for (State i = 0; i <= 2 * n_; ++i) {
    if (scaled_up(*this, i) + scaled_down(*this, i) > denom)
      throw std::invalid_argument("invalid parameters: p(i,i-1) + p(i,i+1) exceeds 1 at i = " + std::to_string(i));
  }
}

ModelParams ModelParams::from_mutation_rates(std::int64_t n, const Rational& u, const Rational& v) {
  const Rational two_n = 2 * n;
  return ModelParams(n, Rational(two_n * v), Rational(two_n * u));
}

TransitionTriple transition(const ModelParams& params, State i) {
  if (i < 0 || i > params.two_n())
    throw std::out_of_range("transition: state " + std::to_string(i) + " outside {0,...," +
                            std::to_string(params.two_n()) + "}");
  const Rational denom = Rational(params.two_n()) * params.two_n();
  TransitionTriple t;
  t.down = scaled_down(params, i) / denom;
  t.up = scaled_up(params, i) / denom;
  t.stay = 1 - t.down - t.up;
  return t;
}

KernelArrays kernel_arrays(const ModelParams& params) {
  const Eigen::Index m = params.num_states();
  KernelArrays k{Eigen::ArrayXd(m), Eigen::ArrayXd(m), Eigen::ArrayXd(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const TransitionTriple t = transition(params, i);
    k.down(i) = to_double(t.down);
    k.stay(i) = to_double(t.stay);
    k.up(i) = to_double(t.up);
  }
  return k;
}

Eigen::VectorXd apply_kernel(const KernelArrays& kernel, const Eigen::VectorXd& pi) {
  const Eigen::Index m = pi.size();
  if (kernel.stay.size() != m) throw std::invalid_argument("apply_kernel: size mismatch");
  Eigen::VectorXd out = (pi.array() * kernel.stay).matrix();
  if (m > 1) {
    out.tail(m - 1).array() += pi.head(m - 1).array() * kernel.up.head(m - 1);
    out.head(m - 1).array() += pi.tail(m - 1).array() * kernel.down.tail(m - 1);
  }
  return out;
}

LatticeDistribution LatticeDistribution::from_weights(std::int64_t n, std::vector<Integer> weights) {
  if (n < 1) throw std::invalid_argument("LatticeDistribution: n must be >= 1");
  if (static_cast<std::int64_t>(weights.size()) != 2 * n + 1)
    throw std::invalid_argument("LatticeDistribution: expected 2n+1 weights");
  Integer total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("LatticeDistribution: negative weight");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("LatticeDistribution: weights sum to zero");
  Eigen::VectorXd probs(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) probs(static_cast<Eigen::Index>(i)) = ratio_to_double(weights[i], total);
  return LatticeDistribution(n, std::move(probs), Exact{std::move(weights), std::move(total)});
}

LatticeDistribution LatticeDistribution::from_probabilities(std::int64_t n, Eigen::VectorXd probs) {
  if (n < 1) throw std::invalid_argument("LatticeDistribution: n must be >= 1");
  if (probs.size() != 2 * n + 1) throw std::invalid_argument("LatticeDistribution: expected 2n+1 probabilities");
  if ((probs.array() < 0.0).any() || !probs.allFinite())
    throw std::invalid_argument("LatticeDistribution: probabilities must be finite and nonnegative");
  const double s = probs.sum();
  if (std::fabs(s - 1.0) > 1e-12) throw std::invalid_argument("LatticeDistribution: probabilities must sum to 1");
  probs /= s;
  return LatticeDistribution(n, std::move(probs), std::nullopt);
}

const std::vector<Integer>& LatticeDistribution::weights() const {
  if (!exact_) throw std::logic_error("LatticeDistribution: no exact representation");
  return exact_->weights;
}

const Integer& LatticeDistribution::total() const {
  if (!exact_) throw std::logic_error("LatticeDistribution: no exact representation");
  return exact_->total;
}

Rational LatticeDistribution::exact_prob(State i) const {
  Rational q(weights().at(static_cast<std::size_t>(i)), total());
  q.canonicalize();
  return q;
}

LatticeDistribution stationary_ratio_product(const ModelParams& params) {
  const State two_n = params.two_n();
  const auto m = static_cast<std::size_t>(two_n + 1);

  // Scale every up/down rate by a common denominator so the products stay
  // integral: weight_i = prod_{k<i} up_k * prod_{k>i} down_k.
  std::vector<Rational> up(m), down(m);
  Integer common = 1;
  for (State i = 0; i <= two_n; ++i) {
    up[i] = scaled_up(params, i);
    down[i] = scaled_down(params, i);
    common = lcm(common, up[i].get_den());
    common = lcm(common, down[i].get_den());
  }
  std::vector<Integer> up_int(m), down_int(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational su = up[i] * common;
    Rational sd = down[i] * common;
    up_int[i] = su.get_num();
    down_int[i] = sd.get_num();
  }
  for (State i = 1; i <= two_n; ++i)
    if (down_int[i] == 0) throw std::domain_error("stationary_ratio_product: p(i+1,i) vanishes");

  std::vector<Integer> suffix(m + 1);
  suffix[m] = 1;
  for (std::size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] * (k == 0 ? Integer(1) : down_int[k]);

  std::vector<Integer> weights(m);
  Integer prefix = 1;
  for (std::size_t i = 0; i < m; ++i) {
    weights[i] = prefix * suffix[i + 1];
    prefix *= up_int[i];
  }
  return LatticeDistribution::from_weights(params.n(), std::move(weights));
}

ClosedFormConstants closed_form_constants(const ModelParams& params) {
  const Rational two_n = params.two_n();
  const Rational scale = 1 - params.u() - params.v();
  ClosedFormConstants c;
  c.A = two_n * params.v() / scale;
  c.B = two_n * (1 - params.v()) / scale;
  c.C = two_n * params.u() / scale;
  c.D = two_n / scale;
  c.pi0 = std::exp(log_gamma(to_double(c.B)) + log_gamma(to_double(Rational(c.A + c.C))) - log_gamma(to_double(c.D)) -
                   log_gamma(to_double(c.C)));
  return c;
}

LatticeDistribution stationary_closed_form(const ModelParams& params) {
  const ClosedFormConstants c = closed_form_constants(params);
  if (sgn(Rational(c.B - params.two_n())) <= 0) throw std::domain_error("stationary_closed_form: B - 2n must be positive");
  const double A = to_double(c.A);
  const double B = to_double(c.B);
  const State two_n = params.two_n();
  const double log_fact_2n = log_gamma(static_cast<double>(two_n) + 1.0);
  const double log_norm = std::log(c.pi0) - log_gamma(A) - log_gamma(B);

  Eigen::VectorXd logp(two_n + 1);
  for (State i = 0; i <= two_n; ++i) {
    const double di = static_cast<double>(i);
    logp(i) = log_norm + log_fact_2n - log_gamma(di + 1.0) - log_gamma(static_cast<double>(two_n - i) + 1.0) +
              log_gamma(di + A) + log_gamma(B - di);
  }
  const double peak = logp.maxCoeff();
  Eigen::VectorXd p = (logp.array() - peak).exp().matrix();
  p /= p.sum();
  return LatticeDistribution::from_probabilities(params.n(), std::move(p));
}

LatticeDistribution power_iteration_oracle(const ModelParams& params, const Tolerance& tol) {
  tol.validate();
  const KernelArrays kernel = kernel_arrays(params);
  const Eigen::Index m = params.num_states();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  for (int sweep = 0; sweep < tol.max_iter; ++sweep) {
    Eigen::VectorXd next = apply_kernel(kernel, pi);
    next /= next.sum();
    const double tv = 0.5 * (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (tv < tol.abs_eps) return LatticeDistribution::from_probabilities(params.n(), std::move(pi));
  }
  throw NonConvergence("power_iteration_oracle: no fixed point within " + std::to_string(tol.max_iter) + " sweeps");
}

double fixed_point_residual(const ModelParams& params, const LatticeDistribution& pi) {
  if (pi.n() != params.n()) throw std::invalid_argument("fixed_point_residual: lattice size mismatch");
  return (apply_kernel(kernel_arrays(params), pi.probs()) - pi.probs()).lpNorm<1>();
}

double total_variation(const LatticeDistribution& p, const LatticeDistribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: lattice size mismatch");
  return 0.5 * (p.probs() - q.probs()).lpNorm<1>();
}

std::vector<State> sample_stationary(const LatticeDistribution& dist, std::uint64_t seed, std::size_t count) {
  std::vector<double> cdf(static_cast<std::size_t>(dist.size()));
  std::partial_sum(dist.probs().begin(), dist.probs().end(), cdf.begin());
  cdf.back() = 1.0;

  std::mt19937_64 rng(seed);
  std::vector<State> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out.push_back(static_cast<State>(std::min<std::ptrdiff_t>(it - cdf.begin(), dist.size() - 1)));
  }
  return out;
}

std::vector<State> simulate_chain(const ModelParams& params, State start, std::size_t steps, std::uint64_t seed) {
  if (start < 0 || start > params.two_n()) throw std::out_of_range("simulate_chain: start state out of range");
  const KernelArrays kernel = kernel_arrays(params);
  std::mt19937_64 rng(seed);
  std::vector<State> path;
  path.reserve(steps + 1);
  path.push_back(start);
  State i = start;
  for (std::size_t k = 0; k < steps; ++k) {
    const double u = uniform01(rng);
    if (u < kernel.down(i))
      --i;
    else if (u < kernel.down(i) + kernel.up(i))
      ++i;
    path.push_back(i);
  }
  return path;
}

}  // namespace moran
