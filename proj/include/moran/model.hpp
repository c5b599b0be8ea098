#pragma once

#include "moran/rational.hpp"
#include "moran/special_fn.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace moran {

using State = std::int64_t;

/// Two-allele Moran chain on {0, ..., 2n} with rescaled mutation rates
/// a = 2nv and b = 2nu. Immutable once constructed.
class ModelParams {
 public:
  /// Throws std::invalid_argument naming the violated constraint when
  /// n < 1, a <= 0, b <= 0, a + b >= 2n, or some p(i,i) < 0.
  ModelParams(std::int64_t n, Rational a, Rational b);

  /// Converts raw per-generation rates (u, v) to (a, b) = (2nv, 2nu).
  static ModelParams from_mutation_rates(std::int64_t n, const Rational& u, const Rational& v);

  std::int64_t n() const { return n_; }
  std::int64_t two_n() const { return 2 * n_; }
  std::int64_t num_states() const { return 2 * n_ + 1; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& u() const { return u_; }
  const Rational& v() const { return v_; }
  /// 1 / (4 n^2)
  const Rational& lambda() const { return lambda_; }

  double a_value() const { return a_.get_d(); }
  double b_value() const { return b_.get_d(); }

 private:
  std::int64_t n_;
  Rational a_, b_, u_, v_, lambda_;
};

struct TransitionTriple {
  Rational down;
  Rational stay;
  Rational up;
};

/// Exact kernel row at state i. Throws std::out_of_range unless 0 <= i <= 2n.
TransitionTriple transition(const ModelParams& params, State i);

/// Floating mirror of the tridiagonal kernel, derived from the exact rows.
struct KernelArrays {
  Eigen::ArrayXd down;
  Eigen::ArrayXd stay;
  Eigen::ArrayXd up;
};

KernelArrays kernel_arrays(const ModelParams& params);

/// Row vector times kernel: (pi P)_j = pi_{j-1} up_{j-1} + pi_j stay_j + pi_{j+1} down_{j+1}.
Eigen::VectorXd apply_kernel(const KernelArrays& kernel, const Eigen::VectorXd& pi);

/// Probability vector on the lattice {i / (2n)}. Carries exact integer weights
/// (probability = weight / total) when built from rational data; the floating
/// vector is always present and derived from the exact one when both exist.
class LatticeDistribution {
 public:
  /// Exact distribution from nonnegative integer weights with positive sum.
  static LatticeDistribution from_weights(std::int64_t n, std::vector<Integer> weights);

  /// Floating-only distribution. Entries must be nonnegative and sum to 1
  /// within 1e-12; the vector is renormalized.
  static LatticeDistribution from_probabilities(std::int64_t n, Eigen::VectorXd probs);

  std::int64_t n() const { return n_; }
  std::int64_t size() const { return static_cast<std::int64_t>(probs_.size()); }
  double support_point(State i) const { return static_cast<double>(i) / static_cast<double>(2 * n_); }

  const Eigen::VectorXd& probs() const { return probs_; }
  double prob(State i) const { return probs_(i); }

  bool has_exact() const { return exact_.has_value(); }
  /// Throw std::logic_error when the distribution is floating-only.
  const std::vector<Integer>& weights() const;
  const Integer& total() const;
  Rational exact_prob(State i) const;

  /// Exact sum_i pi(i) f(i) for f returning Rational.
  template <class F>
  Rational exact_expectation(F&& f) const {
    const auto& w = weights();
    Rational acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0) continue;
      acc += Rational(w[i]) * f(static_cast<State>(i));
    }
    acc /= Rational(total());
    return acc;
  }

 private:
  struct Exact {
    std::vector<Integer> weights;
    Integer total;
  };

  LatticeDistribution(std::int64_t n, Eigen::VectorXd probs, std::optional<Exact> exact)
      : n_(n), probs_(std::move(probs)), exact_(std::move(exact)) {}

  std::int64_t n_;
  Eigen::VectorXd probs_;
  std::optional<Exact> exact_;
};

/// Exact stationary law from detailed balance, pi(i+1)/pi(i) = p(i,i+1)/p(i+1,i).
/// This is the reference representation.
LatticeDistribution stationary_ratio_product(const ModelParams& params);

/// The constants of the Gamma-function formula for pi.
struct ClosedFormConstants {
  Rational A, B, C, D;
  /// Gamma(B) Gamma(A+C) / [Gamma(D) Gamma(C)]
  double pi0;
};

ClosedFormConstants closed_form_constants(const ModelParams& params);

/// Gamma-function formula for pi evaluated in log space and normalized by
/// log-sum-exp. Floating-only.
LatticeDistribution stationary_closed_form(const ModelParams& params);

/// Iterates the kernel from the uniform vector until successive iterates are
/// within tol.abs_eps in total variation. Throws NonConvergence after
/// tol.max_iter sweeps.
LatticeDistribution power_iteration_oracle(const ModelParams& params, const Tolerance& tol);

/// ||pi P - pi||_1 computed with the floating kernel.
double fixed_point_residual(const ModelParams& params, const LatticeDistribution& pi);

/// Total variation distance between two distributions on the same lattice.
double total_variation(const LatticeDistribution& p, const LatticeDistribution& q);

/// count i.i.d. draws from dist by inverse-CDF lookup; deterministic in seed.
std::vector<State> sample_stationary(const LatticeDistribution& dist, std::uint64_t seed, std::size_t count);

/// steps + 1 states starting at start (which is included); deterministic in seed.
std::vector<State> simulate_chain(const ModelParams& params, State start, std::size_t steps, std::uint64_t seed);

}  // namespace moran
