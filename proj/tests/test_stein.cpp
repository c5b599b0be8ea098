#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "moran/model.hpp"
#include "moran/moments.hpp"
#include "moran/stein.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace moran;

namespace {

bool all_zero(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> n_dist(1, 40);
  std::uniform_int_distribution<long> num(1, 60), den(1, 12);
  while (true) {
    const std::int64_t n = n_dist(rng);
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    if (a + b < 2 * n) return ModelParams(n, a, b);
  }
}

}  // namespace

TEST_CASE("C constant") {
  const double pi = std::numbers::pi;
  CHECK(c_constant(1, 1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(c_constant(2, 2) == doctest::Approx(16.0 / 3.0).epsilon(1e-14));
  CHECK(c_constant(1.5, 1.5) == doctest::Approx(1.5 * pi).epsilon(1e-14));
  CHECK(c_constant(1, 2) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(c_constant(2, 0.5) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(c_constant(2, 3) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(c_constant(0.5, 2) == doctest::Approx(c_constant(2, 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(c_constant(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(c_constant(1.0, -2.0), std::domain_error);
}

TEST_CASE("C constant branch families agree at a = b = 1") {
  // The a != b branch with both shapes at most 1 is 2(a+b)B(a,b); at (1,1) it
  // meets the dedicated diagonal formula.
  const double off_diagonal = 2.0 * 2.0 * std::exp(log_beta(1.0, 1.0));
  CHECK(off_diagonal == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(c_constant(1, 1) == doctest::Approx(off_diagonal).epsilon(1e-14));
  CHECK(c_constant(0.3, 0.3) == 4.0);
  CHECK(c_constant(1.0 - 1e-9, 1.0 - 1e-9) == 4.0);
}

TEST_CASE("K constant") {
  CHECK(k_constant(1, 1) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(k_constant(0.5, 0.5) == doctest::Approx(2.5 + 0.625 * std::numbers::pi).epsilon(1e-14));
  for (double a : {0.2, 1.0, 4.0})
    for (double b : {0.7, 3.0}) {
      const double c = c_constant(a, b), c1 = c_constant(a + 1, b + 1);
      CHECK(k_constant(a, b) == doctest::Approx(((9 * a + 6 * b) * c + c1 + (a + b) * c1 * c) / 12).epsilon(1e-14));
    }
}

TEST_CASE("lower bound") {
  CHECK(lower_bound(ModelParams(2, 1, 1)) == Rational(1, 144));
  CHECK(lower_bound(ModelParams(10, 1, 1)) == Rational(1, 720));
  for (std::int64_t n : {4, 7, 40}) {
    const ModelParams p(n, Rational(3, 2), Rational(5));
    CHECK(lower_bound(ModelParams(2 * n, Rational(3, 2), Rational(5))) * 2 == lower_bound(p));
  }
}

TEST_CASE("S remainder") {
  const ModelParams p(2, 1, 1);
  CHECK(s_remainder(p, Rational(0)) == Rational(1, 8));
  CHECK(s_remainder(p, Rational(1, 4)) == Rational(1, 32));
  CHECK(s_remainder(p, Rational(1, 2)) == 0);
  CHECK(s_remainder(p, Rational(3, 4)) == Rational(1, 32));
  CHECK(s_remainder(p, Rational(1)) == Rational(1, 8));
}

TEST_CASE("generator identities vanish exactly") {
  for (const auto& p : {ModelParams(2, 1, 1), ModelParams(5, 2, 3), ModelParams(50, Rational(1, 2), 5)}) {
    CHECK(all_zero(verify_condition_1(p)));
    CHECK(all_zero(verify_condition_2(p)));
    CHECK(all_zero(detailed_balance_residuals(p, stationary_ratio_product(p))));
  }
  std::mt19937_64 rng(91);
  for (int k = 0; k < 60; ++k) {
    const ModelParams p = random_params(rng);
    CHECK(all_zero(verify_condition_1(p)));
    CHECK(all_zero(verify_condition_2(p)));
    CHECK(all_zero(detailed_balance_residuals(p, stationary_ratio_product(p))));
  }
}

TEST_CASE("detailed balance residuals detect a wrong law") {
  const ModelParams p(3, 1, 2);
  const auto uniform = LatticeDistribution::from_weights(3, std::vector<Integer>(7, 1));
  CHECK_FALSE(all_zero(detailed_balance_residuals(p, uniform)));
}

TEST_CASE("E|S| and the third-moment ratio") {
  const ModelParams p(2, 1, 1);
  const auto pi = stationary_ratio_product(p);
  const auto s = e_abs_s(p, pi);
  CHECK(s.exact == Rational(1, 20));
  CHECK(s.exact <= s.bound);
  const auto t = third_moment_ratio(p, pi);
  CHECK(t.exact == Rational(1, 10));
  CHECK(t.bound == Rational(1, 4));
  // The jump-size cube equals (1/n) E[W(1-W) + S] for unit steps.
  const Rational via_s = pi.exact_expectation([&](State i) {
    const Rational w(i, p.two_n());
    return Rational(w * (1 - w) + s_remainder(p, w));
  }) / 2;
  CHECK(t.exact == via_s);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 40; ++k) {
    const ModelParams q = random_params(rng);
    const auto lq = stationary_ratio_product(q);
    const auto sq = e_abs_s(q, lq);
    const auto tq = third_moment_ratio(q, lq);
    CHECK(sq.exact <= sq.bound);
    CHECK(tq.exact <= tq.bound);
  }
}

TEST_CASE("assembled upper bound") {
  const ModelParams p(2, 1, 1);
  CHECK(upper_bound_assembled(p, stationary_ratio_product(p)) == doctest::Approx(1.0).epsilon(1e-14));
  double prev = 1e300;
  for (std::int64_t n = 4; n <= 256; n *= 2) {
    const ModelParams q(n, Rational(1, 2), 2);
    const double u = upper_bound_assembled(q, stationary_ratio_product(q));
    CHECK(u < prev);
    CHECK(u <= bound_certificate(q).upper * (1 + 1e-12));
    prev = u;
  }
}

TEST_CASE("bound certificate") {
  const auto cert = bound_certificate(ModelParams(2, 1, 1));
  CHECK(cert.lower == doctest::Approx(1.0 / 144).epsilon(1e-14));
  CHECK(cert.gap == doctest::Approx(1.0 / 120).epsilon(1e-14));
  CHECK(cert.upper == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(cert.sandwich_ok);
  CHECK(cert.lower < cert.gap);
  for (std::int64_t n : {25, 100, 400})
    for (double a : {0.5, 2.0})
      for (double b : {1.0, 5.0}) {
        const auto c = bound_certificate(ModelParams(n, Rational(a), Rational(b)));
        CHECK(c.sandwich_ok);
        CHECK(c.lower < c.gap);
      }
}

TEST_CASE("stein report bundles the exact pieces") {
  const ModelParams p(5, 2, 3);
  const auto pi = stationary_ratio_product(p);
  const auto rep = stein_report(p, pi);
  CHECK(rep.lambda == Rational(1, 100));
  CHECK(max_abs(rep.cond1_residuals) == 0);
  CHECK(max_abs(rep.cond2_residuals) == 0);
  CHECK(rep.s_values.size() == 11);
  CHECK(rep.e_abs_s_exact == e_abs_s(p, pi).exact);
  CHECK(rep.assembled_upper == upper_bound_assembled(p, pi));
  CHECK(max_abs({Rational(-3, 2), Rational(1)}) == Rational(3, 2));
}
