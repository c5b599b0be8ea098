// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "moran/beta_dist.hpp"
#include "moran/distance.hpp"
#include "moran/moments.hpp"
#include "moran/stein.hpp"
#include "moran/sweep.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace moran;

namespace {

const std::vector<Rational> kShapes = {Rational(1, 2), Rational(1), Rational(2), Rational(5)};
const std::vector<std::int64_t> kSmallN = {2, 5, 10, 50};
const std::vector<std::int64_t> kLargeN = {25, 50, 100, 200, 400, 800};

// Valid (a, b, n) combinations of the shape grid with the given n values.
std::vector<ModelParams> grid(const std::vector<std::int64_t>& ns) {
  std::vector<ModelParams> out;
  for (const auto& a : kShapes)
    for (const auto& b : kShapes)
      for (std::int64_t n : ns)
        if (a + b < 2 * n) out.emplace_back(n, a, b);
  return out;
}

bool all_zero(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string name(const ModelParams& p) {
  return "(n=" + std::to_string(p.n()) + ", a=" + to_fraction_string(p.a()) + ", b=" + to_fraction_string(p.b()) + ")";
}

Outcome condition_1() {
  const auto pts = grid(kSmallN);
  for (const auto& p : pts)
    if (!all_zero(verify_condition_1(p))) return {false, "nonzero residual at " + name(p)};
  return {true, std::to_string(pts.size()) + " points, all residuals 0"};
}

Outcome condition_2() {
  const auto pts = grid(kSmallN);
  for (const auto& p : pts)
    if (!all_zero(verify_condition_2(p))) return {false, "nonzero residual at " + name(p)};
  return {true, std::to_string(pts.size()) + " points, all residuals 0"};
}

Outcome detailed_balance() {
  const auto pts = grid(kSmallN);
  for (const auto& p : pts)
    if (!all_zero(detailed_balance_residuals(p, stationary_ratio_product(p)))) return {false, "imbalance at " + name(p)};
  return {true, std::to_string(pts.size()) + " points, exact balance"};
}

Outcome variance_identity() {
  const auto pts = grid(kSmallN);
  for (const auto& p : pts) {
    const auto pi = stationary_ratio_product(p);
    const Rational m1 = moment_by_summation(pi, 1);
    if (variance(p) != Rational(moment_by_summation(pi, 2) - m1 * m1)) return {false, "mismatch at " + name(p)};
  }
  if (variance(ModelParams(2, 1, 1)) != Rational(1, 10)) return {false, "spot value differs from 1/10"};
  return {true, std::to_string(pts.size()) + " points exact; Var = 1/10 at (2,1,1)"};
}

Outcome moment_recursion_check() {
  const auto pts = grid({2, 5, 10});
  for (const auto& p : pts) {
    const auto pi = stationary_ratio_product(p);
    const auto t = moment_recursion(p, 6);
    for (int r = 1; r <= 6; ++r)
      if (t.at(r) != moment_by_summation(pi, r)) return {false, "order " + std::to_string(r) + " at " + name(p)};
    if (t.at(1) != mean(p) || Rational(t.at(2) - t.at(1) * t.at(1)) != variance(p))
      return {false, "mean/variance mismatch at " + name(p)};
  }
  return {true, std::to_string(pts.size()) + " points, r = 1..6 exact"};
}

Outcome sandwich() {
  std::vector<std::int64_t> ns = kLargeN;
  ns.push_back(1600);
  const auto pts = grid(ns);
  for (const auto& p : pts) {
    const Rational lower = lower_bound(p), gap = gap_h(p);
    const double upper = k_constant(p.a_value(), p.b_value()) / static_cast<double>(p.n());
    if (!(lower <= gap) || !(to_double(gap) <= upper)) return {false, "sandwich broken at " + name(p)};
  }
  const ModelParams spot(2, 1, 1);
  const double upper = bound_certificate(spot).upper;
  if (lower_bound(spot) != Rational(1, 144) || gap_h(spot) != Rational(1, 120) || std::fabs(upper - 4.5) > 1e-12)
    return {false, "spot values differ"};
  return {pts.size() >= 100, std::to_string(pts.size()) + " points; spot 1/144 <= 1/120 <= " + fmt("%.15g", upper)};
}

Outcome proof_inequalities() {
  const auto pts = grid(kSmallN);
  for (const auto& p : pts) {
    const auto pi = stationary_ratio_product(p);
    const auto s = e_abs_s(p, pi);
    const auto t = third_moment_ratio(p, pi);
    const Rational s_bound = (3 * p.a() + 2 * p.b()) / (4 * Rational(p.n()));
    const Rational t_bound = Rational(1) / (2 * Rational(p.n()));
    if (s.bound != s_bound || !(s.exact <= s_bound)) return {false, "E|S| bound fails at " + name(p)};
    if (t.bound != t_bound || !(t.exact <= t_bound)) return {false, "third-moment bound fails at " + name(p)};
  }
  return {true, std::to_string(pts.size()) + " points, both bounds exact"};
}

Outcome rate_recovery() {
  std::vector<double> ns(kLargeN.begin(), kLargeN.end());
  double worst = 0.0;
  for (const auto& a : kShapes)
    for (const auto& b : kShapes) {
      std::vector<double> gaps;
      for (std::int64_t n : kLargeN) gaps.push_back(to_double(gap_h(ModelParams(n, a, b))));
      worst = std::max(worst, std::fabs(loglog_slope(ns, gaps) + 1.0));
    }
  return {worst <= 0.05, "16 slopes, max |slope + 1| = " + fmt("%.4f", worst)};
}

Outcome closed_form() {
  const auto pts = grid({2, 5, 10, 50, 100, 200, 500});
  double worst_tv = 0.0, worst_res = 0.0;
  for (const auto& p : pts) {
    const auto exact = stationary_ratio_product(p);
    const auto closed = stationary_closed_form(p);
    worst_tv = std::max(worst_tv, total_variation(exact, closed));
    worst_res = std::max({worst_res, fixed_point_residual(p, exact), fixed_point_residual(p, closed)});
  }
  return {worst_tv <= 1e-10 && worst_res <= 1e-12,
          std::to_string(pts.size()) + " points, max TV " + fmt("%.2e", worst_tv) + ", max residual " +
              fmt("%.2e", worst_res)};
}

Outcome beta_convergence() {
  double fitted = 0.0;
  for (const auto& a : kShapes)
    for (const auto& b : kShapes) {
      const Rational limit = beta_variance(a, b);
      Rational prev = -1;
      for (std::int64_t n : kLargeN) {
        const Rational d = abs(Rational(variance(ModelParams(n, a, b)) - limit));
        if (prev >= 0 && !(d < prev)) return {false, "not monotone at n=" + std::to_string(n)};
        fitted = std::max(fitted, to_double(Rational(d * n)));
        prev = d;
      }
      // The fitted constant must also cover the largest n checked.
      const Rational far = abs(Rational(variance(ModelParams(12800, a, b)) - limit));
      if (to_double(Rational(far * 12800)) > fitted) return {false, "C/n envelope exceeded at n=12800"};
    }
  return {std::isfinite(fitted), "fitted C = " + fmt("%.6g", fitted) + ", monotone on 96 points"};
}

Outcome special_functions() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0), shape(0.0, 10.0);
  double worst_q = 0.0, worst_s = 0.0;
  int drawn = 0;
  while (drawn < 1000) {
    const double x = unit(rng), a = shape(rng), b = shape(rng);
    if (x == 0.0 || a == 0.0 || b == 0.0) continue;
    ++drawn;
    worst_q = std::max(worst_q, std::fabs(reg_inc_beta(x, a, b) - oracle::beta_cdf_by_quadrature(x, a, b)));
    const double xs = 1.0 - (1.0 - x);  // 1 - xs is exact
    worst_s = std::max(worst_s, std::fabs(reg_inc_beta(xs, a, b) + reg_inc_beta(1.0 - xs, b, a) - 1.0));
  }
  return {worst_q <= 1e-9 && worst_s <= 2e-14,
          "1000 draws, quadrature " + fmt("%.2e", worst_q) + ", symmetry " + fmt("%.2e", worst_s)};
}

Outcome monte_carlo() {
  const ModelParams p(10, 1, 1);
  const auto pi = stationary_ratio_product(p);
  const auto iid = check_iid_samples(pi, 1000000, 12345);
  const auto chain = check_chain_occupation(p, pi, 1000000, 54321);
  return {iid.flags() == 0 && chain.flags() == 0,
          "i.i.d. flags " + std::to_string(iid.flags()) + " (TV " + fmt("%.2e", iid.total_variation) +
              "), chain flags " + std::to_string(chain.flags()) + " (TV " + fmt("%.2e", chain.total_variation) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"condition 1 residuals exactly zero", condition_1},
      {"condition 2 residuals exactly zero", condition_2},
      {"detailed balance exact", detailed_balance},
      {"variance identity exact", variance_identity},
      {"moment recursion equals summation", moment_recursion_check},
      {"lower <= gap <= K/n sandwich", sandwich},
      {"E|S| and third-moment bounds", proof_inequalities},
      {"gap log-log slope within 0.05 of -1", rate_recovery},
      {"closed-form law and kernel fixed points", closed_form},
      {"variance converges at rate C/n", beta_convergence},
      {"incomplete beta accuracy", special_functions},
      {"Monte Carlo consistency", monte_carlo},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu  %-40s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
