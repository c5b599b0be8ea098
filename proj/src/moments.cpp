#include "moran/moments.hpp"

#include <array>
#include <stdexcept>

namespace moran {

namespace {

Integer binomial(int r, int k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(k));
  return out;
}

// out += lhs * rhs for polynomials stored lowest degree first.
void add_product(std::vector<Rational>& out, const std::vector<Rational>& lhs, const std::vector<Rational>& rhs) {
  if (out.size() < lhs.size() + rhs.size() - 1) out.resize(lhs.size() + rhs.size() - 1, Rational(0));
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs[i] * rhs[j];
}

}  // namespace

Rational mean(const ModelParams& params) { return params.a() / (params.a() + params.b()); }

Rational variance(const ModelParams& params) {
  const Rational& a = params.a();
  const Rational& b = params.b();
  const Rational n = params.n();
  const Rational s = a + b;
  return 2 * a * b * n / (s * s * (2 * n + a * (2 * n - 1) + b * (2 * n - 1)));
}

std::vector<Rational> moment_drift_polynomial(const ModelParams& params, int r) {
  if (r < 1) throw std::invalid_argument("moment_drift_polynomial: order must be >= 1");
  const Rational two_n = params.two_n();
  const Rational& u = params.u();
  const Rational& v = params.v();

  // (2n)^2 p(I, I+1) and (2n)^2 p(I, I-1) as quadratics in I.
  const std::vector<Rational> up = {v * two_n * two_n, two_n * (1 - u) - 2 * two_n * v, v - (1 - u)};
  const std::vector<Rational> down = {Rational(0), two_n * (1 - v), u - (1 - v)};

  // (I+1)^r - I^r and (I-1)^r - I^r
  std::vector<Rational> step_up(static_cast<std::size_t>(r)), step_down(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    const Rational c(binomial(r, j));
    step_up[j] = c;
    step_down[j] = ((r - j) % 2 == 0) ? c : Rational(-c);
  }

  std::vector<Rational> poly;
  add_product(poly, up, step_up);
  add_product(poly, down, step_down);
  if (static_cast<int>(poly.size()) != r + 2 || sgn(poly.back()) != 0)
    throw std::logic_error("moment_drift_polynomial: degree r+1 term failed to cancel");
  poly.pop_back();
  return poly;
}

MomentTable moment_recursion(const ModelParams& params, int r_max) {
  if (r_max < 1) throw std::invalid_argument("moment_recursion: r_max must be >= 1");
  // Moments of I first; index k holds E[I^k].
  std::vector<Rational> count_moments = {Rational(1)};
  for (int r = 1; r <= r_max; ++r) {
    const std::vector<Rational> q = moment_drift_polynomial(params, r);
    if (sgn(q[r]) == 0) throw std::logic_error("moment_recursion: vanishing leading coefficient");
    Rational lower = 0;
    for (int k = 0; k < r; ++k) lower += q[k] * count_moments[k];
    count_moments.emplace_back(-lower / q[r]);
  }

  MomentTable table{params, {}};
  table.values.reserve(static_cast<std::size_t>(r_max));
  Rational scale = 1;
  for (int r = 1; r <= r_max; ++r) {
    scale *= params.two_n();
    table.values.emplace_back(count_moments[r] / scale);
  }
  return table;
}

Rational moment_by_summation(const LatticeDistribution& pi, int r) {
  if (r < 0) throw std::invalid_argument("moment_by_summation: order must be >= 0");
  const auto& w = pi.weights();
  Integer acc = 0;
  Integer power;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(r));
    acc += w[i] * power;
  }
  Integer denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(2 * pi.n()), static_cast<unsigned long>(r));
  denom *= pi.total();
  Rational out(acc, denom);
  out.canonicalize();
  return out;
}

bool hankel_psd(const MomentTable& table) {
  if (table.r_max() < 4) throw std::invalid_argument("hankel_psd: moments up to order 4 required");
  std::array<Rational, 5> m;
  m[0] = 1;
  for (int r = 1; r <= 4; ++r) m[r] = table.at(r);
  auto h = [&](int i, int j) -> const Rational& { return m[i + j]; };

  for (int i = 0; i < 3; ++i)
    if (sgn(h(i, i)) < 0) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (sgn(Rational(h(i, i) * h(j, j) - h(i, j) * h(j, i))) < 0) return false;
  const Rational det = h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
                       h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
                       h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
  return sgn(det) >= 0;
}

}  // namespace moran
