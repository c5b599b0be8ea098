#include "moran/sweep.hpp"

#include "moran/beta_dist.hpp"
#include "moran/distance.hpp"
#include "moran/moments.hpp"
#include "moran/stein.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

namespace moran {

namespace {

using nlohmann::json;

std::string tuple_name(const Rational& a, const Rational& b, std::int64_t n) {
  return "(a=" + to_fraction_string(a) + ", b=" + to_fraction_string(b) + ", n=" + std::to_string(n) + ")";
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void put(json& obj, const std::string& key, const Rational& q, bool exact) {
  obj[key] = sgn(q) == 0 ? 0.0 : to_double(q);
  if (exact) obj[key + "_pq"] = to_fraction_string(q);
}

json rational_array(const std::vector<Rational>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(sgn(v) == 0 ? 0.0 : to_double(v));
  return arr;
}

}  // namespace

void SweepConfig::validate() const {
  if (a_values.empty() || b_values.empty() || n_values.empty())
    throw std::invalid_argument("sweep: a, b and n lists must be non-empty");
  if (r_max < 1) throw std::invalid_argument("sweep: r_max must be >= 1");
  for (const auto& a : a_values)
    for (const auto& b : b_values)
      for (auto n : n_values) {
        if (n < 1 || sgn(a) <= 0 || sgn(b) <= 0 || a + b >= Rational(2 * n))
          throw std::invalid_argument("sweep: invalid grid point " + tuple_name(a, b, n) +
                                      " (need n >= 1, a > 0, b > 0, a + b < 2n)");
      }
}

bool SweepRow::certified() const {
  return sandwich_ok && sgn(cond1_max_residual) == 0 && sgn(cond2_max_residual) == 0 && e_abs_s_exact <= e_abs_s_bound;
}

SweepRow compute_sweep_row(const ModelParams& params) {
  const LatticeDistribution pi = stationary_ratio_product(params);
  const BoundCertificate cert = bound_certificate(params);
  const ExactWithBound abs_s = e_abs_s(params, pi);
  const BetaParams beta = target_beta(params);

  SweepRow row;
  row.n = params.n();
  row.a = params.a();
  row.b = params.b();
  row.mean = mean(params);
  row.variance = variance(params);
  row.beta_variance = beta_variance(params.a(), params.b());
  row.gap_h = gap_h(params);
  row.lower = lower_bound(params);
  row.upper = cert.upper;
  row.sandwich_ok = cert.sandwich_ok && row.lower < row.gap_h;
  row.e_abs_s_exact = abs_s.exact;
  row.e_abs_s_bound = abs_s.bound;
  row.wasserstein = wasserstein(pi, beta);
  row.kolmogorov = kolmogorov(pi, beta);
  row.cond1_max_residual = max_abs(verify_condition_1(params));
  row.cond2_max_residual = max_abs(verify_condition_2(params));
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned jobs) {
  config.validate();
  std::vector<ModelParams> points;
  for (const auto& a : sorted_unique(config.a_values))
    for (const auto& b : sorted_unique(config.b_values))
      for (auto n : sorted_unique(config.n_values)) points.emplace_back(n, a, b);

  std::vector<std::optional<SweepRow>> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      try {
        rows[k] = compute_sweep_row(points[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<SweepRow> out;
  out.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (errors[k]) {
      const auto& p = points[k];
      try {
        std::rethrow_exception(errors[k]);
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep row " + tuple_name(p.a(), p.b(), p.n()) + " failed: " + e.what());
      }
    }
    out.push_back(std::move(*rows[k]));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool exact) {
  for (std::size_t c = 0; c < kSweepColumns.size(); ++c) out << (c ? "," : "") << kSweepColumns[c];
  if (exact) {
    out << ",a_pq,b_pq,mean_pq,variance_pq,beta_variance_pq,gap_h_pq,lower_pq,e_abs_s_exact_pq,e_abs_s_bound_pq"
           ",cond1_max_residual_pq,cond2_max_residual_pq";
  }
  out << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << to_decimal(r.a) << ',' << to_decimal(r.b) << ',' << to_decimal(r.mean) << ','
        << to_decimal(r.variance) << ',' << to_decimal(r.beta_variance) << ',' << to_decimal(r.gap_h) << ','
        << to_decimal(r.lower) << ',' << to_decimal(r.upper) << ',' << (r.sandwich_ok ? "true" : "false") << ','
        << to_decimal(r.e_abs_s_exact) << ',' << to_decimal(r.e_abs_s_bound) << ',' << to_decimal(r.wasserstein) << ','
        << to_decimal(r.kolmogorov) << ',' << to_decimal(r.cond1_max_residual) << ','
        << to_decimal(r.cond2_max_residual);
    if (exact) {
      for (const Rational* q : {&r.a, &r.b, &r.mean, &r.variance, &r.beta_variance, &r.gap_h, &r.lower,
                                &r.e_abs_s_exact, &r.e_abs_s_bound, &r.cond1_max_residual, &r.cond2_max_residual})
        out << ',' << to_fraction_string(*q);
    }
    out << '\n';
  }
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows, bool exact) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "sweep";
  json arr = json::array();
  for (const auto& r : rows) {
    json row;
    row["n"] = r.n;
    put(row, "a", r.a, exact);
    put(row, "b", r.b, exact);
    put(row, "mean", r.mean, exact);
    put(row, "variance", r.variance, exact);
    put(row, "beta_variance", r.beta_variance, exact);
    put(row, "gap_h", r.gap_h, exact);
    put(row, "lower", r.lower, exact);
    row["upper"] = r.upper;
    row["sandwich_ok"] = r.sandwich_ok;
    put(row, "e_abs_s_exact", r.e_abs_s_exact, exact);
    put(row, "e_abs_s_bound", r.e_abs_s_bound, exact);
    row["wasserstein"] = r.wasserstein;
    row["kolmogorov"] = r.kolmogorov;
    put(row, "cond1_max_residual", r.cond1_max_residual, exact);
    put(row, "cond2_max_residual", r.cond2_max_residual, exact);
    arr.push_back(std::move(row));
  }
  doc["rows"] = std::move(arr);
  return doc;
}

double loglog_slope(std::span<const double> n_values, std::span<const double> metric) {
  if (n_values.size() != metric.size() || n_values.size() < 2)
    throw std::invalid_argument("loglog_slope: need at least two paired points");
  const auto m = static_cast<Eigen::Index>(n_values.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(n_values[k] > 0.0) || !(metric[k] > 0.0))
      throw std::domain_error("loglog_slope: values must be positive");
    design(k, 0) = 1.0;
    design(k, 1) = std::log(n_values[k]);
    rhs(k) = std::log(metric[k]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  return coef(1);
}

void validate_rate_config(const SweepConfig& config) {
  const auto ns = sorted_unique(config.n_values);
  if (ns.size() < 4) throw std::invalid_argument("rate: need at least 4 distinct n values");
  if (ns.back() < 8 * ns.front()) throw std::invalid_argument("rate: n values must span at least a factor of 8");
}

std::vector<RateRow> fit_rates(const std::vector<SweepRow>& rows) {
  std::map<std::pair<Rational, Rational>, std::vector<const SweepRow*>> groups;
  std::vector<std::pair<Rational, Rational>> order;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.a, r.b);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<RateRow> out;
  for (const auto& key : order) {
    std::vector<double> ns, gap, w1, ks;
    for (const SweepRow* r : groups[key]) {
      ns.push_back(static_cast<double>(r->n));
      gap.push_back(to_double(r->gap_h));
      w1.push_back(r->wasserstein);
      ks.push_back(r->kolmogorov);
    }
    RateRow rate{key.first, key.second, loglog_slope(ns, gap), loglog_slope(ns, w1), loglog_slope(ns, ks), false};
    rate.gap_h_slope_ok = rate.gap_h_slope >= kGapSlopeLow && rate.gap_h_slope <= kGapSlopeHigh;
    out.push_back(std::move(rate));
  }
  return out;
}

void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rates) {
  out << "a,b,gap_h_slope,wasserstein_slope,kolmogorov_slope,gap_h_slope_ok\n";
  for (const auto& r : rates) {
    out << to_decimal(r.a) << ',' << to_decimal(r.b) << ',' << to_decimal(r.gap_h_slope) << ','
        << to_decimal(r.wasserstein_slope) << ',' << to_decimal(r.kolmogorov_slope) << ','
        << (r.gap_h_slope_ok ? "true" : "false") << '\n';
  }
}

nlohmann::json rate_json(const std::vector<RateRow>& rates) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "rate";
  json arr = json::array();
  for (const auto& r : rates) {
    arr.push_back({{"a", to_double(r.a)},
                   {"b", to_double(r.b)},
                   {"gap_h_slope", r.gap_h_slope},
                   {"wasserstein_slope", r.wasserstein_slope},
                   {"kolmogorov_slope", r.kolmogorov_slope},
                   {"gap_h_slope_ok", r.gap_h_slope_ok}});
  }
  doc["rates"] = std::move(arr);
  return doc;
}

nlohmann::json report_json(const ModelParams& params, int r_max, bool exact) {
  if (r_max < 1) throw std::invalid_argument("report: r_max must be >= 1");
  const LatticeDistribution pi = stationary_ratio_product(params);
  const SteinReport stein = stein_report(params, pi);
  const BoundCertificate cert = bound_certificate(params);
  const MomentTable table = moment_recursion(params, std::max(r_max, 4));
  const DistanceReport dist = distance_report(params, pi);
  const double a = params.a_value();
  const double b = params.b_value();

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "report";

  json p;
  p["n"] = params.n();
  put(p, "a", params.a(), exact);
  put(p, "b", params.b(), exact);
  put(p, "u", params.u(), exact);
  put(p, "v", params.v(), exact);
  doc["params"] = std::move(p);

  json s;
  put(s, "lambda", stein.lambda, exact);
  const Rational cond1 = max_abs(stein.cond1_residuals);
  const Rational cond2 = max_abs(stein.cond2_residuals);
  const Rational balance = max_abs(detailed_balance_residuals(params, pi));
  put(s, "cond1_max_residual", cond1, exact);
  put(s, "cond2_max_residual", cond2, exact);
  put(s, "detailed_balance_max_residual", balance, exact);
  s["s_values"] = rational_array(stein.s_values);
  put(s, "e_abs_s_exact", stein.e_abs_s_exact, exact);
  put(s, "e_abs_s_bound", stein.e_abs_s_bound, exact);
  put(s, "e_cubed_over_lambda_exact", stein.e_cubed_over_lambda_exact, exact);
  put(s, "e_cubed_over_lambda_bound", stein.e_cubed_over_lambda_bound, exact);
  s["assembled_upper"] = stein.assembled_upper;
  doc["stein"] = std::move(s);

  doc["constants"] = {{"c_ab", c_constant(a, b)},
                      {"c_shifted", c_constant(a + 1.0, b + 1.0)},
                      {"k_ab", k_constant(a, b)}};

  doc["certificate"] = {{"lower", cert.lower}, {"gap", cert.gap}, {"upper", cert.upper}, {"sandwich_ok", cert.sandwich_ok}};

  json m;
  put(m, "mean", mean(params), exact);
  put(m, "variance", variance(params), exact);
  put(m, "beta_variance", beta_variance(params.a(), params.b()), exact);
  json raw = json::array();
  for (int r = 1; r <= r_max; ++r) {
    json entry;
    entry["r"] = r;
    put(entry, "value", table.at(r), exact);
    entry["beta"] = beta_raw_moment(a, b, r);
    raw.push_back(std::move(entry));
  }
  m["raw"] = std::move(raw);
  m["hankel_psd"] = hankel_psd(table);
  doc["moments"] = std::move(m);

  json d;
  put(d, "gap_h", gap_h(params), exact);
  d["wasserstein"] = dist.wasserstein;
  d["kolmogorov"] = dist.kolmogorov;
  doc["distance"] = std::move(d);

  doc["certified"] = cert.sandwich_ok && sgn(cond1) == 0 && sgn(cond2) == 0 && sgn(balance) == 0 &&
                     stein.e_abs_s_exact <= stein.e_abs_s_bound &&
                     stein.e_cubed_over_lambda_exact <= stein.e_cubed_over_lambda_bound &&
                     stein.assembled_upper <= cert.upper + kSandwichSlack;
  return doc;
}

std::size_t MonteCarloCheck::flags() const {
  return static_cast<std::size_t>(std::count_if(states.begin(), states.end(), [](const StateCheck& s) { return s.flagged; }));
}

MonteCarloCheck check_iid_samples(const LatticeDistribution& pi, std::size_t samples, std::uint64_t seed) {
  MonteCarloCheck out{samples, 0.0, {}};
  if (samples == 0) return out;
  std::vector<std::size_t> counts(static_cast<std::size_t>(pi.size()), 0);
  for (State s : sample_stationary(pi, seed, samples)) ++counts[static_cast<std::size_t>(s)];
  const double total = static_cast<double>(samples);
  for (State i = 0; i < pi.size(); ++i) {
    const double p = pi.prob(i);
    const double f = static_cast<double>(counts[static_cast<std::size_t>(i)]) / total;
    const double se = std::sqrt(p * (1.0 - p) / total);
    out.total_variation += 0.5 * std::fabs(f - p);
    out.states.push_back({i, p, f, se, std::fabs(f - p) > kFlagStdErrors * se});
  }
  return out;
}

MonteCarloCheck check_chain_occupation(const ModelParams& params, const LatticeDistribution& pi, std::size_t steps,
                                       std::uint64_t seed) {
  MonteCarloCheck out{steps, 0.0, {}};
  if (steps == 0) return out;
  const double target_mean = to_double(mean(params)) * static_cast<double>(params.two_n());
  const auto start = static_cast<State>(std::llround(target_mean));
  const std::vector<State> path = simulate_chain(params, start, kChainBurnIn + steps, seed);

  const auto states = static_cast<Eigen::Index>(pi.size());
  const std::size_t batches = std::min(kChainBatches, steps);
  const std::size_t batch_len = steps / batches;
  const std::size_t used = batch_len * batches;
  Eigen::MatrixXd batch_freq = Eigen::MatrixXd::Zero(states, static_cast<Eigen::Index>(batches));
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(states);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto s = static_cast<Eigen::Index>(path[kChainBurnIn + 1 + k]);
    counts(s) += 1.0;
    if (k < used) batch_freq(s, static_cast<Eigen::Index>(k / batch_len)) += 1.0;
  }
  batch_freq /= static_cast<double>(batch_len);
  const double total = static_cast<double>(steps);
  for (Eigen::Index i = 0; i < states; ++i) {
    double se = std::numeric_limits<double>::infinity();
    if (batches >= 2) {
      const auto row = batch_freq.row(i);
      const double bm = row.mean();
      const double var = (row.array() - bm).square().sum() / static_cast<double>(batches - 1);
      se = std::sqrt(var / static_cast<double>(batches));
    }
    const double p = pi.prob(i);
    // Never below the i.i.d. binomial error; guards states no batch visited.
    se = std::max(se, std::sqrt(p * (1.0 - p) / static_cast<double>(steps)));
    const double f = counts(i) / total;
    out.total_variation += 0.5 * std::fabs(f - p);
    out.states.push_back({static_cast<State>(i), p, f, se, std::fabs(f - p) > kFlagStdErrors * se});
  }
  return out;
}

nlohmann::json validate_json(const ModelParams& params, std::size_t samples, std::uint64_t seed) {
  const LatticeDistribution pi = stationary_ratio_product(params);
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "validate";
  doc["params"] = {{"n", params.n()}, {"a", params.a_value()}, {"b", params.b_value()}};
  doc["seed"] = seed;
  doc["samples"] = samples;
  doc["exact"] = {{"pi", std::vector<double>(pi.probs().begin(), pi.probs().end())}};

  json empirical = json::object();
  std::size_t flags = 0;
  if (samples > 0) {
    auto render = [](const MonteCarloCheck& check) {
      json states = json::array();
      for (const auto& s : check.states)
        states.push_back({{"state", s.state},
                          {"exact", s.exact},
                          {"empirical", s.empirical},
                          {"std_error", s.std_error},
                          {"flagged", s.flagged}});
      return json{{"samples", check.samples},
                  {"total_variation", check.total_variation},
                  {"flags", check.flags()},
                  {"states", std::move(states)}};
    };
    const MonteCarloCheck iid = check_iid_samples(pi, samples, seed);
    // Separate stream for the chain so the two checks are independent.
    const MonteCarloCheck chain = check_chain_occupation(params, pi, samples, seed ^ 0x9e3779b97f4a7c15ULL);
    empirical["iid"] = render(iid);
    empirical["chain"] = render(chain);
    flags = iid.flags() + chain.flags();
  }
  doc["empirical"] = std::move(empirical);
  doc["flags"] = flags;
  return doc;
}

}  // namespace moran
