#pragma once

#include "moran/model.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace moran {

inline constexpr std::string_view kSchemaVersion = "1";

enum class OutputFormat { csv, json };

struct SweepConfig {
  std::vector<Rational> a_values;
  std::vector<Rational> b_values;
  std::vector<std::int64_t> n_values;
  int r_max = 8;
  std::uint64_t seed = 0;
  OutputFormat output_format = OutputFormat::csv;

  /// Lists non-empty and a + b < 2n for every combination; otherwise
  /// std::invalid_argument naming the first offending tuple.
  void validate() const;
};

/// One certified grid point. Field order matches kSweepColumns.
struct SweepRow {
  std::int64_t n;
  Rational a, b;
  Rational mean, variance, beta_variance;
  Rational gap_h, lower;
  double upper;
  bool sandwich_ok;
  Rational e_abs_s_exact, e_abs_s_bound;
  double wasserstein;
  double kolmogorov;
  Rational cond1_max_residual, cond2_max_residual;

  /// Sandwich holds, both residuals vanish, and E|S| respects its bound.
  bool certified() const;
};

inline constexpr std::array<std::string_view, 16> kSweepColumns = {
    "n",     "a",           "b",     "mean",          "variance",      "beta_variance",
    "gap_h", "lower",       "upper", "sandwich_ok",   "e_abs_s_exact", "e_abs_s_bound",
    "wasserstein", "kolmogorov", "cond1_max_residual", "cond2_max_residual"};

SweepRow compute_sweep_row(const ModelParams& params);

/// Rows ordered by (a, b, n) ascending with duplicates removed, computed on
/// up to `jobs` threads. A failing row aborts with std::runtime_error naming
/// the tuple.
std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned jobs);

/// Header plus one line per row, LF endings. With exact, "<field>_pq"
/// columns follow for every rational field after the 16 fixed columns.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool exact);

nlohmann::json sweep_json(const std::vector<SweepRow>& rows, bool exact);

/// Least-squares slope of log(metric) against log(n).
double loglog_slope(std::span<const double> n_values, std::span<const double> metric);

struct RateRow {
  Rational a, b;
  double gap_h_slope;
  double wasserstein_slope;
  double kolmogorov_slope;
  bool gap_h_slope_ok;
};

inline constexpr double kGapSlopeLow = -1.05;
inline constexpr double kGapSlopeHigh = -0.95;

/// Requires at least 4 distinct n values spanning a factor of 8; throws
/// std::invalid_argument otherwise.
void validate_rate_config(const SweepConfig& config);

/// One slope triple per (a, b), fitted over every n present in rows.
std::vector<RateRow> fit_rates(const std::vector<SweepRow>& rows);

void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rates);
nlohmann::json rate_json(const std::vector<RateRow>& rates);

/// Single-point report: Stein verification, bound certificate, exact
/// moments up to r_max, and distances. "certified" mirrors SweepRow.
nlohmann::json report_json(const ModelParams& params, int r_max, bool exact);

struct StateCheck {
  State state;
  double exact;
  double empirical;
  double std_error;
  bool flagged;
};

struct MonteCarloCheck {
  std::size_t samples;
  double total_variation;
  std::vector<StateCheck> states;
  std::size_t flags() const;
};

inline constexpr double kFlagStdErrors = 5.0;
inline constexpr std::size_t kChainBurnIn = 10000;
inline constexpr std::size_t kChainBatches = 100;

/// i.i.d. inverse-CDF draws against pi with binomial standard errors.
MonteCarloCheck check_iid_samples(const LatticeDistribution& pi, std::size_t samples, std::uint64_t seed);

/// Chain occupation after kChainBurnIn steps, started at the state nearest
/// the mean; standard errors by batch means over kChainBatches batches.
MonteCarloCheck check_chain_occupation(const ModelParams& params, const LatticeDistribution& pi, std::size_t steps,
                                       std::uint64_t seed);

nlohmann::json validate_json(const ModelParams& params, std::size_t samples, std::uint64_t seed);

}  // namespace moran
