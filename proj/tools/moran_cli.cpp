// moran_cli: exact Stein-method certificates for the two-allele Moran model.
//
//   moran_cli report   --n 2 --a 1 --b 1
//   moran_cli sweep    --a 0.5,1,2 --b 0.5,1,2 --n 25,50,100,200 --format csv
//   moran_cli rate     --a 1 --b 1 --n 25,50,100,200,400
//   moran_cli validate --n 10 --a 1 --b 1 --samples 1000000 --seed 7
//
// Exit codes: 0 success, 1 certificate violation or failed computation,
// 2 usage error or invalid parameters.

#include "moran/model.hpp"
#include "moran/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<moran::Rational> parse_rationals(const std::vector<std::string>& items) {
  std::vector<moran::Rational> out;
  for (const auto& s : items) out.push_back(moran::parse_rational(s));
  return out;
}

moran::OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return moran::OutputFormat::csv;
  if (s == "json") return moran::OutputFormat::json;
  throw UsageError("--format must be csv or json");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + out_path);
  f << text;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beta approximation certificates for the two-allele Moran model"};
  app.require_subcommand(1);

  std::int64_t n = 0;
  std::string a_text, b_text;
  std::vector<std::int64_t> n_list;
  std::vector<std::string> a_list, b_list;
  int r_max = 8;
  std::uint64_t seed = 0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "csv";
  bool exact = false;
  std::string out_path;
  std::size_t samples = 1000000;

  auto* report = app.add_subcommand("report", "single-point JSON report");
  report->add_option("--n", n, "population scale (2n genes)")->required();
  report->add_option("--a", a_text, "rescaled mutation rate a = 2nv (p/q or decimal)")->required();
  report->add_option("--b", b_text, "rescaled mutation rate b = 2nu (p/q or decimal)")->required();
  report->add_option("--r-max", r_max, "highest moment order")->check(CLI::PositiveNumber);
  report->add_flag("--exact", exact, "add exact p/q renderings");
  report->add_option("--out", out_path, "write to FILE instead of stdout");

  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--n", n_list, "comma-separated n values")->required()->delimiter(',');
    sub->add_option("--a", a_list, "comma-separated a values")->required()->delimiter(',');
    sub->add_option("--b", b_list, "comma-separated b values")->required()->delimiter(',');
    sub->add_option("--r-max", r_max, "highest moment order")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed (recorded only)");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "csv or json");
    sub->add_flag("--exact", exact, "add exact p/q columns");
    sub->add_option("--out", out_path, "write to FILE instead of stdout");
  };
  auto* sweep = app.add_subcommand("sweep", "certify every (a, b, n) grid point");
  add_grid(sweep);
  auto* rate = app.add_subcommand("rate", "fit log-log decay slopes in n");
  add_grid(rate);

  auto* validate = app.add_subcommand("validate", "Monte Carlo cross-check of the exact stationary law");
  validate->add_option("--n", n, "population scale (2n genes)")->required();
  validate->add_option("--a", a_text, "rescaled mutation rate a")->required();
  validate->add_option("--b", b_text, "rescaled mutation rate b")->required();
  validate->add_option("--samples", samples, "draws (and chain steps after burn-in)");
  validate->add_option("--seed", seed, "random seed");
  validate->add_option("--out", out_path, "write to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (report->parsed()) {
      const moran::ModelParams params(n, moran::parse_rational(a_text), moran::parse_rational(b_text));
      const nlohmann::json doc = moran::report_json(params, r_max, exact);
      emit(dump(doc), out_path);
      return doc.at("certified").get<bool>() ? 0 : kExitViolation;
    }

    if (validate->parsed()) {
      const moran::ModelParams params(n, moran::parse_rational(a_text), moran::parse_rational(b_text));
      const nlohmann::json doc = moran::validate_json(params, samples, seed);
      emit(dump(doc), out_path);
      return 0;
    }

    moran::SweepConfig config;
    config.a_values = parse_rationals(a_list);
    config.b_values = parse_rationals(b_list);
    config.n_values = n_list;
    config.r_max = r_max;
    config.seed = seed;
    config.output_format = parse_format(format);
    config.validate();

    if (rate->parsed()) moran::validate_rate_config(config);
    const std::vector<moran::SweepRow> rows = moran::run_sweep(config, jobs);

    std::ostringstream text;
    bool ok = true;
    if (sweep->parsed()) {
      for (const auto& r : rows) ok = ok && r.certified();
      if (config.output_format == moran::OutputFormat::csv)
        moran::write_sweep_csv(text, rows, exact);
      else
        text << dump(moran::sweep_json(rows, exact));
    } else {
      const auto rates = moran::fit_rates(rows);
      for (const auto& r : rates) ok = ok && r.gap_h_slope_ok;
      if (config.output_format == moran::OutputFormat::csv)
        moran::write_rate_csv(text, rates);
      else
        text << dump(moran::rate_json(rates));
    }
    emit(text.str(), out_path);
    return ok ? 0 : kExitViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
}
