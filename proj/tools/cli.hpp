#ifndef WCBAYES_TOOLS_CLI_HPP
#define WCBAYES_TOOLS_CLI_HPP

// wcbayes command-line front end.
//
//   wcbayes feasibility --moments g0,g1,...,gn
//   wcbayes bound PROBLEM.json [--csv]
//   wcbayes sweep [--mu1 0] [--mu2 0:25:0.1] [--sigma1sq 1] [--sigma2sq 1,5] [--priors 0.5,0.5]
//   wcbayes witness PROBLEM.json [--out FILE] [--backoff 1e-9]
//
// Exit codes: 0 success, 1 infeasible input or failed verification, 2 usage or parse error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wcbayes/io.hpp"
#include "wcbayes/wcbayes.hpp"

namespace wcbayes::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct BoundReport {
  int n_moments = 0;
  LowerBoundResult lower;
  std::optional<UpperBoundResult> upper;
  std::optional<double> gaussian;
  double trivial = 0.0;
};

struct SweepRow {
  double sigma1sq, sigma2sq, mu2;
  double lower, upper, gaussian;
};

struct SweepConfig {
  double mu1 = 0.0;
  double mu2_from = 0.0, mu2_to = 25.0, mu2_step = 0.1;
  double sigma1sq = 1.0;
  std::vector<double> sigma2sq{1.0, 5.0};
  std::vector<double> priors{0.5, 0.5};
};

inline constexpr double kReportTol = 1e-9;

inline BoundReport compute_bound_report(const ProblemFile& problem, const Tolerances& tol = {}) {
  BoundReport report;
  report.n_moments = problem.n_moments;
  report.lower = lower_bound(problem.classes, problem.n_moments, {tol});
  report.trivial = trivial_upper_bound(static_cast<int>(problem.classes.size()));
  if (problem.classes.size() == 2 && problem.n_moments >= 2) {
    const auto& c1 = problem.classes[0];
    const auto& c2 = problem.classes[1];
    report.upper = upper_bound(problem.classes);
    if (c1.variance() > 0.0 && c2.variance() > 0.0)
      report.gaussian = gaussian_pair_bayes_error({c1.gamma1(), c2.gamma1(), c1.variance(), c2.variance(), c1.prior, c2.prior});
  }
  if (report.upper && report.lower.value > report.upper->value + kReportTol)
    throw Error(ErrorCode::Numeric, "lower bound exceeds upper bound");
  if (report.upper && report.gaussian && *report.gaussian > report.upper->value + kReportTol)
    throw Error(ErrorCode::Numeric, "Gaussian error exceeds upper bound");
  return report;
}

inline ordered_json to_json(const BoundReport& r) {
  ordered_json j;
  j["n_moments"] = r.n_moments;
  j["lower"] = json_number(r.lower.value);
  j["lower_attained"] = r.lower.attained;
  j["lower_method"] = std::string(to_string(r.lower.method));
  j["delta_star"] = json_number(r.lower.delta_star);
  j["epsilons"] = ordered_json::array();
  for (double e : r.lower.epsilons) j["epsilons"].push_back(json_number(e));
  j["upper"] = r.upper ? json_number(r.upper->value) : ordered_json(nullptr);
  j["s_star"] = r.upper ? json_number(r.upper->s_star) : ordered_json(nullptr);
  j["gaussian"] = r.gaussian ? json_number(*r.gaussian) : ordered_json(nullptr);
  j["trivial"] = json_number(r.trivial);
  if (!r.lower.diagnostic.empty()) j["diagnostic"] = r.lower.diagnostic;
  return j;
}

inline std::string to_csv(const BoundReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::ostringstream os;
  os << "n_moments,lower,lower_attained,delta_star,upper,s_star,gaussian,trivial\n";
  os << r.n_moments << ',' << format_number(r.lower.value) << ',' << (r.lower.attained ? "true" : "false") << ','
     << format_number(r.lower.delta_star) << ','
     << opt(r.upper ? std::optional<double>(r.upper->value) : std::nullopt) << ','
     << opt(r.upper ? std::optional<double>(r.upper->s_star) : std::nullopt) << ',' << opt(r.gaussian) << ','
     << format_number(r.trivial) << '\n';
  return os.str();
}

inline std::vector<double> sweep_grid(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) throw Error(ErrorCode::InvalidInput, "sweep range needs from <= to and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = from + step * static_cast<double>(i);
  return grid;
}

/// Two-moment bounds and Gaussian baseline for N(mu1, sigma1sq) vs. mu2 varied, one block per sigma2sq.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.priors.size() != 2) throw Error(ErrorCode::InvalidInput, "sweep needs exactly two priors");
  std::vector<SweepRow> rows;
  const auto grid = sweep_grid(cfg.mu2_from, cfg.mu2_to, cfg.mu2_step);
  for (double s2 : cfg.sigma2sq) {
    for (double mu2 : grid) {
      const std::vector<ClassSpec> classes{ClassSpec::from_mean_variance(cfg.priors[0], cfg.mu1, cfg.sigma1sq),
                                           ClassSpec::from_mean_variance(cfg.priors[1], mu2, s2)};
      SweepRow row{cfg.sigma1sq, s2, mu2, 0.0, 0.0, 0.0};
      row.lower = lower_bound(classes, 2).value;
      row.upper = upper_bound(classes).value;
      row.gaussian = gaussian_pair_bayes_error({cfg.mu1, mu2, cfg.sigma1sq, s2, cfg.priors[0], cfg.priors[1]});
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "sigma1sq,sigma2sq,mu2,lower,upper,gaussian\n";
  for (const auto& r : rows) {
    os << format_number(r.sigma1sq) << ',' << format_number(r.sigma2sq) << ',' << format_number(r.mu2) << ','
       << format_number(r.lower) << ',' << format_number(r.upper) << ',' << format_number(r.gaussian) << '\n';
  }
}

inline ordered_json to_json(const WitnessReport& r) {
  ordered_json j;
  j["certified"] = r.certified();
  j["lower"] = json_number(r.lower.value);
  j["bayes_error"] = json_number(r.bayes_error);
  j["delta_star"] = json_number(r.lower.delta_star);
  j["epsilons"] = ordered_json::array();
  for (double e : r.epsilons) j["epsilons"].push_back(e);
  j["moment_mismatch"] = ordered_json::array();
  for (double m : r.moment_mismatch) j["moment_mismatch"].push_back(m);
  j["measures"] = ordered_json::array();
  for (const auto& m : r.measures) {
    ordered_json atoms = ordered_json::array();
    for (const auto& a : m.atoms) atoms.push_back({{"x", a.location}, {"mass", a.mass}});
    j["measures"].push_back(atoms);
  }
  return j;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open problem file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("problem file is not valid JSON: ") + e.what());
  }
  return parse_problem(j);
}

inline int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::InvalidInput ? kExitUsage : kExitDomain;
}

inline int report_error(std::ostream& err, const Error& e) {
  ordered_json j{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  err << j.dump() << '\n';
  return exit_code_for(e);
}

/// Runs the tool on argv-style arguments (args[0] is the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Worst-case Bayes error bounds from class priors and raw moments", "wcbayes"};
  app.require_subcommand(1);
  std::optional<double> tol_override;
  app.add_option("--tol", tol_override, "Relative tolerance for PSD, rank and range tests")
      ->check(CLI::PositiveNumber);

  std::string moments_text;
  auto* feas = app.add_subcommand("feasibility", "Check whether raw moments g0..gn belong to a measure");
  feas->add_option("--moments", moments_text, "Comma-separated g0,g1,...,gn")->required();

  std::string bound_path;
  bool bound_csv = false;
  auto* bound = app.add_subcommand("bound", "Lower/upper bounds and Gaussian baseline for a problem file");
  bound->add_option("problem", bound_path, "Problem JSON file")->required();
  auto* json_flag = bound->add_flag("--json", "JSON output (default)");
  bound->add_flag("--csv", bound_csv, "CSV output")->excludes(json_flag);

  SweepConfig sweep_cfg;
  std::string mu2_range = "0:25:0.1";
  std::string sigma2_text = "1,5";
  std::string priors_text = "0.5,0.5";
  auto* sweep = app.add_subcommand("sweep", "Two-class sweep over the second mean (CSV)");
  sweep->add_option("--mu1", sweep_cfg.mu1, "Mean of class 1")->capture_default_str();
  sweep->add_option("--mu2", mu2_range, "from:to:step for the mean of class 2")->capture_default_str();
  sweep->add_option("--sigma1sq", sweep_cfg.sigma1sq, "Variance of class 1")->capture_default_str();
  sweep->add_option("--sigma2sq", sigma2_text, "Comma-separated variances of class 2")->capture_default_str();
  sweep->add_option("--priors", priors_text, "Comma-separated priors p1,p2")->capture_default_str();

  std::string witness_path;
  std::string witness_out;
  double backoff = 1e-9;
  auto* witness = app.add_subcommand("witness", "Emit discrete measures certifying the lower bound");
  witness->add_option("problem", witness_path, "Problem JSON file")->required();
  witness->add_option("--out", witness_out, "Write witness JSON here instead of stdout");
  witness->add_option("--backoff", backoff, "Back-off from unattained shared masses")->capture_default_str();

  std::reverse(args.begin(), args.end());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << '\n';
    return kExitUsage;
  }

  const Tolerances tol = tol_override ? Tolerances::uniform(*tol_override) : Tolerances{};
  try {
    if (*feas) {
      const MomentSequence seq(parse_real_list(moments_text));
      const auto verdict = is_feasible(seq, tol);
      ordered_json j{{"feasible", verdict.feasible},
                     {"reason", std::string(to_string(verdict.reason))},
                     {"rank_A", verdict.rank_A},
                     {"rank_gamma", verdict.rank_gamma}};
      out << j.dump() << '\n';
      return verdict.feasible ? kExitOk : kExitDomain;
    }
    if (*bound) {
      const BoundReport report = compute_bound_report(load_problem(bound_path), tol);
      if (bound_csv)
        out << to_csv(report);
      else
        out << to_json(report).dump(2) << '\n';
      return kExitOk;
    }
    if (*sweep) {
      const auto range = [&] {
        std::string r = mu2_range;
        std::replace(r.begin(), r.end(), ':', ',');
        return parse_real_list(r);
      }();
      if (range.size() != 3) throw Error(ErrorCode::InvalidInput, "--mu2 expects from:to:step");
      sweep_cfg.mu2_from = range[0];
      sweep_cfg.mu2_to = range[1];
      sweep_cfg.mu2_step = range[2];
      sweep_cfg.sigma2sq = parse_real_list(sigma2_text);
      sweep_cfg.priors = parse_real_list(priors_text);
      for (double v : sweep_cfg.sigma2sq)
        if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "variances must be positive");
      if (!(sweep_cfg.sigma1sq > 0.0)) throw Error(ErrorCode::InvalidInput, "variances must be positive");
      write_sweep_csv(out, run_sweep(sweep_cfg));
      return kExitOk;
    }
    if (*witness) {
      const ProblemFile problem = load_problem(witness_path);
      const WitnessReport report = verify_witness(problem.classes, problem.n_moments, {backoff, tol});
      const std::string text = to_json(report).dump(2) + "\n";
      if (witness_out.empty()) {
        out << text;
      } else {
        std::ofstream f(witness_out);
        if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + witness_out + "'");
        f << text;
      }
      if (!report.certified()) {
        err << "witness verification failed\n";
        return kExitDomain;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    return report_error(err, e);
  }
  return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace wcbayes::cli

#endif
