#ifndef WCBAYES_IO_HPP
#define WCBAYES_IO_HPP

// JSON encodings used by the command-line tool:
//   moment sequence  -> [g0, g1, ..., gn]
//   discrete measure -> [{"x": ..., "mass": ...}, ...]
//   problem file     -> {"classes": [{"prior": p, "moments": [g1, g2, ...]}, ...]}

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "wcbayes/error.hpp"
#include "wcbayes/lowerbound.hpp"
#include "wcbayes/moments.hpp"

namespace wcbayes {

inline void to_json(nlohmann::json& j, const MomentSequence& seq) {
  j = nlohmann::json::array();
  for (double v : seq.values()) j.push_back(v);
}

inline void from_json(const nlohmann::json& j, MomentSequence& seq) {
  seq = MomentSequence(j.get<std::vector<double>>());
}

inline void to_json(nlohmann::json& j, const Atom& a) { j = nlohmann::json{{"x", a.location}, {"mass", a.mass}}; }

inline void from_json(const nlohmann::json& j, Atom& a) {
  a.location = j.at("x").get<double>();
  a.mass = j.at("mass").get<double>();
}

inline void to_json(nlohmann::json& j, const DiscreteMeasure& m) { j = m.atoms; }
inline void from_json(const nlohmann::json& j, DiscreteMeasure& m) { m.atoms = j.get<std::vector<Atom>>(); }

struct ProblemFile {
  std::vector<ClassSpec> classes;
  int n_moments = 0;  // shortest moment list across classes
};

/// Throws Error(InvalidInput) on schema violations.
inline ProblemFile parse_problem(const nlohmann::json& j) {
  ProblemFile problem;
  try {
    for (const auto& c : j.at("classes")) {
      ClassSpec cls{c.at("prior").get<double>(), c.at("moments").get<std::vector<double>>()};
      if (cls.moments.empty()) throw Error(ErrorCode::InvalidInput, "every class needs at least one moment");
      for (double v : cls.moments)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "moments must be finite");
      problem.classes.push_back(std::move(cls));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed problem file: ") + e.what());
  }
  if (problem.classes.size() < 2) throw Error(ErrorCode::InvalidInput, "a problem needs at least two classes");
  problem.n_moments = problem.classes.front().n_moments();
  double total = 0.0;
  for (const auto& c : problem.classes) {
    problem.n_moments = std::min(problem.n_moments, c.n_moments());
    if (!(c.prior > 0.0 && c.prior < 1.0)) throw Error(ErrorCode::InvalidInput, "priors must lie in (0, 1)");
    total += c.prior;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::InvalidInput, "priors must sum to 1");
  return problem;
}

/// 12 significant digits, the fixed output precision of the tool.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// JSON value rounded to 12 significant digits; infinities become "inf"/"-inf" strings.
inline nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::stod(format_number(v));
}

/// Comma-separated list of reals; throws Error(InvalidInput) on anything unparsable.
inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v))
      throw Error(ErrorCode::InvalidInput, "cannot parse number '" + std::string(token) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace wcbayes

#endif
