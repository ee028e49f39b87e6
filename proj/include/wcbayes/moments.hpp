#ifndef WCBAYES_MOMENTS_HPP
#define WCBAYES_MOMENTS_HPP

// Truncated moment problem on the real line: Hankel matrices, feasibility of a
// finite raw-moment list, the largest Dirac mass that can be split off a
// sequence, translation of moments, and recovery of small atomic measures.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wcbayes/error.hpp"

namespace wcbayes {

/// Relative thresholds used by every numerical-linear-algebra decision.
struct Tolerances {
  double psd = 1e-9;    // eigenvalues >= -psd * (1 + ||A||)
  double rank = 1e-9;   // singular values > rank * sigma_max count toward rank
  double range = 1e-9;  // least-squares residual <= range * (1 + ||v||)

  constexpr Tolerances scaled(double factor) const noexcept {
    return {psd * factor, rank * factor, range * factor};
  }
  static constexpr Tolerances uniform(double tol) noexcept { return {tol, tol, tol}; }
};

/// Raw moments gamma_0 .. gamma_n of a (sub)measure.
class MomentSequence {
 public:
  MomentSequence() : values_{1.0} {}
  MomentSequence(std::initializer_list<double> values) : MomentSequence(std::vector<double>(values)) {}
  explicit MomentSequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::InvalidInput, "moment sequence needs at least gamma_0");
    for (double v : values_)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "moment sequence contains a non-finite value");
  }

  int order() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double operator[](std::size_t j) const { return values_[j]; }
  double zeroth() const noexcept { return values_.front(); }
  std::span<const double> values() const noexcept { return values_; }

  /// Same sequence with gamma_0 replaced.
  MomentSequence with_zeroth(double gamma0) const {
    auto v = values_;
    v.front() = gamma0;
    return MomentSequence(std::move(v));
  }

  /// Prefix gamma_0 .. gamma_n.
  MomentSequence truncated(int n) const {
    if (n < 0 || n > order()) throw Error(ErrorCode::InvalidInput, "truncation order out of range");
    return MomentSequence(std::vector<double>(values_.begin(), values_.begin() + n + 1));
  }

  bool is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  friend bool operator==(const MomentSequence&, const MomentSequence&) = default;

 private:
  std::vector<double> values_;
};

struct Atom {
  double location = 0.0;
  double mass = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite sum of weighted Dirac measures.
struct DiscreteMeasure {
  std::vector<Atom> atoms;

  double total_mass() const noexcept {
    double total = 0.0;
    for (const auto& a : atoms) total += a.mass;
    return total;
  }

  DiscreteMeasure translated(double offset) const {
    DiscreteMeasure out = *this;
    for (auto& a : out.atoms) a.location += offset;
    return out;
  }

  /// Atoms sorted by location, with atoms closer than merge_tol combined.
  DiscreteMeasure normalized(double merge_tol = 0.0) const {
    DiscreteMeasure out = *this;
    std::sort(out.atoms.begin(), out.atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    std::vector<Atom> merged;
    for (const auto& a : out.atoms) {
      if (!merged.empty() && std::abs(a.location - merged.back().location) <= merge_tol)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    out.atoms = std::move(merged);
    return out;
  }
};

/// A(k) together with the column vectors v_0 .. v_k and, for odd n, v_{k+1}.
struct HankelSystem {
  int k = 0;
  Eigen::MatrixXd matrix;
  std::vector<Eigen::VectorXd> columns;
  std::optional<Eigen::VectorXd> extra;
};

enum class FeasibilityReason { Ok, NotPsd, RankMismatch, RangeFailure, BadZeroth };

constexpr std::string_view to_string(FeasibilityReason r) noexcept {
  switch (r) {
    case FeasibilityReason::Ok: return "OK";
    case FeasibilityReason::NotPsd: return "NOT_PSD";
    case FeasibilityReason::RankMismatch: return "RANK_MISMATCH";
    case FeasibilityReason::RangeFailure: return "RANGE_FAILURE";
    case FeasibilityReason::BadZeroth: return "BAD_ZEROTH";
  }
  return "UNKNOWN";
}

struct FeasibilityVerdict {
  bool feasible = false;
  FeasibilityReason reason = FeasibilityReason::Ok;
  int rank_A = 0;
  int rank_gamma = 0;
};

struct SharedMass {
  double epsilon = 0.0;
  bool attained = false;
};

namespace detail {

inline Eigen::VectorXd hankel_column(std::span<const double> g, int j, int k) {
  Eigen::VectorXd v(k + 1);
  for (int i = 0; i <= k; ++i) v(i) = g[static_cast<std::size_t>(i + j)];
  return v;
}

inline int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

/// Distance from v to the column span of basis, via projection onto the significant left
/// singular vectors (no solve, so a nearly singular basis does not inflate the residual).
inline double span_residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v, double rel_tol) {
  if (basis.cols() == 0) return v.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(0) > 0.0 && s(r) > rel_tol * s(0)) ++r;
  const auto u = svd.matrixU().leftCols(r);
  return (v - u * (u.transpose() * v)).norm();
}

inline bool in_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v, const Tolerances& tol) {
  return span_residual(basis, v, tol.rank) <= tol.range * (1.0 + v.norm());
}

inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace detail

/// A(k) with k = floor(n/2); entry (i, j) is gamma_{i+j}.
inline HankelSystem build_hankel(const MomentSequence& seq) {
  const int n = seq.order();
  HankelSystem h;
  h.k = n / 2;
  h.matrix.resize(h.k + 1, h.k + 1);
  for (int i = 0; i <= h.k; ++i)
    for (int j = 0; j <= h.k; ++j) h.matrix(i, j) = seq[static_cast<std::size_t>(i + j)];
  for (int j = 0; j <= h.k; ++j) h.columns.push_back(detail::hankel_column(seq.values(), j, h.k));
  if (n % 2 == 1) h.extra = detail::hankel_column(seq.values(), h.k + 1, h.k);
  return h;
}

/// Sequence rank: k+1 if A(k) is invertible, otherwise the smallest r such that
/// v_r lies in the span of v_0 .. v_{r-1}.
inline int sequence_rank(const HankelSystem& h, const Tolerances& tol = {}) {
  if (detail::numerical_rank(h.matrix, tol.rank) == h.k + 1) return h.k + 1;
  for (int r = 1; r <= h.k; ++r) {
    if (detail::in_span(h.matrix.leftCols(r), h.columns[static_cast<std::size_t>(r)], tol)) return r;
  }
  // Only reachable when gamma_0 = 0 and no column is dependent on its predecessors.
  return h.k + 1;
}

inline int sequence_rank(const MomentSequence& seq, const Tolerances& tol = {}) {
  return sequence_rank(build_hankel(seq), tol);
}

/// Existence of a positive Borel measure on the real line with the given moments.
/// Odd n = 2k+1: A(k) PSD and v_{k+1} in the range of A(k).
/// Even n = 2k:  A(k) PSD and rank(gamma) = rank(A(k)).
inline FeasibilityVerdict is_feasible(const MomentSequence& seq, const Tolerances& tol = {}) {
  FeasibilityVerdict verdict;
  if (seq.zeroth() < 0.0) {
    verdict.reason = FeasibilityReason::BadZeroth;
    return verdict;
  }
  if (seq.is_zero()) {
    // Zero measure.
    verdict.feasible = true;
    return verdict;
  }
  const HankelSystem h = build_hankel(seq);
  verdict.rank_A = detail::numerical_rank(h.matrix, tol.rank);
  verdict.rank_gamma = sequence_rank(h, tol);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.matrix, Eigen::EigenvaluesOnly);
  const auto& lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  if (lambda.minCoeff() < -tol.psd * (1.0 + scale)) {
    verdict.reason = FeasibilityReason::NotPsd;
    return verdict;
  }
  if (h.extra) {
    if (!detail::in_span(h.matrix, *h.extra, tol)) {
      verdict.reason = FeasibilityReason::RangeFailure;
      return verdict;
    }
  } else if (verdict.rank_gamma != verdict.rank_A) {
    verdict.reason = FeasibilityReason::RankMismatch;
    return verdict;
  }
  verdict.feasible = true;
  return verdict;
}

/// Moments of the measure translated by -delta: sum_k (-1)^{m-k} C(m,k) delta^{m-k} gamma_k.
inline MomentSequence shift_moments(const MomentSequence& seq, double delta) {
  const int n = seq.order();
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  for (int m = 0; m <= n; ++m) {
    double acc = 0.0;
    double power = 1.0;  // (-delta)^{m-k}, built from k = m downwards
    for (int k = m; k >= 0; --k) {
      acc += detail::binomial(m, k) * power * seq[static_cast<std::size_t>(k)];
      power *= -delta;
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return MomentSequence(std::move(out));
}

inline MomentSequence moments_of(const DiscreteMeasure& measure, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidInput, "moment order must be non-negative");
  std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& a : measure.atoms) {
    double p = a.mass;
    for (int j = 0; j <= n; ++j) {
      g[static_cast<std::size_t>(j)] += p;
      p *= a.location;
    }
  }
  return MomentSequence(std::move(g));
}

/// max_j |a_j - b_j| / max(1, |b_j|).
inline double relative_mismatch(const MomentSequence& a, const MomentSequence& b) {
  const int n = std::min(a.order(), b.order());
  double worst = 0.0;
  for (int j = 0; j <= n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

/// Supremum of eps such that [gamma_0 - eps, gamma_1, ..., gamma_n] stays feasible,
/// for a sequence with gamma_0 = 1.
inline SharedMass max_shared_mass(const MomentSequence& seq, const Tolerances& tol = {}) {
  const int n = seq.order();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "shared mass needs at least two moments");
  if (std::abs(seq.zeroth() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidInput, "shared mass is defined for probability sequences (gamma_0 = 1)");
  if (!is_feasible(seq, tol).feasible)
    throw Error(ErrorCode::InfeasibleSequence, "full-mass moment sequence is infeasible");

  const double g1 = seq[1];
  const double g2 = seq[2];
  if (n <= 3) {
    if (g2 == 0.0) return {1.0, true};  // point mass at the origin
    const double eps = std::clamp(1.0 - g1 * g1 / g2, 0.0, 1.0);
    if (eps == 0.0) return {0.0, true};
    // At the supremum A(1) is singular: for n = 2 the rank condition holds iff
    // gamma_1 != 0; for n = 3 range membership of v_2 is not guaranteed.
    return {eps, n == 2 && g1 != 0.0};
  }

  // The feasible eps form an interval [0, eps_sup]; tightened tolerances keep the
  // PSD slack from moving the boundary.
  const Tolerances strict = tol.scaled(1e-3);
  auto feasible_at = [&](double eps) { return is_feasible(seq.with_zeroth(1.0 - eps), strict).feasible; };
  if (feasible_at(1.0)) return {1.0, true};
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(mid) ? lo : hi) = mid;
  }
  return {lo, lo == 0.0};
}

/// An atomic measure reproducing a feasible sequence of rank <= 2.
/// Rank 1: one atom. Rank 2, n = 2: symmetric pair about the mean.
/// Rank 2, n >= 3: two-atom Prony solve from gamma_0 .. gamma_3.
inline DiscreteMeasure recover_atoms(const MomentSequence& seq, const Tolerances& tol = {}) {
  const FeasibilityVerdict verdict = is_feasible(seq, tol);
  if (!verdict.feasible)
    throw Error(ErrorCode::InfeasibleSequence,
                "cannot recover atoms of an infeasible sequence (" + std::string(to_string(verdict.reason)) + ")");
  // A positive measure of zero mass is the zero measure; leftover higher moments are rounding.
  if (seq.is_zero() || seq.zeroth() == 0.0) return {};
  const int n = seq.order();
  const double g0 = seq[0];
  if (n == 0) return {{{0.0, g0}}};

  const int rank = verdict.rank_gamma;
  if (rank == 1) return {{{seq[1] / g0, g0}}};
  if (rank > 2)
    throw Error(ErrorCode::UnsupportedRank, "recovery supports sequence rank <= 2, got " + std::to_string(rank));

  const double mean = seq[1] / g0;
  if (n == 2) {
    const double s = std::sqrt(std::max(0.0, seq[2] / g0 - mean * mean));
    return {{{mean - s, 0.5 * g0}, {mean + s, 0.5 * g0}}};
  }

  // Centred at the mean the two atoms a < 0 < b solve x^2 - (s3/s2) x - s2/s0 = 0.
  // Working in centred moments keeps a tiny second atom weight from being lost to cancellation.
  const MomentSequence centred = shift_moments(seq.truncated(3), mean);
  const double s2 = centred[2], s3 = centred[3];
  if (!(s2 > 0.0)) throw Error(ErrorCode::Numeric, "two-atom recovery needs positive spread");
  const double p = s3 / s2, c = s2 / g0;
  const double q = 0.5 * (p + std::copysign(std::sqrt(p * p + 4.0 * c), p));
  double a = q, b = -c / q;
  if (a > b) std::swap(a, b);
  const double w1 = g0 * b / (b - a);
  const double w2 = -g0 * a / (b - a);
  if (!(w1 > 0.0 && w2 > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorCode::Numeric, "two-atom recovery produced invalid atoms");
  const double x1 = a + mean, x2 = b + mean;

  DiscreteMeasure out{{{x1, w1}, {x2, w2}}};
  if (n > 3 && relative_mismatch(moments_of(out, n), seq) > 1e-9)
    throw Error(ErrorCode::UnsupportedRank, "two-atom solution does not reproduce the higher moments");
  return out;
}

}  // namespace wcbayes

#endif
