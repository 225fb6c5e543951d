#pragma once

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "evi/common.hpp"

namespace evi {

/// LCP(M, q): find z >= 0 with w = M z + q >= 0 and <z, w> = 0.
struct LcpProblem {
  Matrix M;
  Vector q;

  Index dim() const { return q.size(); }
  void validate() const {
    detail::require(M.rows() == M.cols() && M.rows() == q.size(), "LCP dimensions disagree");
    detail::require(M.allFinite() && q.allFinite(), "LCP entries must be finite");
  }
};

enum class LcpStatus { solved, ray_termination, infeasible };

inline const char* to_string(LcpStatus s) {
  switch (s) {
    case LcpStatus::solved: return "solved";
    case LcpStatus::ray_termination: return "ray_termination";
    case LcpStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct LcpSolution {
  Vector z;
  Vector w;
  LcpStatus status = LcpStatus::infeasible;
  double complementarity_residual = kInf;
  std::string note;
  int pivots = 0;

  bool solved() const { return status == LcpStatus::solved; }

  /// Certificate per the solution contract: w = Mz + q, z >= -tol, w >= -tol,
  /// |<z, w>| <= tol (scaled).
  bool certificate_ok(const LcpProblem& p, double tol = kAlgebraicTol) const {
    if (!solved()) return false;
    const double scale = std::max({1.0, p.q.size() ? p.q.cwiseAbs().maxCoeff() : 0.0,
                                   z.size() ? z.cwiseAbs().maxCoeff() : 0.0});
    const double eq = (p.M * z + p.q - w).cwiseAbs().maxCoeff();
    const double zmin = z.size() ? z.minCoeff() : 0.0;
    const double wmin = w.size() ? w.minCoeff() : 0.0;
    return eq <= tol * scale && zmin >= -tol * scale && wmin >= -tol * scale &&
           std::abs(z.dot(w)) <= tol * scale * scale;
  }
};

struct LemkeOptions {
  /// Covering vector; empty means all-ones.
  Vector covering;
  /// Pivot cap; <= 0 means the default d * 2^d (clamped).
  long max_pivots = 0;
  double pivot_tol = 1e-11;
};

/// Lemke's complementary pivot method with a lexicographic ratio test
/// (deterministic tie-break, anti-cycling) and an all-ones covering vector.
/// Ray termination is reported as its own status; the pivot cap trips to
/// `infeasible` with a diagnostic note.
inline LcpSolution lemke_solve(const LcpProblem& p, const LemkeOptions& opts = {}) {
  p.validate();
  const Index n = p.dim();
  LcpSolution sol;
  if (n == 0) {
    sol.z = Vector(0);
    sol.w = Vector(0);
    sol.status = LcpStatus::solved;
    sol.complementarity_residual = 0.0;
    return sol;
  }

  const double qscale = std::max(1.0, p.q.cwiseAbs().maxCoeff());
  if (p.q.minCoeff() >= -1e-13 * qscale) {
    sol.z = Vector::Zero(n);
    sol.w = p.q.cwiseMax(0.0);
    sol.status = LcpStatus::solved;
    sol.complementarity_residual = 0.0;
    return sol;
  }

  Vector cover = opts.covering.size() ? opts.covering : Vector::Ones(n);
  detail::require(cover.size() == n && cover.minCoeff() > 0.0,
                  "covering vector must be positive and of LCP dimension");

  long max_pivots = opts.max_pivots;
  if (max_pivots <= 0) {
    const double raw = static_cast<double>(n) * std::pow(2.0, static_cast<double>(n));
    max_pivots = raw > 1e6 ? 1000000L : static_cast<long>(raw);
  }

  // Tableau columns: [w_0..w_{n-1} | z_0..z_{n-1} | z0 | q]. The w-columns
  // double as the basis inverse for the lexicographic ratio test.
  const Index col_z0 = 2 * n;
  const Index col_q = 2 * n + 1;
  Matrix T(n, 2 * n + 2);
  T.leftCols(n) = Matrix::Identity(n, n);
  T.middleCols(n, n) = -p.M;
  T.col(col_z0) = -cover;
  T.col(col_q) = p.q;
  std::vector<Index> basis(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = i;

  auto pivot = [&](Index row, Index col) {
    T.row(row) /= T(row, col);
    for (Index i = 0; i < n; ++i)
      if (i != row && T(i, col) != 0.0) T.row(i) -= T(i, col) * T.row(row);
  };

  // Lexicographic comparison of ratio rows (q first, then basis-inverse
  // columns); returns true when row a beats row b.
  auto lex_less = [&](Index a, Index b, Index col) {
    const double ta = T(a, col), tb = T(b, col);
    for (Index j = -1; j < n; ++j) {
      const Index c = j < 0 ? col_q : j;
      const double diff = T(a, c) * tb - T(b, c) * ta;
      if (std::abs(diff) > 1e-14 * std::max(1.0, std::abs(T(a, c) * tb))) return diff < 0.0;
    }
    return a < b;
  };

  // Drive z0 in at the most negative q row.
  Index row;
  T.col(col_q).minCoeff(&row);
  pivot(row, col_z0);
  Index leaving_var = basis[static_cast<std::size_t>(row)];
  basis[static_cast<std::size_t>(row)] = col_z0;
  Index entering = leaving_var + n;  // complement of the departed w

  int pivots = 1;
  while (pivots < max_pivots) {
    Index exit_row = -1;
    for (Index i = 0; i < n; ++i) {
      if (T(i, entering) <= opts.pivot_tol) continue;
      if (exit_row < 0 || lex_less(i, exit_row, entering)) exit_row = i;
    }
    if (exit_row < 0) {
      sol.status = LcpStatus::ray_termination;
      sol.note = "secondary ray encountered";
      sol.pivots = pivots;
      sol.z = Vector::Zero(n);
      sol.w = p.q;
      return sol;
    }
    pivot(exit_row, entering);
    ++pivots;
    leaving_var = basis[static_cast<std::size_t>(exit_row)];
    basis[static_cast<std::size_t>(exit_row)] = entering;
    if (leaving_var == col_z0) {
      Vector z = Vector::Zero(n);
      for (Index i = 0; i < n; ++i) {
        const Index var = basis[static_cast<std::size_t>(i)];
        if (var >= n && var < 2 * n) z(var - n) = T(i, col_q);
      }
      sol.z = z;
      sol.w = p.M * z + p.q;
      sol.status = LcpStatus::solved;
      sol.complementarity_residual = std::abs(z.dot(sol.w));
      sol.pivots = pivots;
      return sol;
    }
    entering = leaving_var < n ? leaving_var + n : leaving_var - n;
  }

  sol.status = LcpStatus::infeasible;
  sol.note = "pivot cap reached (cycling guard)";
  sol.pivots = pivots;
  sol.z = Vector::Zero(n);
  sol.w = p.q;
  return sol;
}

/// Exhaustive oracle: try every complementary support in ascending bitmask
/// order (bit i set means z_i basic) and return the first support whose
/// induced linear system has a feasible solution. Dimension-capped.
inline LcpSolution brute_force_lcp(const LcpProblem& p, double tol = kAlgebraicTol) {
  p.validate();
  const Index n = p.dim();
  detail::require(n <= 16, "brute_force_lcp dimension cap is 16");
  LcpSolution sol;
  const double scale = std::max(1.0, n ? p.q.cwiseAbs().maxCoeff() : 0.0);

  const std::uint64_t total = std::uint64_t(1) << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<Index> sup;
    for (Index i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) sup.push_back(i);
    Vector z = Vector::Zero(n);
    if (!sup.empty()) {
      Matrix Ms(static_cast<Index>(sup.size()), static_cast<Index>(sup.size()));
      Vector qs(static_cast<Index>(sup.size()));
      for (std::size_t a = 0; a < sup.size(); ++a) {
        qs(static_cast<Index>(a)) = p.q(sup[a]);
        for (std::size_t b = 0; b < sup.size(); ++b)
          Ms(static_cast<Index>(a), static_cast<Index>(b)) = p.M(sup[a], sup[b]);
      }
      const Vector zs = Ms.completeOrthogonalDecomposition().solve(-qs);
      if ((Ms * zs + qs).cwiseAbs().maxCoeff() > tol * scale) continue;
      if (zs.minCoeff() < -tol * scale) continue;
      for (std::size_t a = 0; a < sup.size(); ++a) z(sup[a]) = std::max(0.0, zs(static_cast<Index>(a)));
    }
    const Vector w = p.M * z + p.q;
    if (n && w.minCoeff() < -tol * scale) continue;
    sol.z = z;
    sol.w = w;
    sol.status = LcpStatus::solved;
    sol.complementarity_residual = std::abs(z.dot(w));
    return sol;
  }
  sol.status = LcpStatus::infeasible;
  sol.note = "no complementary support is feasible";
  sol.z = Vector::Zero(n);
  sol.w = p.q;
  return sol;
}

/// All support-feasible solutions (used by solution-set property tests).
inline std::vector<LcpSolution> brute_force_lcp_all(const LcpProblem& p,
                                                    double tol = kAlgebraicTol) {
  p.validate();
  const Index n = p.dim();
  detail::require(n <= 16, "brute_force_lcp dimension cap is 16");
  std::vector<LcpSolution> out;
  const double scale = std::max(1.0, n ? p.q.cwiseAbs().maxCoeff() : 0.0);
  const std::uint64_t total = std::uint64_t(1) << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<Index> sup;
    for (Index i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) sup.push_back(i);
    Vector z = Vector::Zero(n);
    if (!sup.empty()) {
      Matrix Ms(static_cast<Index>(sup.size()), static_cast<Index>(sup.size()));
      Vector qs(static_cast<Index>(sup.size()));
      for (std::size_t a = 0; a < sup.size(); ++a) {
        qs(static_cast<Index>(a)) = p.q(sup[a]);
        for (std::size_t b = 0; b < sup.size(); ++b)
          Ms(static_cast<Index>(a), static_cast<Index>(b)) = p.M(sup[a], sup[b]);
      }
      const Vector zs = Ms.completeOrthogonalDecomposition().solve(-qs);
      if ((Ms * zs + qs).cwiseAbs().maxCoeff() > tol * scale) continue;
      if (zs.minCoeff() < -tol * scale) continue;
      for (std::size_t a = 0; a < sup.size(); ++a) z(sup[a]) = std::max(0.0, zs(static_cast<Index>(a)));
    }
    const Vector w = p.M * z + p.q;
    if (n && w.minCoeff() < -tol * scale) continue;
    if (std::abs(z.dot(w)) > tol * scale * scale) continue;
    LcpSolution s;
    s.z = z;
    s.w = w;
    s.status = LcpStatus::solved;
    s.complementarity_residual = std::abs(z.dot(w));
    out.push_back(std::move(s));
  }
  return out;
}

/// Plain-text format: dimension line, M row-major (one row per line), then q.
/// 17 significant digits round-trip doubles exactly.
inline void write_lcp(std::ostream& os, const LcpProblem& p) {
  p.validate();
  const Index n = p.dim();
  os << n << "\n";
  os << std::setprecision(17);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) os << (j ? " " : "") << p.M(i, j);
    os << "\n";
  }
  for (Index j = 0; j < n; ++j) os << (j ? " " : "") << p.q(j);
  os << "\n";
}

inline LcpProblem read_lcp(std::istream& is) {
  Index n = -1;
  if (!(is >> n) || n < 0) throw SolverError("lcp text: bad dimension line");
  LcpProblem p;
  p.M.resize(n, n);
  p.q.resize(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!(is >> p.M(i, j))) throw SolverError("lcp text: truncated matrix");
  for (Index j = 0; j < n; ++j)
    if (!(is >> p.q(j))) throw SolverError("lcp text: truncated q");
  return p;
}

}  // namespace evi
