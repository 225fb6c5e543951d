#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "evi/cones.hpp"
#include "evi/signals.hpp"

namespace evi {

/// Time-varying set S(t) = K - h(t) = {z : z + h(t) in K}. The regularity
/// class of the offset signal decides whether trajectories constrained by
/// this set may jump.
class MovingSet {
 public:
  MovingSet() = default;

  MovingSet(PolyhedralCone cone, Signal offset,
            std::optional<double> variation_bound = std::nullopt)
      : cone_(std::move(cone)), offset_(std::move(offset)), variation_bound_(variation_bound) {
    detail::require(offset_.dim() == cone_.dim(), "offset dimension must match cone dimension");
  }

  static MovingSet stationary(PolyhedralCone cone) {
    const int d = cone.dim();
    return MovingSet(std::move(cone), Signal::zero(d));
  }

  const PolyhedralCone& cone() const { return cone_; }
  const Signal& offset() const { return offset_; }
  int dim() const { return cone_.dim(); }
  Regularity regularity() const { return offset_.regularity(); }
  std::optional<double> variation_bound() const { return variation_bound_; }

  Vector offset_at(double t) const { return offset_.value(t); }
  Vector offset_left(double t) const { return offset_.left_value(t); }
  std::vector<double> jump_times_in(double t0, double t1) const {
    return offset_.breakpoints_in(t0, t1);
  }

  /// S(t) always contains -h(t) for a cone K (the image of the apex), so this
  /// only guards against degenerate descriptions.
  bool feasible_at(double t, double tol = kAlgebraicTol) const {
    return membership_violation(t, -offset_at(t)) <= tol;
  }

  double membership_violation(double t, const Vector& z) const {
    return cone_.membership_violation(z + offset_at(t));
  }

 private:
  PolyhedralCone cone_;
  Signal offset_;
  std::optional<double> variation_bound_;
};

struct ProjectionOptions {
  double tol = kAlgebraicTol;
  /// Active-set enumeration is used while 2^faces stays below this budget;
  /// beyond it the solver falls back to Dykstra cycles.
  int enumeration_face_cap = 12;
  int dykstra_max_cycles = 20000;
};

namespace detail {

/// Projection of x onto the polyhedron {v : R v >= b} by active-set
/// enumeration: for every subset of faces treated as equalities, solve the
/// KKT system and keep the first candidate that is primal feasible with
/// nonnegative multipliers. Exact at desk scale.
inline std::optional<Vector> project_enumerate(const Matrix& R, const Vector& b, const Vector& x,
                                               double tol) {
  const Index m = R.rows();
  const double scale = std::max({1.0, x.cwiseAbs().maxCoeff(), b.size() ? b.cwiseAbs().maxCoeff() : 0.0});

  // Subsets ordered by cardinality so the unconstrained point wins when
  // feasible; any KKT point of this convex program is the projection.
  std::vector<std::vector<Index>> order;
  const Index total = Index(1) << m;
  for (Index mask = 0; mask < total; ++mask) {
    std::vector<Index> subset;
    for (Index i = 0; i < m; ++i)
      if (mask & (Index(1) << i)) subset.push_back(i);
    order.push_back(std::move(subset));
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b2) { return a.size() < b2.size(); });

  for (const auto& subset : order) {
    Vector v;
    if (subset.empty()) {
      v = x;
    } else {
      Matrix Ra(static_cast<Index>(subset.size()), R.cols());
      Vector ba(static_cast<Index>(subset.size()));
      for (std::size_t k = 0; k < subset.size(); ++k) {
        Ra.row(static_cast<Index>(k)) = R.row(subset[k]);
        ba(static_cast<Index>(k)) = b(subset[k]);
      }
      // v = x + Ra^T lambda with Ra v = ba.
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Ra * Ra.transpose());
      const Vector lambda = cod.solve(ba - Ra * x);
      if (lambda.minCoeff() < -tol * scale) continue;
      v = x + Ra.transpose() * lambda;
      if ((Ra * v - ba).cwiseAbs().maxCoeff() > 1e-8 * scale) continue;
    }
    if (m == 0 || (R * v - b).minCoeff() >= -1e-8 * scale) return v;
  }
  return std::nullopt;
}

/// Dykstra's cyclic projection onto the intersection of half-spaces
/// {v : R_i v >= b_i}. Used above the enumeration budget.
inline Vector project_dykstra(const Matrix& R, const Vector& b, const Vector& x, double tol,
                              int max_cycles) {
  const Index m = R.rows();
  Vector v = x;
  Matrix increments = Matrix::Zero(m, R.cols());
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    double moved = 0.0;
    for (Index i = 0; i < m; ++i) {
      const Vector y = v - increments.row(i).transpose();
      const double viol = R.row(i).dot(y) - b(i);
      Vector p = y;
      if (viol < 0.0) p -= viol / R.row(i).squaredNorm() * R.row(i).transpose();
      increments.row(i) = (p - y).transpose();
      moved = std::max(moved, (p - v).norm());
      v = p;
    }
    const double worst = m == 0 ? 0.0 : -(R * v - b).minCoeff();
    if (worst <= tol && moved <= tol * 1e-2) return v;
  }
  return v;
}

}  // namespace detail

/// Euclidean projection onto {v : R v >= b}.
inline Vector project_onto_polyhedron(const Matrix& R, const Vector& b, const Vector& x,
                                      const ProjectionOptions& opts = {}) {
  detail::require(R.cols() == x.size() && R.rows() == b.size(),
                  "projection dimension mismatch");
  if (R.rows() == 0) return x;
  if (R.rows() <= opts.enumeration_face_cap) {
    auto v = detail::project_enumerate(R, b, x, opts.tol);
    if (v) return *v;
    throw InfeasibleError("projection: no KKT point found; polyhedron may be empty");
  }
  return detail::project_dykstra(R, b, x, opts.tol, opts.dykstra_max_cycles);
}

/// argmin over v in S(t) of |x - v|^2 for S(t) = K - h(t).
inline Vector project_onto_set(const MovingSet& set, double t, const Vector& x,
                               const ProjectionOptions& opts = {}) {
  detail::require(x.size() == set.dim(), "project_onto_set dimension mismatch");
  const PolyhedralCone& K = set.cone();
  detail::require(K.has_faces(), "project_onto_set needs a face-form cone");
  const Vector h = set.offset_at(t);
  const Matrix& R = K.face_matrix();
  return project_onto_polyhedron(R, -(R * h), x, opts);
}

/// KKT residual of a claimed projection: membership violation plus the
/// distance of x - v to the cone of active-face normals and the
/// complementarity slack.
inline double projection_residual(const MovingSet& set, double t, const Vector& x,
                                  const Vector& v) {
  const Matrix& R = set.cone().face_matrix();
  const Vector h = set.offset_at(t);
  const Vector slack = R * (v + h);
  const double member = std::max(0.0, slack.size() ? -slack.minCoeff() : 0.0);
  const Vector r = x - v;
  if (r.norm() <= 1e-14) return member;
  const Vector lambda = detail::nnls(R.transpose(), r);
  const double stationarity = (R.transpose() * lambda - r).norm();
  const double comp = slack.size() ? std::abs(lambda.dot(slack)) : 0.0;
  return std::max({member, stationarity, comp});
}

struct HausdorffOptions {
  std::uint64_t seed = 42;
  ProjectionOptions projection;
};

/// Sampled lower bound on the Hausdorff distance between S(t1) and S(t2).
/// Candidate points are projections of a fixed seeded direction stream onto
/// one set; their distance to the other set bounds the one-sided excess from
/// below. Nondecreasing in n_dirs because the stream is nested.
inline double hausdorff_estimate(const MovingSet& set, double t1, double t2, int n_dirs,
                                 const HausdorffOptions& opts = {}) {
  detail::require(n_dirs >= 1, "hausdorff_estimate needs at least one direction");
  const PolyhedralCone& K = set.cone();
  detail::require(K.has_faces(), "hausdorff_estimate needs a face-form cone");
  const Matrix& R = K.face_matrix();
  const int d = set.dim();
  const Vector h1 = set.offset_at(t1);
  const Vector h2 = set.offset_at(t2);
  const double radius = 2.0 * std::max(1.0, (h1 - h2).norm());

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double best = 0.0;
  for (int k = 0; k < n_dirs; ++k) {
    Vector u(d);
    for (int i = 0; i < d; ++i) u(i) = gauss(rng);
    const double nrm = u.norm();
    if (nrm <= 1e-14) continue;
    u /= nrm;
    // Anchor each set at the image of the cone apex, which always belongs.
    for (int side = 0; side < 2; ++side) {
      const Vector& ha = side == 0 ? h1 : h2;
      const Vector& hb = side == 0 ? h2 : h1;
      const Vector probe = -ha + radius * u;
      const Vector p = project_onto_polyhedron(R, -(R * ha), probe, opts.projection);
      const Vector q = project_onto_polyhedron(R, -(R * hb), p, opts.projection);
      best = std::max(best, (p - q).norm());
    }
  }
  return best;
}

}  // namespace evi
