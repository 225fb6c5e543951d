#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "evi/common.hpp"

namespace evi {

namespace detail {

/// Lawson-Hanson nonnegative least squares: minimize |A a - b| over a >= 0.
/// Finite termination; used for distances to finitely generated cones.
inline Vector nnls(const Matrix& A, const Vector& b, double tol = 1e-12, int max_iter = 0) {
  const Index n = A.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(8 * std::max<Index>(n, 8));
  Vector a = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());

  for (int iter = 0; iter < max_iter; ++iter) {
    const Vector w = A.transpose() * (b - A * a);
    Index best = -1;
    double best_w = tol * scale;
    for (Index i = 0; i < n; ++i)
      if (!passive[static_cast<std::size_t>(i)] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (;;) {
      std::vector<Index> idx;
      for (Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
      Matrix Ap(A.rows(), static_cast<Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Index>(k)) = A.col(idx[k]);
      const Vector sp = Ap.completeOrthogonalDecomposition().solve(b);

      double theta = 1.0;
      bool clipped = false;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (sp(static_cast<Index>(k)) <= 0.0) {
          const double ai = a(idx[k]);
          const double step = ai / (ai - sp(static_cast<Index>(k)));
          if (step < theta) theta = step;
          clipped = true;
        }
      }
      if (!clipped) {
        a.setZero();
        for (std::size_t k = 0; k < idx.size(); ++k) a(idx[k]) = sp(static_cast<Index>(k));
        break;
      }
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const Index i = idx[k];
        a(i) += theta * (sp(static_cast<Index>(k)) - a(i));
        if (a(i) <= tol * scale) {
          a(i) = 0.0;
          passive[static_cast<std::size_t>(i)] = false;
        }
      }
    }
  }
  return a;
}

/// Euclidean distance from y to the cone generated by the columns of V.
inline double distance_to_generated_cone(const Matrix& V, const Vector& y, double tol = 1e-12) {
  if (V.cols() == 0) return y.norm();
  const Vector a = nnls(V, y, tol);
  return (V * a - y).norm();
}

}  // namespace detail

/// A closed convex polyhedral cone {y : R y >= 0}, optionally carrying a
/// generator matrix whose columns nonnegatively span the cone. Immutable
/// after construction.
class PolyhedralCone {
 public:
  PolyhedralCone() = default;

  /// Face form: rows of R are the inequality normals. R may have zero rows
  /// (the whole space).
  static PolyhedralCone from_faces(Matrix R) {
    PolyhedralCone c;
    c.dim_ = static_cast<int>(R.cols());
    c.faces_ = std::move(R);
    return c;
  }

  /// Generator form: columns of V span the cone by nonnegative combinations.
  /// V may have zero columns (the origin).
  static PolyhedralCone from_generators(Matrix V) {
    PolyhedralCone c;
    c.dim_ = static_cast<int>(V.rows());
    c.generators_ = std::move(V);
    return c;
  }

  static PolyhedralCone from_faces_and_generators(Matrix R, Matrix V) {
    detail::require(R.cols() == V.rows(), "face/generator dimensions disagree");
    PolyhedralCone c;
    c.dim_ = static_cast<int>(R.cols());
    c.faces_ = std::move(R);
    c.generators_ = std::move(V);
    return c;
  }

  static PolyhedralCone orthant(int d) {
    return from_faces_and_generators(Matrix::Identity(d, d), Matrix::Identity(d, d));
  }

  static PolyhedralCone full_space(int d) { return from_faces(Matrix(0, d)); }

  int dim() const { return dim_; }
  bool has_faces() const { return faces_.has_value(); }
  bool has_generators() const { return generators_.has_value(); }
  const Matrix& face_matrix() const {
    detail::require(has_faces(), "cone has no face form");
    return *faces_;
  }
  const Matrix& generator_matrix() const {
    detail::require(has_generators(), "cone has no generator form");
    return *generators_;
  }
  int num_faces() const { return has_faces() ? static_cast<int>(faces_->rows()) : 0; }

  /// Violation of y in K: zero inside, positive outside. Face form gives the
  /// worst linear violation; generator-only cones use the Euclidean distance.
  double membership_violation(const Vector& y) const {
    detail::require(y.size() == dim_, "point dimension mismatch");
    if (has_faces()) {
      if (faces_->rows() == 0) return 0.0;
      return std::max(0.0, -(*faces_ * y).minCoeff());
    }
    return detail::distance_to_generated_cone(*generators_, y);
  }

  /// Violation of eta in the dual cone K*. Generator form of K gives the
  /// worst bilinear violation; otherwise the distance to {R^T a : a >= 0}.
  double dual_membership_violation(const Vector& eta) const {
    detail::require(eta.size() == dim_, "point dimension mismatch");
    if (has_generators()) {
      if (generators_->cols() == 0) return 0.0;  // dual of {0} is everything
      return std::max(0.0, -(generators_->transpose() * eta).minCoeff());
    }
    return detail::distance_to_generated_cone(faces_->transpose(), eta);
  }

  bool contains(const Vector& y, double tol = kAlgebraicTol) const {
    return membership_violation(y) <= tol;
  }

 private:
  int dim_ = 0;
  std::optional<Matrix> faces_;
  std::optional<Matrix> generators_;
};

namespace detail {

/// Extreme rays plus a spanning pair for the lineality space of
/// K = {y : R y >= 0}. Returned as columns; nonnegative combinations span K.
/// Enumerates (d-1)-subsets of rows, so intended for small dimensions.
inline Matrix enumerate_generators(const Matrix& R, double tol = 1e-10) {
  const Index d = R.cols();
  const Index m = R.rows();
  std::vector<Vector> gens;

  // Lineality space {y : R y = 0}; spanned in both directions.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(R);
  cod.setThreshold(tol);
  const Index rank = m == 0 ? 0 : cod.rank();
  if (rank < d) {
    Matrix NS;
    if (m == 0) {
      NS = Matrix::Identity(d, d);
    } else {
      // Kernel basis from the full SVD.
      Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullV);
      NS = svd.matrixV().rightCols(d - rank);
    }
    for (Index j = 0; j < NS.cols(); ++j) {
      gens.push_back(NS.col(j));
      gens.push_back(-NS.col(j));
    }
  }

  // Extreme rays: null directions of (d-1)-row subsets that satisfy all
  // remaining inequalities.
  if (d >= 1 && m >= d - 1) {
    std::vector<Index> pick(static_cast<std::size_t>(std::max<Index>(d - 1, 0)));
    std::vector<Index> stack;
    auto consider = [&](const std::vector<Index>& subset) {
      Matrix Rs(static_cast<Index>(subset.size()), d);
      for (std::size_t k = 0; k < subset.size(); ++k) Rs.row(static_cast<Index>(k)) = R.row(subset[k]);
      Eigen::JacobiSVD<Matrix> svd(Rs, Eigen::ComputeFullV);
      Index r = 0;
      const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
      for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * std::max(1.0, smax)) ++r;
      if (r != d - 1) return;  // not a ray-defining subset
      const Vector dir = svd.matrixV().col(d - 1);
      for (double sgn : {1.0, -1.0}) {
        const Vector cand = sgn * dir;
        if ((R * cand).minCoeff() >= -tol) gens.push_back(cand);
      }
    };
    // Iterative subset enumeration of size d-1.
    std::vector<Index> subset;
    std::function<void(Index)> rec = [&](Index start) {
      if (static_cast<Index>(subset.size()) == d - 1) {
        consider(subset);
        return;
      }
      for (Index i = start; i < m; ++i) {
        subset.push_back(i);
        rec(i + 1);
        subset.pop_back();
      }
    };
    if (d == 1) {
      // Rays of a 1-D cone: +-1 where feasible.
      for (double sgn : {1.0, -1.0}) {
        Vector cand(1);
        cand << sgn;
        if (m == 0 || (R * cand).minCoeff() >= -tol) gens.push_back(cand);
      }
    } else {
      rec(0);
    }
  }

  // Deduplicate collinear directions.
  std::vector<Vector> unique;
  for (auto& g : gens) {
    const double nrm = g.norm();
    if (nrm <= tol) continue;
    Vector u = g / nrm;
    bool dup = false;
    for (const auto& v : unique)
      if ((u - v).norm() <= 1e-8) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(u);
  }
  Matrix out(d, static_cast<Index>(unique.size()));
  for (std::size_t j = 0; j < unique.size(); ++j) out.col(static_cast<Index>(j)) = unique[j];
  return out;
}

}  // namespace detail

struct DualConeOptions {
  /// Above this dimension, face-form recovery of the dual is skipped and only
  /// the generator form is returned (flagged via `face_form_recovered`).
  int enumeration_cap = 8;
  double tol = 1e-10;
};

struct DualConeResult {
  PolyhedralCone cone;
  bool face_form_recovered = false;
};

/// Dual cone K* = {eta : <eta, v> >= 0 for all v in K}. The face form of K
/// directly yields generators of K* (columns of R^T); the face form of K*
/// consists of the generators of K, recovered by ray enumeration at small
/// dimension.
inline DualConeResult dual_cone(const PolyhedralCone& K, const DualConeOptions& opts = {}) {
  detail::require(K.has_faces() || K.has_generators(), "cone needs a face or generator form");
  const int d = K.dim();
  std::optional<Matrix> dual_gens;
  std::optional<Matrix> dual_faces;

  if (K.has_faces()) dual_gens = K.face_matrix().transpose();
  if (K.has_generators()) dual_faces = K.generator_matrix().transpose();

  bool recovered = dual_faces.has_value();
  if (!dual_faces && d <= opts.enumeration_cap) {
    // Generators of K become the face normals of K*.
    const Matrix gens = detail::enumerate_generators(K.face_matrix(), opts.tol);
    dual_faces = gens.transpose();
    recovered = true;
  }
  if (!dual_gens) {
    // K given only by generators V: K* = {eta : V^T eta >= 0}; its generators
    // need ray enumeration in turn.
    if (d <= opts.enumeration_cap) {
      dual_gens = detail::enumerate_generators(K.generator_matrix().transpose(), opts.tol);
    }
  }

  DualConeResult res;
  res.face_form_recovered = recovered;
  if (dual_faces && dual_gens)
    res.cone = PolyhedralCone::from_faces_and_generators(*dual_faces, *dual_gens);
  else if (dual_faces)
    res.cone = PolyhedralCone::from_faces(*dual_faces);
  else
    res.cone = PolyhedralCone::from_generators(*dual_gens);
  return res;
}

/// Residual of the relation eta in -N_{K - h}(v), evaluated through the cone
/// complementarity form: K ∋ v + h ⟂ eta ∈ K*. Outside the set the normal
/// cone is empty and the residual is +inf.
inline double normal_cone_residual(const PolyhedralCone& K, const Vector& v, const Vector& eta,
                                   const Vector& h, double membership_tol = kAlgebraicTol) {
  detail::require(v.size() == K.dim() && eta.size() == K.dim() && h.size() == K.dim(),
                  "normal_cone_residual dimension mismatch");
  const Vector y = v + h;
  const double primal = K.membership_violation(y);
  if (primal > membership_tol) return kInf;
  const double dual = K.dual_membership_violation(eta);
  const double comp = std::abs(eta.dot(y));
  return std::max({primal, dual, comp});
}

}  // namespace evi
