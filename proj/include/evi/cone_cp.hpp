#pragma once

#include <string>
#include <utility>

#include "evi/cones.hpp"
#include "evi/lcp.hpp"
#include "evi/moving_set.hpp"

namespace evi {

/// Data of the cone complementarity relation
///   K ∋ v = H x + J eta + h(t) ⟂ eta ∈ K*.
struct ConeCpInstance {
  Matrix H;
  Matrix J;
  MovingSet set;  // K and h(t)

  Index d_s() const { return H.rows(); }
  Index n() const { return H.cols(); }

  void validate() const {
    detail::require(J.rows() == J.cols() && J.rows() == H.rows(), "J must be d_s x d_s");
    detail::require(set.dim() == H.rows(), "cone/offset dimension must equal rows of H");
  }
};

struct ConeCpResult {
  Vector eta;
  Vector alpha;  // face multipliers, eta = R^T alpha
  LcpStatus status = LcpStatus::infeasible;
  double residual = kInf;
  std::string note;

  bool solved() const { return status == LcpStatus::solved; }
};

struct ConeCpOptions {
  double tol = kAlgebraicTol;
  LemkeOptions lemke;
  /// Fall back to the exhaustive solver when Lemke fails and the face count
  /// permits.
  bool brute_force_fallback = true;
};

namespace detail {

/// Cone with a face form, converting generator-only descriptions by ray
/// enumeration of the dual (dimension-capped).
inline PolyhedralCone ensure_face_form(const PolyhedralCone& K, int cap = 8) {
  if (K.has_faces()) return K;
  detail::require(K.dim() <= cap, "face-form conversion capped at dimension 8");
  const Matrix faces = enumerate_generators(K.generator_matrix().transpose()).transpose();
  return PolyhedralCone::from_faces_and_generators(faces, K.generator_matrix());
}

/// Solve 0 <= alpha ⟂ R(w + J R^T alpha) >= 0 and assemble eta = R^T alpha
/// for the constant part w = H x + h.
inline ConeCpResult solve_cone_cp_offset(const Matrix& R, const Matrix& J, const Vector& w,
                                         const ConeCpOptions& opts) {
  LcpProblem lcp{R * J * R.transpose(), R * w};
  LcpSolution s = lemke_solve(lcp, opts.lemke);
  if (!s.solved() && opts.brute_force_fallback && lcp.dim() <= 16) {
    LcpSolution bf = brute_force_lcp(lcp, opts.tol);
    if (bf.solved()) {
      bf.note = "lemke " + std::string(to_string(s.status)) + "; brute-force fallback";
      s = std::move(bf);
    }
  }
  ConeCpResult res;
  res.status = s.status;
  res.note = s.note;
  res.alpha = s.z;
  res.eta = R.transpose() * s.z;
  return res;
}

}  // namespace detail

/// Multiplier of the static cone CP at state x and time t. The substitution
/// eta = R^T alpha reduces the problem to a standard LCP in alpha; for the
/// orthant this is the direct LCP 0 <= eta ⟂ H x + J eta + h(t) >= 0.
inline ConeCpResult solve_cone_cp(const ConeCpInstance& inst, const Vector& x, double t,
                                  const ConeCpOptions& opts = {}) {
  inst.validate();
  detail::require(x.size() == inst.n(), "state dimension mismatch");
  const PolyhedralCone K = detail::ensure_face_form(inst.set.cone());
  const Matrix& R = K.face_matrix();
  const Vector w = inst.H * x + inst.set.offset_at(t);
  ConeCpResult res = detail::solve_cone_cp_offset(R, inst.J, w, opts);
  if (res.solved()) {
    const double scale =
        std::max({1.0, w.cwiseAbs().maxCoeff(), res.eta.size() ? res.eta.cwiseAbs().maxCoeff() : 0.0});
    res.residual = normal_cone_residual(K, inst.H * x + inst.J * res.eta, res.eta,
                                        inst.set.offset_at(t), opts.tol * scale);
    if (!(res.residual <= opts.tol * scale)) {
      res.status = LcpStatus::infeasible;
      res.note = "solution failed the cone-CP residual check";
    }
  } else if (res.note.empty()) {
    res.note = "cone CP unsolvable; constraint qualification (A3/A4) likely fails here";
  }
  return res;
}

/// Least-norm multiplier: the orthogonal projection of any cone-CP solution
/// onto range(J + J^T). Solution-independent by the kernel property of the
/// solution set; must itself solve the cone CP, otherwise the minimum-norm
/// bound assumption (A4) is violated and that is reported.
inline ConeCpResult least_norm_eta(const ConeCpInstance& inst, const Vector& x, double t,
                                   const ConeCpOptions& opts = {}) {
  ConeCpResult any = solve_cone_cp(inst, x, t, opts);
  if (!any.solved()) return any;
  const Matrix range = detail::symmetric_range_basis(inst.J + inst.J.transpose(), kRankCutoff);
  ConeCpResult res = any;
  res.eta = range.cols() ? Vector(range * (range.transpose() * any.eta)) : Vector::Zero(any.eta.size());
  const PolyhedralCone K = detail::ensure_face_form(inst.set.cone());
  const Vector w = inst.H * x + inst.set.offset_at(t);
  const double scale =
      std::max({1.0, w.cwiseAbs().maxCoeff(), any.eta.size() ? any.eta.cwiseAbs().maxCoeff() : 0.0});
  res.residual = normal_cone_residual(K, inst.H * x + inst.J * res.eta, res.eta,
                                      inst.set.offset_at(t), opts.tol * scale);
  if (!(res.residual <= opts.tol * scale)) {
    res.status = LcpStatus::infeasible;
    res.note = "projected least-norm multiplier is not a solution (A4 violated)";
  }
  return res;
}

}  // namespace evi
