#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "evi/cone_cp.hpp"

using namespace evi;

namespace {

ConeCpInstance orthant_instance(Matrix H, Matrix J, Vector h) {
  const int d = static_cast<int>(H.rows());
  ConeCpInstance inst{std::move(H), std::move(J),
                      MovingSet(PolyhedralCone::orthant(d), Signal::constant(std::move(h)))};
  inst.validate();
  return inst;
}

}  // namespace

TEST_CASE("inactive constraint gives zero multiplier") {
  Matrix H = Matrix::Identity(2, 2);
  Matrix J = Matrix::Zero(2, 2);
  const auto inst = orthant_instance(H, J, Vector::Zero(2));
  Vector x(2);
  x << 0.3, 1.7;
  const auto res = solve_cone_cp(inst, x, 0.0);
  REQUIRE(res.solved());
  CHECK(res.eta.norm() == 0.0);
  CHECK(res.residual <= 1e-12);
}

TEST_CASE("clipped-sine static data returns the least-norm zero multiplier") {
  Matrix H(2, 2);
  H << 0.0, -1.0, 0.0, 1.0;
  Matrix J = Matrix::Zero(2, 2);
  Vector h(2);
  h << 1.0, 1.0;
  const auto inst = orthant_instance(H, J, h);
  Vector x(2);
  x << 0.0, 1.0;  // on the upper bound: v = (0, 2)
  const auto any = solve_cone_cp(inst, x, 0.0);
  REQUIRE(any.solved());
  const auto ln = least_norm_eta(inst, x, 0.0);
  REQUIRE(ln.solved());
  CHECK(ln.eta.norm() <= 1e-12);  // J = 0 forces the least-norm element to zero
}

TEST_CASE("reduction matches the exhaustive oracle on random PSD J") {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 4;
    const int n = 2 + trial % 3;
    Matrix L(d, d), H(d, n);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) L(i, j) = u(rng);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < n; ++j) H(i, j) = u(rng);
    const Matrix J = L * L.transpose();
    Vector h(d), x(n);
    for (Index i = 0; i < d; ++i) h(i) = u(rng);
    for (Index i = 0; i < n; ++i) x(i) = u(rng);
    const auto inst = orthant_instance(H, J, h);
    const auto res = solve_cone_cp(inst, x, 0.0);

    LcpProblem reduced{J, H * x + h};  // orthant: R = I
    const auto oracle = brute_force_lcp(reduced);
    REQUIRE(res.solved() == oracle.solved());
    if (res.solved()) {
      CHECK(res.residual <= 1e-9);
      // PSD J may admit multiple eta; both must satisfy the same relation.
      CHECK(normal_cone_residual(inst.set.cone(), H * x + J * oracle.z, oracle.z, h, 1e-8) <=
            1e-8);
    }
  }
}

TEST_CASE("least-norm multiplier: J = 0 and J positive definite") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix H(2, 2);
    for (Index i = 0; i < 4; ++i) H(i / 2, i % 2) = u(rng);
    Vector h(2), x(2);
    for (int i = 0; i < 2; ++i) {
      h(i) = u(rng);
      x(i) = u(rng);
    }

    const auto inst0 = orthant_instance(H, Matrix::Zero(2, 2), h);
    const auto res0 = least_norm_eta(inst0, x, 0.0);
    if (res0.solved()) CHECK(res0.eta.norm() <= 1e-12);

    Matrix L(2, 2);
    for (Index i = 0; i < 4; ++i) L(i / 2, i % 2) = u(rng);
    const Matrix Jpd = L * L.transpose() + 0.3 * Matrix::Identity(2, 2);
    const auto instp = orthant_instance(H, Jpd, h);
    const auto resp = least_norm_eta(instp, x, 0.0);
    const auto oracle = brute_force_lcp(LcpProblem{Jpd, H * x + h});
    REQUIRE(resp.solved());
    REQUIRE(oracle.solved());
    CHECK((resp.eta - oracle.z).cwiseAbs().maxCoeff() <= 1e-8);  // unique solution
  }
}

TEST_CASE("rank-one J: least-norm equals the projected oracle solution") {
  // H = G = I, J = [[0,0],[0,1]] on the orthant.
  Matrix H = Matrix::Identity(2, 2);
  Matrix J(2, 2);
  J << 0.0, 0.0, 0.0, 1.0;
  const auto inst = orthant_instance(H, J, Vector::Zero(2));
  std::mt19937_64 rng(4096);
  std::uniform_real_distribution<double> u(0.05, 1.5);
  const Matrix range = detail::symmetric_range_basis(J + J.transpose());
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(2);
    x << u(rng), -u(rng);  // x1 > 0 keeps the CP solvable, x2 < 0 activates it
    const auto ln = least_norm_eta(inst, x, 0.0);
    REQUIRE(ln.solved());
    const auto sols = brute_force_lcp_all(LcpProblem{J, x});
    REQUIRE(!sols.empty());
    for (const auto& s : sols) {
      const Vector proj = range * (range.transpose() * s.z);
      CHECK((proj - ln.eta).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(ln.residual <= 1e-10);
    }
  }
}

TEST_CASE("solution-set kernel property on the reduced cone CP") {
  Matrix H = Matrix::Identity(2, 2);
  Matrix J(2, 2);
  J << 0.0, 0.0, 0.0, 1.0;
  std::mt19937_64 rng(7171);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Matrix Jsym = J + J.transpose();
  for (int trial = 0; trial < 60; ++trial) {
    Vector x(2);
    x << std::abs(u(rng)), u(rng);
    const auto sols = brute_force_lcp_all(LcpProblem{J, x});
    for (const auto& a : sols)
      for (const auto& b : sols) CHECK((Jsym * (a.z - b.z)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("least-norm map is Lipschitz in the state") {
  // Example-3.2-style data satisfies the minimum-norm bound; fit the constant
  // on a calibration set and validate on held-out pairs.
  Matrix H = Matrix::Identity(2, 2);
  Matrix J(2, 2);
  J << 0.0, 0.0, 0.0, 1.0;
  const auto inst = orthant_instance(H, J, Vector::Zero(2));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto lam = [&](const Vector& x) {
    const auto r = least_norm_eta(inst, x, 0.0);
    REQUIRE(r.solved());
    return r.eta;
  };
  auto sample_admissible = [&]() {
    Vector x(2);
    x << std::abs(u(rng)) + 0.01, u(rng);
    return x;
  };
  double c_fit = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const Vector xa = sample_admissible(), xb = sample_admissible();
    const double dx = (xa - xb).norm();
    if (dx < 1e-9) continue;
    c_fit = std::max(c_fit, (lam(xa) - lam(xb)).norm() / dx);
  }
  const double c = 1.05 * c_fit + 1e-9;
  for (int trial = 0; trial < 120; ++trial) {
    const Vector xa = sample_admissible(), xb = sample_admissible();
    CHECK((lam(xa) - lam(xb)).norm() <= c * (xa - xb).norm() + 1e-9);
  }
}

TEST_CASE("unsolvable cone CP reports an assumption hint") {
  // J = 0 with an unreachable constraint: v = Hx + h fixed and negative.
  Matrix H = Matrix::Zero(1, 1);
  Matrix J = Matrix::Zero(1, 1);
  Vector h(1);
  h << -1.0;
  const auto inst = orthant_instance(H, J, h);
  const auto res = solve_cone_cp(inst, Vector::Zero(1), 0.0);
  CHECK(!res.solved());
  CHECK(res.note.find("A3") != std::string::npos);
}

TEST_CASE("generator-form cone is converted before reduction") {
  // Cone given only by generators (1,0) and (1,1).
  Matrix V(2, 2);
  V << 1.0, 1.0, 0.0, 1.0;
  ConeCpInstance inst{Matrix::Identity(2, 2), Matrix::Zero(2, 2),
                      MovingSet(PolyhedralCone::from_generators(V), Signal::zero(2))};
  Vector x(2);
  x << 2.0, 1.0;  // inside the wedge
  const auto res = solve_cone_cp(inst, x, 0.0);
  REQUIRE(res.solved());
  CHECK(res.eta.norm() <= 1e-10);
}
