#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "mirrorcorr/errors.hpp"
#include "mirrorcorr/oracle.hpp"
#include "mirrorcorr/perturb.hpp"

using namespace mirrorcorr;
using namespace mirrorcorr::oracle;

namespace {

const PhysicalParams kUnit = PhysicalParams::natural(1.0, 1.0, std::numbers::pi);

Eigen::MatrixXd lowering(int cap) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cap + 1, cap + 1);
  for (int n = 1; n <= cap; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

double max_asymmetry(const SparseMatrix& H) {
  const Eigen::MatrixXd d(H);
  return (d - d.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("basis enumeration") {
  const FockBasis basis(TruncationSpec{2, 2, 5, 5, 5});
  CHECK(basis.dimension() == 252);  // C(10, 5)
  CHECK(basis.vacuum_index() == 0);
  CHECK(basis.occupation(0) == Occupation(5, 0));
  for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
    const Occupation& o = basis.occupation(i);
    int total = 0;
    for (int n : o) {
      CHECK(n >= 0);
      total += n;
    }
    CHECK(total <= 5);
    CHECK(basis.find(o) == i);
    if (i > 0) CHECK(basis.occupation(i - 1) < o);
  }
  const auto s = basis.state(basis.find({1, 0, 2, 1, 0}).value());
  CHECK(s.n_wall == 1);
  CHECK(s.occ_left == std::vector<int>{0, 2});
  CHECK(s.occ_right == std::vector<int>{1, 0});
  CHECK(!basis.find({3, 3, 0, 0, 0}));
  CHECK(basis.slot(Cavity::right, 1) == 3);
  CHECK_THROWS_AS(basis.slot(Cavity::left, 3), DomainError);
  CHECK_THROWS_AS(FockBasis(TruncationSpec{0, 0, 5, 5, 5}), DomainError);
  CHECK_THROWS_AS(FockBasis(TruncationSpec{2, 2, 0, 5, 5}), DomainError);
  // Per-mode and wall caps apply below the total cap.
  const FockBasis capped(TruncationSpec{1, 1, 1, 2, 4});
  for (Eigen::Index i = 0; i < capped.dimension(); ++i) {
    CHECK(capped.occupation(i)[0] <= 1);
    CHECK(capped.occupation(i)[1] <= 2);
  }
}

TEST_CASE("free theory") {
  const ModeSet modes(kUnit, 2);
  const FockBasis basis(TruncationSpec{2, 2, 5, 5, 5});
  const auto H = build_hamiltonian(basis, modes, CouplingModel{kUnit, 0.0});
  const Eigen::MatrixXd d(H);
  CHECK(d.isDiagonal());
  const auto gs = ground_state(H, 1e-12);
  CHECK(gs.energy == 0.0);
  CHECK(gs.vector[0] == 1.0);
  CHECK(gs.vector.tail(gs.vector.size() - 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(vacuum_deficit(gs.vector, basis) == 0.0);
  CHECK(measure_correlation(gs.vector, 1.0, 4.0, basis, modes, kUnit).value == 0.0);
}

TEST_CASE("single cavity block against Kronecker-product operators") {
  const ModeSet modes(kUnit, 2, 3.0);
  const CouplingModel model{kUnit, 0.7};
  const FockBasis basis(TruncationSpec{2, 0, 3, 3, 3});
  const SparseMatrix H = build_hamiltonian(basis, modes, model);

  const int cap = 3;
  const Eigen::MatrixXd a = lowering(cap);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(cap + 1, cap + 1);
  const Eigen::MatrixXd b = Eigen::kroneckerProduct(a, Eigen::kroneckerProduct(id, id)).eval();
  const std::array<Eigen::MatrixXd, 2> am{Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(a, id)).eval(),
                                           Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(id, a)).eval()};
  Eigen::MatrixXd full = kUnit.hbar * kUnit.omega0 * b.transpose() * b;
  Eigen::MatrixXd bilinear = Eigen::MatrixXd::Zero(b.rows(), b.cols());
  for (int j = 0; j < 2; ++j) {
    full += kUnit.hbar * modes.omega(j + 1) * am[j].transpose() * am[j];
    for (int k = 0; k < 2; ++k) {
      const double ckj = coupling(Cavity::left, k + 1, j + 1, modes, model);
      bilinear += ckj * (am[j] * am[k] + am[j].transpose() * am[k] + am[k].transpose() * am[j] +
                         am[j].transpose() * am[k].transpose());
    }
  }
  full -= (b + b.transpose()) * bilinear;

  REQUIRE(basis.dimension() == 20);
  for (Eigen::Index r = 0; r < basis.dimension(); ++r) {
    for (Eigen::Index c = 0; c < basis.dimension(); ++c) {
      const auto& orow = basis.occupation(r);
      const auto& ocol = basis.occupation(c);
      const int ir = orow[0] * 16 + orow[1] * 4 + orow[2];
      const int ic = ocol[0] * 16 + ocol[1] * 4 + ocol[2];
      CHECK(std::abs(H.coeff(r, c) - full(ir, ic)) <= 1e-14);
    }
  }
}

TEST_CASE("exact symmetry") {
  for (int q : {3, 5}) {
    const ModeSet modes(kUnit, 3, 5.0);
    const FockBasis basis(TruncationSpec{3, 2, q, q, q});
    const auto H = build_hamiltonian(basis, modes, CouplingModel{kUnit, 0.3});
    CHECK(max_asymmetry(H) == 0.0);
  }
}

TEST_CASE("three-state block has the closed-form ground energy") {
  const ModeSet modes(kUnit, 1);
  const CouplingModel model{kUnit, 0.8};
  const FockBasis basis(TruncationSpec{1, 1, 1, 2, 3});
  const auto H = build_hamiltonian(basis, modes, model);
  const Eigen::Index vac = basis.vacuum_index();
  const Eigen::Index left = basis.find({1, 2, 0}).value();
  const Eigen::Index right = basis.find({1, 0, 2}).value();

  const double b1 = -std::numbers::sqrt2 * coupling(Cavity::left, 1, 1, modes, model);
  const double b2 = -std::numbers::sqrt2 * coupling(Cavity::right, 1, 1, modes, model);
  const double diag = kUnit.hbar * (kUnit.omega0 + 2 * modes.omega(1));
  CHECK(H.coeff(left, vac) == doctest::Approx(b1).epsilon(1e-15));
  CHECK(H.coeff(right, vac) == doctest::Approx(b2).epsilon(1e-15));
  CHECK(H.coeff(left, left) == diag);
  CHECK(H.coeff(right, right) == diag);
  CHECK(H.coeff(left, right) == 0.0);

  std::vector<Eigen::Triplet<double>> t{{0, 1, b1}, {1, 0, b1}, {0, 2, b2}, {2, 0, b2}, {1, 1, diag}, {2, 2, diag}};
  SparseMatrix block(3, 3);
  block.setFromTriplets(t.begin(), t.end());
  const double exact = diag / 2 - std::sqrt(diag * diag / 4 + b1 * b1 + b2 * b2);
  for (EigenMethod m : {EigenMethod::dense, EigenMethod::lanczos}) {
    const auto gs = ground_state(block, 1e-12, m);
    CHECK(std::abs(gs.energy - exact) <= 1e-12);
    CHECK(gs.vector[0] > 0.0);
    CHECK(gs.vector.norm() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("ground state of the coupled system") {
  const ModeSet modes(kUnit, 3);
  const CouplingModel model{kUnit, 0.05};
  const FockBasis basis(TruncationSpec{3, 3, 5, 5, 5});
  REQUIRE(basis.dimension() == 792);
  const auto H = build_hamiltonian(basis, modes, model);
  const double tol = 1e-10;
  const auto iterative = ground_state(H, tol);
  const auto dense = ground_state(H, tol, EigenMethod::dense);
  CHECK(iterative.energy <= 0.0);
  CHECK(iterative.residual <= tol);
  CHECK((H * iterative.vector - iterative.energy * iterative.vector).norm() <= tol);
  CHECK(std::abs(iterative.energy - dense.energy) <= 1e-12);
  CHECK((iterative.vector - dense.vector).norm() <= 1e-8);
  CHECK(iterative.vector[basis.vacuum_index()] > 0.0);
  CHECK(iterative.iterations > 0);

  // Second-order energy: -sum |<n|V|0>|^2 / E_n.
  const PerturbativeState state(modes, model);
  double e2 = 0.0;
  for (Cavity c : {Cavity::left, Cavity::right})
    for (int j = 1; j <= 3; ++j)
      for (int k = j; k <= 3; ++k) {
        const double amp = first_order_amplitude(c, j, k, state);
        e2 -= amp * amp * kUnit.hbar * (kUnit.omega0 + modes.omega(j) + modes.omega(k));
      }
  CHECK(std::abs(dense.energy - e2) <= 1e-2 * std::abs(e2));
}

TEST_CASE("ground state arguments") {
  SparseMatrix rect(2, 3);
  CHECK_THROWS_AS(ground_state(rect, 1e-10), DomainError);
  SparseMatrix sq(2, 2);
  sq.insert(0, 0) = 1.0;
  CHECK_THROWS_AS(ground_state(sq, 0.0), DomainError);
}

TEST_CASE("budget overflow reports the dimension") {
  const ModeSet modes(kUnit, 2);
  const FockBasis basis(TruncationSpec{2, 2, 5, 5, 5});
  try {
    build_hamiltonian(basis, modes, CouplingModel{kUnit}, 100);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("252") != std::string::npos);
  }
  const ModeSet one(kUnit, 1);
  CHECK_THROWS_AS(build_hamiltonian(basis, one, CouplingModel{kUnit}), DomainError);
}

TEST_CASE("field correlator vanishes in the exact ground state") {
  const ModeSet modes(kUnit, 2);
  const FockBasis basis(TruncationSpec{2, 2, 5, 5, 5});
  const auto H = build_hamiltonian(basis, modes, CouplingModel{kUnit, 0.1});
  const double tol = 1e-11;
  const auto gs = ground_state(H, tol);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.01, kUnit.L0 - 0.01);
  for (int i = 0; i < 10; ++i) {
    const double x1 = pos(rng);
    const double x2 = kUnit.L0 + pos(rng);
    CHECK(std::abs(measure_field_correlation(gs.vector, x1, x2, basis, modes, kUnit).value) <= tol);
  }
}

TEST_CASE("basis growth changes observables below the perturbative residual") {
  const ModeSet modes(kUnit, 2);
  const CouplingModel model{kUnit, 0.02};
  const double x1 = position_at_distance(0.7, Cavity::left, kUnit);
  const double x2 = position_at_distance(1.1, Cavity::right, kUnit);
  auto correlation = [&](int q) {
    const FockBasis basis(TruncationSpec{2, 2, q, q, q});
    const auto gs = ground_state(build_hamiltonian(basis, modes, model), 1e-12);
    return measure_correlation(gs.vector, x1, x2, basis, modes, kUnit);
  };
  const auto c5 = correlation(5);
  const auto c6 = correlation(6);
  const double perturbative = squared_field_correlation_discrete(x1, x2, PerturbativeState(modes, model)).value;
  CHECK(c5.method == CorrelationMethod::exact_diag);
  CHECK(std::abs(c6.value - c5.value) < std::abs(c5.value - perturbative));
}

TEST_CASE("measurements check dimensions") {
  const ModeSet modes(kUnit, 2);
  const FockBasis basis(TruncationSpec{2, 2, 5, 5, 5});
  const Eigen::VectorXd wrong = Eigen::VectorXd::Zero(10);
  CHECK_THROWS_AS(measure_correlation(wrong, 1.0, 4.0, basis, modes, kUnit), DomainError);
  CHECK_THROWS_AS(measure_field_correlation(wrong, 1.0, 4.0, basis, modes, kUnit), DomainError);
  CHECK_THROWS_AS(vacuum_deficit(wrong, basis), DomainError);
  CHECK_THROWS_AS(measure_pair_amplitude(wrong, Cavity::left, 1, 2, basis), DomainError);
}

TEST_CASE("coordinate dump round-trips") {
  const ModeSet modes(kUnit, 2);
  const FockBasis basis(TruncationSpec{2, 1, 3, 3, 3});
  const auto H = build_hamiltonian(basis, modes, CouplingModel{kUnit, 0.4});
  std::ostringstream out;
  write_matrix_coordinates(out, H);
  std::istringstream in(out.str());
  std::string hash;
  Eigen::Index dim = 0, nnz = 0;
  in >> hash >> dim >> nnz;
  CHECK(hash == "#");
  CHECK(dim == H.rows());
  CHECK(nnz == H.nonZeros());
  Eigen::MatrixXd back = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index r, c;
  double v;
  Eigen::Index lines = 0;
  while (in >> r >> c >> v) {
    back(r, c) = v;
    ++lines;
  }
  CHECK(lines == nnz);
  CHECK((back - Eigen::MatrixXd(H)).cwiseAbs().maxCoeff() == 0.0);
}
