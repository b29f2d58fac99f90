#include "doctest.h"
#include "support.hpp"

using namespace kpm;
using kpm::test::box;
using kpm::test::dense;

namespace {

double block_diff(const Block4& x, const Block4& y) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(x[i][j] - y[i][j]));
  return d;
}

Block4 scaled_identity(double s) {
  Block4 out{};
  for (int i = 0; i < 4; ++i) out[i][i] = s;
  return out;
}

}  // namespace

TEST_CASE("gamma matrices satisfy the Clifford algebra") {
  const GammaSet g = GammaSet::dirac();
  CHECK(block_diff(g.gamma[0], scaled_identity(1.0)) == 0.0);
  for (int a = 1; a <= 4; ++a) {
    CHECK(block_diff(g.gamma[a], adjoint(g.gamma[a])) == 0.0);
    for (int b = 1; b <= 4; ++b) {
      Block4 anti = g.gamma[a] * g.gamma[b];
      const Block4 ba = g.gamma[b] * g.gamma[a];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) anti[i][j] += ba[i][j];
      CHECK(block_diff(anti, scaled_identity(a == b ? 2.0 : 0.0)) < 1e-15);
    }
  }
}

TEST_CASE("hopping and on-site blocks") {
  const GammaSet g = GammaSet::dirac();
  for (int axis = 0; axis < 3; ++axis) {
    Block4 want{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        want[i][j] = -kHopping * (g.gamma[1][i][j] - Complex(0, 1) * g.gamma[axis + 2][i][j]) / 2.0;
    CHECK(block_diff(hopping_block(axis), want) == 0.0);
  }
  Block4 want{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) want[i][j] = 0.3 * g.gamma[0][i][j] + 2.0 * g.gamma[1][i][j];
  CHECK(block_diff(onsite_block(0.3), want) == 0.0);
  CHECK_THROWS_AS(hopping_block(3), Error);
}

TEST_CASE("generated matrix is exactly Hermitian with the expected stencil") {
  for (const Domain& d : {box(4, 4, 4), box(3, 5, 2), box(4, 3, 5, true), box(1, 1, 1)}) {
    const SparseMatrix h = build_hamiltonian(d);
    CHECK(h.rows() == d.dimension());
    const Eigen::MatrixXcd m = dense(h);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    for (const auto& e : entries(h)) CHECK(e.value != Complex(0.0, 0.0));
  }
}

TEST_CASE("nonzeros per row") {
  // Each neighbour block carries 2 nonzeros per row, the on-site block 1.
  const SparseMatrix periodic = build_hamiltonian(box(4, 4, 4, true));
  CHECK(periodic.nnz() == 13 * periodic.rows());
  const SparseMatrix open = build_hamiltonian(box(4, 4, 6));
  CHECK(static_cast<double>(open.nnz()) / open.rows() == doctest::Approx(13.0 - 4.0 / 6.0));
}

TEST_CASE("hopping blocks sit between lattice neighbours") {
  const Domain d = box(3, 3, 3, true);
  const Eigen::MatrixXcd m = dense(build_hamiltonian(d));
  auto site = [&](int x, int y, int z) { return 4 * (x + d.nx * (y + d.ny * z)); };
  const Block4 tx = hopping_block(0);
  // Block (n + e_x, n) holds T_x.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m(site(2, 1, 0) + i, site(1, 1, 0) + j) == tx[i][j]);
  // Periodic wrap in x.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m(site(0, 1, 1) + i, site(2, 1, 1) + j) == tx[i][j]);
  const Block4 on = onsite_block(0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m(site(1, 2, 0) + i, site(1, 2, 0) + j) == on[i][j]);
}

TEST_CASE("open z has no wrap-around coupling") {
  const Domain d = box(3, 3, 4);
  const Eigen::MatrixXcd m = dense(build_hamiltonian(d));
  const int top = 4 * (d.nx * d.ny * 3), bottom = 0;
  CHECK(m.block(top, bottom, 4, 4).cwiseAbs().maxCoeff() == 0.0);
  const Domain p = box(3, 3, 4, true);
  const Eigen::MatrixXcd mp = dense(build_hamiltonian(p));
  CHECK(mp.block(bottom, top, 4, 4).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("potentials") {
  const PotentialSpec u = PotentialSpec::uniform(0.7);
  CHECK(u.at(3, 1, 2) == 0.7);
  const PotentialSpec s = PotentialSpec::superlattice({4, 4, 3}, -1.5, 2);
  CHECK(s.at(0, 0, 0) == -1.5);
  CHECK(s.at(1, 1, 0) == -1.5);
  CHECK(s.at(2, 0, 0) == 0.0);
  CHECK(s.at(5, 4, 0) == -1.5);
  CHECK(s.at(0, 0, 1) == -1.5);
  CHECK(s.at(0, 0, 2) == 0.0);
  CHECK_THROWS_AS(PotentialSpec::superlattice({0, 1, 1}, 1.0, 1), Error);

  Domain d = box(2, 2, 2);
  d.potential = PotentialSpec::uniform(0.5);
  const Eigen::MatrixXcd shifted = dense(build_hamiltonian(d));
  const Eigen::MatrixXcd plain = dense(build_hamiltonian(box(2, 2, 2)));
  CHECK(((shifted - plain) - 0.5 * Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Gershgorin bounds contain the spectrum") {
  Domain d = box(4, 4, 3);
  d.potential = PotentialSpec::superlattice({2, 2, 3}, 1.2, 1);
  const SparseMatrix h = build_hamiltonian(d);
  const SpectralBounds b = estimate_bounds(h, 0.01);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense(h));
  const Eigen::VectorXd lam = eig.eigenvalues();
  const double eps = 1e-12;
  CHECK(b.a * (lam.maxCoeff() - b.b) <= 1.0 - 0.01 + eps);
  CHECK(b.a * (lam.minCoeff() - b.b) >= -1.0 + 0.01 - eps);

  const SparseMatrix t = apply_shift_scale(h, b);
  const Eigen::MatrixXcd want = b.a * (dense(h) - b.b * Eigen::MatrixXcd::Identity(h.rows(), h.rows()));
  CHECK((dense(t) - want).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(t.nnz() >= h.nnz());
}

TEST_CASE("bounds of a multiple of the identity") {
  const SparseMatrix m = from_entries(3, 3, {{0, 0, 2.0}, {1, 1, 2.0}, {2, 2, 2.0}});
  const SpectralBounds b = estimate_bounds(m, 0.01);
  CHECK(b.b == 2.0);
  CHECK(b.a == doctest::Approx(0.99));
  CHECK_THROWS_AS(estimate_bounds(m, 1.0), Error);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(build_hamiltonian(box(0, 2, 2)), Error);
  try {
    build_hamiltonian(box(1024, 1024, 1024));
    FAIL("expected a sizing error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sizing);
  }
}
