#include <doctest.h>

#include <cmath>
#include <vector>

#include "eitgate/basis.hpp"
#include "eitgate/mscheme.hpp"
#include "param_sets.hpp"
#include "tensor_oracle.hpp"

using namespace eitgate;
using eitgate::testing::fig5_set;

namespace {

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_tensor_oracle(int n_atoms) {
  const auto d = eitgate::testing::m_scheme_oracle(n_atoms);
  CHECK(d.isometry < 1e-14);
  REQUIRE(d.channel_count_ok);
  CHECK(d.hamiltonian < 1e-12);
  CHECK(d.jumps < 1e-12);
  // the restricted space is closed under every channel
  CHECK(d.closure < 1e-12);
}

}  // namespace

TEST_SUITE("mscheme") {

TEST_CASE("diagonal read-off without couplings") {
  MSchemeParams p;
  p.delta2 = 7.45;
  p.eps12 = 0.05;
  const Matrix h = build_hamiltonian(p);
  CHECK(max_abs(h - Matrix(h.diagonal().asDiagonal())) == 0.0);
  CHECK(h(3, 3).real() == doctest::Approx(0.05));
  CHECK(h(2, 2).real() == doctest::Approx(7.45));
}

TEST_CASE("probe sector reproduces the reduced matrix") {
  const auto p = fig5_set();
  const auto r = reduced_hamiltonians(p);
  const double gn = p.g_p * std::sqrt(p.n_atoms);
  Matrix expected(3, 3);
  expected << 0.0, gn, 0.0, gn, p.delta2, p.omega1, 0.0, p.omega1, p.eps12;
  CHECK(max_abs(r.probe - expected) < 1e-15);
  CHECK(r.probe(0, 1).real() == doctest::Approx(2.2));
}

TEST_CASE("bosonic enhancement between (E2,1,0) and (G,2,0)") {
  auto p = fig5_set();
  const Matrix h = build_hamiltonian(p);
  const double expected = p.g_p * std::sqrt(p.n_atoms) * std::sqrt(2.0);
  CHECK(h(13, 14).real() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(h(14, 13).real() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("Hamiltonian is Hermitian and conserves excitation number") {
  const Matrix h = build_hamiltonian(fig5_set());
  CHECK(max_abs(h - h.adjoint()) < 1e-12);
  const Matrix n = excitation_number_operator();
  CHECK(max_abs(h * n - n * h) < 1e-12);
}

TEST_CASE("symmetric-sector oracle, two atoms") { check_tensor_oracle(2); }

TEST_CASE("symmetric-sector oracle, three atoms") { check_tensor_oracle(3); }

TEST_CASE("ground decay of E2 states") {
  MSchemeParams p;
  p.gamma23 = 1.0 / 3.0;
  const auto ch = build_jump_channels(p);
  REQUIRE(ch.size() == 1);
  CHECK(ch[0].kind == ChannelKind::Decay);
  CHECK(ch[0].rate == doctest::Approx(1.0 / 3.0));
  const std::pair<int, int> maps[] = {{2, 0}, {8, 4}, {13, 1}};
  for (auto [from, to] : maps) CHECK(ch[0].op(to, from) == Complex(1.0));
  CHECK(ch[0].op.cwiseAbs().sum() == doctest::Approx(3.0));
}

TEST_CASE("cross decay 4 to 1") {
  MSchemeParams p;
  p.gamma41 = 1.0 / 3.0;
  const auto ch = build_jump_channels(p);
  REQUIRE(ch.size() == 1);
  const std::pair<int, int> maps[] = {{5, 3}, {10, 12}, {16, 9}};
  for (auto [from, to] : maps) CHECK(ch[0].op(to, from) == Complex(1.0));
  CHECK(ch[0].op.cwiseAbs().sum() == doctest::Approx(3.0));
}

TEST_CASE("dephasing projector on level 2") {
  MSchemeParams p;
  p.deph2 = 1e-3;
  const auto ch = build_jump_channels(p);
  REQUIRE(ch.size() == 1);
  CHECK(ch[0].kind == ChannelKind::Dephasing);
  CHECK(ch[0].rate == doctest::Approx(1e-3));
  Matrix expected = Matrix::Zero(18, 18);
  for (int k : {2, 8, 13}) expected(k, k) = 1.0;
  CHECK(max_abs(ch[0].op - expected) == 0.0);
}

TEST_CASE("decays never raise excitation number") {
  const Matrix n = excitation_number_operator();
  for (const auto& ch : build_jump_channels(fig5_set())) {
    for (Eigen::Index c = 0; c < 18; ++c)
      for (Eigen::Index r = 0; r < 18; ++r)
        if (std::abs(ch.op(r, c)) > 0.0) CHECK(n(r, r).real() <= n(c, c).real());
  }
}

TEST_CASE("Liouvillian basic identities") {
  const Matrix zero = Matrix::Zero(18, 18);
  CHECK(max_abs(build_liouvillian(zero, {})) == 0.0);

  RealVector d(4);
  d << 0.3, -1.2, 2.5, 0.0;
  const Matrix hd = d.cast<Complex>().asDiagonal();
  const Matrix l = build_liouvillian(hd, {});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const auto col = i + 4 * j;
      CHECK(std::abs(l(col, col) - (-kI * (d(i) - d(j)))) < 1e-15);
      CHECK(l.col(col).cwiseAbs().sum() ==
            doctest::Approx(std::abs(d(i) - d(j))));
    }
}

TEST_CASE("Liouvillian matches the Kronecker-product form") {
  const auto p = fig5_set();
  const Matrix h = build_hamiltonian(p);
  const auto channels = build_jump_channels(p);
  const Matrix l = build_liouvillian(h, channels);
  const Matrix id = Matrix::Identity(18, 18);
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  Matrix ref = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& ch : channels) {
    const Matrix jdj = ch.op.adjoint() * ch.op;
    ref += ch.rate * (kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, jdj) -
                      0.5 * kron(jdj.transpose(), id));
  }
  CHECK(max_abs(l - ref) < 1e-13);

  // trace of the derivative of I/18 vanishes
  Matrix rho = id / 18.0;
  const Vector v = Eigen::Map<const Vector>(rho.data(), rho.size());
  const Vector dv = l * v;
  Complex tr = 0.0;
  for (int k = 0; k < 18; ++k) tr += dv(k + 18 * k);
  CHECK(std::abs(tr) < 1e-13);
}

TEST_CASE("Liouvillian dimension mismatch") {
  JumpChannel bad{1.0, Matrix::Identity(3, 3), ChannelKind::Decay};
  std::vector<JumpChannel> chs{bad};
  try {
    build_liouvillian(Matrix::Zero(4, 4), chs);
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Dimension);
  }
}

TEST_CASE("reduced blocks at zero coupling") {
  auto p = fig5_set();
  p.g_p = p.g_t = 0.0;
  p.eps34 = 0.03;
  p.delta3 = 14.0;
  p.omega4 = 3.0;
  const auto r = reduced_hamiltonians(p);
  Matrix probe(3, 3);
  probe << 0, 0, 0, 0, p.delta2, p.omega1, 0, p.omega1, p.eps12;
  CHECK(max_abs(r.probe - probe) == 0.0);
  // order (E1,0,1), (E2,0,1), (G,1,1), (E4,1,0), (E5,1,0)
  Matrix both = Matrix::Zero(5, 5);
  both(0, 0) = p.eps12;
  both(1, 1) = p.delta2;
  both(0, 1) = both(1, 0) = p.omega1;
  both(3, 3) = p.delta3;
  both(4, 4) = p.eps34;
  both(3, 4) = both(4, 3) = p.omega4;
  CHECK(max_abs(r.both - both) == 0.0);
}

TEST_CASE("parameter validation") {
  MSchemeParams p;
  p.gamma21 = -1.0;
  CHECK_THROWS_AS(build_hamiltonian(p), Error);
  p = MSchemeParams{};
  p.n_atoms = 0.5;
  CHECK_THROWS_AS(build_jump_channels(p), Error);
  p = MSchemeParams{};
  p.delta2 = std::nan("");
  CHECK_THROWS_AS(p.validate(), Error);
}

}
