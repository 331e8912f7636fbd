#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "eitgate/dynamics.hpp"
#include "eitgate/groupvel.hpp"
#include "eitgate/mscheme.hpp"
#include "param_sets.hpp"

using namespace eitgate;
using eitgate::testing::fig3_set;
using eitgate::testing::fig5_set;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix pure(Eigen::Index n, Eigen::Index k) {
  Matrix rho = Matrix::Zero(n, n);
  rho(k, k) = 1.0;
  return rho;
}

Matrix uniform_input() {
  // (|G00> + |G01> + |G10> + |G11>) / 2
  Vector psi = Vector::Zero(18);
  for (int k : {0, 4, 1, 7}) psi(k) = 0.5;
  return psi * psi.adjoint();
}

IntegratorSettings rk_settings() {
  IntegratorSettings s;
  s.method = IntegrationMethod::AdaptiveRk;
  s.rel_tol = 1e-10;
  s.abs_tol = 1e-13;
  return s;
}

}  // namespace

TEST_SUITE("dynamics") {


TEST_CASE("vec and unvec are column major inverses") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const Vector v = vec(m);
  CHECK(v(1) == Complex(3.0));
  CHECK(v(2) == Complex(2.0));
  CHECK(max_abs(unvec(v, 2) - m) == 0.0);
  CHECK_THROWS_AS(unvec(v, 3), Error);
}

TEST_CASE("zero generator leaves the state unchanged") {
  const Matrix rho = uniform_input();
  const auto times = uniform_grid(2.0, 5);
  for (auto method : {IntegrationMethod::Exponential,
                      IntegrationMethod::AdaptiveRk}) {
    IntegratorSettings s;
    s.method = method;
    const auto r = evolve_master(Matrix::Zero(324, 324), rho, times, s);
    for (const auto& st : r.states) CHECK(max_abs(st - rho) == 0.0);
  }
}

TEST_CASE("unitary probe sector keeps its population") {
  const auto p = fig5_set();
  const Matrix hp = reduced_hamiltonians(p).probe;
  const Matrix l = build_liouvillian(hp, {});
  const auto times = uniform_grid(3.0, 61);
  const auto r = evolve_master(l, pure(3, 0), times);
  double min_ground = 1.0;
  for (const auto& st : r.states) {
    CHECK(std::abs(st.trace().real() - 1.0) < 1e-9);
    min_ground = std::min(min_ground, st(0, 0).real());
  }
  CHECK(min_ground < 0.99);
}

TEST_CASE("two-level decay into the ground") {
  MSchemeParams p;
  p.gamma23 = 1.0 / 3.0;
  const auto ch = build_jump_channels(p);
  const Matrix h = Matrix::Zero(18, 18);
  const Matrix l = build_liouvillian(h, ch);
  const std::vector<double> times{0.0, 0.5, 1.0, 3.0, 7.0};
  for (auto s : {IntegratorSettings{}, rk_settings()}) {
    const auto master = evolve_master(l, pure(18, 2), times, s);
    const auto cond = evolve_nojump(h, ch, pure(18, 2), times, s);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double decay = std::exp(-times[k] / 3.0);
      CHECK(master.states[k](0, 0).real() ==
            doctest::Approx(1.0 - decay).epsilon(1e-9));
      CHECK(master.trace[k] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(cond.trace[k] == doctest::Approx(decay).epsilon(1e-9));
    }
  }
}

TEST_CASE("no jumps without rates") {
  auto p = eitgate::testing::without_decay(fig5_set());
  const Matrix h = build_hamiltonian(p);
  const auto ch = build_jump_channels(p);
  const auto times = uniform_grid(1.0, 11);
  const auto master = evolve_master(build_liouvillian(h, ch), uniform_input(),
                                    times);
  const auto cond = evolve_nojump(h, ch, uniform_input(), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(max_abs(master.states[k] - cond.states[k]) < 1e-12);
    CHECK(cond.trace[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exponential and adaptive engines agree on the transient set") {
  const auto p = fig5_set();
  const Matrix l = build_liouvillian(build_hamiltonian(p),
                                     build_jump_channels(p));
  const auto times = uniform_grid(1.0, 21);
  const auto a = evolve_master(l, uniform_input(), times);
  const auto b = evolve_master(l, uniform_input(), times, rk_settings());
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    worst = std::max(worst, max_abs(a.states[k] - b.states[k]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("full evolution stays a density matrix") {
  const auto p = fig5_set();
  const Matrix h = build_hamiltonian(p);
  const auto ch = build_jump_channels(p);
  const auto times = uniform_grid(2.0, 41);
  const auto r = evolve_master(build_liouvillian(h, ch), uniform_input(),
                               times);
  const auto c = evolve_nojump(h, ch, uniform_input(), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Matrix& rho = r.states[k];
    CHECK(max_abs(rho - rho.adjoint()) < 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    if (k > 0) CHECK(c.trace[k] <= c.trace[k - 1] + 1e-14);
  }
}

TEST_CASE("propagator composition") {
  const auto p = fig5_set();
  const Matrix l = build_liouvillian(build_hamiltonian(p),
                                     build_jump_channels(p));
  const std::vector<double> t1{0.0, 0.3};
  const std::vector<double> t2{0.0, 0.45};
  const std::vector<double> t12{0.0, 0.75};
  const auto mid = evolve_master(l, uniform_input(), t1);
  const auto two = evolve_master(l, mid.states.back(), t2);
  const auto one = evolve_master(l, uniform_input(), t12);
  CHECK(max_abs(two.states.back() - one.states.back()) < 1e-12);
}

TEST_CASE("time grid validation") {
  const Matrix l = Matrix::Zero(4, 4);
  const std::vector<double> bad{0.0, 1.0, 0.5};
  CHECK_THROWS_AS(evolve_master(l, pure(2, 0), bad), Error);
  CHECK_THROWS_AS(evolve_master(l, pure(3, 0), uniform_grid(1.0, 3)), Error);
  CHECK_THROWS_AS(uniform_grid(1.0, 1), Error);
  IntegratorSettings s;
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("adaptive engine reports where it failed") {
  Matrix l = Matrix::Zero(4, 4);
  l(0, 0) = std::nan("");
  const std::vector<double> times{0.0, 1.0};
  try {
    evolve_master(l, pure(2, 0), times, rk_settings());
    FAIL("expected an integrator error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Integrator);
    CHECK(std::string(e.what()).find("t=") != std::string::npos);
  }
}

TEST_CASE("steady state of a single decay on its two-state support") {
  MSchemeParams p;
  p.gamma23 = 1.0 / 3.0;
  const auto ch = build_jump_channels(p);
  const std::vector<std::size_t> support{0, 2};
  const auto restricted = restrict_channels(ch, support);
  const Matrix l = build_liouvillian(Matrix::Zero(2, 2), restricted);
  const Matrix ss = steady_state(l);
  CHECK(std::abs(ss(0, 0) - 1.0) < 1e-12);
  CHECK(max_abs(ss - pure(2, 0)) < 1e-12);
}

TEST_CASE("all decays drain every sector into the empty ground") {
  const auto p = fig5_set();
  const Matrix l = build_liouvillian(build_hamiltonian(p),
                                     build_jump_channels(p));
  CHECK(kernel_dimension(l) == 1);
  const Matrix ss = steady_state(l);
  CHECK(max_abs(ss - pure(18, 0)) < 1e-8);
}

TEST_CASE("full 18-state generator with a single decay is degenerate") {
  MSchemeParams p;
  p.gamma23 = 1.0 / 3.0;
  const Matrix l = build_liouvillian(Matrix::Zero(18, 18),
                                     build_jump_channels(p));
  CHECK(kernel_dimension(l) > 1);
  try {
    steady_state(l);
    FAIL("expected a degenerate steady state");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSteadyState);
    CHECK(std::string(e.what()).find("kernel dimension") != std::string::npos);
  }
}

TEST_CASE("single-atom semiclassical generator has a unique steady state") {
  const auto p = fig3_set();
  const Matrix l = semiclassical_liouvillian(p, VgSettings{}, 0.0);
  CHECK(kernel_dimension(l) == 1);
  const Matrix ss = steady_state(l);
  CHECK(max_abs(l * vec(ss)) <= 1e-10);
  CHECK(std::abs(ss.trace() - 1.0) < 1e-12);
  CHECK(max_abs(ss - ss.adjoint()) < 1e-12);
}

TEST_CASE("reachable subspace") {
  const auto p = fig5_set();
  const Matrix h = build_hamiltonian(p);
  const auto ch = build_jump_channels(p);
  const std::vector<std::size_t> vacuum{0};
  CHECK(reachable_states(h, ch, vacuum) == std::vector<std::size_t>{0});
  const std::vector<std::size_t> probe{1};
  CHECK(reachable_states(h, ch, probe) ==
        std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  const std::vector<std::size_t> both{7};
  CHECK(reachable_states(h, ch, both).size() == 18);
  const auto coherent = eitgate::testing::without_decay(p);
  CHECK(reachable_states(build_hamiltonian(coherent), {}, both) ==
        std::vector<std::size_t>{7, 8, 9, 10, 11});
}

TEST_CASE("without cross decay the first twelve states are closed") {
  auto p = fig5_set();
  p.gamma25 = p.gamma41 = 0.0;
  const Matrix l = build_liouvillian(build_hamiltonian(p),
                                     build_jump_channels(p));
  const auto times = uniform_grid(3.0, 7);
  Vector psi = Vector::Zero(18);
  for (int k : {0, 1, 4, 7, 8, 11}) psi(k) = 1.0 / std::sqrt(6.0);
  const auto r = evolve_master(l, psi * psi.adjoint(), times);
  for (const auto& rho : r.states) {
    double outside = 0.0;
    for (int k = 12; k < 18; ++k) outside += std::abs(rho(k, k));
    CHECK(outside < 1e-12);
  }
}

}
