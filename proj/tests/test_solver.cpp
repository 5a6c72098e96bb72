#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "anisons/random_fields.hpp"
#include "anisons/solver.hpp"

using namespace anisons;

namespace {
template <class F>
Field sample_phys(const Grid& g, F&& f) {
  AlignedVector<cplx> phys(g.size());
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3)
        phys[g.idx(i1, i2, i3)] = f(g.dx_h() * i1, g.dx_h() * i2, g.dx_v() * i3);
  return Field::from_physical(g, phys);
}

double max_coeff_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// x3-modulated Taylor-Green columns; every layer is a steady-direction 2-D
// flow whose nonlinearity is a pure gradient
HField taylor_green_layers(const Grid& g, double base, double mod) {
  HField u(g);
  u.c1 = sample_phys(g, [&](double x1, double x2, double x3) {
    return (base + mod * std::cos(x3)) * std::cos(x1) * std::sin(x2);
  });
  u.c2 = sample_phys(g, [&](double x1, double x2, double x3) {
    return -(base + mod * std::cos(x3)) * std::sin(x1) * std::cos(x2);
  });
  return u;
}
}  // namespace

TEST_CASE("zero velocity stays zero") {
  Grid g(16, 16);
  AnsStepper s(VecField(g), {.dt = 1e-2});
  s.run(0.1);
  CHECK(l2(s.state()) == 0.0);
  CHECK(s.dissipation_integral()[0] == 0.0);

  LayeredStepper l(HField(g), {.dt = 1e-2});
  l.run(0.1);
  CHECK(l2(l.state()) == 0.0);
}

TEST_CASE("Taylor-Green columns decay exactly through the nonlinear solver") {
  // x3-independent (cos x1 sin x2, -sin x1 cos x2, 0): the advection term is a
  // gradient, so the solution is the heat decay e^{-2t} of the initial modes
  Grid g(16, 8);
  HField tg = taylor_green_layers(g, 1.0, 0.0);
  VecField u0(g);
  u0.c1 = tg.c1;
  u0.c2 = tg.c2;
  AnsStepper s(u0, {.dt = 1e-3});
  s.run(0.5);
  const double expect = std::exp(-4.0 * 0.5) * l2sq(u0);
  CHECK(l2sq(s.state()) == Catch::Approx(expect).epsilon(1e-6));
  CHECK(max_coeff_diff(s.state().c1, std::exp(-2.0 * 0.5) * u0.c1) < 1e-10);
  CHECK(divergence_l2(s.state()) < 1e-11);
}

TEST_CASE("passive vertical component rides the horizontal heat flow") {
  // u = (0, 0, g(x_h)) is divergence-free and self-advection vanishes; the
  // third component must follow the horizontal heat semigroup
  Grid g(16, 8);
  VecField u0(g);
  u0.c3 = sample_phys(g, [](double x1, double x2, double) {
    return std::sin(x1) + 0.5 * std::cos(2.0 * x2) + 0.25 * std::sin(x1 + 3.0 * x2);
  });
  AnsStepper s(u0, {.dt = 1e-3});
  s.run(0.25);
  Field expect = horizontal_heat(u0.c3, 0.25);
  CHECK(max_coeff_diff(s.state().c3, expect) < 1e-8);
  CHECK(l2(s.state().c1) < 1e-14);
}

TEST_CASE("energy balance drift shrinks at the scheme's order") {
  Grid g(16, 16);
  VecField u0 = random_divfree(g, 314, {.kmax_h = 4, .kmax_v = 4, .target_l2 = 4.0});
  auto drift = [&](double dt) {
    AnsStepper s(u0, {.dt = dt});
    s.run(0.1);
    const double e0 = l2sq(u0);
    return std::abs(l2sq(s.state()) + s.dissipation_integral()[0] - e0) / e0;
  };
  const double d1 = drift(5e-3);
  const double d2 = drift(2.5e-3);
  CHECK(d1 < 1e-6);
  REQUIRE(d1 > 1e-13);  // meaningful ratio requires the drift above roundoff
  CHECK(d1 / d2 > 8.0);
}

TEST_CASE("state band admission: aliases must stay inside the masked zone") {
  // on n = 16 the mask keeps |k| <= 5, so products of state modes |k| <= m
  // alias onto |k| >= 16 - 2m; m = 5 is sound, m = 6 is not
  Grid g(16, 16);
  VecField ok(g);
  ok.c2.at(5, 0, 0) = cplx(0.0, -0.5);
  ok.c2.at(g.nh - 5, 0, 0) = cplx(0.0, 0.5);
  CHECK_NOTHROW(AnsStepper(ok, {.dt = 1e-3}));
  VecField bad(g);
  bad.c2.at(6, 0, 0) = cplx(0.0, -0.5);
  bad.c2.at(g.nh - 6, 0, 0) = cplx(0.0, 0.5);
  CHECK_THROWS_AS(AnsStepper(bad, {.dt = 1e-3}), ConfigError);
}

TEST_CASE("advective CFL violation aborts with diagnostics") {
  Grid g(16, 16);
  VecField u0 = random_divfree(g, 99, {.kmax_h = 3, .kmax_v = 3, .target_l2 = 50.0});
  AnsStepper s(u0, {.dt = 0.05});
  CHECK_THROWS_AS(s.step(), SolverAbort);
  try {
    AnsStepper(u0, {.dt = 0.05}).step();
  } catch (const SolverAbort& e) {
    CHECK(std::string(e.what()).find("max |u|") != std::string::npos);
  }
}

TEST_CASE("layered solve: per-layer Taylor-Green envelopes") {
  Grid g(16, 12);
  HField u0 = taylor_green_layers(g, 1.0, 0.5);
  LayeredStepper s(u0, {.dt = 1e-2});
  std::vector<double> e0 = layer_energy(u0);
  s.run(1.0);
  std::vector<double> eT = layer_energy(s.state());
  for (int i3 = 0; i3 < g.nv; ++i3) {
    const double a = 1.0 + 0.5 * std::cos(g.dx_v() * i3);
    CHECK(e0[i3] == Catch::Approx(a * a / 2.0).epsilon(1e-12));
    CHECK(eT[i3] == Catch::Approx(a * a / 2.0 * std::exp(-4.0)).epsilon(1e-6));
  }
}

TEST_CASE("layered solve: per-layer energy identity on genuinely 2-D turbulence") {
  Grid g(16, 8);
  Field psi = random_field(g, 7, {.kmax_h = 4, .kmax_v = 2, .target_l2 = 1.5});
  HField u0(g);
  u0.c1 = -1.0 * spectral_derivative(psi, 1);
  u0.c2 = spectral_derivative(psi, 0);
  LayeredStepper s(u0, {.dt = 2e-3});
  std::vector<double> e0 = layer_energy(u0);
  s.run(1.0);
  std::vector<double> eT = layer_energy(s.state());
  const std::vector<double>& d = s.dissipation_integral();
  for (int i3 = 0; i3 < g.nv; ++i3) {
    CAPTURE(i3);
    CHECK(std::abs(eT[i3] + d[i3] - e0[i3]) < 1e-7 * std::max(e0[i3], 1e-30));
  }
}

TEST_CASE("identical runs produce identical bits") {
  Grid g(16, 8);
  VecField u0 = random_divfree(g, 2024, {.kmax_h = 4, .kmax_v = 2, .target_l2 = 2.0});
  auto run = [&] {
    AnsStepper s(u0, {.dt = 2e-3});
    s.run(0.05);
    return s.state();
  };
  VecField a = run(), b = run();
  for (int c = 0; c < 3; ++c)
    CHECK(std::memcmp(a[c].data(), b[c].data(), sizeof(cplx) * a[c].size()) == 0);
}

TEST_CASE("horizon off the step lattice is rejected") {
  Grid g(16, 8);
  AnsStepper s(VecField(g), {.dt = 1e-3});
  CHECK_THROWS_AS(s.run(0.0105), ConfigError);
}
