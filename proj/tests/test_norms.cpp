#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "anisons/ledger.hpp"
#include "anisons/random_fields.hpp"

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
}  // namespace

TEST_CASE("anisotropic Sobolev norms on single modes") {
  Grid g(16, 16);
  Field c1 = sample_phys(g, [](double x1, double, double) { return std::cos(x1); });
  CHECK(norm_H(c1, 0, 0) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(norm_H(c1, 1, 0) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  Field c3 = sample_phys(g, [](double, double, double x3) { return std::cos(x3); });
  CHECK(norm_H(c3, 0, 0.5) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // negative horizontal order excludes the xi_h = 0 column: cos(x3) vanishes
  CHECK(norm_H(c3, -0.5, 0) == 0.0);

  // |xi_h| = sqrt(5) mode picks up the right powers
  Field m(g);
  m.at(2, 1, 1) = 1.0;
  m.real = false;
  CHECK(norm_H(m, 0.5, 0.5) == Catch::Approx(std::pow(5.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("gradient identity ties norm_H to derivatives") {
  Grid g(16, 16);
  Field a = random_field(g, 31, {.kmax_h = 5, .kmax_v = 5});
  const double via_deriv = std::sqrt(l2sq(spectral_derivative(a, 0)) +
                                     l2sq(spectral_derivative(a, 1)));
  CHECK(norm_H(a, 1, 0) == Catch::Approx(via_deriv).epsilon(1e-12));
  CHECK(norm_H(a, 0, 1) == Catch::Approx(l2(spectral_derivative(a, 2))).epsilon(1e-12));
}

TEST_CASE("B^{0,1/2} of cos(x3): two-shell closed form") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  const CutoffPair& cut = lad.cutoffs();
  Field a = sample_phys(g, [](double, double, double x3) { return std::cos(x3); });
  const double expect =
      (cut.phi(1.0) + cut.phi(2.0) / std::sqrt(2.0)) / std::sqrt(2.0);
  CHECK(norm_B0half(lad, a) == Catch::Approx(expect).epsilon(1e-12));

  // dyadic homogeneity on the doubled mode
  Field b = sample_phys(g, [](double, double, double x3) { return std::cos(2 * x3); });
  const double expect_b =
      (std::sqrt(2.0) * cut.phi(1.0) + cut.phi(2.0)) / std::sqrt(2.0);
  CHECK(norm_B0half(lad, b) == Catch::Approx(expect_b).epsilon(1e-12));
}

TEST_CASE("mixed L4_h(L2_v) norm separates on product fields") {
  Grid g(16, 16);
  Field a = sample_phys(g, [](double x1, double, double x3) {
    return std::cos(x1) * std::cos(x3);
  });
  const double expect = std::pow(3.0 / 8.0, 0.25) / std::sqrt(2.0);
  CHECK(l4h_l2v(a) == Catch::Approx(expect).epsilon(1e-12));

  DyadicLadder lad(g);
  const CutoffPair& cut = lad.cutoffs();
  const double b4 = (cut.phi(1.0) + cut.phi(2.0) / std::sqrt(2.0)) * expect;
  CHECK(norm_B4_0half(lad, a) == Catch::Approx(b4).epsilon(1e-12));
}

TEST_CASE("B4^{-1/2,1/2} of a single oblique mode: closed form") {
  // e^{i(x1 + 4 x3)}: vertical shells l = 1,2; horizontal content at |xi_h| = 1
  Grid g(32, 32);
  DyadicLadder lad(g);
  const CutoffPair& cut = lad.cutoffs();
  Field a(g);
  a.at(1, 0, 4) = 1.0;
  a.real = false;
  const double phi1 = cut.phi(1.0), phi2 = cut.phi(2.0), chi1 = cut.chi(1.0);
  // l = 1: bracket = sqrt(2^0 (phi(1) phi(2))^2) + chi(1) phi(2)
  // l = 2: every k >= 1 block vanishes; bracket = chi(1/2) phi(1) = phi(1)
  const double expect =
      std::sqrt(2.0) * (phi1 * phi2 + chi1 * phi2) + 2.0 * phi1;
  CHECK(norm_B4_neg(lad, a) == Catch::Approx(expect).epsilon(1e-12));
  // phi(1) + chi(1) = 1 collapses it further
  CHECK(expect == Catch::Approx(std::sqrt(2.0) * phi2 + 2.0 * phi1).margin(1e-13));
}

TEST_CASE("vector norms combine components euclideanly") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  Field a = random_field(g, 8, {.kmax_h = 5, .kmax_v = 5});
  VecField u(g);
  u.c1 = a; u.c2 = a; u.c3 = a;
  CHECK(norm_B0half(lad, u) ==
        Catch::Approx(std::sqrt(3.0) * norm_B0half(lad, a)).epsilon(1e-12));
  HField h(g);
  h.c1 = a; h.c2 = a;
  CHECK(norm_B4_0half(lad, h) ==
        Catch::Approx(std::sqrt(2.0) * norm_B4_0half(lad, a)).epsilon(1e-12));
}

TEST_CASE("Chemin-Lerner accumulators against analytic time integrals") {
  // a(t) = (1+t) e^{i x3}: one vertical mode across shells l = -1, 0
  Grid g(16, 16);
  DyadicLadder lad(g);
  const CutoffPair& cut = lad.cutoffs();
  Field base(g);
  base.at(0, 0, 1) = 1.0;
  base.real = false;
  const double shell_weight = cut.phi(1.0) + cut.phi(2.0) / std::sqrt(2.0);

  ClAccumulator l2t(lad, 2.0);
  ClAccumulator l1t(lad, 1.0);
  ClAccumulator linf(lad, std::numeric_limits<double>::infinity());
  WeightedAccumulator wacc(lad);
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    Field at = (1.0 + t) * base;
    auto shells = shells_B0half(lad, at);
    l2t.sample(t, shells);
    l1t.sample(t, shells);
    linf.sample(t, shells);
    wacc.sample(t, t, shells);  // weight f(t) = t
  }
  // int_0^1 (1+t)^2 = 7/3, int_0^1 (1+t) = 3/2, sup = 2, int t(1+t)^2 = 17/12
  CHECK(l2t.value() == Catch::Approx(shell_weight * std::sqrt(7.0 / 3.0)).epsilon(1e-5));
  CHECK(l1t.value() == Catch::Approx(shell_weight * 1.5).epsilon(1e-5));
  CHECK(linf.value() == Catch::Approx(shell_weight * 2.0).epsilon(1e-12));
  CHECK(wacc.value() == Catch::Approx(shell_weight * std::sqrt(17.0 / 12.0)).epsilon(1e-5));
  CHECK(wacc.weight_integral() == Catch::Approx(0.5).epsilon(1e-12));

  // time must be monotone
  ClAccumulator bad(lad, 2.0);
  bad.sample(1.0, shells_B0half(lad, base));
  CHECK_THROWS_AS(bad.sample(0.5, shells_B0half(lad, base)), ConfigError);
}

TEST_CASE("ledger CSV: schema header, stable order, byte determinism") {
  Grid g(16, 16);
  CutoffPair cut;
  auto make = [&] {
    NormLedger led(g, cut, "cfgdeadbeef");
    led.add_column("energy");
    led.add_column("b0half:v");
    for (int i = 0; i < 3; ++i) {
      led.start_row(0.1 * i);
      led.put("energy", 1.0 / (1 + i));
      led.put("b0half:v", 0.25 * i);
      led.flush_row();
    }
    std::ostringstream os;
    led.to_csv(os);
    return os.str();
  };
  const std::string csv1 = make(), csv2 = make();
  CHECK(csv1 == csv2);
  CHECK(csv1.starts_with("#schema=ledger-v1;grid=16x16x16;"));
  CHECK(csv1.find("cutoff=" + cut.hash_string()) != std::string::npos);
  CHECK(csv1.find("config=cfgdeadbeef") != std::string::npos);
  CHECK(csv1.find("t,energy,b0half:v\n") != std::string::npos);

  NormLedger led(g, cut);
  led.add_column("x");
  CHECK_THROWS_AS(led.column_index("y"), ConfigError);
}
