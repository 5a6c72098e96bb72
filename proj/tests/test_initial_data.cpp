#include <catch2/catch_amalgamated.hpp>

#include "anisons/initial_data.hpp"
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

double max_coeff_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Field div_h(const HField& u) {
  Field d = spectral_derivative(u.c1, 0);
  d += spectral_derivative(u.c2, 1);
  return d;
}

Field curl_h(const HField& u) {
  Field d = spectral_derivative(u.c2, 0);
  d -= spectral_derivative(u.c1, 1);
  return d;
}
}  // namespace

TEST_CASE("Biot-Savart split: pure rotational and pure gradient inputs") {
  Grid g(16, 16);
  Field psi = random_field(g, 5, {.kmax_h = 4, .kmax_v = 3});
  HField rot(g);
  rot.c1 = -1.0 * spectral_derivative(psi, 1);
  rot.c2 = spectral_derivative(psi, 0);
  auto r = biot_savart_split(rot);
  CHECK(l2(r.div) < 1e-13 * l2(rot));
  CHECK(max_coeff_diff(r.curl.c1, rot.c1) < 1e-13);

  HField grad(g);
  grad.c1 = spectral_derivative(psi, 0);
  grad.c2 = spectral_derivative(psi, 1);
  auto s = biot_savart_split(grad);
  CHECK(l2(s.curl) < 1e-13 * l2(grad));
}

TEST_CASE("Biot-Savart split: reconstruction, constraints, idempotence") {
  Grid g(16, 16);
  HField u(g);
  u.c1 = random_field(g, 11, {.kmax_h = 5, .kmax_v = 4});
  u.c2 = random_field(g, 12, {.kmax_h = 5, .kmax_v = 4});
  auto r = biot_savart_split(u);
  HField recon = r.curl;
  recon.c1 += r.div.c1;
  recon.c2 += r.div.c2;
  CHECK(max_coeff_diff(recon.c1, u.c1) < 1e-12 * l2(u));
  CHECK(max_coeff_diff(recon.c2, u.c2) < 1e-12 * l2(u));
  CHECK(l2(div_h(r.curl)) < 1e-12 * l2(u));
  CHECK(l2(curl_h(r.div)) < 1e-12 * l2(u));

  // splitting the curl part again moves nothing beyond rounding
  auto rr = biot_savart_split(r.curl);
  CHECK(l2(rr.div) < 1e-14 * l2(r.curl));
  CHECK(max_coeff_diff(rr.curl.c1, r.curl.c1) < 1e-14);

  // the xi_h = 0 column is a curl by convention
  HField col(g);
  col.c1 = sample_phys(g, [](double, double, double x3) { return std::cos(x3); });
  auto rc = biot_savart_split(col);
  CHECK(l2(rc.div) == 0.0);
  CHECK(max_coeff_diff(rc.curl.c1, col.c1) == 0.0);
}

TEST_CASE("oscillatory data matches its physical-space formula") {
  Grid g(32, 32);
  const int m = 4;
  VecField u = oscillatory_data(g, m);
  VecField ref(g);
  ref.c2 = sample_phys(g, [&](double x1, double x2, double x3) {
    return std::sin(m * x1) * std::cos(x2) * std::sin(x3);
  });
  ref.c3 = sample_phys(g, [&](double x1, double x2, double x3) {
    return -std::sin(m * x1) * std::sin(x2) * std::cos(x3);
  });
  CHECK(l2(u.c1) == 0.0);
  CHECK(max_coeff_diff(u.c2, ref.c2) < 1e-14);
  CHECK(max_coeff_diff(u.c3, ref.c3) < 1e-14);
  CHECK(divergence_l2(u) < 1e-12 * l2(u));

  // oscillation frequency beyond the band is rejected
  Grid small(16, 16);
  CHECK_THROWS_AS(oscillatory_data(small, 8), ConfigError);
}

TEST_CASE("oscillatory data shrinks in B4^{-1/2,1/2} like sqrt(eps)") {
  Grid g(32, 32);
  DyadicLadder lad(g);
  const double n4 = norm_B4_neg(lad, oscillatory_data(g, 4));
  const double n8 = norm_B4_neg(lad, oscillatory_data(g, 8));
  CHECK(n8 / n4 == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(0.15));
}

TEST_CASE("vertical stretching is exact reinterpretation of coefficients") {
  Grid ref(16, 16);
  const int m = 4;
  Grid tall = stretched_grid(ref, m);
  CHECK(tall.Lv == Catch::Approx(two_pi * m));
  Field prof = sample_phys(ref, [](double x1, double, double y3) {
    return std::cos(x1) * std::sin(y3);
  });
  Field st = stretch_vertical(prof, tall);
  Field direct = sample_phys(tall, [&](double x1, double, double x3) {
    return std::cos(x1) * std::sin(x3 / m);
  });
  CHECK(max_coeff_diff(st, direct) < 1e-14);
}

TEST_CASE("slowly varying family: structure, solenoidality, degenerate cases") {
  Grid ref(16, 16);
  const int m = 4;
  const double delta = 0.2;
  Grid tall = stretched_grid(ref, m);

  // v profile: horizontal stream function with vertical modulation
  Field psi = sample_phys(ref, [](double x1, double, double y3) {
    return std::sin(x1) * std::cos(y3);
  });
  HField v0h(ref);
  v0h.c1 = -1.0 * spectral_derivative(psi, 1);
  v0h.c2 = spectral_derivative(psi, 0);
  VecField w0 = random_divfree(ref, 42, {.kmax_h = 3, .kmax_v = 3});

  VecField u = slow_data(tall, m, delta, v0h, w0);
  CHECK(divergence_l2(u) < 1e-12 * l2(u));
  const double amp = std::pow(std::log(double(m)), delta);
  CHECK(l2(u.c3) == Catch::Approx(amp * l2(w0.c3)).epsilon(1e-12));

  // zero w profile collapses to the stretched horizontal flow
  VecField u2 = slow_data(tall, m, delta, v0h, VecField(ref));
  CHECK(max_coeff_diff(u2.c1, stretch_vertical(v0h.c1, tall)) == 0.0);
  CHECK(l2(u2.c3) == 0.0);

  CHECK_THROWS_AS(slow_data(tall, m, 0.3, v0h, w0), ConfigError);   // delta out of range
  CHECK_THROWS_AS(slow_data(tall, 1, delta, v0h, w0), ConfigError); // eps = 1 not slow
  HField bad(ref);
  bad.c1 = psi;  // generic scalar is not div_h-free
  CHECK_THROWS_AS(slow_data(tall, m, delta, bad, w0), ConfigError);
}

TEST_CASE("combined family: solenoidality and the eps^{+-1/2} amplitudes") {
  Grid ref(32, 16);
  const int m = 4;
  const double delta = 0.2;
  Grid tall = stretched_grid(ref, m);
  Field psi = sample_phys(ref, [](double x1, double x2, double) {
    return std::cos(x1) * std::cos(x2);
  });
  HField v0h(ref);
  v0h.c1 = -1.0 * spectral_derivative(psi, 1);
  v0h.c2 = spectral_derivative(psi, 0);
  Field phi = sample_phys(ref, [](double, double x2, double y3) {
    return std::cos(x2) * std::cos(y3);
  });

  VecField u = combined_data(tall, m, delta, v0h, phi);
  CHECK(divergence_l2(u) < 1e-11 * l2(u));
  // u3 = amp eps^{-1/2} sin(m x1) (-sin x2) cos(eps x3): product of three unit modes
  const double amp = std::pow(std::log(double(m)), delta);
  CHECK(l2(u.c3) ==
        Catch::Approx(amp * std::sqrt(double(m)) * std::pow(2.0, -1.5)).epsilon(1e-12));
  CHECK(max_coeff_diff(u.c1, stretch_vertical(v0h.c1, tall)) == 0.0);
}

TEST_CASE("vertical frequency cut keeps the extremes and kills the middle") {
  Grid g(16, 16);
  Field a = random_field(g, 9, {.kmax_h = 6, .kmax_v = 8, .vertical_mean = true});
  const int N = 4;
  Field cut = freq_cut_N(a, N);
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const double x3 = std::abs(g.k3(i3));
        const cplx want = (x3 <= 1.0 / N || x3 >= double(N)) ? a.at(i1, i2, i3) : cplx(0.0);
        if (cut.at(i1, i2, i3) != want) {
          CAPTURE(i1, i2, i3);
          FAIL("cut deviates from the indicator");
        }
      }
  SUCCEED("indicator verified on every mode");

  // boundary mode |xi3| = N is retained
  Field b(g);
  b.at(1, 0, N) = 1.0;
  b.real = false;
  CHECK(max_coeff_diff(freq_cut_N(b, N), b) == 0.0);
  CHECK_THROWS_AS(freq_cut_N(b, 1), ConfigError);
}

TEST_CASE("growth gauge: hand values and overflow reporting") {
  auto z = functional_A_N(0.0, 0.0, 4, 1.0);
  CHECK(z.value == 0.0);
  CHECK_FALSE(z.overflow);

  // sqrt(4) * 1 * e^1 = 2e
  auto a = functional_A_N(1.0, 0.0, 4, 1.0);
  CHECK(a.value == Catch::Approx(5.43656365691809).epsilon(1e-12));
  CHECK_FALSE(a.overflow);

  // cut term absent: exp(100) stays in range
  auto big = functional_A_N(10.0, 0.0, 4, 1.0);
  CHECK_FALSE(big.overflow);
  CHECK(std::isfinite(big.value));

  // cut term present: exp(16 exp(100)) overflows and must be flagged
  auto ov = functional_A_N(10.0, 1.0, 4, 1.0);
  CHECK(ov.overflow);
  CHECK(std::isinf(ov.value));

  CHECK_THROWS_AS(functional_A_N(1.0, 1.0, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(functional_A_N(-1.0, 0.0, 4, 1.0), ConfigError);
}

TEST_CASE("smallness report: degenerate and structural cases") {
  Grid g(16, 16);
  DyadicLadder lad(g);

  SECTION("x3-independent data has zero base and passing verdicts") {
    Field psi = sample_phys(g, [](double x1, double x2, double) {
      return std::sin(x1) * std::cos(x2);
    });
    VecField u(g);
    u.c1 = -1.0 * spectral_derivative(psi, 1);
    u.c2 = spectral_derivative(psi, 0);
    auto rep = smallness_report(lad, u, {.eps0 = 1e-10});
    CHECK(rep.base_b0half == 0.0);
    CHECK(rep.lhs_gauge_b4.value == 0.0);
    CHECK(rep.lhs_energy_b.value == 0.0);
    CHECK(rep.lhs_gauge_b4.verdict);
  }

  SECTION("zero constants collapse every envelope to the bare norm") {
    VecField u = random_divfree(g, 77, {.kmax_h = 4, .kmax_v = 4});
    auto rep = smallness_report(lad, u, {.L = 0.0, .M = 0.0, .C = 0.0, .N = 2, .eps0 = 1.0});
    CHECK(rep.base_b0half > 0.0);
    CHECK(rep.lhs_gauge_b4.value == Catch::Approx(rep.base_b0half).epsilon(1e-14));
    CHECK(rep.lhs_energy_b4.value == Catch::Approx(rep.base_b0half).epsilon(1e-14));
    CHECK(rep.lhs_gauge_b.value == Catch::Approx(rep.base_b0half).epsilon(1e-14));
  }

  SECTION("xi_h = 0 content of d3 u0 lands in the dropped-mass channel") {
    VecField u(g);
    u.c1 = sample_phys(g, [](double, double, double x3) { return std::cos(x3); });
    auto rep = smallness_report(lad, u);
    CHECK(rep.base_b0half == 0.0);
    CHECK(rep.dropped_mass == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("divergence-free data: two equal expressions for the base norm") {
  // with div u0 = 0, d3 u0^3 = -div_h u0^h, so measuring (d3 u0^h, -div_h u0^h)
  // after lam_h^{-1} gives the same number as measuring d3 u0 directly
  Grid g(16, 16);
  DyadicLadder lad(g);
  VecField u = random_divfree(g, 123, {.kmax_h = 5, .kmax_v = 5});
  auto rep = smallness_report(lad, u);

  VecField alt(g);
  alt.c1 = lambda_h_inv(spectral_derivative(u.c1, 2)).field;
  alt.c2 = lambda_h_inv(spectral_derivative(u.c2, 2)).field;
  Field dh = spectral_derivative(u.c1, 0);
  dh += spectral_derivative(u.c2, 1);
  alt.c3 = lambda_h_inv(-1.0 * dh).field;
  CHECK(norm_B0half(lad, alt) == Catch::Approx(rep.base_b0half).epsilon(1e-10));
}

TEST_CASE("oscillatory family sweep: smallness LHS decreases with eps") {
  Grid g(48, 48);
  DyadicLadder lad(g);
  double prev = std::numeric_limits<double>::infinity();
  for (int m : {4, 8, 16}) {
    auto rep = smallness_report(lad, oscillatory_data(g, m));
    CHECK(rep.lhs_gauge_b4.value < prev);
    prev = rep.lhs_gauge_b4.value;
  }
}
