#include <catch2/catch_amalgamated.hpp>

#include "anisons/decomposition.hpp"
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

// divergence-free field with a decaying spectrum, so time derivatives of
// every order stay comparable to the fields themselves
VecField smooth_divfree(const Grid& g, std::uint64_t seed, double target) {
  VecField u = random_divfree(g, seed, {.kmax_h = 2, .kmax_v = 2, .target_l2 = 0.0});
  for (int c = 0; c < 3; ++c)
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2)
        for (int i3 = 0; i3 < g.nv; ++i3) {
          const double k3 = g.k3(i3);
          const double k2 = g.kh2(i1, i2) + k3 * k3;
          u[c].at(i1, i2, i3) *= std::exp(-k2 / 1.5);
        }
  u *= target / l2(u);
  return u;
}
}  // namespace

TEST_CASE("induced horizontal velocity matches the Biot-Savart gradient part") {
  Grid g(16, 16);
  VecField u = random_divfree(g, 91, {.kmax_h = 4, .kmax_v = 4, .vertical_mean = true});
  HField uh(g);
  uh.c1 = u.c1;
  uh.c2 = u.c2;
  const HField div_part = biot_savart_split(uh).div;
  const HField ind = induced_horizontal(u.c3);
  const double scale = std::max(l2(div_part), 1e-30);
  CHECK(max_coeff_diff(ind.c1, div_part.c1) < 1e-12 * scale);
  CHECK(max_coeff_diff(ind.c2, div_part.c2) < 1e-12 * scale);
}

TEST_CASE("initial identities hold for divergence-free data") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  VecField u0 = random_divfree(g, 17, {.kmax_h = 4, .kmax_v = 4, .vertical_mean = true});
  DecompositionConfig cfg;
  cfg.track_residual = false;
  DecompositionRun run(lad, u0, cfg);

  CHECK(run.identities().vh_residual < 1e-12);
  CHECK(run.identities().w_residual < 1e-12);
  CHECK(run.identities().vertical_mean_l2 ==
        Catch::Approx(vertical_mean_mass(u0.c3)).epsilon(1e-14));
  // the data has deliberate mass on the vertical-mean plane
  CHECK(run.identities().vertical_mean_l2 > 1e-3);

  // w(0) keeps exactly the low-horizontal part plus that plane
  Field w0 = run.w();
  const LhHhSplit s = split_lh_hh(lad, u0.c3);
  Field expect = s.lh;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) expect.at(i1, i2, 0) = u0.c3.at(i1, i2, 0);
  CHECK(max_coeff_diff(w0, expect) < 1e-13);
}

TEST_CASE("purely rotational columns leave no remainder") {
  // (grad_h^perp psi, 0) with psi independent of x3: the reference flow
  // absorbs the whole field and v stays zero along the evolution
  Grid g(16, 8);
  VecField u0(g);
  u0.c1 = sample_phys(g, [](double x1, double x2, double) { return std::cos(x1) * std::sin(x2); });
  u0.c2 = sample_phys(g, [](double x1, double x2, double) { return -std::sin(x1) * std::cos(x2); });

  DyadicLadder lad(g);
  DecompositionConfig cfg;
  cfg.solver.dt = 1e-3;
  cfg.monitor_stride = 20;
  cfg.track_residual = false;
  DecompositionRun run(lad, u0, cfg);
  run.advance(0.2);

  CHECK(l2(run.vh()) < 1e-9 * l2(u0));
  CHECK(l2(run.w()) < 1e-9 * l2(u0));
  for (double v : run.ledger().column("vh_bt")) CHECK(v < 1e-9);

  const BootstrapStatus st = bootstrap_monitor(run.ledger(), 1.0);
  CHECK(!st.t_16.has_value());
  CHECK(!st.t_32.has_value());
  CHECK(st.max_vh < 1e-9);
}

TEST_CASE("reconstruction identities are exact by construction") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  VecField u0 = smooth_divfree(g, 23, 0.5);
  DecompositionConfig cfg;
  cfg.solver.dt = 1e-3;
  cfg.monitor_stride = 5;
  cfg.track_residual = false;
  DecompositionRun run(lad, u0, cfg);
  run.advance(0.005);

  const VecField v = run.v();
  Field r1 = run.u().c1 - run.baru().c1 - v.c1;
  Field r2 = run.u().c2 - run.baru().c2 - v.c2;
  Field r3 = run.u().c3 - v.c3;
  CHECK(l2(r1) == 0.0);
  CHECK(l2(r2) == 0.0);
  CHECK(l2(r3) == 0.0);

  Field rw = run.u().c3 - run.v_F() - run.w();
  CHECK(l2(rw) == 0.0);
}

TEST_CASE("diagnostic pressure matches the closed form") {
  Grid g(16, 8);

  SECTION("zero velocity gives zero pressure") {
    CHECK(l2(pressure_diagnostic(VecField(g))) == 0.0);
  }

  SECTION("Taylor-Green") {
    VecField u0(g);
    u0.c1 = sample_phys(g, [](double x1, double x2, double) { return std::cos(x1) * std::sin(x2); });
    u0.c2 = sample_phys(g, [](double x1, double x2, double) { return -std::sin(x1) * std::cos(x2); });
    AnsStepper s(u0, {.dt = 1e-3});
    s.run(0.1);
    const Field p = pressure_diagnostic(s.state());
    const double amp = std::exp(-4.0 * 0.1);
    Field expect = sample_phys(g, [&](double x1, double x2, double) {
      return -0.25 * amp * (std::cos(2.0 * x1) + std::cos(2.0 * x2));
    });
    CHECK(max_coeff_diff(p, expect) < 1e-8 * 0.125 * amp);
  }

  SECTION("recovered gradient completes the advection to a solenoidal field") {
    VecField u = random_divfree(g, 5, {.kmax_h = 3, .kmax_v = 2, .vertical_mean = true});
    VecField s(g);
    for (int i = 0; i < 3; ++i) {
      s[i] = multiply(u.c1, spectral_derivative(u[i], 0));
      s[i] += multiply(u.c2, spectral_derivative(u[i], 1));
      s[i] += multiply(u.c3, spectral_derivative(u[i], 2));
    }
    const double advection_scale = l2(s);
    const Field p = pressure_diagnostic(u);
    for (int i = 0; i < 3; ++i) s[i] += spectral_derivative(p, i);
    VecField r = leray_project(s);
    r.c1 -= s.c1;
    r.c2 -= s.c2;
    r.c3 -= s.c3;
    CHECK(l2(r) < 1e-11 * advection_scale);
  }
}

TEST_CASE("correction equation residual is small at monitor times") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  VecField u0 = smooth_divfree(g, 41, 0.5);
  DecompositionConfig cfg;
  cfg.solver.dt = 1e-3;
  cfg.monitor_stride = 5;
  DecompositionRun run(lad, u0, cfg);
  run.advance(0.02);

  const auto& res = run.residuals();
  REQUIRE(res.size() == 3);
  for (std::size_t i = 0; i < res.size(); ++i) {
    CHECK(res[i].t == Catch::Approx(0.005 * double(i + 1)).margin(1e-12));
    CHECK(res[i].scale > 1e-3);
    CHECK(res[i].relative < 1e-5);
  }
}

TEST_CASE("heat-flow channel decays at its exact rate") {
  // oscillatory data: every mode of u0^3 sits at |xi_h|^2 = m^2 + 1, all of
  // it high-horizontal, so v_F is a single exponential in time
  Grid g(16, 16);
  DyadicLadder lad(g);
  const int m = 4;
  VecField u0 = oscillatory_data(g, m);

  DecompositionConfig cfg;
  cfg.solver.dt = 1e-3;
  cfg.monitor_stride = 20;
  cfg.track_residual = false;
  DecompositionRun run(lad, u0, cfg);

  CHECK(max_coeff_diff(run.u3_hh0(), u0.c3) < 1e-14);
  CHECK(run.ledger().column("w_b").front() == 0.0);

  run.advance(0.1);

  const auto ts = run.ledger().times();
  const auto vF = run.ledger().column("vF_b4");
  const double rate = double(m) * m + 1.0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    CHECK(vF[i] == Catch::Approx(vF[0] * std::exp(-rate * ts[i])).epsilon(1e-12));

  // the remainder channel never grows past a small multiple of its start
  const auto vh_bt = run.ledger().column("vh_bt");
  CHECK(vh_bt.back() <= 4.0 * vh_bt.front());
  CHECK(vh_bt.front() > 0.0);
}

TEST_CASE("bootstrap monitor reports threshold crossings") {
  Grid g(16, 16);
  NormLedger led(g, CutoffPair());
  led.add_column("vh_bt");
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.01 * i;
    led.start_row(t);
    led.put("vh_bt", t / 8.0);  // crosses 1/16 at t = 0.5, 1/32 at t = 0.25
    led.flush_row();
  }

  const BootstrapStatus st = bootstrap_monitor(led, 1.0);
  REQUIRE(st.t_16.has_value());
  REQUIRE(st.t_32.has_value());
  CHECK(*st.t_16 == Catch::Approx(0.5).margin(0.0101));
  CHECK(*st.t_32 == Catch::Approx(0.25).margin(0.0101));
  CHECK(st.max_vh == Catch::Approx(0.125));

  // doubling the constant halves both crossing levels
  const BootstrapStatus st2 = bootstrap_monitor(led, 2.0);
  CHECK(*st2.t_16 == Catch::Approx(0.25).margin(0.0101));
  CHECK(*st2.t_32 == Catch::Approx(0.125).margin(0.0101));

  CHECK_THROWS_AS(bootstrap_monitor(led, 0.0), ConfigError);
}

TEST_CASE("ledger accumulators start from the instantaneous norms") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  VecField u0 = smooth_divfree(g, 7, 0.5);
  DecompositionConfig cfg;
  cfg.solver.dt = 1e-3;
  cfg.monitor_stride = 2;
  cfg.track_residual = false;
  DecompositionRun run(lad, u0, cfg);
  run.advance(0.01);

  const auto& led = run.ledger();
  REQUIRE(led.times().size() == 6);
  CHECK(led.times().front() == 0.0);

  // at t = 0 the sup accumulators equal the instantaneous norms and the
  // square-integral ones have not accumulated anything
  CHECK(led.column("vh_bt").front() == led.column("vh_b").front());
  CHECK(led.column("w_bt").front() == led.column("w_b").front());
  CHECK(led.column("f_int").front() == 0.0);

  // integrals and sup-built norms never decrease along the run
  for (const char* name : {"f_int", "gh_int", "hbar_int", "vh_bt", "w_bt", "vF_b4t",
                           "baru_linf_b", "grad_baru_l2_b"}) {
    const auto col = led.column(name);
    for (std::size_t i = 1; i < col.size(); ++i) CHECK(col[i] >= col[i - 1]);
  }
}

TEST_CASE("weight exponents damp their accumulator columns") {
  Grid g(16, 16);
  DyadicLadder lad(g);
  VecField u0 = smooth_divfree(g, 29, 0.6);

  auto final_row = [&](double expo) {
    DecompositionConfig cfg;
    cfg.solver.dt = 1e-3;
    cfg.monitor_stride = 2;
    cfg.track_residual = false;
    cfg.lambda = cfg.kappa = cfg.gamma = cfg.mu = expo;
    DecompositionRun run(lad, u0, cfg);
    run.advance(0.01);
    return run.ledger();
  };

  const NormLedger led0 = final_row(0.0);
  const NormLedger led2 = final_row(2.0);
  for (const char* name : {"vh_l2f", "w_l2hbar", "lhinv_d3_baru_l2gh", "baru_l2gh"}) {
    const double v0 = led0.column(name).back();
    const double v2 = led2.column(name).back();
    CHECK(v2 <= v0);
    CHECK(v0 > 0.0);
  }
  // the weights themselves are exponent-independent
  CHECK(led0.column("f_int").back() == led2.column("f_int").back());
}

TEST_CASE("B4 Chemin-Lerner accumulator takes time norms per entry") {
  Grid g(16, 16);
  DyadicLadder lad(g);

  SECTION("uniform time scaling matches the closed form") {
    Field a = random_field(g, 3, {.kmax_h = 4, .kmax_v = 4});
    ClAccumulatorB4 sup(lad, std::numeric_limits<double>::infinity());
    ClAccumulatorB4 sq(lad, 2.0);
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
      const double t = double(i) / n;
      Field at = (1.0 + t) * a;
      const B4Brackets br = brackets_B4_neg(lad, at);
      sup.sample(t, br);
      sq.sample(t, br);
    }
    const double base = norm_B4_neg(lad, a);
    CHECK(sup.value() == Catch::Approx(2.0 * base).epsilon(1e-12));
    CHECK(sq.value() == Catch::Approx(std::sqrt(7.0 / 3.0) * base).epsilon(1e-4));
  }

  SECTION("entries peaking at different times are kept apart") {
    // two modes in the same vertical shell but different horizontal shells,
    // alive at different times: the sup must combine per-entry maxima inside
    // one bracket, not take the larger of the two whole brackets
    Field a(g);
    a.real = false;
    a.at(1, 0, 2) = 1.0;
    Field b(g);
    b.real = false;
    b.at(4, 0, 2) = 1.0;
    const B4Brackets ba = brackets_B4_neg(lad, a);
    const B4Brackets bb = brackets_B4_neg(lad, b);

    ClAccumulatorB4 sup(lad, std::numeric_limits<double>::infinity());
    sup.sample(0.0, ba);
    sup.sample(1.0, bb);

    double expect = 0.0;
    for (int il = 0; il < lad.n_shells_v(); ++il) {
      double inner = 0.0;
      for (int ik = 0; ik < lad.n_shells_h(); ++ik) {
        const double m = std::max(ba.hk[std::size_t(il) * ba.n_k + ik],
                                  bb.hk[std::size_t(il) * bb.n_k + ik]);
        inner += std::ldexp(m * m, -(lad.kmin() + ik));
      }
      const double low = std::max(ba.low[il], bb.low[il]);
      expect += std::exp2(0.5 * (lad.lmin() + il)) * (std::sqrt(inner) + low);
    }
    CHECK(sup.value() == Catch::Approx(expect).epsilon(1e-14));

    // and it exceeds the larger single-field norm, which a bracket-level sup
    // would have returned
    const double na = norm_B4_neg(lad, a), nb = norm_B4_neg(lad, b);
    CHECK(sup.value() > std::max(na, nb) * (1.0 + 1e-12));
  }
}
