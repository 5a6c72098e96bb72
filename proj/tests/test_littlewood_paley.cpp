#include <catch2/catch_amalgamated.hpp>

#include "anisons/littlewood_paley.hpp"
#include "anisons/random_fields.hpp"

using namespace anisons;

namespace {
double max_coeff_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}
}  // namespace

TEST_CASE("cutoff supports and pointwise identities") {
  CutoffPair cut;
  CHECK(cut.chi(0.0) == 1.0);
  CHECK(cut.chi(0.75) == 1.0);
  CHECK(cut.chi(4.0 / 3.0) == 0.0);
  CHECK(cut.chi(0.5) == 1.0);
  CHECK(cut.phi(0.5) == 0.0);
  CHECK(cut.phi(0.74) == 0.0);
  CHECK(cut.phi(8.0 / 3.0) == 0.0);
  CHECK(cut.phi(1.0) > 0.0);
  CHECK(cut.phi(2.0) > 0.0);
  CHECK(cut.phi(1.0) + cut.phi(2.0) == Catch::Approx(1.0).margin(1e-14));
  // chi(1) carries the whole low tail at tau = 1
  CHECK(cut.chi(1.0) == Catch::Approx(cut.phi(2.0)).margin(1e-14));
}

TEST_CASE("partition of unity telescopes to machine precision") {
  CutoffPair cut;
  for (int i = 0; i <= 200; ++i) {
    const double tau = std::pow(10.0, -3.0 + 6.0 * i / 200.0);
    double s = 0.0;
    for (int j = -15; j <= 15; ++j) s += cut.phi_at(j, tau);
    REQUIRE(std::abs(s - 1.0) < 1e-12);
    double c = cut.chi(tau);
    for (int j = 0; j <= 15; ++j) c += cut.phi_at(j, tau);
    REQUIRE(std::abs(c - 1.0) < 1e-12);
  }
}

TEST_CASE("cutoff hash is stable and resolution-tagged") {
  CutoffPair a, b;
  CHECK(a.hash_string() == b.hash_string());
  CHECK(a.hash_string().size() == 16);
  CutoffPair coarse(512);
  CHECK(coarse.hash_string() != a.hash_string());
}

TEST_CASE("ladder shell ranges on a 32^3 unit torus") {
  Grid g(32, 32);
  DyadicLadder lad(g);
  // vertical frequencies 1..16: phi touches 1 at l in {-1,0} and 16 at l in {3,4}
  CHECK(lad.lmin() == -1);
  CHECK(lad.lmax() == 4);
  // horizontal magnitudes reach sqrt(2)*16 ~ 22.6
  CHECK(lad.kmin() == -1);
  CHECK(lad.kmax() == 4);
  // stretched vertical axis shifts the ladder down
  Grid s(32, 32, two_pi, two_pi * 16.0);  // vertical frequencies k/16
  DyadicLadder lads(s);
  CHECK(lads.lmin() == -5);
}

TEST_CASE("vertical blocks reconstruct everything but the vertical mean") {
  Grid g(32, 16);
  DyadicLadder lad(g);
  Field a = random_field(g, 3, {.kmax_h = 9, .kmax_v = 7, .vertical_mean = true});
  Field sum(g);
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) sum += delta_v(lad, a, l);
  // the residue is exactly the xi3 = 0 plane
  Field residue = a - sum;
  CHECK(l2(residue) == Catch::Approx(vertical_mean_mass(a)).epsilon(1e-12));
  const Grid& gg = a.grid();
  double off_plane = 0.0;
  for (int i1 = 0; i1 < gg.nh; ++i1)
    for (int i2 = 0; i2 < gg.nh; ++i2)
      for (int i3 = 1; i3 < gg.nv; ++i3)
        off_plane = std::max(off_plane, std::abs(residue.at(i1, i2, i3)));
  CHECK(off_plane < 1e-12);

  // mean-free field: full reconstruction below 1e-12 relative
  Field b = random_field(g, 4, {.kmax_h = 9, .kmax_v = 7});
  Field sb(g);
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) sb += delta_v(lad, b, l);
  CHECK(l2(b - sb) < 1e-12 * l2(b));
}

TEST_CASE("blocks commute and live on their shells") {
  Grid g(32, 16);
  DyadicLadder lad(g);
  Field a = random_field(g, 5, {.kmax_h = 9, .kmax_v = 7});
  Field ab = delta_h(lad, delta_v(lad, a, 1), 2);
  Field ba = delta_v(lad, delta_h(lad, a, 2), 1);
  CHECK(max_coeff_diff(ab, ba) < 1e-15);  // rounding only: scalar reassociation

  // support of Delta_l^v: 3/4 * 2^l <= |xi3| <= 8/3 * 2^l
  Field d = delta_v(lad, a, 2);
  for (int i3 = 0; i3 < g.nv; ++i3) {
    const double k3 = std::abs(g.k3(i3));
    if (k3 >= 0.75 * 4.0 && k3 <= 8.0 / 3.0 * 4.0) continue;
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2)
        REQUIRE(d.at(i1, i2, i3) == cplx(0.0));
  }

  // S_k with k far above the ladder is the identity
  Field s = s_h(lad, a, lad.kmax() + 3);
  CHECK(max_coeff_diff(s, a) == 0.0);
}

TEST_CASE("lh/hh split: reconstruction and mode routing") {
  Grid g(32, 32);
  DyadicLadder lad(g);

  Field a = random_field(g, 6, {.kmax_h = 9, .kmax_v = 9});
  auto sp = split_lh_hh(lad, a);
  Field rec = sp.lh + sp.hh;
  CHECK(l2(rec - a) < 1e-12 * l2(a));

  // low horizontal, high vertical: xi_h = (1,0), xi3 = 8 -> entirely lh
  Field lo(g);
  lo.at(1, 0, 8) = 1.0;
  lo.real = false;
  auto sp_lo = split_lh_hh(lad, lo);
  CHECK(l2(sp_lo.lh) == Catch::Approx(1.0).margin(1e-12));
  CHECK(l2(sp_lo.hh) < 1e-13);

  // high horizontal, low vertical: xi_h = (8,0), xi3 = 1 -> entirely hh
  Field hi(g);
  hi.at(8, 0, 1) = 1.0;
  hi.real = false;
  auto sp_hi = split_lh_hh(lad, hi);
  CHECK(l2(sp_hi.hh) == Catch::Approx(1.0).margin(1e-12));
  CHECK(l2(sp_hi.lh) < 1e-13);
}

TEST_CASE("vertical Bony decomposition reproduces the dealiased product") {
  Grid g(32, 32);
  DyadicLadder lad(g);
  const int K_h = g.kept_h(), K_v = g.kept_v();

  // a vertical-mean-free, b arbitrary (including a vertical mean)
  Field a = random_field(g, 21, {.kmax_h = K_h / 2, .kmax_v = K_v / 2});
  Field b = random_field(g, 22, {.kmax_h = K_h / 2, .kmax_v = K_v / 2, .vertical_mean = true});
  auto bony = bony_v(lad, a, b);
  Field ab = multiply(a, b);
  Field rec = bony.paraproduct + bony.remainder;
  CHECK(l2(rec - ab) < 1e-10 * l2(ab));

  // constant b: the paraproduct dies, the remainder carries a*const
  Field c(g);
  c.at(0, 0, 0) = 3.0;
  auto bc = bony_v(lad, a, c);
  CHECK(l2(bc.paraproduct) < 1e-13);
  Field three_a = 3.0 * a;
  CHECK(l2(bc.remainder - three_a) < 1e-12 * l2(a));
}

TEST_CASE("paraproduct of a single vertical mode against itself") {
  // a = cos(x3): T_a a + R(a,a) = dealiased a^2 = (1 + cos 2x3)/2
  Grid g(16, 32);
  DyadicLadder lad(g);
  Field a(g);
  a.at(0, 0, 1) = 0.5;
  a.at(0, 0, g.nv - 1) = 0.5;
  auto bony = bony_v(lad, a, a);
  Field rec = bony.paraproduct + bony.remainder;
  Field expect(g);
  expect.at(0, 0, 0) = 0.5;
  expect.at(0, 0, 2) = 0.25;
  expect.at(0, 0, g.nv - 2) = 0.25;
  CHECK(max_coeff_diff(rec, expect) < 1e-13);
}
