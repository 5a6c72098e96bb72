#pragma once

// Initial data construction: horizontal Helmholtz (Biot-Savart) splitting,
// the oscillatory and slowly-varying data families used in the experiments,
// vertical frequency cuts, and the smallness functionals evaluated on data.

#include <cmath>
#include <limits>

#include "anisons/norms.hpp"
#include "anisons/operators.hpp"

namespace anisons {

// ---------------------------------------------------------------------------
// 2-D Biot-Savart splitting of a horizontal field, layer by layer:
//   curl part = grad_h^perp lap_h^{-1} (curl_h u),  div part = grad_h lap_h^{-1} (div_h u).
// The xi_h = 0 column carries neither a curl nor a divergence; it is assigned
// to the curl part so the split always reconstructs exactly.

struct BiotSavartSplit {
  HField curl;
  HField div;
};

inline BiotSavartSplit biot_savart_split(const HField& u) {
  const Grid& g = u.c1.grid();
  BiotSavartSplit r{HField(g), HField(g)};
  r.curl.c1.real = r.curl.c2.real = u.c1.real && u.c2.real;
  r.div.c1.real = r.div.c2.real = r.curl.c1.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double k1 = g.k1(i1), k2 = g.k2(i2), kk = k1 * k1 + k2 * k2;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const std::size_t id = g.idx(i1, i2, i3);
        const cplx a1 = u.c1.data()[id], a2 = u.c2.data()[id];
        if (kk == 0.0) {
          r.curl.c1.data()[id] = a1;
          r.curl.c2.data()[id] = a2;
          continue;
        }
        // projection of (a1, a2) onto xi_h: the gradient (div) part
        const cplx along = (k1 * a1 + k2 * a2) / kk;
        r.div.c1.data()[id] = k1 * along;
        r.div.c2.data()[id] = k2 * along;
        r.curl.c1.data()[id] = a1 - k1 * along;
        r.curl.c2.data()[id] = a2 - k2 * along;
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Exact spectral helpers for building data: horizontal mode shift and
// multiplication by sin(m x1). Shifting moves every coefficient from k1 to
// k1 + m; any populated mode that would leave the representable band throws
// instead of wrapping around. Coefficients below a relative floor are treated
// as zero so transform round-off in a profile cannot trigger the band check.

inline Field shift_k1(const Field& a, int m) {
  const Grid& g = a.grid();
  Field out(g);
  out.real = false;  // a one-sided shift breaks Hermitian symmetry
  double peak = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) peak = std::max(peak, std::abs(a.data()[i]));
  if (peak == 0.0) return out;
  const double floor = 1e-13 * peak;
  const int kmax = g.nh / 2 - 1;
  for (int i1 = 0; i1 < g.nh; ++i1) {
    const int k1 = Grid::freq_of(i1, g.nh);
    const int ks = k1 + m;
    const bool fits = std::abs(ks) <= kmax;
    const int is = fits ? (ks + g.nh) % g.nh : 0;
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const cplx c = a.data()[g.idx(i1, i2, i3)];
        if (std::abs(c) < floor) continue;
        if (!fits)
          throw ConfigError("shift_k1: mode k1=" + std::to_string(k1) + " shifted by " +
                            std::to_string(m) + " leaves the band |k1| <= " +
                            std::to_string(kmax));
        out.data()[g.idx(is, i2, i3)] = c;
      }
  }
  return out;
}

inline Field mul_sin_k1(const Field& a, int m) {
  Field hi = shift_k1(a, m), lo = shift_k1(a, -m);
  Field out(a.grid());
  const cplx half_over_i(0.0, -0.5);  // 1/(2i)
  for (std::int64_t i = 0; i < out.size(); ++i)
    out.data()[i] = half_over_i * (hi.data()[i] - lo.data()[i]);
  out.real = a.real;
  return out;
}

// ---------------------------------------------------------------------------
// Vertical stretching x3 -> eps x3 with eps = 1/m, done without interpolation:
// a profile with vertical period 2*pi reinterpreted on a grid of vertical
// period 2*pi*m keeps the same coefficients at the same integer indices, and
// its physical vertical frequencies shrink by exactly 1/m.

inline Grid stretched_grid(const Grid& reference, int inv_eps) {
  if (inv_eps < 2) throw ConfigError("stretched_grid: 1/eps must be >= 2");
  return Grid(reference.nh, reference.nv, reference.Lh, reference.Lv * inv_eps);
}

inline Field stretch_vertical(const Field& profile, const Grid& target) {
  const Grid& g = profile.grid();
  if (g.nh != target.nh || g.nv != target.nv || g.Lh != target.Lh)
    throw ConfigError("stretch_vertical: profile and target grids must share nh, nv, Lh");
  Field out(target);
  for (std::int64_t i = 0; i < out.size(); ++i) out.data()[i] = profile.data()[i];
  out.real = profile.real;
  return out;
}

// ---------------------------------------------------------------------------
// Data families. The small parameter enters as an integer m = 1/eps so every
// construction stays band-limited and grid-exact.

namespace detail {

inline void require_solenoidal(const VecField& u, const char* what) {
  const double ref = l2(u);
  if (ref > 0.0 && divergence_l2(u) > 1e-11 * ref)
    throw ConfigError(std::string(what) + ": field is not divergence-free");
}

inline void require_solenoidal_h(const HField& u, const char* what) {
  Field d = spectral_derivative(u.c1, 0);
  d += spectral_derivative(u.c2, 1);
  const double ref = l2(u);
  if (ref > 0.0 && l2(d) > 1e-11 * ref)
    throw ConfigError(std::string(what) + ": horizontal field has nonzero div_h");
}

inline double log_amplitude(int inv_eps, double delta) {
  if (inv_eps < 2) throw ConfigError("data family: 1/eps must be >= 2");
  if (!(delta > 0.0 && delta < 0.25))
    throw ConfigError("data family: delta must lie in (0, 1/4)");
  // (-ln eps)^delta with eps = 1/m
  return std::pow(std::log(double(inv_eps)), delta);
}

}  // namespace detail

// Oscillatory family: sin(m x1) * (0, -d3 phi, d2 phi). Divergence-free for
// any profile phi(x2, x3); the default profile is cos(x2) cos(x3).
inline VecField oscillatory_data(const Grid& g, int inv_eps, double amplitude = 1.0,
                                 const Field* profile = nullptr) {
  if (inv_eps < 1) throw ConfigError("oscillatory_data: 1/eps must be >= 1");
  Field phi(g);
  if (profile) {
    if (!(profile->grid() == g)) throw ConfigError("oscillatory_data: profile grid mismatch");
    phi = *profile;
  } else {
    if (g.nh < 6 || g.nv < 6) throw ConfigError("oscillatory_data: grid too small for default profile");
    const cplx q(0.25, 0.0);
    phi.at(0, 1, 1) = q;
    phi.at(0, 1, g.nv - 1) = q;
    phi.at(0, g.nh - 1, 1) = q;
    phi.at(0, g.nh - 1, g.nv - 1) = q;
  }
  VecField u(g);
  u.c2 = mul_sin_k1(-1.0 * spectral_derivative(phi, 2), inv_eps);
  u.c3 = mul_sin_k1(spectral_derivative(phi, 1), inv_eps);
  if (amplitude != 1.0) {
    u.c2 *= amplitude;
    u.c3 *= amplitude;
  }
  detail::require_solenoidal(u, "oscillatory_data");
  return u;
}

// Slowly varying family: (v0h + eps (-ln eps)^delta w0h, (-ln eps)^delta w03)
// evaluated at (x_h, eps x3). Profiles live on a reference grid with vertical
// period 2*pi; the result lives on stretched_grid(reference, m).
inline VecField slow_data(const Grid& target, int inv_eps, double delta, const HField& v0h,
                          const VecField& w0) {
  const double amp = detail::log_amplitude(inv_eps, delta);
  detail::require_solenoidal_h(v0h, "slow_data v0h");
  detail::require_solenoidal(w0, "slow_data w0");
  const double eps = 1.0 / inv_eps;
  VecField u(target);
  u.c1 = stretch_vertical(v0h.c1, target) + (eps * amp) * stretch_vertical(w0.c1, target);
  u.c2 = stretch_vertical(v0h.c2, target) + (eps * amp) * stretch_vertical(w0.c2, target);
  u.c3 = amp * stretch_vertical(w0.c3, target);
  detail::require_solenoidal(u, "slow_data");
  return u;
}

// Combined family: slow horizontal flow plus a fast horizontal oscillation of
// a stretched profile,
//   (v_h, 0)(x_h, eps x3)
//     + (-ln eps)^delta sin(x1/eps) (0, -eps^{1/2} (d3 phi)(x_h, eps x3),
//                                       eps^{-1/2} (d2 phi)(x_h, eps x3)).
// The vertical derivative is taken on the profile before stretching; that is
// what makes the oscillating part divergence-free.
inline VecField combined_data(const Grid& target, int inv_eps, double delta, const HField& v0h,
                              const Field& phi) {
  const double amp = detail::log_amplitude(inv_eps, delta);
  detail::require_solenoidal_h(v0h, "combined_data v0h");
  const double rt_eps = 1.0 / std::sqrt(double(inv_eps));
  Field g2 = stretch_vertical(spectral_derivative(phi, 2), target);
  Field g3 = stretch_vertical(spectral_derivative(phi, 1), target);
  VecField u(target);
  u.c1 = stretch_vertical(v0h.c1, target);
  u.c2 = stretch_vertical(v0h.c2, target) + (-amp * rt_eps) * mul_sin_k1(g2, inv_eps);
  u.c3 = (amp / rt_eps) * mul_sin_k1(g3, inv_eps);
  detail::require_solenoidal(u, "combined_data");
  return u;
}

// ---------------------------------------------------------------------------
// Vertical frequency cut: keep the modes with |xi3| <= 1/N or |xi3| >= N.

inline Field freq_cut_N(const Field& a, int N) {
  if (N < 2) throw ConfigError("freq_cut_N: N must be >= 2");
  const Grid& g = a.grid();
  Field out(g);
  out.real = a.real;
  for (int i3 = 0; i3 < g.nv; ++i3) {
    const double x3 = std::abs(g.k3(i3));
    if (x3 <= 1.0 / N || x3 >= double(N))
      for (int i1 = 0; i1 < g.nh; ++i1)
        for (int i2 = 0; i2 < g.nh; ++i2)
          out.data()[g.idx(i1, i2, i3)] = a.data()[g.idx(i1, i2, i3)];
  }
  return out;
}

inline HField freq_cut_N(const HField& a, int N) {
  HField out(a.c1.grid());
  out.c1 = freq_cut_N(a.c1, N);
  out.c2 = freq_cut_N(a.c2, N);
  return out;
}

// ---------------------------------------------------------------------------
// Growth gauge used by the smallness conditions:
//   A_N(x, y) = N^{1/2} x exp(C x^2) + y exp(N^2 exp(C x^2)),
// where x is a norm of the data and y the norm of its frequency-cut part.
// Doubly exponential, so overflow is expected behavior at moderate x; it is
// reported as an +inf sentinel with a flag rather than saturated silently.

struct GaugeResult {
  double value = 0.0;
  bool overflow = false;
};

namespace detail {

constexpr double exp_arg_max = 709.0;  // edge of double range for std::exp

inline GaugeResult guarded_exp(double arg) {
  if (arg > exp_arg_max) return {std::numeric_limits<double>::infinity(), true};
  return {std::exp(arg), false};
}

}  // namespace detail

inline GaugeResult functional_A_N(double u0h_norm, double cut_norm, int N, double C) {
  if (N < 2) throw ConfigError("functional_A_N: N must be >= 2");
  if (u0h_norm < 0.0 || cut_norm < 0.0 || C < 0.0)
    throw ConfigError("functional_A_N: norms and C must be nonnegative");
  GaugeResult inner = detail::guarded_exp(C * u0h_norm * u0h_norm);
  GaugeResult r;
  r.value = std::sqrt(double(N)) * u0h_norm * inner.value;
  r.overflow = inner.overflow && u0h_norm > 0.0;
  if (cut_norm > 0.0) {
    GaugeResult outer = inner.overflow
                            ? GaugeResult{std::numeric_limits<double>::infinity(), true}
                            : detail::guarded_exp(double(N) * double(N) * inner.value);
    r.value += cut_norm * outer.value;
    r.overflow = r.overflow || outer.overflow;
  }
  if (u0h_norm == 0.0 && cut_norm == 0.0) r = {0.0, false};
  return r;
}

// ---------------------------------------------------------------------------
// Smallness report: the four left-hand sides built from
//   base = |lam_h^{-1} d3 u0|_{B^{0,1/2}},
// an exponential envelope in |u0^3| (measured either in B4^{-1/2,1/2} or in
// B^{0,1/2}), and one of two gauges of the horizontal components (the A_N
// functional of |u0^h|_{B^{0,1/2}}, or exp(M |u0^h|_{L2} |d3 u0^h|_{L2})).
// Constants are caller-chosen; the report is a measurement, not a proof.

struct SmallnessConstants {
  double L = 1.0;
  double M = 1.0;
  double C = 1.0;
  int N = 4;
  double eps0 = 1.0;
};

struct SmallnessLhs {
  double value = 0.0;
  bool overflow = false;
  bool verdict = false;  // value <= eps0 and no overflow
};

struct SmallnessReport {
  // component norms
  double base_b0half = 0.0;      // |lam_h^{-1} d3 u0|_{B^{0,1/2}}
  double dropped_mass = 0.0;     // L2 mass of d3 u0 on the xi_h = 0 column
  double u03_b4neg = 0.0;        // |u0^3|_{B4^{-1/2,1/2}}
  double u03_b0half = 0.0;       // |u0^3|_{B^{0,1/2}}
  double u0h_b0half = 0.0;       // |u0^h|_{B^{0,1/2}}
  double cut_b0half = 0.0;       // |freq_cut_N(u0^h)|_{B^{0,1/2}}
  double u0h_l2 = 0.0;
  double d3u0h_l2 = 0.0;
  GaugeResult gauge;             // A_N evaluated on the two norms above

  SmallnessLhs lhs_gauge_b4;     // A_N gauge, vertical envelope in B4^{-1/2,1/2}
  SmallnessLhs lhs_energy_b4;    // double-exp energy gauge, envelope in B4^{-1/2,1/2}
  SmallnessLhs lhs_gauge_b;      // A_N gauge, envelope in B^{0,1/2}
  SmallnessLhs lhs_energy_b;     // double-exp energy gauge, envelope in B^{0,1/2}

  SmallnessConstants constants;
};

namespace detail {

// base * exp(L (1 + env^4) * gauge_factor), in log space so an intermediate
// overflow still yields the correct 0 when base == 0
inline SmallnessLhs assemble_lhs(double base, double L, double env, double gauge_factor,
                                 bool gauge_overflow, double eps0) {
  SmallnessLhs r;
  if (base == 0.0) {
    r.verdict = 0.0 <= eps0;
    return r;
  }
  const double coef = L * (1.0 + env * env * env * env);
  if (gauge_overflow && coef > 0.0) {
    r.value = std::numeric_limits<double>::infinity();
    r.overflow = true;
    return r;
  }
  const double exponent = coef == 0.0 ? 0.0 : coef * gauge_factor;
  GaugeResult v = guarded_exp(std::log(base) + exponent);
  r.value = v.value;
  r.overflow = v.overflow;
  r.verdict = !r.overflow && r.value <= eps0;
  return r;
}

}  // namespace detail

inline SmallnessReport smallness_report(const DyadicLadder& lad, const VecField& u0,
                                        const SmallnessConstants& consts = {}) {
  detail::require_solenoidal(u0, "smallness_report");
  SmallnessReport rep;
  rep.constants = consts;

  VecField d3(u0.c1.grid());
  d3.c1 = spectral_derivative(u0.c1, 2);
  d3.c2 = spectral_derivative(u0.c2, 2);
  d3.c3 = spectral_derivative(u0.c3, 2);
  NegativeSymbolResult b1 = lambda_h_inv(d3.c1);
  NegativeSymbolResult b2 = lambda_h_inv(d3.c2);
  NegativeSymbolResult b3 = lambda_h_inv(d3.c3);
  VecField base(u0.c1.grid());
  base.c1 = std::move(b1.field);
  base.c2 = std::move(b2.field);
  base.c3 = std::move(b3.field);
  rep.base_b0half = norm_B0half(lad, base);
  rep.dropped_mass =
      std::sqrt(b1.dropped_mass * b1.dropped_mass + b2.dropped_mass * b2.dropped_mass +
                b3.dropped_mass * b3.dropped_mass);

  rep.u03_b4neg = norm_B4_neg(lad, u0.c3);
  rep.u03_b0half = norm_B0half(lad, u0.c3);

  HField uh(u0.c1.grid());
  uh.c1 = u0.c1;
  uh.c2 = u0.c2;
  rep.u0h_b0half = norm_B0half(lad, uh);
  rep.cut_b0half = norm_B0half(lad, freq_cut_N(uh, consts.N));
  rep.u0h_l2 = l2(uh);
  HField d3h(u0.c1.grid());
  d3h.c1 = d3.c1;
  d3h.c2 = d3.c2;
  rep.d3u0h_l2 = l2(d3h);

  rep.gauge = functional_A_N(rep.u0h_b0half, rep.cut_b0half, consts.N, consts.C);

  // gauge factor for the A_N variants: exp(M A_N^4)
  const double a2 = rep.gauge.value * rep.gauge.value;
  GaugeResult gf =
      rep.gauge.overflow ? GaugeResult{std::numeric_limits<double>::infinity(), true}
                         : detail::guarded_exp(consts.M * a2 * a2);
  // gauge factor for the energy variants: exp(exp(M |u0h| |d3 u0h|))
  GaugeResult ef_inner = detail::guarded_exp(consts.M * rep.u0h_l2 * rep.d3u0h_l2);
  GaugeResult ef = ef_inner.overflow
                       ? GaugeResult{std::numeric_limits<double>::infinity(), true}
                       : detail::guarded_exp(ef_inner.value);

  rep.lhs_gauge_b4 = detail::assemble_lhs(rep.base_b0half, consts.L, rep.u03_b4neg, gf.value,
                                          gf.overflow, consts.eps0);
  rep.lhs_energy_b4 = detail::assemble_lhs(rep.base_b0half, consts.L, rep.u03_b4neg, ef.value,
                                           ef.overflow, consts.eps0);
  rep.lhs_gauge_b = detail::assemble_lhs(rep.base_b0half, consts.L, rep.u03_b0half, gf.value,
                                         gf.overflow, consts.eps0);
  rep.lhs_energy_b = detail::assemble_lhs(rep.base_b0half, consts.L, rep.u03_b0half, ef.value,
                                          ef.overflow, consts.eps0);
  return rep;
}

}  // namespace anisons
