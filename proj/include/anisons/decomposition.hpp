#ifndef ANISONS_DECOMPOSITION_HPP
#define ANISONS_DECOMPOSITION_HPP

// Reference-flow decomposition of an evolving velocity field.
//
// The rotational part of the initial horizontal velocity seeds the layered
// 2-D reference flow baru.  The remainder v = u - (baru, 0) is formed by
// subtraction, so u = (baru, 0) + v holds to the bit; its third component is
// further split as v^3 = v_F + w, where v_F is the horizontal heat flow of
// the high-horizontal part of u0^3 and w the correction.
//
// A DecompositionRun advances both solvers on one time grid and, every
// monitor_stride steps, writes a ledger row of instantaneous norms,
// Chemin-Lerner accumulators and weight integrals.  The correction equation
//   dt w - lap_h w + v.grad v^3 + baru.grad_h v^3 + d3 p = 0
// is checked as a residual with dt w from a centered time difference and p
// from the diagnostic pressure solve.

#include <algorithm>
#include <optional>

#include "anisons/initial_data.hpp"
#include "anisons/ledger.hpp"
#include "anisons/solver.hpp"

namespace anisons {

// -grad_h lap_h^{-1} d3 a: the horizontal velocity that balances the
// vertical stretching of a through incompressibility.  For divergence-free u
// this reconstructs the gradient part of u^h from a = u^3 exactly, the
// xi_h = 0 column included (both sides vanish there).
inline HField induced_horizontal(const Field& a) {
  const Grid& g = a.grid();
  HField out(g);
  out.c1.real = out.c2.real = a.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double kh2 = g.kh2(i1, i2);
      if (kh2 == 0.0) continue;
      const double w1 = -g.k1(i1) / kh2, w2 = -g.k2(i2) / kh2;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const cplx v = g.k3(i3) * a.at(i1, i2, i3);
        out.c1.at(i1, i2, i3) = w1 * v;
        out.c2.at(i1, i2, i3) = w2 * v;
      }
    }
  return out;
}

// Diagnostic pressure: -lap p = div(u . grad u), inverted on the full
// Laplacian with the xi = 0 mode set to zero.  The quadratic terms carry the
// solver's dealias mask so the recovered gradient is the one the projected
// dynamics actually removed.
inline Field pressure_diagnostic(const VecField& u) {
  const Grid& g = u.grid();
  Field t11 = multiply(u.c1, u.c1);
  Field t22 = multiply(u.c2, u.c2);
  Field t33 = multiply(u.c3, u.c3);
  Field t12 = multiply(u.c1, u.c2);
  Field t13 = multiply(u.c1, u.c3);
  Field t23 = multiply(u.c2, u.c3);
  Field p(g);
  p.real = u.c1.real && u.c2.real && u.c3.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double k1 = g.k1(i1), k2 = g.k2(i2);
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const double k3 = g.k3(i3);
        const double kk = k1 * k1 + k2 * k2 + k3 * k3;
        if (kk == 0.0) continue;
        const cplx num = k1 * k1 * t11.at(i1, i2, i3) + k2 * k2 * t22.at(i1, i2, i3) +
                         k3 * k3 * t33.at(i1, i2, i3) +
                         2.0 * (k1 * k2 * t12.at(i1, i2, i3) + k1 * k3 * t13.at(i1, i2, i3) +
                                k2 * k3 * t23.at(i1, i2, i3));
        p.at(i1, i2, i3) = -num / kk;
      }
    }
  return p;
}

struct WeqResidual {
  double t = 0.0;
  double residual = 0.0;  // L2 of the defect
  double scale = 0.0;     // largest single-term L2 norm
  double relative = 0.0;  // residual / scale
};

// Defect of the correction equation at t_mid, from the three consecutive
// third-component samples u^3(t_mid -+ dt) and the full state at t_mid.
// u3_hh0 is the initial high-horizontal part whose heat flow defines v_F.
inline WeqResidual w_equation_residual(const Field& u3_hh0, const Field& u3_minus,
                                       const VecField& u_mid, const HField& baru_mid,
                                       const Field& u3_plus, double t_mid, double dt) {
  Field wm = u3_minus - horizontal_heat(u3_hh0, t_mid - dt);
  Field w0 = u_mid.c3 - horizontal_heat(u3_hh0, t_mid);
  Field wp = u3_plus - horizontal_heat(u3_hh0, t_mid + dt);

  Field dtw = (1.0 / (2.0 * dt)) * (wp - wm);
  Field lap = horizontal_laplacian(w0);

  Field d1 = spectral_derivative(u_mid.c3, 0);
  Field d2 = spectral_derivative(u_mid.c3, 1);
  Field vh1 = u_mid.c1 - baru_mid.c1;
  Field vh2 = u_mid.c2 - baru_mid.c2;
  Field adv = multiply(vh1, d1);
  adv += multiply(vh2, d2);
  adv += multiply(u_mid.c3, spectral_derivative(u_mid.c3, 2));
  adv += multiply(baru_mid.c1, d1);
  adv += multiply(baru_mid.c2, d2);

  Field p3 = spectral_derivative(pressure_diagnostic(u_mid), 2);

  Field defect = dtw;
  defect -= lap;
  defect += adv;
  defect += p3;

  WeqResidual r;
  r.t = t_mid;
  r.residual = l2(defect);
  r.scale = std::max({l2(dtw), l2(lap), l2(adv), l2(p3)});
  r.relative = r.scale > 0.0 ? r.residual / r.scale : 0.0;
  return r;
}

struct DecompositionConfig {
  SolverConfig solver{};
  int monitor_stride = 1;  // ledger row (and residual sample) every this many steps
  // damping exponents of the weighted Chemin-Lerner columns
  double lambda = 1.0;  // on the f-weighted v^h norm
  double kappa = 1.0;   // on the g^h-weighted baru norm
  double gamma = 1.0;   // on the g^h-weighted Lambda_h^{-1} d3 baru norm
  double mu = 1.0;      // on the hbar-weighted w norm
  bool track_residual = true;
};

struct InitialIdentityReport {
  // |v0^h - (-grad_h lap_h^{-1} d3 u0^3)| relative to |v0^h|
  double vh_residual = 0.0;
  // |w0 - u^3_{0,lh}| off the vertical-mean plane, relative to |u0^3|
  double w_residual = 0.0;
  // L2 mass of u0^3 on the xi3 = 0 plane, which w0 keeps but the low
  // horizontal part cannot see
  double vertical_mean_l2 = 0.0;
};

class DecompositionRun {
 public:
  DecompositionRun(const DyadicLadder& lad, const VecField& u0,
                   const DecompositionConfig& cfg = {}, std::string config_id = "")
      : lad_(lad), cfg_(cfg),
        ans_(u0, cfg.solver),
        layered_(curl_part(u0), cfg.solver),
        u3hh0_(u0.c3.grid()),
        ledger_(lad.grid(), lad.cutoffs(), std::move(config_id)) {
    if (cfg_.monitor_stride < 1)
      throw ConfigError("decomposition: monitor_stride must be at least 1");
    if (!(lad_.grid() == u0.grid()))
      throw ConfigError("decomposition: ladder and data live on different grids");
    const double inf = std::numeric_limits<double>::infinity();
    acc_baru_inf_ = ClAccumulator(lad_, inf);
    acc_gradbaru_2_ = ClAccumulator(lad_, 2.0);
    acc_lhinv_inf_ = ClAccumulator(lad_, inf);
    acc_d3baru_2_ = ClAccumulator(lad_, 2.0);
    acc_vh_inf_ = ClAccumulator(lad_, inf);
    acc_gradvh_2_ = ClAccumulator(lad_, 2.0);
    acc_w_inf_ = ClAccumulator(lad_, inf);
    acc_gradw_2_ = ClAccumulator(lad_, 2.0);
    acc_vF_inf_ = ClAccumulatorB4(lad_, inf);
    acc_gradvF_2_ = ClAccumulatorB4(lad_, 2.0);
    wacc_vh_f_ = WeightedAccumulator(lad_);
    wacc_w_hbar_ = WeightedAccumulator(lad_);
    wacc_lhinv_gh_ = WeightedAccumulator(lad_);
    wacc_baru_gh_ = WeightedAccumulator(lad_);

    for (const char* name :
         {"baru_b", "grad_baru_b", "baru_b4", "vF_b4", "vh_b", "w_b", "grad_w_b",
          "f_weight", "gh_weight", "hbar_weight", "f_int", "gh_int", "hbar_int",
          "baru_linf_b", "grad_baru_l2_b", "lhinv_d3_baru_linf_b", "d3_baru_l2_b",
          "vh_bt", "w_bt", "vF_b4t",
          "vh_l2f", "w_l2hbar", "lhinv_d3_baru_l2gh", "baru_l2gh"})
      ledger_.add_column(name);

    const LhHhSplit s3 = split_lh_hh(lad_, u0.c3);
    u3hh0_ = s3.hh;

    // v0^h against the velocity induced by the third component
    const HField& baru0 = layered_.state();
    Field v01 = u0.c1 - baru0.c1;
    Field v02 = u0.c2 - baru0.c2;
    const HField ind = induced_horizontal(u0.c3);
    const double vnorm = std::sqrt(l2sq(v01) + l2sq(v02));
    identities_.vh_residual =
        std::sqrt(l2sq(v01 - ind.c1) + l2sq(v02 - ind.c2)) / std::max(vnorm, 1e-300);

    // w0 = u0^3 - u^3_{0,hh} against u^3_{0,lh}; the two differ exactly by
    // the vertical-mean plane, which is reported separately
    Field wr = u0.c3 - s3.hh - s3.lh;
    const Grid& g = u0.c3.grid();
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2) wr.at(i1, i2, 0) = 0.0;
    identities_.w_residual = l2(wr) / std::max(l2(u0.c3), 1e-300);
    identities_.vertical_mean_l2 = vertical_mean_mass(u0.c3);

    sample_now();
  }

  // advance to time T, which must sit on the step lattice
  void advance(double T) {
    const double n_real = (T - time()) / cfg_.solver.dt;
    const long n = std::lround(n_real);
    if (n < 0 || std::abs(n_real - double(n)) > 1e-9)
      throw ConfigError("decomposition: horizon is not an integer number of steps from here");
    for (long i = 0; i < n; ++i) step_once();
  }

  double time() const { return ans_.time(); }
  long steps() const { return ans_.steps(); }
  const Grid& grid() const { return ans_.grid(); }

  const NormLedger& ledger() const { return ledger_; }
  const InitialIdentityReport& identities() const { return identities_; }
  const std::vector<WeqResidual>& residuals() const { return residuals_; }

  const VecField& u() const { return ans_.state(); }
  const HField& baru() const { return layered_.state(); }
  const Field& u3_hh0() const { return u3hh0_; }

  HField vh() const {
    HField r(grid());
    r.c1 = u().c1 - baru().c1;
    r.c2 = u().c2 - baru().c2;
    return r;
  }
  VecField v() const {
    VecField r(grid());
    const HField h = vh();
    r.c1 = h.c1;
    r.c2 = h.c2;
    r.c3 = u().c3;
    return r;
  }
  Field v_F() const { return horizontal_heat(u3hh0_, time()); }
  Field w() const { return u().c3 - v_F(); }

 private:
  static HField curl_part(const VecField& u0) {
    HField h(u0.grid());
    h.c1 = u0.c1;
    h.c2 = u0.c2;
    return biot_savart_split(h).curl;
  }

  void step_once() {
    if (cfg_.track_residual) push_history();
    ans_.step();
    layered_.step();
    if (cfg_.track_residual && have_hist_ >= 2) {
      const long mid = ans_.steps() - 1;
      if (mid % cfg_.monitor_stride == 0)
        residuals_.push_back(w_equation_residual(u3hh0_, u3_prev2_, u_prev_, baru_prev_,
                                                 ans_.state().c3, double(mid) * cfg_.solver.dt,
                                                 cfg_.solver.dt));
    }
    if (ans_.steps() % cfg_.monitor_stride == 0) sample_now();
  }

  void push_history() {
    if (have_hist_ >= 1) u3_prev2_ = u_prev_.c3;
    u_prev_ = ans_.state();
    baru_prev_ = layered_.state();
    have_hist_ = std::min(have_hist_ + 1, 2);
  }

  static std::vector<double> scaled(std::vector<double> shells, double s) {
    for (double& v : shells) v *= s;
    return shells;
  }

  void sample_now() {
    const double t = time();
    const VecField& u = ans_.state();
    const HField& baru = layered_.state();

    Field vh1 = u.c1 - baru.c1;
    Field vh2 = u.c2 - baru.c2;
    Field vF = horizontal_heat(u3hh0_, t);
    Field w = u.c3 - vF;

    // shell data shared between the instantaneous norms and the accumulators
    const Field* pbaru[] = {&baru.c1, &baru.c2};
    const auto sh_baru = shells_v_l2(lad_, std::span<const Field* const>(pbaru, 2));

    Field gb11 = spectral_derivative(baru.c1, 0), gb21 = spectral_derivative(baru.c1, 1);
    Field gb12 = spectral_derivative(baru.c2, 0), gb22 = spectral_derivative(baru.c2, 1);
    const Field* pgb[] = {&gb11, &gb21, &gb12, &gb22};
    const auto sh_gradbaru = shells_v_l2(lad_, std::span<const Field* const>(pgb, 4));

    NegativeSymbolResult li1 = lambda_h_inv(spectral_derivative(baru.c1, 2));
    NegativeSymbolResult li2 = lambda_h_inv(spectral_derivative(baru.c2, 2));
    const Field* pli[] = {&li1.field, &li2.field};
    const auto sh_lhinv = shells_v_l2(lad_, std::span<const Field* const>(pli, 2));

    Field d3b1 = spectral_derivative(baru.c1, 2), d3b2 = spectral_derivative(baru.c2, 2);
    const Field* pd3[] = {&d3b1, &d3b2};
    const auto sh_d3baru = shells_v_l2(lad_, std::span<const Field* const>(pd3, 2));

    const Field* pvh[] = {&vh1, &vh2};
    const auto sh_vh = shells_v_l2(lad_, std::span<const Field* const>(pvh, 2));

    Field gv11 = spectral_derivative(vh1, 0), gv21 = spectral_derivative(vh1, 1);
    Field gv12 = spectral_derivative(vh2, 0), gv22 = spectral_derivative(vh2, 1);
    const Field* pgv[] = {&gv11, &gv21, &gv12, &gv22};
    const auto sh_gradvh = shells_v_l2(lad_, std::span<const Field* const>(pgv, 4));

    const auto sh_w = shells_B0half(lad_, w);
    Field gw1 = spectral_derivative(w, 0), gw2 = spectral_derivative(w, 1);
    const Field* pgw[] = {&gw1, &gw2};
    const auto sh_gradw = shells_v_l2(lad_, std::span<const Field* const>(pgw, 2));

    const B4Brackets br_vF = brackets_B4_neg(lad_, vF);
    Field gf1 = spectral_derivative(vF, 0), gf2 = spectral_derivative(vF, 1);
    const Field* pgf[] = {&gf1, &gf2};
    const B4Brackets br_gradvF = b4neg_brackets(lad_, std::span<const Field* const>(pgf, 2));

    const double baru_b = weighted_shell_sum(lad_, sh_baru);
    const double grad_baru_b = weighted_shell_sum(lad_, sh_gradbaru);
    const double baru_b4 = norm_B4_0half(lad_, baru);
    const double vF_b4 = norm_B4_0half(lad_, vF);
    const double vh_b = weighted_shell_sum(lad_, sh_vh);
    const double w_b = weighted_shell_sum(lad_, sh_w);
    const double grad_w_b = weighted_shell_sum(lad_, sh_gradw);

    const double b4sq = baru_b4 * baru_b4, vFsq = vF_b4 * vF_b4;
    const double f = w_b * w_b * grad_w_b * grad_w_b + b4sq * b4sq + vFsq * vFsq;
    const double gh = baru_b * baru_b * grad_baru_b * grad_baru_b;
    const double hb = b4sq * b4sq;

    if (have_weights_) {
      const double dt = t - t_weights_;
      f_int_ += 0.5 * dt * (f_prev_ + f);
      gh_int_ += 0.5 * dt * (gh_prev_ + gh);
      hbar_int_ += 0.5 * dt * (hbar_prev_ + hb);
    }
    f_prev_ = f;
    gh_prev_ = gh;
    hbar_prev_ = hb;
    t_weights_ = t;
    have_weights_ = true;

    acc_baru_inf_.sample(t, sh_baru);
    acc_gradbaru_2_.sample(t, sh_gradbaru);
    acc_lhinv_inf_.sample(t, sh_lhinv);
    acc_d3baru_2_.sample(t, sh_d3baru);
    acc_vh_inf_.sample(t, sh_vh);
    acc_gradvh_2_.sample(t, sh_gradvh);
    acc_w_inf_.sample(t, sh_w);
    acc_gradw_2_.sample(t, sh_gradw);
    acc_vF_inf_.sample(t, br_vF);
    acc_gradvF_2_.sample(t, br_gradvF);

    wacc_vh_f_.sample(t, f, scaled(sh_vh, std::exp(-cfg_.lambda * f_int_)));
    wacc_w_hbar_.sample(t, hb, scaled(sh_w, std::exp(-cfg_.mu * hbar_int_)));
    wacc_lhinv_gh_.sample(t, gh, scaled(sh_lhinv, std::exp(-cfg_.gamma * gh_int_)));
    wacc_baru_gh_.sample(t, gh, scaled(sh_baru, std::exp(-cfg_.kappa * gh_int_)));

    ledger_.start_row(t);
    ledger_.put("baru_b", baru_b);
    ledger_.put("grad_baru_b", grad_baru_b);
    ledger_.put("baru_b4", baru_b4);
    ledger_.put("vF_b4", vF_b4);
    ledger_.put("vh_b", vh_b);
    ledger_.put("w_b", w_b);
    ledger_.put("grad_w_b", grad_w_b);
    ledger_.put("f_weight", f);
    ledger_.put("gh_weight", gh);
    ledger_.put("hbar_weight", hb);
    ledger_.put("f_int", f_int_);
    ledger_.put("gh_int", gh_int_);
    ledger_.put("hbar_int", hbar_int_);
    ledger_.put("baru_linf_b", acc_baru_inf_.value());
    ledger_.put("grad_baru_l2_b", acc_gradbaru_2_.value());
    ledger_.put("lhinv_d3_baru_linf_b", acc_lhinv_inf_.value());
    ledger_.put("d3_baru_l2_b", acc_d3baru_2_.value());
    ledger_.put("vh_bt", acc_vh_inf_.value() + acc_gradvh_2_.value());
    ledger_.put("w_bt", acc_w_inf_.value() + acc_gradw_2_.value());
    ledger_.put("vF_b4t", acc_vF_inf_.value() + acc_gradvF_2_.value());
    ledger_.put("vh_l2f", wacc_vh_f_.value());
    ledger_.put("w_l2hbar", wacc_w_hbar_.value());
    ledger_.put("lhinv_d3_baru_l2gh", wacc_lhinv_gh_.value());
    ledger_.put("baru_l2gh", wacc_baru_gh_.value());
    ledger_.flush_row();
  }

  DyadicLadder lad_;
  DecompositionConfig cfg_;
  AnsStepper ans_;
  LayeredStepper layered_;
  Field u3hh0_;
  InitialIdentityReport identities_;
  NormLedger ledger_;

  ClAccumulator acc_baru_inf_, acc_gradbaru_2_, acc_lhinv_inf_, acc_d3baru_2_;
  ClAccumulator acc_vh_inf_, acc_gradvh_2_, acc_w_inf_, acc_gradw_2_;
  ClAccumulatorB4 acc_vF_inf_, acc_gradvF_2_;
  WeightedAccumulator wacc_vh_f_, wacc_w_hbar_, wacc_lhinv_gh_, wacc_baru_gh_;
  double f_int_ = 0.0, gh_int_ = 0.0, hbar_int_ = 0.0;
  double f_prev_ = 0.0, gh_prev_ = 0.0, hbar_prev_ = 0.0, t_weights_ = 0.0;
  bool have_weights_ = false;

  Field u3_prev2_;
  VecField u_prev_;
  HField baru_prev_;
  int have_hist_ = 0;
  std::vector<WeqResidual> residuals_;
};

struct BootstrapStatus {
  std::optional<double> t_16;  // first monitor time with C |v^h| > 1/16
  std::optional<double> t_32;  // first monitor time with C |v^h| > 1/32
  double max_vh = 0.0;
};

// Scans the composite v^h column of a decomposition ledger against the
// continuation thresholds.  The 1/16 level is the working smallness bound;
// the 1/32 level is the margin the closed estimate is supposed to restore.
inline BootstrapStatus bootstrap_monitor(const NormLedger& led, double c_threshold) {
  if (!(c_threshold > 0.0))
    throw ConfigError("bootstrap monitor: threshold constant must be positive");
  const auto vh = led.column("vh_bt");
  const auto& ts = led.times();
  BootstrapStatus st;
  for (std::size_t i = 0; i < vh.size(); ++i) {
    st.max_vh = std::max(st.max_vh, vh[i]);
    const double scaled = c_threshold * vh[i];
    if (!st.t_32 && scaled > 1.0 / 32.0) st.t_32 = ts[i];
    if (!st.t_16 && scaled > 1.0 / 16.0) st.t_16 = ts[i];
  }
  return st;
}

}  // namespace anisons

#endif
