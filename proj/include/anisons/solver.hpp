#pragma once

// Time integration. Both systems share the same structure: horizontal
// diffusion handled exactly by the integrating factor exp(-t |xi_h|^2),
// advection by a pseudo-spectral RK4 with the nonlinear output masked by the
// strict 2/3 rule. The state itself is never truncated, so initial data may
// carry frequencies above the mask; a band check at construction guarantees
// that aliased images of state-mode products always land inside the masked
// region and can never fold back onto retained modes.
//
// The nonlinear evaluations are the cost center, so real states use packed
// transforms (two real fields per complex FFT) and fuse divergence, mask and
// projection into a single sweep over modes.

#include <cmath>
#include <string>
#include <vector>

#include "anisons/operators.hpp"

namespace anisons {

struct SolverConfig {
  double dt = 1e-3;
  double cfl_safety = 0.5;  // advective Courant number the run must stay under
};

struct Advective {
  double rate = 0.0;  // sum of max|u_i| / dx_i over the advecting directions
  double vmax = 0.0;
};

namespace detail {

struct StateBand {
  int h = 0;
  int v = 0;
};

inline void widen_band(const Field& a, StateBand& band) {
  const Grid& g = a.grid();
  double peak = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) peak = std::max(peak, std::abs(a.data()[i]));
  if (peak == 0.0) return;
  const double floor = 1e-14 * peak;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3)
        if (std::abs(a.at(i1, i2, i3)) >= floor) {
          band.h = std::max({band.h, std::abs(Grid::freq_of(i1, g.nh)),
                             std::abs(Grid::freq_of(i2, g.nh))});
          band.v = std::max(band.v, std::abs(Grid::freq_of(i3, g.nv)));
        }
}

// Quadratic products of modes within |k| <= M alias onto |k| >= n - 2M; the
// output mask keeps |k| <= K, so n - 2M > K makes the masked product exact.
inline void check_axis_band(int n, int m, const char* axis) {
  const int kept = Grid::dealias_limit(n);
  const int effective = std::max(m, kept);  // the mask itself feeds modes up to K back
  if (n - 2 * effective <= kept)
    throw ConfigError(std::string("state band |k_") + axis + "| <= " + std::to_string(m) +
                      " on n = " + std::to_string(n) +
                      " lets quadratic aliases reach the retained modes");
}

// Per-timestep tables of exp(-dt |xi_h|^2) and exp(-dt/2 |xi_h|^2).
class HeatTable {
 public:
  HeatTable(const Grid& g, double dt) : nh_(g.nh), full_(g.nh * g.nh), half_(g.nh * g.nh) {
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2) {
        const double kk = g.kh2(i1, i2);
        full_[i1 * g.nh + i2] = std::exp(-dt * kk);
        half_[i1 * g.nh + i2] = std::exp(-0.5 * dt * kk);
      }
  }

  void apply(Field& a, bool half) const {
    const Grid& g = a.grid();
    const std::vector<double>& t = half ? half_ : full_;
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2) {
        const double f = t[i1 * nh_ + i2];
        cplx* col = a.data() + g.idx(i1, i2, 0);
        for (int i3 = 0; i3 < g.nv; ++i3) col[i3] *= f;
      }
  }

  template <class State>
  void apply_state(State& u, bool half) const {
    for (int c = 0; c < State::ncomp; ++c) apply(u[c], half);
  }

 private:
  int nh_;
  std::vector<double> full_, half_;
};

template <class State>
void axpy(State& y, double a, const State& x) {
  for (int c = 0; c < State::ncomp; ++c) {
    cplx* yd = y[c].data();
    const cplx* xd = x[c].data();
    const std::int64_t n = y[c].size();
    for (std::int64_t i = 0; i < n; ++i) yd[i] += a * xd[i];
  }
}

inline Field physical_product(const Grid& g, const AlignedVector<cplx>& a,
                              const AlignedVector<cplx>& b) {
  AlignedVector<cplx> p(g.size());
  const std::int64_t n = g.size();
  for (std::int64_t i = 0; i < n; ++i) p[i] = a[i] * b[i];
  return Field::from_physical(g, p);
}

// Two real-coefficient fields share one backward transform: the physicals of
// a and b are the real and imaginary parts of the transform of a + i b.
inline void to_phys_pair(const Field& a, const Field& b, AlignedVector<double>& pa,
                         AlignedVector<double>& pb) {
  const Grid& g = a.grid();
  const std::int64_t n = g.size();
  AlignedVector<cplx> c(n), p(n);
  const cplx* ad = a.data();
  const cplx* bd = b.data();
  for (std::int64_t i = 0; i < n; ++i)
    c[i] = cplx(ad[i].real() - bd[i].imag(), ad[i].imag() + bd[i].real());
  fft::backward(g, c.data(), p.data());
  pa.resize(std::size_t(n));
  pb.resize(std::size_t(n));
  for (std::int64_t i = 0; i < n; ++i) {
    pa[i] = p[i].real();
    pb[i] = p[i].imag();
  }
}

inline void to_phys_real(const Field& a, AlignedVector<double>& pa) {
  const auto p = a.to_physical();
  pa.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) pa[i] = p[i].real();
}

// Forward transform of ta + i tb for real arrays; the mirror average
// separates the two spectra and leaves both exactly Hermitian.
inline void from_phys_pair(const Grid& g, const AlignedVector<double>& ta,
                           const AlignedVector<double>& tb, Field& A, Field& B) {
  const std::int64_t n = g.size();
  AlignedVector<cplx> c(n), C(n);
  for (std::int64_t i = 0; i < n; ++i) c[i] = cplx(ta[i], tb[i]);
  fft::forward(g, c.data(), C.data());
  cplx* Ad = A.data();
  cplx* Bd = B.data();
  for (int i1 = 0; i1 < g.nh; ++i1) {
    const int m1 = i1 == 0 ? 0 : g.nh - i1;
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const int m2 = i2 == 0 ? 0 : g.nh - i2;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const int m3 = i3 == 0 ? 0 : g.nv - i3;
        const cplx cj = C[g.idx(i1, i2, i3)];
        const cplx cm = std::conj(C[g.idx(m1, m2, m3)]);
        const std::int64_t id = g.idx(i1, i2, i3);
        Ad[id] = 0.5 * (cj + cm);
        const cplx d = cj - cm;
        Bd[id] = cplx(0.5 * d.imag(), -0.5 * d.real());
      }
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Nonlinear terms, exposed for direct testing.

// -P div(u (x) u) with the full 3-D output mask.  Real states take a packed
// route: paired fields ride single complex transforms, the product spectra
// come out exactly Hermitian, and the divergence, output mask and Leray
// projection run in one sweep.  max_abs, when given, receives the physical
// sup of each component (it comes free with the transforms).
inline VecField ans_nonlinear(const VecField& u, double* max_abs = nullptr) {
  const Grid& g = u.c1.grid();
  if (u.c1.real && u.c2.real && u.c3.real) {
    const std::int64_t n = g.size();
    AlignedVector<double> p1, p2, p3;
    detail::to_phys_pair(u.c1, u.c2, p1, p2);
    detail::to_phys_real(u.c3, p3);
    AlignedVector<double> w11(n), w12(n), w13(n), w22(n), w23(n), w33(n);
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double a = p1[i], b = p2[i], c = p3[i];
      m1 = std::max(m1, std::abs(a));
      m2 = std::max(m2, std::abs(b));
      m3 = std::max(m3, std::abs(c));
      w11[i] = a * a;
      w12[i] = a * b;
      w13[i] = a * c;
      w22[i] = b * b;
      w23[i] = b * c;
      w33[i] = c * c;
    }
    if (max_abs) {
      max_abs[0] = m1;
      max_abs[1] = m2;
      max_abs[2] = m3;
    }
    Field t11(g), t12(g), t13(g), t22(g), t23(g), t33(g);
    detail::from_phys_pair(g, w11, w12, t11, t12);
    detail::from_phys_pair(g, w13, w22, t13, t22);
    detail::from_phys_pair(g, w23, w33, t23, t33);
    VecField out(g);
    const int kh = g.kept_h(), kv = g.kept_v();
    const cplx *q11 = t11.data(), *q12 = t12.data(), *q13 = t13.data();
    const cplx *q22 = t22.data(), *q23 = t23.data(), *q33 = t33.data();
    cplx *o1 = out.c1.data(), *o2 = out.c2.data(), *o3 = out.c3.data();
    for (int i1 = 0; i1 < g.nh; ++i1) {
      const double k1 = g.k1(i1);
      const bool kill1 = std::abs(Grid::freq_of(i1, g.nh)) > kh;
      for (int i2 = 0; i2 < g.nh; ++i2) {
        const double k2 = g.k2(i2);
        const bool kill_h = kill1 || std::abs(Grid::freq_of(i2, g.nh)) > kh;
        for (int i3 = 0; i3 < g.nv; ++i3) {
          const std::int64_t id = g.idx(i1, i2, i3);
          if (kill_h || std::abs(Grid::freq_of(i3, g.nv)) > kv) {
            o1[id] = o2[id] = o3[id] = 0.0;
            continue;
          }
          const double k3 = g.k3(i3);
          const cplx n1 = cplx(0.0, -1.0) * (k1 * q11[id] + k2 * q12[id] + k3 * q13[id]);
          const cplx n2 = cplx(0.0, -1.0) * (k1 * q12[id] + k2 * q22[id] + k3 * q23[id]);
          const cplx n3 = cplx(0.0, -1.0) * (k1 * q13[id] + k2 * q23[id] + k3 * q33[id]);
          const double kk = k1 * k1 + k2 * k2 + k3 * k3;
          if (kk == 0.0) {
            o1[id] = n1;
            o2[id] = n2;
            o3[id] = n3;
            continue;
          }
          const cplx dot = (k1 * n1 + k2 * n2 + k3 * n3) / kk;
          o1[id] = n1 - k1 * dot;
          o2[id] = n2 - k2 * dot;
          o3[id] = n3 - k3 * dot;
        }
      }
    }
    return out;
  }

  AlignedVector<cplx> p1 = u.c1.to_physical();
  AlignedVector<cplx> p2 = u.c2.to_physical();
  AlignedVector<cplx> p3 = u.c3.to_physical();
  if (max_abs) {
    max_abs[0] = max_abs[1] = max_abs[2] = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      max_abs[0] = std::max(max_abs[0], std::abs(p1[i]));
      max_abs[1] = std::max(max_abs[1], std::abs(p2[i]));
      max_abs[2] = std::max(max_abs[2], std::abs(p3[i]));
    }
  }
  Field t11 = detail::physical_product(g, p1, p1);
  Field t12 = detail::physical_product(g, p1, p2);
  Field t13 = detail::physical_product(g, p1, p3);
  Field t22 = detail::physical_product(g, p2, p2);
  Field t23 = detail::physical_product(g, p2, p3);
  Field t33 = detail::physical_product(g, p3, p3);
  for (Field* t : {&t11, &t12, &t13, &t22, &t23, &t33}) dealias(*t);
  VecField n(g);
  n.c1 = spectral_derivative(t11, 0) + spectral_derivative(t12, 1) + spectral_derivative(t13, 2);
  n.c2 = spectral_derivative(t12, 0) + spectral_derivative(t22, 1) + spectral_derivative(t23, 2);
  n.c3 = spectral_derivative(t13, 0) + spectral_derivative(t23, 1) + spectral_derivative(t33, 2);
  n *= -1.0;
  n = leray_project(n);
  for (int c = 0; c < 3; ++c) n[c].real = false;
  return n;
}

// -P_h div_h(u (x) u) per layer, horizontal mask only; the same packed route
// as the 3-D term for real states
inline HField layered_nonlinear(const HField& u, double* max_abs = nullptr) {
  const Grid& g = u.c1.grid();
  if (u.c1.real && u.c2.real) {
    const std::int64_t n = g.size();
    AlignedVector<double> p1, p2;
    detail::to_phys_pair(u.c1, u.c2, p1, p2);
    AlignedVector<double> w11(n), w12(n), w22(n);
    double m1 = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double a = p1[i], b = p2[i];
      m1 = std::max(m1, std::abs(a));
      m2 = std::max(m2, std::abs(b));
      w11[i] = a * a;
      w12[i] = a * b;
      w22[i] = b * b;
    }
    if (max_abs) {
      max_abs[0] = m1;
      max_abs[1] = m2;
    }
    Field t11(g), t12(g), t22(g);
    detail::from_phys_pair(g, w11, w12, t11, t12);
    {
      AlignedVector<cplx> c(n);
      for (std::int64_t i = 0; i < n; ++i) c[i] = w22[i];
      t22 = Field::from_physical(g, c);
      enforce_hermitian(t22);
    }
    HField out(g);
    const int kh = g.kept_h();
    const cplx *q11 = t11.data(), *q12 = t12.data(), *q22 = t22.data();
    cplx *o1 = out.c1.data(), *o2 = out.c2.data();
    for (int i1 = 0; i1 < g.nh; ++i1) {
      const double k1 = g.k1(i1);
      const bool kill1 = std::abs(Grid::freq_of(i1, g.nh)) > kh;
      for (int i2 = 0; i2 < g.nh; ++i2) {
        const double k2 = g.k2(i2);
        const double kk = k1 * k1 + k2 * k2;
        const bool kill_h = kill1 || std::abs(Grid::freq_of(i2, g.nh)) > kh;
        for (int i3 = 0; i3 < g.nv; ++i3) {
          const std::int64_t id = g.idx(i1, i2, i3);
          if (kill_h) {
            o1[id] = o2[id] = 0.0;
            continue;
          }
          const cplx n1 = cplx(0.0, -1.0) * (k1 * q11[id] + k2 * q12[id]);
          const cplx n2 = cplx(0.0, -1.0) * (k1 * q12[id] + k2 * q22[id]);
          if (kk == 0.0) {
            o1[id] = n1;
            o2[id] = n2;
            continue;
          }
          const cplx dot = (k1 * n1 + k2 * n2) / kk;
          o1[id] = n1 - k1 * dot;
          o2[id] = n2 - k2 * dot;
        }
      }
    }
    return out;
  }

  AlignedVector<cplx> p1 = u.c1.to_physical();
  AlignedVector<cplx> p2 = u.c2.to_physical();
  if (max_abs) {
    max_abs[0] = max_abs[1] = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      max_abs[0] = std::max(max_abs[0], std::abs(p1[i]));
      max_abs[1] = std::max(max_abs[1], std::abs(p2[i]));
    }
  }
  Field t11 = detail::physical_product(g, p1, p1);
  Field t12 = detail::physical_product(g, p1, p2);
  Field t22 = detail::physical_product(g, p2, p2);
  for (Field* t : {&t11, &t12, &t22}) dealias(*t, /*horizontal_only=*/true);
  HField n(g);
  n.c1 = spectral_derivative(t11, 0) + spectral_derivative(t12, 1);
  n.c2 = spectral_derivative(t12, 0) + spectral_derivative(t22, 1);
  n.c1 *= -1.0;
  n.c2 *= -1.0;
  n = leray_project_h(n);
  n.c1.real = n.c2.real = false;
  return n;
}

// ---------------------------------------------------------------------------
// Instantaneous dissipation rates d/dt ||u||^2 = -2 ||grad_h u||^2.

inline double horizontal_dissipation_rate(const VecField& u) {
  const Grid& g = u.c1.grid();
  double s = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double kk = g.kh2(i1, i2);
      if (kk == 0.0) continue;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const std::size_t id = g.idx(i1, i2, i3);
        s += kk * (std::norm(u.c1.data()[id]) + std::norm(u.c2.data()[id]) +
                   std::norm(u.c3.data()[id]));
      }
    }
  return 2.0 * s;
}

// Per-layer quantities for the layered system, via the mixed representation
// (spectral in x_h, physical in x3). Entry i3 belongs to layer x3 = i3 dx_v.
inline std::vector<double> layer_l2h_sq(const Field& a) {
  const Grid& g = a.grid();
  AlignedVector<cplx> mixed(g.size());
  fft::vertical(g, FFTW_BACKWARD, a.data(), mixed.data());
  std::vector<double> out(g.nv, 0.0);
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3) out[i3] += std::norm(mixed[g.idx(i1, i2, i3)]);
  return out;
}

inline std::vector<double> layer_energy(const HField& u) {
  std::vector<double> e = layer_l2h_sq(u.c1), e2 = layer_l2h_sq(u.c2);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
  return e;
}

inline std::vector<double> layer_dissipation_rate(const HField& u) {
  const Grid& g = u.c1.grid();
  std::vector<double> out(g.nv, 0.0);
  for (const Field* comp : {&u.c1, &u.c2}) {
    AlignedVector<cplx> mixed(g.size());
    fft::vertical(g, FFTW_BACKWARD, comp->data(), mixed.data());
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2) {
        const double kk = g.kh2(i1, i2);
        if (kk == 0.0) continue;
        for (int i3 = 0; i3 < g.nv; ++i3)
          out[i3] += 2.0 * kk * std::norm(mixed[g.idx(i1, i2, i3)]);
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integrating-factor RK4 stepper, shared by the 3-D system and the layered
// 2-D system through a policy type.
//
// One step: with E = exp(h L_h), E2 = exp(h/2 L_h),
//   k1 = N(u),  k2 = N(E2 (u + h/2 k1)),  k3 = N(E2 u + h/2 k2),
//   k4 = N(E u + h E2 k3),
//   u <- E u + h/6 (E k1 + 2 E2 k2 + 2 E2 k3 + k4).
// The dissipation ledger integrates its rate over the same stage fields with
// the same tableau, keeping the energy-balance error at the scheme's order
// instead of the trapezoid's.

template <class Policy>
class IfRk4Stepper {
 public:
  using State = typename Policy::State;

  IfRk4Stepper(const State& u0, const SolverConfig& cfg)
      : grid_(u0[0].grid()), cfg_(cfg), u_(u0), heat_(grid_, cfg.dt),
        diss_(Policy::dissipation_rate(u0).size(), 0.0) {
    if (!(cfg.dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (!(cfg.cfl_safety > 0.0)) throw ConfigError("solver: cfl_safety must be positive");
    Policy::validate_initial(u_);
    detail::StateBand band;
    for (int c = 0; c < State::ncomp; ++c) detail::widen_band(u_[c], band);
    detail::check_axis_band(grid_.nh, band.h, "h");
    if (Policy::mask_vertical) detail::check_axis_band(grid_.nv, band.v, "v");
  }

  void step() {
    const double h = cfg_.dt;
    double vmax[State::ncomp];
    State k1 = Policy::nonlinear(u_, vmax);
    const Advective adv = Policy::advective(vmax, grid_);
    if (h * adv.rate > cfg_.cfl_safety)
      throw SolverAbort("advective CFL exceeded at t = " + std::to_string(time()) +
                        ": dt * rate = " + std::to_string(h * adv.rate) + " > " +
                        std::to_string(cfg_.cfl_safety) + ", max |u| = " +
                        std::to_string(adv.vmax));

    std::vector<double> d1 = Policy::dissipation_rate(u_);

    State a2 = u_;
    detail::axpy(a2, 0.5 * h, k1);
    heat_.apply_state(a2, true);
    State k2 = Policy::nonlinear(a2);

    State eu2 = u_;
    heat_.apply_state(eu2, true);
    State a3 = eu2;
    detail::axpy(a3, 0.5 * h, k2);
    State k3 = Policy::nonlinear(a3);

    State eu = u_;
    heat_.apply_state(eu, false);
    State e2k3 = k3;
    heat_.apply_state(e2k3, true);
    State a4 = eu;
    detail::axpy(a4, h, e2k3);
    State k4 = Policy::nonlinear(a4);

    heat_.apply_state(k1, false);
    heat_.apply_state(k2, true);
    u_ = eu;
    detail::axpy(u_, h / 6.0, k1);
    detail::axpy(u_, h / 3.0, k2);
    detail::axpy(u_, h / 3.0, e2k3);
    detail::axpy(u_, h / 6.0, k4);
    Policy::project(u_);

    std::vector<double> d2 = Policy::dissipation_rate(a2);
    std::vector<double> d3 = Policy::dissipation_rate(a3);
    std::vector<double> d4 = Policy::dissipation_rate(a4);
    for (std::size_t i = 0; i < diss_.size(); ++i)
      diss_[i] += h / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);

    ++steps_;
  }

  // advance to time T, which must sit on the step lattice
  template <class Monitor>
  void run(double T, Monitor&& monitor) {
    const double n_real = (T - time()) / cfg_.dt;
    const long n = std::lround(n_real);
    if (n < 0 || std::abs(n_real - double(n)) > 1e-9)
      throw ConfigError("solver: horizon is not an integer number of steps from here");
    for (long i = 0; i < n; ++i) {
      step();
      monitor(*this);
    }
  }
  void run(double T) {
    run(T, [](const IfRk4Stepper&) {});
  }

  const State& state() const { return u_; }
  double time() const { return steps_ * cfg_.dt; }
  long steps() const { return steps_; }
  const Grid& grid() const { return grid_; }

  // integral of the dissipation rate over [0, time()]; one entry for the 3-D
  // system, one entry per layer for the layered system
  const std::vector<double>& dissipation_integral() const { return diss_; }

 private:
  Grid grid_;
  SolverConfig cfg_;
  State u_;
  detail::HeatTable heat_;
  std::vector<double> diss_;
  long steps_ = 0;
};

struct AnsPolicy {
  using State = VecField;
  static constexpr bool mask_vertical = true;

  static State nonlinear(const State& u, double* max_abs = nullptr) {
    return ans_nonlinear(u, max_abs);
  }
  static void project(State& u) { u = leray_project(u); }
  static std::vector<double> dissipation_rate(const State& u) {
    return {horizontal_dissipation_rate(u)};
  }
  static Advective advective(const double* m, const Grid& g) {
    return {(m[0] + m[1]) / g.dx_h() + m[2] / g.dx_v(), std::max({m[0], m[1], m[2]})};
  }
  static void validate_initial(const State& u) {
    const double n = l2(u);
    if (n > 0.0 && divergence_l2(u) > 1e-10 * n)
      throw ConfigError("solver: initial velocity is not divergence-free");
  }
};

struct LayeredPolicy {
  using State = HField;
  static constexpr bool mask_vertical = false;

  static State nonlinear(const State& u, double* max_abs = nullptr) {
    return layered_nonlinear(u, max_abs);
  }
  static void project(State& u) { u = leray_project_h(u); }
  static std::vector<double> dissipation_rate(const State& u) {
    return layer_dissipation_rate(u);
  }
  static Advective advective(const double* m, const Grid& g) {
    return {(m[0] + m[1]) / g.dx_h(), std::max(m[0], m[1])};
  }
  static void validate_initial(const State& u) {
    Field d = spectral_derivative(u.c1, 0);
    d += spectral_derivative(u.c2, 1);
    const double n = l2(u);
    if (n > 0.0 && l2(d) > 1e-10 * n)
      throw ConfigError("solver: initial layered velocity has nonzero div_h");
  }
};

using AnsStepper = IfRk4Stepper<AnsPolicy>;
using LayeredStepper = IfRk4Stepper<LayeredPolicy>;

}  // namespace anisons
