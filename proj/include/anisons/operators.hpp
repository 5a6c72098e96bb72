#ifndef ANISONS_OPERATORS_HPP
#define ANISONS_OPERATORS_HPP

// Spectral operators: derivatives, Fourier multipliers in |xi_h|, Leray
// projections, the horizontal heat semigroup, dealiasing and dealiased
// pointwise products.
//
// Zero-mode convention for negative-order horizontal symbols (1/|xi_h|,
// 1/|xi_h|^2): the xi_h = 0 column is annihilated and its L2 mass reported,
// mirroring the homogeneous-space setting where that column has no finite
// counterpart.

#include <functional>

#include "anisons/field.hpp"

namespace anisons {

inline Field spectral_derivative(const Field& a, int axis) {
  const Grid& g = a.grid();
  Field out(g);
  out.real = a.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double kh = axis == 0 ? g.k1(i1) : (axis == 1 ? g.k2(i2) : 0.0);
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const double k = axis == 2 ? g.k3(i3) : kh;
        out.at(i1, i2, i3) = cplx(0.0, k) * a.at(i1, i2, i3);
      }
    }
  return out;
}

// a |-> m(|xi_h|) a for m finite at 0; the zero column gets m(0).
template <class Fn>
Field horizontal_multiplier(const Field& a, Fn&& m) {
  const Grid& g = a.grid();
  Field out(g);
  out.real = a.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double w = m(std::sqrt(g.kh2(i1, i2)));
      for (int i3 = 0; i3 < g.nv; ++i3)
        out.at(i1, i2, i3) = w * a.at(i1, i2, i3);
    }
  return out;
}

struct NegativeSymbolResult {
  Field field;
  double dropped_mass = 0.0;  // L2 norm of the annihilated xi_h = 0 column
};

// a |-> m(|xi_h|) a for symbols singular at xi_h = 0 (e.g. 1/|xi_h|).
template <class Fn>
NegativeSymbolResult horizontal_multiplier_negative(const Field& a, Fn&& m) {
  const Grid& g = a.grid();
  NegativeSymbolResult r{Field(g), 0.0};
  r.field.real = a.real;
  double zero_sq = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double kh2 = g.kh2(i1, i2);
      if (kh2 == 0.0) {
        for (int i3 = 0; i3 < g.nv; ++i3) zero_sq += std::norm(a.at(i1, i2, i3));
        continue;
      }
      const double w = m(std::sqrt(kh2));
      for (int i3 = 0; i3 < g.nv; ++i3)
        r.field.at(i1, i2, i3) = w * a.at(i1, i2, i3);
    }
  r.dropped_mass = std::sqrt(zero_sq);
  return r;
}

// Lambda_h^{-1} d3 a  (the critical quantity of the smallness conditions)
inline NegativeSymbolResult lambda_h_inv(const Field& a) {
  return horizontal_multiplier_negative(a, [](double kh) { return 1.0 / kh; });
}

inline Field horizontal_heat(const Field& a, double t) {
  return horizontal_multiplier(a, [t](double kh) { return std::exp(-t * kh * kh); });
}

inline Field horizontal_laplacian(const Field& a) {
  return horizontal_multiplier(a, [](double kh) { return -kh * kh; });
}

// Full Leray projection; the xi = 0 mode is left untouched.
inline VecField leray_project(const VecField& u) {
  const Grid& g = u.grid();
  VecField out(g);
  out.c1.real = u.c1.real; out.c2.real = u.c2.real; out.c3.real = u.c3.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double k1 = g.k1(i1), k2 = g.k2(i2);
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const double k3 = g.k3(i3);
        const double kk = k1 * k1 + k2 * k2 + k3 * k3;
        const cplx a = u.c1.at(i1, i2, i3), b = u.c2.at(i1, i2, i3), c = u.c3.at(i1, i2, i3);
        if (kk == 0.0) {
          out.c1.at(i1, i2, i3) = a;
          out.c2.at(i1, i2, i3) = b;
          out.c3.at(i1, i2, i3) = c;
          continue;
        }
        const cplx dot = (k1 * a + k2 * b + k3 * c) / kk;
        out.c1.at(i1, i2, i3) = a - k1 * dot;
        out.c2.at(i1, i2, i3) = b - k2 * dot;
        out.c3.at(i1, i2, i3) = c - k3 * dot;
      }
    }
  return out;
}

// Horizontal Leray projection onto div_h-free pairs; xi_h = 0 columns pass
// through (they are already div_h-free).
inline HField leray_project_h(const HField& u) {
  const Grid& g = u.grid();
  HField out(g);
  out.c1.real = u.c1.real; out.c2.real = u.c2.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double k1 = g.k1(i1), k2 = g.k2(i2);
      const double kk = k1 * k1 + k2 * k2;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const cplx a = u.c1.at(i1, i2, i3), b = u.c2.at(i1, i2, i3);
        if (kk == 0.0) {
          out.c1.at(i1, i2, i3) = a;
          out.c2.at(i1, i2, i3) = b;
          continue;
        }
        const cplx dot = (k1 * a + k2 * b) / kk;
        out.c1.at(i1, i2, i3) = a - k1 * dot;
        out.c2.at(i1, i2, i3) = b - k2 * dot;
      }
    }
  return out;
}

inline double divergence_l2(const VecField& u) {
  const Grid& g = u.grid();
  double s = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const cplx d = cplx(0, g.k1(i1)) * u.c1.at(i1, i2, i3) +
                       cplx(0, g.k2(i2)) * u.c2.at(i1, i2, i3) +
                       cplx(0, g.k3(i3)) * u.c3.at(i1, i2, i3);
        s += std::norm(d);
      }
  return std::sqrt(s);
}

// Strict 2/3 dealiasing mask.  With horizontal_only the vertical axis is
// left alone (the layered 2-D system forms no vertical products).
inline void dealias(Field& a, bool horizontal_only = false) {
  const Grid& g = a.grid();
  const int kh = g.kept_h(), kv = g.kept_v();
  for (int i1 = 0; i1 < g.nh; ++i1) {
    const int f1 = std::abs(Grid::freq_of(i1, g.nh));
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const int f2 = std::abs(Grid::freq_of(i2, g.nh));
      const bool kill_h = f1 > kh || f2 > kh;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const int f3 = std::abs(Grid::freq_of(i3, g.nv));
        if (kill_h || (!horizontal_only && f3 > kv)) a.at(i1, i2, i3) = 0.0;
      }
    }
  }
}

inline void dealias(VecField& u, bool horizontal_only = false) {
  dealias(u.c1, horizontal_only);
  dealias(u.c2, horizontal_only);
  dealias(u.c3, horizontal_only);
}

inline void enforce_hermitian(Field& a) {
  const Grid& g = a.grid();
  for (int i1 = 0; i1 < g.nh; ++i1) {
    const int j1 = (g.nh - i1) % g.nh;
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const int j2 = (g.nh - i2) % g.nh;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const int j3 = (g.nv - i3) % g.nv;
        if (g.idx(i1, i2, i3) > g.idx(j1, j2, j3)) continue;
        const cplx avg = 0.5 * (a.at(i1, i2, i3) + std::conj(a.at(j1, j2, j3)));
        a.at(i1, i2, i3) = avg;
        a.at(j1, j2, j3) = std::conj(avg);
      }
    }
  }
}

inline double hermitian_defect(const Field& a) {
  const Grid& g = a.grid();
  double s = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1) {
    const int j1 = (g.nh - i1) % g.nh;
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const int j2 = (g.nh - i2) % g.nh;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const int j3 = (g.nv - i3) % g.nv;
        s = std::max(s, std::abs(a.at(i1, i2, i3) - std::conj(a.at(j1, j2, j3))));
      }
    }
  }
  return s;
}

enum class DealiasMode { none, full, horizontal };

// Pointwise product through physical space with the chosen dealias mask.
inline Field multiply(const Field& a, const Field& b, DealiasMode mode = DealiasMode::full) {
  const Grid& g = a.grid();
  if (!(g == b.grid())) throw ConfigError("multiply: grid mismatch");
  auto pa = a.to_physical();
  auto pb = b.to_physical();
  for (std::int64_t i = 0; i < std::int64_t(pa.size()); ++i) pa[i] *= pb[i];
  Field out = Field::from_physical(g, pa);
  out.real = a.real && b.real;
  if (mode == DealiasMode::full) dealias(out);
  if (mode == DealiasMode::horizontal) dealias(out, true);
  if (out.real) enforce_hermitian(out);
  return out;
}

}  // namespace anisons

#endif
