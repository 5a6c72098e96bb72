#ifndef ANISONS_LITTLEWOOD_PALEY_HPP
#define ANISONS_LITTLEWOOD_PALEY_HPP

// Anisotropic Littlewood-Paley blocks on the discrete torus.
//
// Vertical blocks Delta_l^v act by phi(2^{-l}|xi3|), horizontal blocks
// Delta_k^h by phi(2^{-k}|xi_h|); S-blocks use chi.  The homogeneous
// convention excludes the xi3 = 0 plane from every vertical block (phi(0)=0
// does it automatically); its mass is tracked separately as the "vertical
// mean" channel.  Shells that cannot touch any grid frequency are dropped
// from the ladder.

#include <map>

#include "anisons/cutoffs.hpp"
#include "anisons/operators.hpp"

namespace anisons {

class DyadicLadder {
 public:
  DyadicLadder(const Grid& g, CutoffPair cutoffs = CutoffPair())
      : grid_(g), cutoffs_(cutoffs) {
    build();
  }

  const Grid& grid() const { return grid_; }
  const CutoffPair& cutoffs() const { return cutoffs_; }

  int kmin() const { return kmin_; }
  int kmax() const { return kmax_; }
  int lmin() const { return lmin_; }
  int lmax() const { return lmax_; }
  int n_shells_h() const { return kmax_ - kmin_ + 1; }
  int n_shells_v() const { return lmax_ - lmin_ + 1; }

  // cached phi(2^{-k}|xi_h|) over the (i1,i2) plane / phi(2^{-l}|xi3|) per i3
  const std::vector<double>& phi_h(int k) const { return phi_h_.at(k - kmin_); }
  const std::vector<double>& phi_v(int l) const { return phi_v_.at(l - lmin_); }

  // chi tables for arbitrary index (lazily cached)
  const std::vector<double>& chi_h(int k) const {
    auto it = chi_h_.find(k);
    if (it != chi_h_.end()) return it->second;
    std::vector<double> tab(std::size_t(grid_.nh) * grid_.nh);
    for (int i1 = 0; i1 < grid_.nh; ++i1)
      for (int i2 = 0; i2 < grid_.nh; ++i2)
        tab[std::size_t(i1) * grid_.nh + i2] =
            cutoffs_.chi_at(k, std::sqrt(grid_.kh2(i1, i2)));
    return chi_h_.emplace(k, std::move(tab)).first->second;
  }
  const std::vector<double>& chi_v(int l) const {
    auto it = chi_v_.find(l);
    if (it != chi_v_.end()) return it->second;
    std::vector<double> tab(grid_.nv);
    for (int i3 = 0; i3 < grid_.nv; ++i3)
      tab[i3] = cutoffs_.chi_at(l, grid_.k3(i3));
    return chi_v_.emplace(l, std::move(tab)).first->second;
  }

 private:
  void build() {
    const Grid& g = grid_;
    // vertical shells: scan a wide candidate range, keep those whose support
    // meets a nonzero grid frequency
    const double kv_min = two_pi / g.Lv;
    const double kv_max = (g.nv / 2) * kv_min;
    const double kh_min = two_pi / g.Lh;
    const double kh_max = std::sqrt(2.0) * (g.nh / 2) * kh_min;
    auto scan = [&](double fmin, double fmax, auto&& any_support, int& lo, int& hi,
                    std::vector<std::vector<double>>& tables, auto&& fill) {
      lo = int(std::floor(std::log2(fmin * 3.0 / 8.0))) - 1;
      hi = int(std::ceil(std::log2(fmax * 4.0 / 3.0))) + 1;
      while (lo <= hi && !any_support(lo)) ++lo;
      while (hi >= lo && !any_support(hi)) --hi;
      if (lo > hi) throw ConfigError("dyadic ladder: no admissible shells");
      for (int j = lo; j <= hi; ++j) tables.push_back(fill(j));
    };
    auto any_v = [&](int l) {
      for (int i3 = 0; i3 < g.nv; ++i3)
        if (cutoffs_.phi_at(l, g.k3(i3)) > 0.0) return true;
      return false;
    };
    auto fill_v = [&](int l) {
      std::vector<double> tab(g.nv);
      for (int i3 = 0; i3 < g.nv; ++i3) tab[i3] = cutoffs_.phi_at(l, g.k3(i3));
      return tab;
    };
    scan(kv_min, kv_max, any_v, lmin_, lmax_, phi_v_, fill_v);
    auto any_h = [&](int k) {
      for (int i1 = 0; i1 < g.nh; ++i1)
        for (int i2 = 0; i2 < g.nh; ++i2)
          if (cutoffs_.phi_at(k, std::sqrt(g.kh2(i1, i2))) > 0.0) return true;
      return false;
    };
    auto fill_h = [&](int k) {
      std::vector<double> tab(std::size_t(g.nh) * g.nh);
      for (int i1 = 0; i1 < g.nh; ++i1)
        for (int i2 = 0; i2 < g.nh; ++i2)
          tab[std::size_t(i1) * g.nh + i2] =
              cutoffs_.phi_at(k, std::sqrt(g.kh2(i1, i2)));
      return tab;
    };
    scan(kh_min, kh_max, any_h, kmin_, kmax_, phi_h_, fill_h);

    // partition of unity must cover every nonzero grid frequency
    for (int i3 = 0; i3 < g.nv; ++i3) {
      if (g.k3(i3) == 0.0) continue;
      double s = 0.0;
      for (int l = lmin_; l <= lmax_; ++l) s += phi_v(l)[i3];
      if (std::abs(s - 1.0) > 1e-12)
        throw std::logic_error("vertical ladder fails the partition of unity");
    }
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2) {
        if (g.kh2(i1, i2) == 0.0) continue;
        double s = 0.0;
        for (int k = kmin_; k <= kmax_; ++k)
          s += phi_h(k)[std::size_t(i1) * g.nh + i2];
        if (std::abs(s - 1.0) > 1e-12)
          throw std::logic_error("horizontal ladder fails the partition of unity");
      }
  }

  Grid grid_;
  CutoffPair cutoffs_;
  int kmin_ = 0, kmax_ = -1, lmin_ = 0, lmax_ = -1;
  std::vector<std::vector<double>> phi_h_, phi_v_;
  mutable std::map<int, std::vector<double>> chi_h_, chi_v_;
};

namespace detail {
template <class Tab>
Field apply_vertical_table(const Field& a, const Tab& tab) {
  const Grid& g = a.grid();
  Field out(g);
  out.real = a.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2)
      for (int i3 = 0; i3 < g.nv; ++i3)
        out.at(i1, i2, i3) = tab[i3] * a.at(i1, i2, i3);
  return out;
}
template <class Tab>
Field apply_horizontal_table(const Field& a, const Tab& tab) {
  const Grid& g = a.grid();
  Field out(g);
  out.real = a.real;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double w = tab[std::size_t(i1) * g.nh + i2];
      for (int i3 = 0; i3 < g.nv; ++i3)
        out.at(i1, i2, i3) = w * a.at(i1, i2, i3);
    }
  return out;
}
}  // namespace detail

inline Field delta_v(const DyadicLadder& lad, const Field& a, int l) {
  if (l < lad.lmin() || l > lad.lmax()) {
    Field z(a.grid());
    z.real = a.real;
    return z;
  }
  return detail::apply_vertical_table(a, lad.phi_v(l));
}

inline Field delta_h(const DyadicLadder& lad, const Field& a, int k) {
  if (k < lad.kmin() || k > lad.kmax()) {
    Field z(a.grid());
    z.real = a.real;
    return z;
  }
  return detail::apply_horizontal_table(a, lad.phi_h(k));
}

inline Field s_v(const DyadicLadder& lad, const Field& a, int l) {
  return detail::apply_vertical_table(a, lad.chi_v(l));
}

inline Field s_h(const DyadicLadder& lad, const Field& a, int k) {
  return detail::apply_horizontal_table(a, lad.chi_h(k));
}

// L2 mass sitting on the xi3 = 0 plane (outside every vertical block)
inline double vertical_mean_mass(const Field& a) {
  const Grid& g = a.grid();
  double s = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) s += std::norm(a.at(i1, i2, 0));
  return std::sqrt(s);
}

struct LhHhSplit {
  Field lh;  // sum_l S^h_{l-1} Delta_l^v a
  Field hh;  // sum_l sum_{k >= l-1} Delta_k^h Delta_l^v a
};

// Horizontal low/high decomposition relative to the vertical scale.
// lh + hh = a on every mode with xi3 != 0 (the chi + sum phi identity makes
// the horizontal factors sum to 1), so the split reconstructs a minus its
// vertical mean.
inline LhHhSplit split_lh_hh(const DyadicLadder& lad, const Field& a) {
  const Grid& g = a.grid();
  LhHhSplit r{Field(g), Field(g)};
  r.lh.real = r.hh.real = a.real;
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) {
    const auto& pv = lad.phi_v(l);
    const auto& ch = lad.chi_h(l - 1);
    for (int i1 = 0; i1 < g.nh; ++i1)
      for (int i2 = 0; i2 < g.nh; ++i2) {
        const double c = ch[std::size_t(i1) * g.nh + i2];
        for (int i3 = 0; i3 < g.nv; ++i3) {
          if (pv[i3] == 0.0) continue;
          const cplx v = pv[i3] * a.at(i1, i2, i3);
          r.lh.at(i1, i2, i3) += c * v;
          r.hh.at(i1, i2, i3) += (1.0 - c) * v;
        }
      }
  }
  return r;
}

struct BonyDecomposition {
  Field paraproduct;  // T_a b = sum_l S^v_{l-1} a . Delta_l^v b
  Field remainder;    // R(a,b) = sum_l Delta_l^v a . S^v_{l+2} b
};

// Vertical Bony decomposition with dealiased physical products.  T + R
// reproduces the dealiased product a.b up to the product of the two
// vertical means (the only block pairing neither sum can see), so it is
// exact whenever a or b is vertical-mean-free.
inline BonyDecomposition bony_v(const DyadicLadder& lad, const Field& a, const Field& b,
                                DealiasMode mode = DealiasMode::full) {
  const Grid& g = a.grid();
  BonyDecomposition r{Field(g), Field(g)};
  r.paraproduct.real = r.remainder.real = a.real && b.real;
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) {
    r.paraproduct += multiply(s_v(lad, a, l - 1), delta_v(lad, b, l), mode);
    r.remainder += multiply(delta_v(lad, a, l), s_v(lad, b, l + 2), mode);
  }
  return r;
}

}  // namespace anisons

#endif
