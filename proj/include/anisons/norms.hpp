#ifndef ANISONS_NORMS_HPP
#define ANISONS_NORMS_HPP

// Anisotropic norms.  Everything is volume-normalized: the constant field 1
// has unit norm in every L^p here, and L2 norms are plain l2 sums of
// coefficients.  The mixed norm L4_h(L2_v) takes the vertical L2 per
// horizontal grid point first (of the physically materialized block), then
// the horizontal L4 of that profile.
//
// Vector fields enter blockwise: the block of a vector field is measured by
// the euclidean norm over components inside the inner L2.

#include <span>

#include "anisons/littlewood_paley.hpp"

namespace anisons {

// ---- anisotropic Sobolev H^{s,s'} --------------------------------------
// sum |xi_h|^{2s} |xi3|^{2s'} |a^|^2.  Modes where a negative (or, for s'
// any nonzero) power is undefined are excluded, matching the homogeneous
// convention; with s = 0 the xi_h = 0 column is included (0^0 = 1).
inline double norm_H(const Field& a, double s, double sp) {
  const Grid& g = a.grid();
  double acc = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      const double kh2 = g.kh2(i1, i2);
      double wh;
      if (kh2 > 0.0)
        wh = s == 0.0 ? 1.0 : std::pow(kh2, s);
      else if (s == 0.0)
        wh = 1.0;
      else if (s > 0.0)
        wh = 0.0;
      else
        continue;  // negative power of |xi_h| = 0: excluded
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const double k3 = std::abs(g.k3(i3));
        double wv;
        if (k3 > 0.0)
          wv = sp == 0.0 ? 1.0 : std::pow(k3 * k3, sp);
        else if (sp == 0.0)
          wv = 1.0;
        else if (sp > 0.0)
          wv = 0.0;
        else
          continue;
        acc += wh * wv * std::norm(a.at(i1, i2, i3));
      }
    }
  return std::sqrt(acc);
}

// ---- mixed L4_h(L2_v) ----------------------------------------------------
// of the physically materialized (multi-component) field
inline double l4h_l2v(std::span<const Field* const> comps) {
  const Grid& g = comps[0]->grid();
  std::vector<AlignedVector<cplx>> phys;
  phys.reserve(comps.size());
  for (const Field* f : comps) phys.push_back(f->to_physical());
  double acc = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      double v2 = 0.0;  // vertical mean square at this horizontal point
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const std::int64_t id = g.idx(i1, i2, i3);
        for (const auto& p : phys) v2 += std::norm(p[id]);
      }
      v2 /= g.nv;
      acc += v2 * v2;  // (sqrt v2)^4
    }
  acc /= double(g.nh) * g.nh;
  return std::pow(acc, 0.25);
}

inline double l4h_l2v(const Field& a) {
  const Field* p[] = {&a};
  return l4h_l2v(std::span<const Field* const>(p, 1));
}

// sup over horizontal grid points of the vertical L2 profile
inline double linfh_l2v(std::span<const Field* const> comps) {
  const Grid& g = comps[0]->grid();
  std::vector<AlignedVector<cplx>> phys;
  phys.reserve(comps.size());
  for (const Field* f : comps) phys.push_back(f->to_physical());
  double best = 0.0;
  for (int i1 = 0; i1 < g.nh; ++i1)
    for (int i2 = 0; i2 < g.nh; ++i2) {
      double v2 = 0.0;
      for (int i3 = 0; i3 < g.nv; ++i3) {
        const std::int64_t id = g.idx(i1, i2, i3);
        for (const auto& p : phys) v2 += std::norm(p[id]);
      }
      best = std::max(best, v2 / g.nv);
    }
  return std::sqrt(best);
}

inline double linfh_l2v(const Field& a) {
  const Field* p[] = {&a};
  return linfh_l2v(std::span<const Field* const>(p, 1));
}

// ---- per-shell building blocks -------------------------------------------
// components: 1..3 fields measured jointly (euclidean over components)

// ||Delta_l^v a||_{L2} per ladder shell
inline std::vector<double> shells_v_l2(const DyadicLadder& lad,
                                       std::span<const Field* const> comps) {
  const Grid& g = lad.grid();
  std::vector<double> out(lad.n_shells_v(), 0.0);
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) {
    const auto& pv = lad.phi_v(l);
    double s = 0.0;
    for (const Field* f : comps)
      for (int i1 = 0; i1 < g.nh; ++i1)
        for (int i2 = 0; i2 < g.nh; ++i2)
          for (int i3 = 0; i3 < g.nv; ++i3) {
            if (pv[i3] == 0.0) continue;
            s += pv[i3] * pv[i3] * std::norm(f->at(i1, i2, i3));
          }
    out[l - lad.lmin()] = std::sqrt(s);
  }
  return out;
}

// ||Delta_l^v a||_{L4_h(L2_v)} per ladder shell
inline std::vector<double> shells_v_l4h(const DyadicLadder& lad,
                                        std::span<const Field* const> comps) {
  std::vector<double> out(lad.n_shells_v(), 0.0);
  std::vector<Field> blocks(comps.size());
  std::vector<const Field*> ptrs(comps.size());
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) {
    for (std::size_t c = 0; c < comps.size(); ++c) {
      blocks[c] = delta_v(lad, *comps[c], l);
      ptrs[c] = &blocks[c];
    }
    out[l - lad.lmin()] = l4h_l2v(std::span<const Field* const>(ptrs.data(), ptrs.size()));
  }
  return out;
}

// Raw ingredients of the B4^{-1/2,1/2} shell bracket, kept apart so that
// time norms can be taken per entry before the k-sum is assembled.
struct B4Brackets {
  int n_k = 0;             // horizontal shell count (row stride)
  std::vector<double> hk;  // [l][k]: ||Delta_k^h Delta_l^v a||_{L4_h(L2_v)}, 0 where k < l-1
  std::vector<double> low; // per l: ||S^h_{l-1} Delta_l^v a||_{L2}
};

inline B4Brackets b4neg_brackets(const DyadicLadder& lad,
                                 std::span<const Field* const> comps) {
  const Grid& g = lad.grid();
  B4Brackets br;
  br.n_k = lad.n_shells_h();
  br.hk.assign(std::size_t(lad.n_shells_v()) * br.n_k, 0.0);
  br.low.assign(lad.n_shells_v(), 0.0);
  std::vector<Field> vblocks(comps.size());
  std::vector<Field> hvblocks(comps.size());
  std::vector<const Field*> ptrs(comps.size());
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) {
    for (std::size_t c = 0; c < comps.size(); ++c) vblocks[c] = delta_v(lad, *comps[c], l);
    for (int k = std::max(l - 1, lad.kmin()); k <= lad.kmax(); ++k) {
      for (std::size_t c = 0; c < comps.size(); ++c) {
        hvblocks[c] = delta_h(lad, vblocks[c], k);
        ptrs[c] = &hvblocks[c];
      }
      br.hk[std::size_t(l - lad.lmin()) * br.n_k + (k - lad.kmin())] =
          l4h_l2v(std::span<const Field* const>(ptrs.data(), ptrs.size()));
    }
    // low-horizontal remainder S^h_{l-1} Delta_l^v a, in L2 (purely spectral)
    const auto& ch = lad.chi_h(l - 1);
    double low = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (int i1 = 0; i1 < g.nh; ++i1)
        for (int i2 = 0; i2 < g.nh; ++i2) {
          const double w = ch[std::size_t(i1) * g.nh + i2];
          if (w == 0.0) continue;
          for (int i3 = 0; i3 < g.nv; ++i3)
            low += w * w * std::norm(vblocks[c].at(i1, i2, i3));
        }
    br.low[l - lad.lmin()] = std::sqrt(low);
  }
  return br;
}

// the B4^{-1/2,1/2} shell bracket:
//   (sum_{k>=l-1} 2^{-k} ||Delta_k^h Delta_l^v a||^2_{L4_h(L2_v)})^{1/2}
//   + ||S^h_{l-1} Delta_l^v a||_{L2}
inline std::vector<double> shells_v_b4neg(const DyadicLadder& lad,
                                          std::span<const Field* const> comps) {
  const B4Brackets br = b4neg_brackets(lad, comps);
  std::vector<double> out(lad.n_shells_v(), 0.0);
  for (int l = lad.lmin(); l <= lad.lmax(); ++l) {
    double inner = 0.0;
    for (int k = lad.kmin(); k <= lad.kmax(); ++k) {
      const double m = br.hk[std::size_t(l - lad.lmin()) * br.n_k + (k - lad.kmin())];
      inner += std::ldexp(m * m, -k);
    }
    out[l - lad.lmin()] = std::sqrt(inner) + br.low[l - lad.lmin()];
  }
  return out;
}

inline double weighted_shell_sum(const DyadicLadder& lad, const std::vector<double>& shells) {
  double s = 0.0;
  for (int l = lad.lmin(); l <= lad.lmax(); ++l)
    s += std::exp2(0.5 * l) * shells[l - lad.lmin()];
  return s;
}

// ---- the headline norms ---------------------------------------------------

namespace detail {
template <class FieldLike>
struct CompSpan;
template <>
struct CompSpan<Field> {
  static std::vector<const Field*> get(const Field& a) { return {&a}; }
};
template <>
struct CompSpan<VecField> {
  static std::vector<const Field*> get(const VecField& u) { return {&u.c1, &u.c2, &u.c3}; }
};
template <>
struct CompSpan<HField> {
  static std::vector<const Field*> get(const HField& u) { return {&u.c1, &u.c2}; }
};
}  // namespace detail

// B^{0,1/2}: sum_l 2^{l/2} ||Delta_l^v a||_{L2}
template <class FieldLike>
double norm_B0half(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return weighted_shell_sum(lad, shells_v_l2(lad, c));
}

// B4^{0,1/2}: sum_l 2^{l/2} ||Delta_l^v a||_{L4_h(L2_v)}
template <class FieldLike>
double norm_B4_0half(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return weighted_shell_sum(lad, shells_v_l4h(lad, c));
}

// B4^{-1/2,1/2}: sum_l 2^{l/2} [bracket]
template <class FieldLike>
double norm_B4_neg(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return weighted_shell_sum(lad, shells_v_b4neg(lad, c));
}

template <class FieldLike>
std::vector<double> shells_B0half(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return shells_v_l2(lad, c);
}
template <class FieldLike>
std::vector<double> shells_B4_0half(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return shells_v_l4h(lad, c);
}
template <class FieldLike>
std::vector<double> shells_B4_neg(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return shells_v_b4neg(lad, c);
}
template <class FieldLike>
B4Brackets brackets_B4_neg(const DyadicLadder& lad, const FieldLike& a) {
  auto c = detail::CompSpan<FieldLike>::get(a);
  return b4neg_brackets(lad, c);
}

}  // namespace anisons

#endif
