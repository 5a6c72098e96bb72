#ifndef ANISONS_RANDOM_FIELDS_HPP
#define ANISONS_RANDOM_FIELDS_HPP

// Seeded band-limited Gaussian fields for property tests and constant
// profiling.  The Gaussian draw is a hand-rolled Box-Muller over mt19937_64
// so a seed means the same field on every standard library.

#include <random>

#include "anisons/operators.hpp"

namespace anisons {

class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    if (have_) { have_ = false; return spare_; }
    // u1 in (0,1], u2 in [0,1)
    const double u1 = (double(rng_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = double(rng_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_ = false;
};

struct RandomFieldSpec {
  int kmax_h = 5;           // band limit per horizontal axis (frequency index)
  int kmax_v = 5;           // band limit on the vertical axis
  bool vertical_mean = false;  // include the xi3 = 0 plane
  double target_l2 = 1.0;   // rescale so the L2 norm is this (0 = leave raw)
};

// Hermitian band-limited Gaussian scalar field: modes are filled in a fixed
// index order and then symmetrized, so the result is deterministic in
// (seed, grid, spec).
inline Field random_field(const Grid& g, std::uint64_t seed, const RandomFieldSpec& spec = {}) {
  Gaussian gauss(seed);
  Field a(g);
  const int kh = std::min(spec.kmax_h, g.nh / 2 - 1);
  const int kv = std::min(spec.kmax_v, g.nv / 2 - 1);
  for (int f1 = -kh; f1 <= kh; ++f1)
    for (int f2 = -kh; f2 <= kh; ++f2)
      for (int f3 = -kv; f3 <= kv; ++f3) {
        if (!spec.vertical_mean && f3 == 0) continue;
        const int i1 = (f1 + g.nh) % g.nh;
        const int i2 = (f2 + g.nh) % g.nh;
        const int i3 = (f3 + g.nv) % g.nv;
        a.at(i1, i2, i3) = cplx(gauss(), gauss());
      }
  enforce_hermitian(a);
  if (spec.target_l2 > 0.0) {
    const double n = l2(a);
    if (n > 0.0) a *= spec.target_l2 / n;
  }
  return a;
}

// Divergence-free random velocity field (Leray projection of three random
// scalars), band-limited inside the dealias range.
inline VecField random_divfree(const Grid& g, std::uint64_t seed, const RandomFieldSpec& spec = {}) {
  VecField u(g);
  for (int c = 0; c < 3; ++c) u[c] = random_field(g, seed * 3 + c + 1, spec);
  u = leray_project(u);
  if (spec.target_l2 > 0.0) {
    const double n = l2(u);
    if (n > 0.0) u *= spec.target_l2 / n;
  }
  return u;
}

}  // namespace anisons

#endif
