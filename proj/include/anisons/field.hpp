#ifndef ANISONS_FIELD_HPP
#define ANISONS_FIELD_HPP

// Scalar and vector fields stored by their Fourier coefficients.  The L2
// norm is volume-normalized (the constant field 1 has norm 1), i.e. the
// plain l2 of the coefficient array by Parseval.

#include <cmath>

#include "anisons/fft.hpp"
#include "anisons/grid.hpp"

namespace anisons {

class Field {
 public:
  bool real = true;  // asserts Hermitian symmetry of the coefficients

  Field() = default;
  explicit Field(const Grid& g) : grid_(g), c_(g.size()) {}

  const Grid& grid() const { return grid_; }
  std::int64_t size() const { return std::int64_t(c_.size()); }
  cplx* data() { return c_.data(); }
  const cplx* data() const { return c_.data(); }
  cplx& at(int i1, int i2, int i3) { return c_[grid_.idx(i1, i2, i3)]; }
  const cplx& at(int i1, int i2, int i3) const { return c_[grid_.idx(i1, i2, i3)]; }

  Field& operator+=(const Field& o) {
    for (std::int64_t i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::int64_t i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (std::int64_t i = 0; i < size(); ++i) c_[i] *= s;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

  AlignedVector<cplx> to_physical() const {
    AlignedVector<cplx> out(c_.size());
    fft::backward(grid_, c_.data(), out.data());
    return out;
  }
  static Field from_physical(const Grid& g, const AlignedVector<cplx>& phys) {
    Field f(g);
    fft::forward(g, phys.data(), f.data());
    return f;
  }

 private:
  Grid grid_;
  AlignedVector<cplx> c_;
};

inline double l2sq(const Field& a) {
  double s = 0.0;
  const cplx* c = a.data();
  for (std::int64_t i = 0; i < a.size(); ++i) s += std::norm(c[i]);
  return s;
}
inline double l2(const Field& a) { return std::sqrt(l2sq(a)); }

// max |a(x)| over grid points
inline double linf_physical(const Field& a) {
  auto phys = a.to_physical();
  double m = 0.0;
  for (const cplx& v : phys) m = std::max(m, std::abs(v));
  return m;
}

struct VecField {
  static constexpr int ncomp = 3;

  Field c1, c2, c3;

  VecField() = default;
  explicit VecField(const Grid& g) : c1(g), c2(g), c3(g) {}
  const Grid& grid() const { return c1.grid(); }

  Field& operator[](int i) { return i == 0 ? c1 : (i == 1 ? c2 : c3); }
  const Field& operator[](int i) const { return i == 0 ? c1 : (i == 1 ? c2 : c3); }

  VecField& operator+=(const VecField& o) {
    c1 += o.c1; c2 += o.c2; c3 += o.c3;
    return *this;
  }
  VecField& operator-=(const VecField& o) {
    c1 -= o.c1; c2 -= o.c2; c3 -= o.c3;
    return *this;
  }
  VecField& operator*=(double s) {
    c1 *= s; c2 *= s; c3 *= s;
    return *this;
  }
  friend VecField operator-(VecField a, const VecField& b) { return a -= b; }
};

// horizontal pair (first two velocity components)
struct HField {
  static constexpr int ncomp = 2;
  Field c1, c2;

  HField() = default;
  explicit HField(const Grid& g) : c1(g), c2(g) {}
  const Grid& grid() const { return c1.grid(); }

  Field& operator[](int i) { return i == 0 ? c1 : c2; }
  const Field& operator[](int i) const { return i == 0 ? c1 : c2; }

  HField& operator-=(const HField& o) {
    c1 -= o.c1; c2 -= o.c2;
    return *this;
  }
  friend HField operator-(HField a, const HField& b) { return a -= b; }
};

inline double l2sq(const VecField& u) { return l2sq(u.c1) + l2sq(u.c2) + l2sq(u.c3); }
inline double l2(const VecField& u) { return std::sqrt(l2sq(u)); }
inline double l2sq(const HField& u) { return l2sq(u.c1) + l2sq(u.c2); }
inline double l2(const HField& u) { return std::sqrt(l2sq(u)); }

inline double linf_physical(const VecField& u) {
  auto p1 = u.c1.to_physical(), p2 = u.c2.to_physical(), p3 = u.c3.to_physical();
  double m = 0.0;
  for (std::int64_t i = 0; i < u.c1.size(); ++i) {
    double s = std::norm(p1[i]) + std::norm(p2[i]) + std::norm(p3[i]);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

}  // namespace anisons

#endif
