#ifndef ANISONS_GRID_HPP
#define ANISONS_GRID_HPP

// Periodic grid for fields on [0,Lh) x [0,Lh) x [0,Lv).  Spectral storage is
// row-major over index triples (i1,i2,i3) with i3 fastest; index i on an
// n-point axis carries the signed frequency i for i <= n/2 and i-n above,
// so the admissible set per axis is [-n/2+1, n/2].  Physical frequencies are
// scaled by 2*pi/L per axis.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anisons {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 64-byte aligned storage so FFTW SIMD kernels and new-array execution see a
// single alignment class for every buffer we hand them.
template <class T>
struct AlignedAlloc {
  using value_type = T;
  AlignedAlloc() = default;
  template <class U>
  AlignedAlloc(const AlignedAlloc<U>&) {}
  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(64)));
  }
  void deallocate(T* p, std::size_t n) {
    ::operator delete(p, n * sizeof(T), std::align_val_t(64));
  }
  template <class U>
  bool operator==(const AlignedAlloc<U>&) const { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAlloc<T>>;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFT-friendly axis size: even, at least 8, no prime factors beyond 2 and 3.
inline bool admissible_axis(int n) {
  if (n < 8 || n % 2 != 0) return false;
  while (n % 2 == 0) n /= 2;
  while (n % 3 == 0) n /= 3;
  return n == 1;
}

struct Grid {
  int nh = 0;        // modes per horizontal axis
  int nv = 0;        // modes on the vertical axis
  double Lh = two_pi;
  double Lv = two_pi;

  Grid() = default;
  Grid(int nh_, int nv_, double Lh_ = two_pi, double Lv_ = two_pi)
      : nh(nh_), nv(nv_), Lh(Lh_), Lv(Lv_) {
    if (!admissible_axis(nh))
      throw ConfigError("grid: nh must be even, >= 8, with factors 2 and 3 only, got " +
                        std::to_string(nh));
    if (!admissible_axis(nv))
      throw ConfigError("grid: nv must be even, >= 8, with factors 2 and 3 only, got " +
                        std::to_string(nv));
    if (!(Lh > 0.0) || !(Lv > 0.0))
      throw ConfigError("grid: periods must be positive");
  }

  std::int64_t size() const { return std::int64_t(nh) * nh * nv; }
  std::int64_t idx(int i1, int i2, int i3) const {
    return (std::int64_t(i1) * nh + i2) * nv + i3;
  }

  static int freq_of(int i, int n) { return i <= n / 2 ? i : i - n; }

  // physical (scaled) frequencies per axis
  double k1(int i1) const { return freq_of(i1, nh) * (two_pi / Lh); }
  double k2(int i2) const { return freq_of(i2, nh) * (two_pi / Lh); }
  double k3(int i3) const { return freq_of(i3, nv) * (two_pi / Lv); }
  double kh2(int i1, int i2) const {
    const double a = k1(i1), b = k2(i2);
    return a * a + b * b;
  }

  double dx_h() const { return Lh / nh; }
  double dx_v() const { return Lv / nv; }

  // Largest kept index under the strict 2/3 rule: 3K < n guarantees that
  // aliases of products of kept modes land strictly above K.
  static int dealias_limit(int n) {
    int k = n / 3;
    if (3 * k >= n) --k;
    return k;
  }
  int kept_h() const { return dealias_limit(nh); }
  int kept_v() const { return dealias_limit(nv); }

  bool operator==(const Grid& o) const {
    return nh == o.nh && nv == o.nv && Lh == o.Lh && Lv == o.Lv;
  }

  std::string describe() const {
    return std::to_string(nh) + "x" + std::to_string(nh) + "x" + std::to_string(nv) +
           ";Lh=" + std::to_string(Lh) + ";Lv=" + std::to_string(Lv);
  }
};

}  // namespace anisons

#endif
