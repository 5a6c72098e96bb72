#ifndef ANISONS_FFT_HPP
#define ANISONS_FFT_HPP

// Thin cache around FFTW c2c plans.  Plans are created once per shape with
// FFTW_ESTIMATE (deterministic plan selection, so repeated runs produce
// bit-identical coefficients) and executed through the new-array interface,
// which is thread-safe; planning itself is serialized by a mutex.
//
// Normalization: forward() divides by the mode count, so coefficients are
// Fourier-series coefficients and backward() is the plain synthesis sum.

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "anisons/grid.hpp"

namespace anisons::fft {

namespace detail {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans;

  fftw_plan get(int n1, int n2, int n3, int sign) {
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(n1, n2, n3, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::int64_t n = std::int64_t(n1) * n2 * n3;
    AlignedVector<cplx> a(n), b(n);
    fftw_plan p = fftw_plan_dft_3d(n1, n2, n3,
                                   reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()),
                                   sign, FFTW_ESTIMATE);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans.emplace(key, p);
    return p;
  }
};

inline PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace detail

// spectral -> physical (synthesis, unnormalized)
inline void backward(const Grid& g, const cplx* in, cplx* out) {
  fftw_plan p = detail::cache().get(g.nh, g.nh, g.nv, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

// physical -> spectral (analysis, divides by the mode count)
inline void forward(const Grid& g, const cplx* in, cplx* out) {
  fftw_plan p = detail::cache().get(g.nh, g.nh, g.nv, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
  const double inv = 1.0 / double(g.size());
  const std::int64_t n = g.size();
  for (std::int64_t i = 0; i < n; ++i) out[i] *= inv;
}

// Vertical-axis pass only: transforms every (i1,i2) column of length nv.
// Used to materialize per-layer quantities while staying spectral in x_h.
inline void vertical(const Grid& g, int sign, const cplx* in, cplx* out) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  fftw_plan p;
  {
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(g.nv, int(g.size() / g.nv), sign);
    auto it = plans.find(key);
    if (it == plans.end()) {
      std::int64_t n = g.size();
      AlignedVector<cplx> a(n), b(n);
      int nv = g.nv;
      int howmany = int(n / nv);
      // columns are contiguous (i3 fastest), consecutive columns nv apart
      p = fftw_plan_many_dft(1, &nv, howmany,
                             reinterpret_cast<fftw_complex*>(a.data()), nullptr, 1, nv,
                             reinterpret_cast<fftw_complex*>(b.data()), nullptr, 1, nv,
                             sign, FFTW_ESTIMATE);
      if (!p) throw std::runtime_error("fftw plan creation failed");
      plans.emplace(key, p);
    } else {
      p = it->second;
    }
  }
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
  if (sign == FFTW_FORWARD) {
    const double inv = 1.0 / g.nv;
    const std::int64_t n = g.size();
    for (std::int64_t i = 0; i < n; ++i) out[i] *= inv;
  }
}

}  // namespace anisons::fft

#endif
