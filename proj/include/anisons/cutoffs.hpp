#ifndef ANISONS_CUTOFFS_HPP
#define ANISONS_CUTOFFS_HPP

// Dyadic cutoff pair (phi, chi):
//   supp phi subset [3/4, 8/3],  supp chi subset [0, 4/3],
//   chi(tau) + sum_{j>=0} phi(2^{-j} tau) = 1,
//   sum_{j in Z} phi(2^{-j} tau) = 1 for tau > 0.
// Default profile: chi falls from 1 to 0 across [3/4, 4/3] through the
// exp(-1/x) mollifier step, and phi(tau) = chi(tau/2) - chi(tau).  Both
// identities then telescope exactly, which is what makes the partition test
// hold to near machine precision.
//
// A cutoff choice is identified by a hash of its tabulated profile; every
// norm ledger embeds it so numbers are comparable across runs.

#include <cmath>
#include <cstdint>
#include <string>

namespace anisons {

namespace detail {
inline double mollifier_step(double x) {
  // smooth 0 -> 1 transition on [0,1]
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}
}  // namespace detail

class CutoffPair {
 public:
  explicit CutoffPair(int table_resolution = 4096) : table_resolution_(table_resolution) {}

  double chi(double tau) const {
    tau = std::abs(tau);
    if (tau <= 0.75) return 1.0;
    if (tau >= 4.0 / 3.0) return 0.0;
    // decreasing across the transition band [3/4, 4/3]
    return 1.0 - detail::mollifier_step((tau - 0.75) / (4.0 / 3.0 - 0.75));
  }

  double phi(double tau) const { return chi(0.5 * std::abs(tau)) - chi(std::abs(tau)); }

  // chi(2^{-k} tau), phi(2^{-l} tau) with exact dyadic argument scaling
  double chi_at(int k, double tau) const { return chi(std::ldexp(std::abs(tau), -k)); }
  double phi_at(int l, double tau) const { return phi(std::ldexp(std::abs(tau), -l)); }

  int table_resolution() const { return table_resolution_; }

  // FNV-1a over the tabulated profile on [0, 8/3]
  std::uint64_t profile_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
      std::uint64_t bits;
      static_assert(sizeof bits == sizeof v);
      __builtin_memcpy(&bits, &v, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    for (int i = 0; i <= table_resolution_; ++i) {
      const double tau = (8.0 / 3.0) * i / table_resolution_;
      mix(chi(tau));
      mix(phi(tau));
    }
    return h;
  }

  std::string hash_string() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(profile_hash()));
    return buf;
  }

 private:
  int table_resolution_;
};

}  // namespace anisons

#endif
