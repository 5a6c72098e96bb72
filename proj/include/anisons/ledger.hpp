#ifndef ANISONS_LEDGER_HPP
#define ANISONS_LEDGER_HPP

// Time-integrated norms and the run ledger.
//
// A ClAccumulator realizes one Chemin-Lerner norm: per-shell L^p-in-time by
// trapezoid quadrature (running sup for p = inf), with the 2^{l/2} shell sum
// applied on readout.  A WeightedAccumulator realizes the weighted variant
// sum_l 2^{l/2} (int f(t) ||Delta_l a||^2 dt)^{1/2}.
//
// The NormLedger is a plain row table dumped as ledger-v1 CSV: one header
// line carrying schema, grid, cutoff hash and config id; one column-name
// line; then rows.  Column order is registration order and values print as
// %.17g, so identical runs produce byte-identical files.

#include <cstdio>
#include <limits>
#include <ostream>

#include "anisons/norms.hpp"

namespace anisons {

class ClAccumulator {
 public:
  ClAccumulator() = default;
  ClAccumulator(const DyadicLadder& lad, double p)
      : p_(p), lmin_(lad.lmin()),
        integrals_(lad.n_shells_v(), 0.0), prev_(lad.n_shells_v(), 0.0) {
    if (!(p == 1.0 || p == 2.0 || p == 4.0 ||
          p == std::numeric_limits<double>::infinity()))
      throw ConfigError("Chemin-Lerner time exponent must be 1, 2, 4 or inf");
  }

  double p() const { return p_; }

  void sample(double t, const std::vector<double>& shells) {
    if (shells.size() != integrals_.size())
      throw ConfigError("accumulator: shell count mismatch");
    if (p_ == std::numeric_limits<double>::infinity()) {
      for (std::size_t i = 0; i < shells.size(); ++i)
        integrals_[i] = std::max(integrals_[i], shells[i]);
      has_sample_ = true;
      t_prev_ = t;
      return;
    }
    if (has_sample_) {
      if (t < t_prev_) throw ConfigError("accumulator: time went backwards");
      const double dt = t - t_prev_;
      for (std::size_t i = 0; i < shells.size(); ++i)
        integrals_[i] += 0.5 * dt * (std::pow(prev_[i], p_) + std::pow(shells[i], p_));
    }
    prev_ = shells;
    t_prev_ = t;
    has_sample_ = true;
  }

  double value() const {
    double s = 0.0;
    for (std::size_t i = 0; i < integrals_.size(); ++i) {
      const double l = double(lmin_) + double(i);
      const double shell = p_ == std::numeric_limits<double>::infinity()
                               ? integrals_[i]
                               : std::pow(integrals_[i], 1.0 / p_);
      s += std::exp2(0.5 * l) * shell;
    }
    return s;
  }

 private:
  double p_ = 2.0;
  int lmin_ = 0;
  std::vector<double> integrals_, prev_;
  double t_prev_ = 0.0;
  bool has_sample_ = false;
};

class WeightedAccumulator {
 public:
  WeightedAccumulator() = default;
  explicit WeightedAccumulator(const DyadicLadder& lad)
      : lmin_(lad.lmin()), integrals_(lad.n_shells_v(), 0.0), prev_(lad.n_shells_v(), 0.0) {}

  void sample(double t, double weight, const std::vector<double>& shells) {
    if (shells.size() != integrals_.size())
      throw ConfigError("weighted accumulator: shell count mismatch");
    if (has_sample_) {
      if (t < t_prev_) throw ConfigError("weighted accumulator: time went backwards");
      const double dt = t - t_prev_;
      for (std::size_t i = 0; i < shells.size(); ++i) {
        const double g0 = w_prev_ * prev_[i] * prev_[i];
        const double g1 = weight * shells[i] * shells[i];
        integrals_[i] += 0.5 * dt * (g0 + g1);
      }
      weight_integral_ += 0.5 * dt * (w_prev_ + weight);
    }
    prev_ = shells;
    w_prev_ = weight;
    t_prev_ = t;
    has_sample_ = true;
  }

  // int f dt over the samples seen so far (for exponential damping factors)
  double weight_integral() const { return weight_integral_; }

  double value() const {
    double s = 0.0;
    for (std::size_t i = 0; i < integrals_.size(); ++i)
      s += std::exp2(0.5 * (double(lmin_) + double(i))) * std::sqrt(integrals_[i]);
    return s;
  }

 private:
  int lmin_ = 0;
  std::vector<double> integrals_, prev_;
  double t_prev_ = 0.0, w_prev_ = 0.0;
  double weight_integral_ = 0.0;
  bool has_sample_ = false;
};

// Chemin-Lerner accumulator for the B4^{-1/2,1/2} family.  The time norm is
// taken per (k, l) block entry and per low-horizontal remainder, and the
// bracket (the weighted k-sum plus the remainder) is assembled on readout,
// so shells whose entries peak at different times are not conflated.
class ClAccumulatorB4 {
 public:
  ClAccumulatorB4() = default;
  ClAccumulatorB4(const DyadicLadder& lad, double p)
      : p_(p), lmin_(lad.lmin()), kmin_(lad.kmin()),
        nl_(lad.n_shells_v()), nk_(lad.n_shells_h()),
        hk_int_(std::size_t(nl_) * nk_, 0.0), hk_prev_(std::size_t(nl_) * nk_, 0.0),
        low_int_(nl_, 0.0), low_prev_(nl_, 0.0) {
    if (!(p == 1.0 || p == 2.0 || p == 4.0 ||
          p == std::numeric_limits<double>::infinity()))
      throw ConfigError("Chemin-Lerner time exponent must be 1, 2, 4 or inf");
  }

  double p() const { return p_; }

  void sample(double t, const B4Brackets& br) {
    if (br.hk.size() != hk_int_.size() || br.low.size() != low_int_.size())
      throw ConfigError("accumulator: bracket shape mismatch");
    if (p_ == std::numeric_limits<double>::infinity()) {
      for (std::size_t i = 0; i < hk_int_.size(); ++i)
        hk_int_[i] = std::max(hk_int_[i], br.hk[i]);
      for (std::size_t i = 0; i < low_int_.size(); ++i)
        low_int_[i] = std::max(low_int_[i], br.low[i]);
      has_sample_ = true;
      t_prev_ = t;
      return;
    }
    if (has_sample_) {
      if (t < t_prev_) throw ConfigError("accumulator: time went backwards");
      const double dt = t - t_prev_;
      for (std::size_t i = 0; i < hk_int_.size(); ++i)
        hk_int_[i] += 0.5 * dt * (std::pow(hk_prev_[i], p_) + std::pow(br.hk[i], p_));
      for (std::size_t i = 0; i < low_int_.size(); ++i)
        low_int_[i] += 0.5 * dt * (std::pow(low_prev_[i], p_) + std::pow(br.low[i], p_));
    }
    hk_prev_ = br.hk;
    low_prev_ = br.low;
    t_prev_ = t;
    has_sample_ = true;
  }

  double value() const {
    const bool inf = p_ == std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (int il = 0; il < nl_; ++il) {
      double inner = 0.0;
      for (int ik = 0; ik < nk_; ++ik) {
        const double raw = hk_int_[std::size_t(il) * nk_ + ik];
        const double m = inf ? raw : std::pow(raw, 1.0 / p_);
        inner += std::ldexp(m * m, -(kmin_ + ik));
      }
      const double rawlow = low_int_[il];
      const double low = inf ? rawlow : std::pow(rawlow, 1.0 / p_);
      s += std::exp2(0.5 * (lmin_ + il)) * (std::sqrt(inner) + low);
    }
    return s;
  }

 private:
  double p_ = 2.0;
  int lmin_ = 0, kmin_ = 0, nl_ = 0, nk_ = 0;
  std::vector<double> hk_int_, hk_prev_, low_int_, low_prev_;
  double t_prev_ = 0.0;
  bool has_sample_ = false;
};

class NormLedger {
 public:
  NormLedger(const Grid& g, const CutoffPair& cut, std::string config_id = "")
      : grid_(g), cutoff_hash_(cut.hash_string()), config_id_(std::move(config_id)) {}

  int add_column(const std::string& name) {
    cols_.push_back(name);
    return int(cols_.size()) - 1;
  }
  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < cols_.size(); ++i)
      if (cols_[i] == name) return int(i);
    throw ConfigError("ledger: no column named " + name);
  }

  void start_row(double t) {
    row_.assign(cols_.size(), 0.0);
    row_t_ = t;
    in_row_ = true;
  }
  void put(int col, double v) { row_.at(col) = v; }
  void put(const std::string& name, double v) { row_.at(column_index(name)) = v; }
  void flush_row() {
    times_.push_back(row_t_);
    rows_.push_back(row_);
    in_row_ = false;
  }

  const std::vector<double>& times() const { return times_; }
  std::vector<double> column(const std::string& name) const {
    const int c = column_index(name);
    std::vector<double> out(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = rows_[i][c];
    return out;
  }

  void to_csv(std::ostream& os) const {
    os << "#schema=ledger-v1;grid=" << grid_.describe()
       << ";cutoff=" << cutoff_hash_ << ";config=" << config_id_ << "\n";
    os << "t";
    for (const auto& c : cols_) os << "," << c;
    os << "\n";
    char buf[32];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", times_[i]);
      os << buf;
      for (double v : rows_[i]) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << "," << buf;
      }
      os << "\n";
    }
  }

 private:
  Grid grid_;
  std::string cutoff_hash_, config_id_;
  std::vector<std::string> cols_;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> row_;
  double row_t_ = 0.0;
  bool in_row_ = false;
};

}  // namespace anisons

#endif
