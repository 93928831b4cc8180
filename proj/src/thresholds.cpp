#include "pamber/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>

#include "pamber/error.hpp"

namespace pamber {

const char* to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::ClosedForm4: return "closed4";
    case ThresholdMethod::ClosedForm8: return "closed8";
    case ThresholdMethod::PolyNumeric: return "poly";
    case ThresholdMethod::SignScan: return "scan";
    case ThresholdMethod::AbdMidpoint: return "midpoint";
  }
  return "?";
}

ThresholdSet abd_thresholds(const Pattern& p, const Constellation& c) {
  ThresholdSet ts;
  ts.pattern = p;
  ts.snr = Snr{};  // midpoints are SNR-independent
  ts.method = ThresholdMethod::AbdMidpoint;
  for (int k : p.threshold_indices) {
    ts.entries[k] = {0.5 * (c.point(k) + c.point(k + 1)), false, 0};
  }
  return ts;
}

Eigen::VectorXd bd_polynomial(const Pattern& p, const Snr& snr) {
  const int M = p.order;
  Eigen::VectorXd coeff(M);
  for (int i = 1; i <= M; ++i) {
    const double e = 0.5 * (M / 2 - i) * (M / 2 + 1 - i);
    coeff[i - 1] = p.bipolar(i) * std::pow(snr.A, e);
  }
  return coeff;
}

// ---------------------------------------------------------------------------
// Exact LLR and its sign scan
// ---------------------------------------------------------------------------

namespace {

double exact_llr(double y, const Pattern& p, double rho,
                 const Constellation& c) {
  // Log-sum-exp per bit value, max-shifted so high SNR cannot underflow.
  // Extended precision keeps the zero crossings clean: the merge tracking
  // bisects to within 1e-8 dB of a collision, where double-precision noise
  // on the nearly flat LLR would fake extra sign changes.
  long double max1 = -std::numeric_limits<long double>::infinity();
  long double max0 = max1;
  const int M = p.order;
  const long double yl = y, rl = rho;
  for (int i = 0; i < M; ++i) {
    const long double dist = yl - static_cast<long double>(c.points[i]);
    const long double v = -rl * dist * dist;
    if (p.bits[i]) {
      if (v > max1) max1 = v;
    } else {
      if (v > max0) max0 = v;
    }
  }
  long double s1 = 0, s0 = 0;
  for (int i = 0; i < M; ++i) {
    const long double dist = yl - static_cast<long double>(c.points[i]);
    const long double v = -rl * dist * dist;
    if (p.bits[i]) {
      s1 += std::exp(v - max1);
    } else {
      s0 += std::exp(v - max0);
    }
  }
  return static_cast<double>((max1 + std::log(s1)) - (max0 + std::log(s0)));
}

int sign_of(double v) { return (v > 0) - (v < 0); }

/// Exhaustive zero hunt on [a,b] for a Lipschitz-bounded f. A cell is
/// discarded only when no zero can mathematically fit (endpoint magnitude
/// exceeds lipschitz * width); everything else splits until the resolution
/// floor, so arbitrarily close crossing pairs are separated while a
/// tangency (touch without sign change) is correctly not a crossing.
template <typename F>
void hunt_zeros(const F& f, double a, double va, double b, double vb,
                double lipschitz, std::vector<double>& out, int depth) {
  const double w = b - a;
  const int sa = sign_of(va);
  const int sb = sign_of(vb);
  const bool same_sign = sa != 0 && sa == sb;
  if (same_sign &&
      std::min(std::fabs(va), std::fabs(vb)) > lipschitz * w) {
    return;
  }
  // Same-sign cells only need splitting while a hidden pair could still be
  // resolved; a pair tighter than 1e-5 sits within ~1e-7 dB of its merge,
  // beyond anything the SNR tracking distinguishes. Crossings themselves
  // refine much further, down to the 1e-12 bisection width.
  if ((same_sign && w < 1e-5) || w < 1e-12 || depth >= 80) {
    if (sa * sb < 0) {
      out.push_back(0.5 * (a + b));
    } else if (sa == 0 && !same_sign) {
      out.push_back(a);
    } else if (sb == 0 && !same_sign) {
      out.push_back(b);
    }
    return;
  }
  const double m = 0.5 * (a + b);
  const double vm = f(m);
  hunt_zeros(f, a, va, m, vm, lipschitz, out, depth + 1);
  hunt_zeros(f, m, vm, b, vb, lipschitz, out, depth + 1);
}

template <typename F>
void collect_crossings(const F& f, double lo, double hi, int cells,
                       double lipschitz, std::vector<double>& out) {
  std::vector<double> ys(cells + 1), vs(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    ys[i] = lo + (hi - lo) * i / cells;
    vs[i] = f(ys[i]);
  }
  for (int i = 0; i < cells; ++i) {
    hunt_zeros(f, ys[i], vs[i], ys[i + 1], vs[i + 1], lipschitz, out, 0);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return b - a < 1e-6; }),
            out.end());
}

}  // namespace

std::vector<double> llr_sign_changes(const Pattern& p, const Snr& snr,
                                     const Constellation& c) {
  const int M = p.order;
  const double rho = snr.rho;
  const double sigma = noise_sigma(rho);
  const auto f = [&](double y) { return exact_llr(y, p, rho, c); };

  // Beyond s_M + ln(M)/(4 rho d) the nearest-point quadratic gap exceeds the
  // worst-case count imbalance, so no crossing can live there (same on the
  // left); 10 sigma covers the moderate-SNR regime.
  double margin =
      10.0 * sigma + std::log(static_cast<double>(M)) /
                         (4.0 * rho * c.half_spacing);
  const int want_left = p.bits.front() ? +1 : -1;
  const int want_right = p.bits.back() ? +1 : -1;

  const int cells = 64 * (M - 1);
  for (int attempt = 0;; ++attempt) {
    const double lo = c.points[0] - margin;
    const double hi = c.points[M - 1] + margin;
    if (sign_of(f(lo)) != want_left || sign_of(f(hi)) != want_right) {
      margin *= 1.6;
      if (attempt > 12) {
        throw Error(ErrorCode::NumericalFailure,
                    "LLR scan interval does not reach the asymptotic regime");
      }
      continue;
    }
    const double lipschitz = 2.0 * rho * (c.points[M - 1] - c.points[0]);
    std::vector<double> roots;
    collect_crossings(f, lo, hi, cells, lipschitz, roots);
    const bool odd_expected = p.bits.front() != p.bits.back();
    if ((roots.size() % 2 == 1) == odd_expected) return roots;
    margin *= 1.3;  // either a boundary escaped or a pair straddles the edge
    if (attempt > 12) {
      throw Error(ErrorCode::NumericalFailure,
                  "LLR sign scan found a parity-inconsistent boundary set");
    }
  }
}

// ---------------------------------------------------------------------------
// Polynomial cross-check (companion-matrix roots of bd_polynomial)
// ---------------------------------------------------------------------------

namespace {

/// Real positive roots of the threshold polynomial mapped to y-space, or an
/// empty optional when the coefficients are not representable (extreme SNR).
/// The companion-matrix eigenvalues locate the roots; each is then polished
/// in log space, where the polynomial evaluates stably at any magnitude,
/// because the raw eigenvalues of a polynomial with coefficients spanning
/// thirty orders of magnitude carry only a few digits.
std::optional<std::vector<double>> polynomial_boundaries(
    const Pattern& p, const Snr& snr, const Constellation& c) {
  const int M = p.order;
  const double log_a = -8.0 * snr.rho * c.half_spacing * c.half_spacing;
  const double max_exp = 0.5 * (M / 2 - 1) * (M / 2);
  // monic normalization divides by A^max_exp; keep every ratio finite
  if (max_exp * log_a < -600.0) return std::nullopt;

  const Eigen::VectorXd coeff = bd_polynomial(p, snr);
  const int deg = M - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg - 1; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeff[i] / coeff[deg];

  // Parlett-Reinsch balancing (diagonal similarity, radix-2): the raw
  // companion entries span the full coefficient range and the QR iteration
  // would otherwise drown the small eigenvalues.
  for (bool again = true; again;) {
    again = false;
    for (int i = 0; i < deg; ++i) {
      double r = 0, col = 0;
      for (int j = 0; j < deg; ++j) {
        if (j == i) continue;
        r += std::fabs(companion(i, j));
        col += std::fabs(companion(j, i));
      }
      if (r == 0 || col == 0) continue;
      const double total = r + col;
      double f = 1;
      while (col < r / 2) {
        col *= 2;
        r /= 2;
        f *= 2;
      }
      while (col >= r * 2) {
        col /= 2;
        r *= 2;
        f /= 2;
      }
      if (col + r < 0.95 * total) {
        again = true;
        companion.row(i) /= f;
        companion.col(i) *= f;
      }
    }
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) return std::nullopt;

  // sum_i pc_i exp(E_i + (i-1)u) with u = log z, max-shifted; returns the
  // shifted sum and its u-derivative
  const auto eval = [&](double u, double& s, double& ds) {
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= M; ++i) {
      const double e = 0.5 * (M / 2 - i) * (M / 2 + 1 - i) * log_a +
                       (i - 1) * u;
      if (e > shift) shift = e;
    }
    s = ds = 0;
    for (int i = 1; i <= M; ++i) {
      const double e = 0.5 * (M / 2 - i) * (M / 2 + 1 - i) * log_a +
                       (i - 1) * u;
      const double t = p.bipolar(i) * std::exp(e - shift);
      s += t;
      ds += (i - 1) * t;
    }
  };

  std::vector<double> roots;
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> z = solver.eigenvalues()[i];
    // The QR iteration only fixes eigenvalue signs down to eps * norm, so
    // a genuinely positive root of magnitude ~1e-16 can surface negative.
    // Seed from the magnitude and let the residual decide whether a real
    // positive root actually lives there.
    if (z.real() == 0.0) continue;
    if (std::fabs(z.imag()) > 1e-6 * std::max(1.0, std::fabs(z.real()))) {
      continue;
    }
    double u = std::log(std::fabs(z.real()));
    for (int it = 0; it < 8; ++it) {
      double s, ds;
      eval(u, s, ds);
      if (ds == 0) break;
      const double step = s / ds;
      u -= step;
      if (std::fabs(step) < 1e-15 * std::max(1.0, std::fabs(u))) break;
    }
    double s, ds;
    eval(u, s, ds);
    if (std::fabs(s) > 1e-6 * M) continue;  // terms are shift-normalized
    roots.push_back(u / (4.0 * snr.rho * c.half_spacing));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

void cross_check_boundaries(const std::vector<double>& scan,
                            const Pattern& p, const Snr& snr,
                            const Constellation& c) {
  const auto poly = polynomial_boundaries(p, snr, c);
  if (!poly) return;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    // boundaries about to merge are ill-conditioned for the eigensolver;
    // only isolated ones must agree tightly
    const double gap_prev = i == 0 ? 1.0 : scan[i] - scan[i - 1];
    const double gap_next =
        i + 1 == scan.size() ? 1.0 : scan[i + 1] - scan[i];
    if (std::min(gap_prev, gap_next) < 1e-5) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double r : *poly) best = std::min(best, std::fabs(r - scan[i]));
    if (best > 1e-9) {
      throw Error(ErrorCode::NumericalFailure,
                  "scan boundary " + std::to_string(scan[i]) +
                      " not confirmed by the threshold polynomial (off by " +
                      std::to_string(best) + ")");
    }
  }
}

// ---------------------------------------------------------------------------
// Downward-SNR tracking: labels boundaries with threshold indices and
// resolves virtual entries as boundary pairs collide and vanish.
// ---------------------------------------------------------------------------

class ThresholdTracker {
 public:
  ThresholdTracker(const Pattern& p, const Constellation& c) : p_(p), c_(c) {}

  /// Query SNRs must arrive in non-increasing dB order.
  ThresholdSet at(double snr_db) {
    if (!initialized_) {
      init(snr_db);
    } else if (snr_db > cur_db_ + 1e-12) {
      throw Error(ErrorCode::InvalidArgument,
                  "threshold tracking runs from high SNR downward");
    } else {
      advance(snr_db);
    }
    return build(snr_db);
  }

 private:
  struct VirtualEntry {
    int partner = 0;
    double frozen = 0;     // shared value for a fully merged pair
    bool partner_live = false;  // partner still tracked: inherit its value
  };

  static constexpr double kStepDb = 0.25;
  static constexpr double kMergeResolutionDb = 1e-8;

  std::vector<double> scan(double db) const {
    return llr_sign_changes(p_, snr_from_db(db, c_), c_);
  }

  void init(double target_db) {
    initialized_ = true;
    const auto& K = p_.threshold_indices;
    // cheap path: everything alive at the target itself
    std::vector<double> at_target = scan(target_db);
    if (at_target.size() == K.size()) {
      live_.assign(K.begin(), K.end());
      live_val_ = std::move(at_target);
      cur_db_ = target_db;
      return;
    }
    double start = std::max(30.0, target_db);
    for (; start <= 60.0; start += 10.0) {
      std::vector<double> vals = scan(start);
      if (vals.size() == K.size()) {
        live_.assign(K.begin(), K.end());
        live_val_ = std::move(vals);
        cur_db_ = start;
        advance(target_db);
        return;
      }
    }
    throw Error(ErrorCode::NumericalFailure,
                "no SNR found where every threshold of pattern " +
                    std::to_string(p_.index) + " exists");
  }

  void advance(double target_db) {
    while (cur_db_ > target_db + 1e-12) {
      const double next = std::max(target_db, cur_db_ - kStepDb);
      std::vector<double> vals = scan(next);
      if (vals.size() == live_.size()) {
        live_val_ = std::move(vals);
        cur_db_ = next;
        continue;
      }
      resolve_count_change(next, vals);
    }
  }

  /// The boundary count changed somewhere in (next, cur_db_): bisect to the
  /// event, relabel around it, then continue from just below.
  void resolve_count_change(double next, std::vector<double> vals_next) {
    double hi = cur_db_, lo = next;
    std::vector<double> hi_vals = live_val_;
    std::vector<double> lo_vals = std::move(vals_next);
    while (hi - lo > kMergeResolutionDb) {
      const double mid = 0.5 * (hi + lo);
      std::vector<double> vals = scan(mid);
      if (vals.size() == live_.size()) {
        hi = mid;
        hi_vals = std::move(vals);
      } else {
        lo = mid;
        lo_vals = std::move(vals);
      }
    }
    if (lo_vals.size() > live_.size()) {
      revive(lo_vals, hi_vals);
      live_val_ = std::move(lo_vals);
      cur_db_ = lo;
      return;
    }
    // Within ~1e-9 dB below an exact merge the almost-tangent dips sit
    // inside evaluation noise and the scan can report stray crossings.
    // If the attribution is inconsistent, step further down until the
    // picture is clean.
    for (int attempt = 0;; ++attempt) {
      if (lo_vals.size() <= live_.size() &&
          try_merge(lo_vals, hi_vals, attempt >= 12)) {
        break;
      }
      if (attempt >= 12) {
        throw Error(ErrorCode::NumericalFailure,
                    "unresolvable threshold merge structure near " +
                        std::to_string(lo) + " dB");
      }
      lo -= kMergeResolutionDb * (1 << attempt);
      lo_vals = scan(lo);
    }
    live_val_ = std::move(lo_vals);
    cur_db_ = lo;
  }

  /// Clusters the just-above-merge boundaries, attributes the surviving
  /// ones, and relabels. Returns false (without touching state) when the
  /// attribution is inconsistent, unless must_succeed is set.
  bool try_merge(const std::vector<double>& lo_vals,
                 const std::vector<double>& hi_vals, bool must_succeed) {
    // colliding groups are a few orders of magnitude tighter than
    // surviving neighbors
    const double span = hi_vals.back() - hi_vals.front() + 1e-30;
    const double eps = std::max(1e-2 * c_.half_spacing, 1e-4 * span);
    std::vector<std::pair<int, int>> clusters;  // [first, last] index ranges
    for (std::size_t i = 0; i < hi_vals.size();) {
      std::size_t j = i;
      while (j + 1 < hi_vals.size() && hi_vals[j + 1] - hi_vals[j] < eps) ++j;
      clusters.push_back({static_cast<int>(i), static_cast<int>(j)});
      i = j + 1;
    }

    // attribute every surviving boundary to the nearest cluster interval
    std::vector<int> survivors(clusters.size(), 0);
    for (double v : lo_vals) {
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const double a = hi_vals[clusters[ci].first];
        const double b = hi_vals[clusters[ci].second];
        const double dist = (v < a) ? a - v : (v > b ? v - b : 0.0);
        if (dist < best_dist) {
          best_dist = dist;
          best = ci;
        }
      }
      ++survivors[best];
    }
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      const int size = clusters[ci].second - clusters[ci].first + 1;
      if (survivors[ci] > size || (size - survivors[ci]) % 2 != 0) {
        if (must_succeed) {
          throw Error(ErrorCode::NumericalFailure,
                      "boundaries vanished in odd numbers");
        }
        return false;
      }
    }
    std::vector<int> new_live;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      relabel_cluster(clusters[ci].first, clusters[ci].second, survivors[ci],
                      hi_vals, new_live);
    }
    live_ = std::move(new_live);
    return true;
  }

  void relabel_cluster(int first, int last, int survivors,
                       const std::vector<double>& hi_vals,
                       std::vector<int>& new_live) {
    const int size = last - first + 1;
    std::vector<int> labels(live_.begin() + first, live_.begin() + last + 1);
    const auto hv = [&](int i) { return hi_vals[first + i]; };
    if (survivors == 0) {
      // full annihilation: consecutive boundaries cancel pairwise
      for (int i = 0; i + 1 < size; i += 2) {
        freeze_pair(labels[i], labels[i + 1], hv(i), hv(i + 1));
      }
      return;
    }
    // middle labels survive; trimmed ones on each side pair up outside-in,
    // and an unpaired label next to a survivor inherits the survivor's value
    const int trim = (size - survivors) / 2;
    for (int i = 0; i + 1 < trim; i += 2) {
      freeze_pair(labels[i], labels[i + 1], hv(i), hv(i + 1));
      freeze_pair(labels[size - 1 - i], labels[size - 2 - i], hv(size - 1 - i),
                  hv(size - 2 - i));
    }
    if (trim % 2 == 1) {
      virtual_[labels[trim - 1]] = {labels[trim], 0.0, true};
      virtual_[labels[size - trim]] = {labels[trim + survivors - 1], 0.0,
                                       true};
    }
    for (int i = trim; i < trim + survivors; ++i) new_live.push_back(labels[i]);
  }

  void freeze_pair(int ka, int kb, double va, double vb) {
    const double value = 0.5 * (va + vb);
    virtual_[ka] = {kb, value, false};
    virtual_[kb] = {ka, value, false};
  }

  void revive(const std::vector<double>& lo_vals,
              const std::vector<double>& hi_vals) {
    // A boundary pair re-appeared while stepping down. Find the new values,
    // locate the frozen virtual pair bracketed by the same live neighbors,
    // and put it back in play.
    if (lo_vals.size() != live_.size() + 2) {
      throw Error(ErrorCode::NumericalFailure,
                  "more than one threshold pair appeared at once");
    }
    // new values = those without a close match among hi_vals
    std::vector<double> fresh;
    for (double v : lo_vals) {
      double best = std::numeric_limits<double>::infinity();
      for (double h : hi_vals) best = std::min(best, std::fabs(v - h));
      if (best > 1e-3) fresh.push_back(v);
    }
    if (fresh.size() != 2) {
      throw Error(ErrorCode::NumericalFailure,
                  "could not isolate a re-appearing threshold pair");
    }
    int k_left = 0, k_right = p_.order;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      if (live_val_[i] < fresh[0]) k_left = live_[i];
      if (live_val_[i] > fresh[1] && k_right == p_.order) k_right = live_[i];
    }
    std::vector<int> candidates;
    for (const auto& [k, v] : virtual_) {
      if (k > k_left && k < k_right && !v.partner_live &&
          virtual_.count(v.partner) && v.partner > k) {
        candidates.push_back(k);
      }
    }
    if (candidates.size() != 1) {
      throw Error(ErrorCode::NumericalFailure,
                  "ambiguous labels for a re-appearing threshold pair");
    }
    const int ka = candidates.front();
    const int kb = virtual_.at(ka).partner;
    virtual_.erase(ka);
    virtual_.erase(kb);
    live_.push_back(ka);
    live_.push_back(kb);
    std::sort(live_.begin(), live_.end());
  }

  ThresholdSet build(double snr_db) const {
    ThresholdSet ts;
    ts.pattern = p_;
    ts.snr = snr_from_db(snr_db, c_);
    ts.method = ThresholdMethod::SignScan;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      ts.entries[live_[i]] = {live_val_[i], false, 0};
    }
    for (const auto& [k, v] : virtual_) {
      double value = v.frozen;
      if (v.partner_live) {
        const auto it = std::find(live_.begin(), live_.end(), v.partner);
        if (it == live_.end()) {
          throw Error(ErrorCode::UnresolvedVirtual,
                      "virtual threshold lost its live partner");
        }
        value = live_val_[it - live_.begin()];
      }
      ts.entries[k] = {value, true, v.partner};
    }
    return ts;
  }

  Pattern p_;
  Constellation c_;
  bool initialized_ = false;
  double cur_db_ = 0;
  std::vector<int> live_;
  std::vector<double> live_val_;
  std::map<int, VirtualEntry> virtual_;
};

}  // namespace

ThresholdSet bd_thresholds_numeric(const Pattern& p, const Snr& snr,
                                   const Constellation& c) {
  ThresholdTracker tracker(p, c);
  ThresholdSet ts = tracker.at(snr.db);
  std::vector<double> boundaries;
  for (const auto& [k, e] : ts.entries) {
    if (!e.is_virtual) boundaries.push_back(e.value);
  }
  cross_check_boundaries(boundaries, p, snr, c);
  ts.snr = snr;
  return ts;
}

std::vector<ThresholdSet> bd_thresholds_numeric_sweep(
    const Pattern& p, const std::vector<double>& snr_db_grid,
    const Constellation& c) {
  std::vector<std::size_t> order(snr_db_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return snr_db_grid[a] > snr_db_grid[b];
  });
  std::vector<ThresholdSet> out(snr_db_grid.size());
  ThresholdTracker tracker(p, c);
  for (std::size_t idx : order) {
    ThresholdSet ts = tracker.at(snr_db_grid[idx]);
    std::vector<double> boundaries;
    for (const auto& [k, e] : ts.entries) {
      if (!e.is_virtual) boundaries.push_back(e.value);
    }
    cross_check_boundaries(boundaries, p, ts.snr, c);
    out[idx] = std::move(ts);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

ThresholdSet bd_thresholds_4pam(const Pattern& p, const Snr& snr,
                                const Constellation& c) {
  if (p.order != 4) {
    throw Error(ErrorCode::WrongOrder, "closed form is for order 4");
  }
  ThresholdSet ts;
  ts.pattern = p;
  ts.snr = snr;
  ts.method = ThresholdMethod::ClosedForm4;
  const auto& K = p.threshold_indices;
  const bool has2 = std::find(K.begin(), K.end(), 2) != K.end();
  const bool has13 = std::find(K.begin(), K.end(), 1) != K.end();
  if (has2) ts.entries[2] = {0.0, false, 0};
  if (has13) {
    const double s = p.bipolar(1) * p.bipolar(4);
    const double A = snr.A;
    const double disc = (1.0 + s * A) * (1.0 + s * A) - 4.0 * A * A;
    if (disc >= 0.0) {
      const double b3 = std::log((1.0 + s * A + std::sqrt(disc)) / (2.0 * A)) /
                        (4.0 * snr.rho * c.half_spacing);
      ts.entries[1] = {-b3, false, 0};
      ts.entries[3] = {b3, false, 0};
    } else {
      // the quadratic roots sit on the unit circle: both outer thresholds
      // collapse onto the zero threshold
      ts.entries[1] = {0.0, true, 2};
      ts.entries[3] = {0.0, true, 2};
    }
  }
  return ts;
}

namespace {

using CLD = std::complex<long double>;

struct EightPamPlan {
  bool zero4 = false;                        // beta_4 = 0 present
  std::vector<std::pair<int, int>> kn;       // (k in {5,6,7}, cubic root n)
};

/// Which cubic root feeds which positive-side threshold, per class. The
/// assignment is defined on the class representative.
const EightPamPlan& plan_for_class(int cls) {
  static const std::vector<EightPamPlan> plans = {
      /* q=1 */ {true, {}},
      /* q=2 */ {false, {{6, 2}}},
      /* q=3 */ {true, {{5, 1}}},
      /* q=4 */ {true, {{7, 2}}},
      /* q=5 */ {true, {{6, 2}}},
      /* q=6 */ {false, {{7, 2}, {5, 3}}},
      /* q=7 */ {true, {{6, 2}, {5, 3}}},
      /* q=8 */ {true, {{7, 2}, {6, 3}}},
      /* q=9 */ {true, {{7, 2}, {5, 3}}},
      /* q=10 */ {false, {{7, 1}, {6, 3}, {5, 2}}},
      /* q=11 */ {true, {{7, 2}, {6, 3}, {5, 1}}},
  };
  return plans.at(cls - 1);
}

const std::vector<PatternClass>& classes8() {
  static const std::vector<PatternClass> table = enumerate_classes(8);
  return table;
}

int class_of_pattern8(const Pattern& p) {
  for (const PatternClass& pc : classes8()) {
    if (std::find(pc.members.begin(), pc.members.end(), p.index) !=
        pc.members.end()) {
      return pc.id;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "pattern is not of order 8");
}

bool t_is_real(const CLD& t) {
  return std::fabs(static_cast<double>(t.imag())) <=
         1e-9 * std::max(1.0, std::fabs(static_cast<double>(t.real())));
}

struct Cardano8 {
  long double A = 0, T = 0, C = 0, D = 0;
  CLD B;
  std::array<CLD, 3> t;
};

/// Cardano roots of the cubic factor of the order-8 threshold polynomial for
/// an RE/ARE pattern, principal branches. Evaluated in extended precision:
/// near the top of the useful SNR range the small roots emerge from a
/// cancellation of order A^3 and plain doubles would lose 7+ digits.
Cardano8 cardano8(const Pattern& rep, double rho, double d) {
  const long double pc1 = rep.bipolar(1), pc2 = rep.bipolar(2);
  const long double pc3 = rep.bipolar(3), pc4 = rep.bipolar(4);
  const long double pc8 = rep.bipolar(8);
  Cardano8 r;
  const long double A = std::exp(-8.0L * rho * d * d);
  const long double A3 = A * A * A, A6 = A3 * A3;
  r.A = A;
  r.T = 2 * (pc8 * A3 - pc2);
  r.C = 7 * A6 + pc2 * pc8 * A3 - 3 * pc1 * pc3 * A + 1;
  r.D = 7 * pc1 * A6 * A3 - 12 * pc1 * pc2 * pc8 * A6 - 18 * pc3 * A3 * A +
        3 * pc1 * (1 + 9 * pc4 * pc8) * A3 - 9 * pc2 * pc3 * pc8 * A +
        2 * pc1 * pc2 * pc8;
  const CLD inner = std::sqrt(CLD(r.D * r.D - 4 * r.C * r.C * r.C)) -
                    CLD(pc1 * pc8 * r.D);
  r.B = std::pow(inner, CLD(1.0L / 3.0L));
  const CLD j(0.0L, 1.0L);
  const long double s3 = std::sqrt(3.0L);
  const long double cb2 = std::pow(2.0L, 1.0L / 3.0L);
  const long double cb4 = std::pow(4.0L, 1.0L / 3.0L);
  const CLD denom = CLD(6 * pc1 * A3);
  r.t[0] = (CLD(r.T) + 2 * cb2 * CLD(r.C) / r.B + cb4 * r.B) / denom;
  r.t[1] = (CLD(r.T) - cb2 * (CLD(1) + s3 * j) * CLD(r.C) / r.B -
            (CLD(1) - s3 * j) / cb2 * r.B) /
           denom;
  r.t[2] = (CLD(r.T) - cb2 * (CLD(1) - s3 * j) * CLD(r.C) / r.B -
            (CLD(1) + s3 * j) / cb2 * r.B) /
           denom;

  // cubic coefficients (sign pattern encodes RE vs ARE via pc1*pc8)
  const long double sgn = pc1 * pc8;
  const CLD c3(pc1 * A6), c2(pc2 * A3 - pc8 * A6);
  const CLD c1(-2 * pc1 * A6 - sgn * pc2 * A3 + pc3 * A);
  const CLD c0(pc8 * A6 - pc2 * A3 - sgn * pc3 * A + pc4);
  const auto cubic = [&](CLD t) { return ((c3 * t + c2) * t + c1) * t + c0; };
  const auto dcubic = [&](CLD t) {
    return (CLD(3) * c3 * t + CLD(2) * c2) * t + c1;
  };
  const auto rel_residual = [&](CLD t) {
    const long double u = std::abs(t);
    const long double scale = std::abs(c3) * u * u * u +
                              std::abs(c2) * u * u + std::abs(c1) * u +
                              std::abs(c0);
    return static_cast<double>(std::abs(cubic(t)) /
                               std::max(scale, 1e-300L));
  };
  for (CLD& t : r.t) {
    for (int it = 0; it < 2; ++it) {
      const CLD df = dcubic(t);
      if (std::abs(df) < 1e-30L) break;  // merged root, polish would thrash
      t -= cubic(t) / df;
    }
  }
  for (const CLD& t : r.t) {
    if (rel_residual(t) > 1e-9) {
      throw Error(ErrorCode::NumericalFailure,
                  "cubic root failed residual validation for pattern " +
                      std::to_string(rep.index));
    }
  }
  return r;
}

double f_of_t(const CLD& t, double rho, double d) {
  const double u = static_cast<double>(std::abs(t));
  if (u < 2.0) return 0.0;  // roots on the unit circle: threshold at zero
  return std::log(0.5 * (u + std::sqrt(u * u - 4.0))) / (4.0 * rho * d);
}

}  // namespace

CubicIntermediates cubic_intermediates(const Pattern& p, const Snr& snr) {
  if (p.order != 8) {
    throw Error(ErrorCode::WrongOrder, "closed form is for order 8");
  }
  if (p.sym == SymmetryType::ASY) {
    throw Error(ErrorCode::AsymmetricPattern,
                "no closed form for asymmetric patterns");
  }
  const int cls = class_of_pattern8(p);
  const Pattern& rep = classes8()[cls - 1].representative;
  const Constellation c = make_constellation(8);
  const Cardano8 r = cardano8(rep, snr.rho, c.half_spacing);

  CubicIntermediates out;
  out.A = static_cast<double>(r.A);
  out.T = static_cast<double>(r.T);
  out.C = static_cast<double>(r.C);
  out.D = static_cast<double>(r.D);
  out.B = {static_cast<double>(r.B.real()), static_cast<double>(r.B.imag())};
  for (int n = 0; n < 3; ++n) {
    out.t[n] = {static_cast<double>(r.t[n].real()),
                static_cast<double>(r.t[n].imag())};
  }
  if (rep.sym == SymmetryType::ARE) out.z.emplace_back(1.0, 0.0);
  for (const CLD& t : r.t) {
    if (t_is_real(t) && t.real() >= 2.0L) {
      const long double root = std::sqrt(t.real() * t.real() - 4.0L);
      out.z.emplace_back(static_cast<double>((t.real() + root) / 2), 0.0);
      out.z.emplace_back(static_cast<double>((t.real() - root) / 2), 0.0);
    }
  }
  return out;
}

ThresholdSet bd_thresholds_8pam(const Pattern& p, const Snr& snr,
                                const Constellation& c) {
  if (p.order != 8) {
    throw Error(ErrorCode::WrongOrder, "closed form is for order 8");
  }
  if (p.sym == SymmetryType::ASY) {
    throw Error(ErrorCode::AsymmetricPattern,
                "classes 12-23 need the numeric route");
  }
  const int cls = class_of_pattern8(p);
  const Pattern& rep = classes8()[cls - 1].representative;
  const EightPamPlan& plan = plan_for_class(cls);
  const Cardano8 r = cardano8(rep, snr.rho, c.half_spacing);

  ThresholdSet ts;
  ts.pattern = p;
  ts.snr = snr;
  ts.method = ThresholdMethod::ClosedForm8;
  if (plan.zero4) ts.entries[4] = {0.0, false, 0};

  // first pass: values and liveness
  struct Slot {
    int k;
    int n;
    bool live;
    double value;
  };
  std::vector<Slot> slots;
  for (auto [k, n] : plan.kn) {
    const CLD& t = r.t[n - 1];
    const bool live = t_is_real(t) && t.real() >= 2.0L;
    slots.push_back({k, n, live, f_of_t(t, snr.rho, c.half_spacing)});
  }
  // second pass: partners of the degenerate entries
  for (const Slot& s : slots) {
    int partner = 0;
    if (!s.live) {
      const CLD& t = r.t[s.n - 1];
      if (t_is_real(t)) {
        // real |t| < 2: the +-pair collapsed onto the center
        partner = plan.zero4 ? 4 : 8 - s.k;
      } else {
        // complex pair: the conjugate root's threshold carries the same |t|
        for (const Slot& o : slots) {
          if (o.n != s.n &&
              std::abs(r.t[o.n - 1] - std::conj(r.t[s.n - 1])) <=
                  1e-6L * std::max<long double>(1.0L,
                                                std::abs(r.t[s.n - 1]))) {
            partner = o.k;
          }
        }
        if (partner == 0) {
          throw Error(ErrorCode::NumericalFailure,
                      "complex cubic root without its conjugate partner");
        }
      }
    }
    ts.entries[s.k] = {s.value, !s.live, partner};
    const int mk = 8 - s.k;
    int mpartner = 0;
    if (!s.live) mpartner = (partner == 4) ? 4 : 8 - partner;
    ts.entries[mk] = {-s.value, !s.live, mpartner};
  }
  return ts;
}

ThresholdSet bd_thresholds(const Pattern& p, const Snr& snr,
                           const Constellation& c) {
  if (p.order == 4) return bd_thresholds_4pam(p, snr, c);
  if (p.order == 8 && p.sym != SymmetryType::ASY) {
    return bd_thresholds_8pam(p, snr, c);
  }
  return bd_thresholds_numeric(p, snr, c);
}

}  // namespace pamber
