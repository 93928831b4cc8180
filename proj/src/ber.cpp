#include "pamber/ber.hpp"

#include <algorithm>
#include <cmath>

#include "pamber/error.hpp"

namespace pamber {

const char* to_string(Demodulator d) {
  return d == Demodulator::BD ? "bd" : "abd";
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

int g_ik(const Pattern& p, int i, int k) {
  return (p.bit(k + 1) - p.bit(k)) * (1 - 2 * p.bit(i));
}

}  // namespace

double pber_closed_form(const Pattern& p, const ThresholdSet& ts,
                        const Snr& snr, const Constellation& c) {
  const int M = p.order;
  double sum = 0;
  for (int k : p.threshold_indices) {
    const auto it = ts.entries.find(k);
    if (it == ts.entries.end() || !std::isfinite(it->second.value)) {
      throw Error(ErrorCode::UnresolvedVirtual,
                  "threshold set does not resolve index " + std::to_string(k));
    }
    const double beta = it->second.value;
    for (int i = 1; i <= M; ++i) {
      sum += g_ik(p, i, k) *
             q_function((beta - c.point(i)) * std::sqrt(2.0 * snr.rho));
    }
  }
  return clamp01(0.5 + sum / M);
}

double pber_from_regions(const Pattern& p, const std::vector<double>& boundaries,
                         const std::vector<std::uint8_t>& region_labels,
                         const Snr& snr, const Constellation& c) {
  const int M = p.order;
  if (region_labels.size() != boundaries.size() + 1) {
    throw Error(ErrorCode::InconsistentLabels,
                "need one region label per cell");
  }
  if (!std::is_sorted(boundaries.begin(), boundaries.end())) {
    throw Error(ErrorCode::InconsistentLabels, "boundaries must be ascending");
  }
  if (region_labels.front() != p.bits.front() ||
      region_labels.back() != p.bits.back()) {
    throw Error(ErrorCode::InconsistentLabels,
                "outer regions must decide the outer pattern bits");
  }
  const double scale = std::sqrt(2.0 * snr.rho);
  double sum = 0;
  for (int i = 1; i <= M; ++i) {
    const double s = c.point(i);
    // P(cell r | s_i) = Q(lower) - Q(upper) with Q(-inf)=1, Q(+inf)=0
    for (std::size_t r = 0; r < region_labels.size(); ++r) {
      if (region_labels[r] == p.bit(i)) continue;
      const double lower =
          (r == 0) ? 1.0 : q_function((boundaries[r - 1] - s) * scale);
      const double upper = (r == boundaries.size())
                               ? 0.0
                               : q_function((boundaries[r] - s) * scale);
      sum += lower - upper;
    }
  }
  return clamp01(sum / M);
}

double pber_abd(const Pattern& p, const Snr& snr, const Constellation& c) {
  const int M = p.order;
  const Eigen::VectorXi a = abd_weights(p);
  const double scale = c.half_spacing * std::sqrt(2.0 * snr.rho);
  double sum = 0;
  for (int n = 1; n <= M - 1; ++n) {
    if (a[n - 1] != 0) sum += a[n - 1] * q_function((2 * n - 1) * scale);
  }
  return clamp01(sum / M);
}

double pber_bd(const Pattern& p, const Snr& snr, const Constellation& c) {
  const ThresholdSet ts = bd_thresholds(p, snr, c);
  return pber_closed_form(p, ts, snr, c);
}

double pber(const Pattern& p, Demodulator d, const Snr& snr,
            const Constellation& c) {
  return d == Demodulator::BD ? pber_bd(p, snr, c) : pber_abd(p, snr, c);
}

double ber_labeling(const Labeling& l, Demodulator d, const Snr& snr,
                    const Constellation& c) {
  const int m = static_cast<int>(l.column_indices.size());
  if (d == Demodulator::ABD) {
    const double scale = c.half_spacing * std::sqrt(2.0 * snr.rho);
    double sum = 0;
    for (int n = 1; n <= l.order - 1; ++n) {
      const int w = l.abd_weights[n - 1];
      if (w != 0) sum += w * q_function((2 * n - 1) * scale);
    }
    return clamp01(sum / (m * l.order));
  }
  double sum = 0;
  for (std::uint64_t w : l.column_indices) {
    sum += pber_bd(pattern_from_index(w, l.order), snr, c);
  }
  return sum / m;
}

BerExpansion make_ber_expansion(const Pattern& p, const ThresholdSet& ts,
                                const Snr& snr, const Constellation& c) {
  const int M = p.order;
  BerExpansion x;
  x.g.setZero(M, M - 1);
  x.e.setZero(M, M);
  x.v.setZero(M, M);

  // full boundary vector: resolved thresholds where they exist, midpoints
  // as inert fillers elsewhere (their cells carry equal labels, so they
  // cancel out of the error rate)
  std::vector<double> beta(M - 1);
  for (int k = 1; k <= M - 1; ++k) {
    const auto it = ts.entries.find(k);
    if (it != ts.entries.end()) {
      beta[k - 1] = it->second.value;
    } else {
      beta[k - 1] = 0.5 * (c.point(k) + c.point(k + 1));
    }
  }

  const double scale = std::sqrt(2.0 * snr.rho);
  for (int i = 1; i <= M; ++i) {
    for (int k = 1; k <= M - 1; ++k) x.g(i - 1, k - 1) = g_ik(p, i, k);
    for (int k = 1; k <= M; ++k) {
      x.e(i - 1, k - 1) = p.bit(i) ^ p.bit(k);
      const double lower =
          (k == 1) ? 1.0 : q_function((beta[k - 2] - c.point(i)) * scale);
      const double upper =
          (k == M) ? 0.0 : q_function((beta[k - 1] - c.point(i)) * scale);
      x.v(i - 1, k - 1) = lower - upper;
    }
  }
  return x;
}

double pber_from_expansion(const BerExpansion& x) {
  const int M = static_cast<int>(x.e.rows());
  double sum = 0;
  for (int i = 0; i < M; ++i) {
    for (int k = 0; k < M; ++k) sum += x.e(i, k) * x.v(i, k);
  }
  return sum / M;
}

}  // namespace pamber
