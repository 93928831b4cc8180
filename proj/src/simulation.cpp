#include "pamber/simulation.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <vector>

#include "pamber/error.hpp"

namespace pamber {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : state_(mix64(seed + kGolden) ^ (trial * 0xD1B54A32D192ED03ull)) {}

std::uint64_t TrialRng::next_u64() { return mix64(state_ += kGolden); }

double TrialRng::next_unit() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double TrialRng::next_gaussian() {
  const double u1 = next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double llr_exact(double y, std::span<const double> zeros,
                 std::span<const double> ones, const Snr& snr) {
  const auto lse = [&](std::span<const double> pts) {
    double vmax = -std::numeric_limits<double>::infinity();
    for (double x : pts) {
      const double v = -snr.rho * (y - x) * (y - x);
      if (v > vmax) vmax = v;
    }
    double s = 0;
    for (double x : pts) {
      const double v = -snr.rho * (y - x) * (y - x);
      s += std::exp(v - vmax);
    }
    return vmax + std::log(s);
  };
  return lse(ones) - lse(zeros);
}

double llr_maxlog(double y, std::span<const double> zeros,
                  std::span<const double> ones, const Snr& snr) {
  const auto min_sq = [&](std::span<const double> pts) {
    double best = std::numeric_limits<double>::infinity();
    for (double x : pts) {
      const double v = (y - x) * (y - x);
      if (v < best) best = v;
    }
    return best;
  };
  return snr.rho * (min_sq(zeros) - min_sq(ones));
}

namespace {

struct BitSubsets {
  std::vector<double> zeros;
  std::vector<double> ones;
};

BitSubsets subsets_of(const Pattern& p, const Constellation& c) {
  BitSubsets s;
  for (int i = 0; i < p.order; ++i) {
    (p.bits[i] ? s.ones : s.zeros).push_back(c.points[i]);
  }
  return s;
}

SimResult finish(std::uint64_t errors, std::uint64_t decisions) {
  SimResult r;
  r.errors = errors;
  r.trials = decisions;
  r.estimate = static_cast<double>(errors) / static_cast<double>(decisions);
  r.ci95_halfwidth =
      1.96 * std::sqrt(r.estimate * (1.0 - r.estimate) /
                       static_cast<double>(decisions));
  return r;
}

void check_config(const SimConfig& cfg) {
  if (cfg.trials < 1) {
    throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  }
  if (cfg.shards < 1) {
    throw Error(ErrorCode::InvalidArgument, "need at least one shard");
  }
}

/// Runs fn(trial) -> errors over [0, trials) split into shards; the split is
/// purely a parallelization detail because every trial is self-seeded.
template <typename PerTrial>
std::uint64_t sharded_errors(const SimConfig& cfg, const PerTrial& fn) {
  const std::uint64_t n = cfg.trials;
  const int shards = cfg.shards;
  std::vector<std::future<std::uint64_t>> jobs;
  jobs.reserve(shards);
  for (int s = 0; s < shards; ++s) {
    const std::uint64_t begin = n * s / shards;
    const std::uint64_t end = n * (s + 1) / shards;
    jobs.push_back(std::async(std::launch::async, [&fn, begin, end] {
      std::uint64_t errors = 0;
      for (std::uint64_t t = begin; t < end; ++t) errors += fn(t);
      return errors;
    }));
  }
  std::uint64_t errors = 0;
  for (auto& j : jobs) errors += j.get();  // ordered reduction
  return errors;
}

}  // namespace

SimResult run_pber_sim(const SimConfig& cfg, const Pattern& p, const Snr& snr,
                       const Constellation& c) {
  check_config(cfg);
  const BitSubsets sub = subsets_of(p, c);
  const double sigma = noise_sigma(snr.rho);
  const int m = c.bits_per_symbol;

  const auto one_trial = [&](std::uint64_t trial) -> std::uint64_t {
    TrialRng rng(cfg.seed, trial);
    const int sym = static_cast<int>(rng.next_u64() >> (64 - m));
    const double y = c.points[sym] + sigma * rng.next_gaussian();
    const double l = cfg.demod == Demodulator::BD
                         ? llr_exact(y, sub.zeros, sub.ones, snr)
                         : llr_maxlog(y, sub.zeros, sub.ones, snr);
    const int decided = l >= 0.0 ? 1 : 0;
    return decided != p.bits[sym] ? 1u : 0u;
  };
  return finish(sharded_errors(cfg, one_trial), cfg.trials);
}

SimResult run_ber_sim(const SimConfig& cfg, const Labeling& l, const Snr& snr,
                      const Constellation& c) {
  check_config(cfg);
  const int m = c.bits_per_symbol;
  std::vector<BitSubsets> sub;
  sub.reserve(m);
  for (std::uint64_t w : l.column_indices) {
    sub.push_back(subsets_of(pattern_from_index(w, l.order), c));
  }
  // label word -> constellation point index
  std::vector<int> point_of(l.order, -1);
  for (int i = 0; i < l.order; ++i) {
    std::uint64_t word = 0;
    for (int j = 0; j < m; ++j) word = (word << 1) | l.code(i, j);
    point_of[word] = i;
  }
  const double sigma = noise_sigma(snr.rho);

  const auto one_trial = [&](std::uint64_t trial) -> std::uint64_t {
    TrialRng rng(cfg.seed, trial);
    const std::uint64_t word = rng.next_u64() >> (64 - m);
    const int sym = point_of[word];
    const double y = c.points[sym] + sigma * rng.next_gaussian();
    std::uint64_t errors = 0;
    for (int j = 0; j < m; ++j) {
      const double v = cfg.demod == Demodulator::BD
                           ? llr_exact(y, sub[j].zeros, sub[j].ones, snr)
                           : llr_maxlog(y, sub[j].zeros, sub[j].ones, snr);
      const int decided = v >= 0.0 ? 1 : 0;
      errors += decided != l.code(sym, j) ? 1u : 0u;
    }
    return errors;
  };
  return finish(sharded_errors(cfg, one_trial), cfg.trials * m);
}

}  // namespace pamber
