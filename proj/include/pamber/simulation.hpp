#pragma once

#include <cstdint>
#include <span>

#include "pamber/ber.hpp"
#include "pamber/constellation.hpp"
#include "pamber/labeling.hpp"
#include "pamber/pattern.hpp"

namespace pamber {

/// Deterministic per-trial random stream. Each trial gets its own splitmix64
/// stream keyed by (seed, global trial index), so any sharding of the trial
/// range reproduces the same draws bit for bit.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64();
  double next_unit();      // uniform in (0, 1]
  /// Standard normal via Box-Muller from two 53-bit uniforms.
  double next_gaussian();

 private:
  std::uint64_t state_;
};

/// Exact a-posteriori LLR, log-sum-exp over each bit subset, max-shifted.
double llr_exact(double y, std::span<const double> zeros,
                 std::span<const double> ones, const Snr& snr);

/// Max-log LLR: rho * (min over zeros of (y-x)^2 - min over ones).
double llr_maxlog(double y, std::span<const double> zeros,
                  std::span<const double> ones, const Snr& snr);

struct SimConfig {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  int shards = 1;  // parallel blocks; never changes the result
  Demodulator demod = Demodulator::BD;
};

struct SimResult {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;  // bit decisions counted (m * trials for BER)
  double estimate = 0;
  double ci95_halfwidth = 0;
};

/// Bit error rate of one pattern: draw a symbol uniformly, add N(0, 1/(2rho))
/// noise, decide the bit from the configured LLR, compare against the
/// pattern bit of the sent symbol.
SimResult run_pber_sim(const SimConfig& cfg, const Pattern& p, const Snr& snr,
                       const Constellation& c);

/// Average bit error rate of a labeling: draw an m-bit word, map it through
/// the labeling, count errors over all m positions.
SimResult run_ber_sim(const SimConfig& cfg, const Labeling& l, const Snr& snr,
                      const Constellation& c);

}  // namespace pamber
