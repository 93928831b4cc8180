#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pamber/ber.hpp"
#include "pamber/simulation.hpp"

namespace pamber::cli {

inline constexpr const char* kSchemaVersion = "1";

enum class Format { Csv, Json };

Format format_from_name(const std::string& name);

/// "start:step:stop" in dB, endpoints inclusive within half a step; a bare
/// number is a single-point range.
struct SnrRange {
  double start = 0;
  double step = 0;
  double stop = 0;

  std::vector<double> values() const;
};

SnrRange parse_snr_range(const std::string& text);

/// 12 significant digits, the fixed serialization for every numeric field.
std::string format_double(double v);

// Each command returns the complete output document (CSV or JSON).
std::string classes_command(int order, Format format);
std::string thresholds_command(int order, std::uint64_t pattern,
                               const SnrRange& range,
                               const std::string& method, Format format);
std::string pber_command(int order, std::optional<std::uint64_t> pattern,
                         std::optional<int> cls, Demodulator demod,
                         const SnrRange& range, Format format);
std::string ber_command(int order, const std::string& labeling,
                        Demodulator demod, const SnrRange& range,
                        Format format);
std::string simulate_command(int order, std::optional<std::uint64_t> pattern,
                             const std::optional<std::string>& labeling,
                             Demodulator demod, double snr_db,
                             std::uint64_t trials, std::uint64_t seed,
                             int shards, Format format);
std::string labelings_command(int order, bool count_distinct, Format format);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace pamber::cli
