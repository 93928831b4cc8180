#include "pamber/constellation.hpp"

#include <cmath>

#include "pamber/error.hpp"

namespace pamber {

namespace {

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

Constellation make_constellation(int order) {
  if (order < 4) {
    throw Error(ErrorCode::OrderTooSmall,
                "PAM order must be at least 4, got " + std::to_string(order));
  }
  if (!is_power_of_two(order)) {
    throw Error(ErrorCode::NotPowerOfTwo,
                "PAM order must be a power of two, got " + std::to_string(order));
  }
  if (order > (1 << 20)) {
    throw Error(ErrorCode::OrderTooLarge,
                "PAM order capped at 2^20, got " + std::to_string(order));
  }

  Constellation c;
  c.order = order;
  c.bits_per_symbol = 0;
  for (int v = order; v > 1; v >>= 1) ++c.bits_per_symbol;
  c.half_spacing =
      std::sqrt(3.0 / (static_cast<double>(order) * order - 1.0));
  c.points.resize(order);
  // Build from one half so antisymmetry s_i = -s_{M+1-i} is bit-exact.
  for (int i = 1; i <= order / 2; ++i) {
    const double s = -c.half_spacing * (order - 2 * i + 1);
    c.points[i - 1] = s;
    c.points[order - i] = -s;
  }
  return c;
}

double q_function(double x) {
  if (x > 40.0) return 0.0;
  if (x < -40.0) return 1.0;
  return 0.5 * std::erfc(x * M_SQRT1_2);
}

Snr snr_from_linear(double rho, const Constellation& c) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::InvalidArgument, "SNR must be a positive finite value");
  }
  Snr s;
  s.rho = rho;
  s.db = 10.0 * std::log10(rho);
  s.A = std::exp(-8.0 * rho * c.half_spacing * c.half_spacing);
  return s;
}

Snr snr_from_db(double db, const Constellation& c) {
  if (!std::isfinite(db)) {
    throw Error(ErrorCode::InvalidArgument, "SNR in dB must be finite");
  }
  Snr s = snr_from_linear(std::pow(10.0, db / 10.0), c);
  s.db = db;  // keep the caller's exact dB value
  return s;
}

double noise_sigma(double rho) { return 1.0 / std::sqrt(2.0 * rho); }

}  // namespace pamber
