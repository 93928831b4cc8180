#pragma once

#include <Eigen/Dense>

namespace pamber {

/// Equally spaced M-PAM constellation normalized to unit average symbol
/// energy: s_i = -d(M - 2i + 1) with d = sqrt(3/(M^2-1)).
struct Constellation {
  int order = 0;            // M, a power of two >= 4
  int bits_per_symbol = 0;  // log2(M)
  double half_spacing = 0;  // d; adjacent points are 2d apart
  Eigen::VectorXd points;   // ascending, antisymmetric about 0

  /// 1-based accessor, i in [1, M].
  double point(int i) const { return points[i - 1]; }
};

Constellation make_constellation(int order);

/// Gaussian tail probability Q(x) = P(N(0,1) > x). Arguments beyond +-40
/// saturate to 0/1; the true tail mass there is below double precision.
double q_function(double x);

/// Signal-to-noise ratio, kept in the three forms the analysis needs:
/// linear rho = Es/N0, decibels, and A = exp(-8 rho d^2), the base of the
/// threshold polynomials. A underflows to exactly 0 at extreme SNR (for
/// M = 4 around 27 dB); the scan-based paths never touch it.
struct Snr {
  double rho = 0;  // linear, > 0
  double db = 0;   // 10*log10(rho)
  double A = 0;    // exp(-8 rho d^2), in (0, 1) while representable
};

Snr snr_from_db(double db, const Constellation& c);
Snr snr_from_linear(double rho, const Constellation& c);

/// Noise standard deviation per trial, sigma = sqrt(N0/2) = 1/sqrt(2 rho).
double noise_sigma(double rho);

}  // namespace pamber
