#pragma once

#include <array>
#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "pamber/constellation.hpp"
#include "pamber/pattern.hpp"

namespace pamber {

enum class ThresholdMethod { ClosedForm4, ClosedForm8, PolyNumeric, SignScan, AbdMidpoint };

const char* to_string(ThresholdMethod m);

struct ThresholdEntry {
  double value = 0;
  bool is_virtual = false;
  int partner = 0;  // k' with beta_k == beta_{k'}; 0 when not virtual
};

/// Decision boundaries of one pattern at one SNR, keyed by the pattern's
/// threshold indices k. A virtual entry marks a boundary that has merged
/// away at this SNR; its value is pinned to its partner so that the
/// closed-form error-rate sum stays exact (the paired terms cancel).
struct ThresholdSet {
  Pattern pattern;
  Snr snr;
  std::map<int, ThresholdEntry> entries;
  ThresholdMethod method = ThresholdMethod::SignScan;
};

/// Max-log thresholds: midpoints between adjacent points with differing
/// bits. SNR-independent, never virtual.
ThresholdSet abd_thresholds(const Pattern& p, const Constellation& c);

/// Coefficients of the degree-(M-1) polynomial whose real positive roots z
/// give the exact-LLR thresholds via beta = log(z)/(4 rho d). Coefficient
/// of z^(i-1) is pc_i * A^((M/2-i)(M/2+1-i)/2) with pc the bipolar bits.
Eigen::VectorXd bd_polynomial(const Pattern& p, const Snr& snr);

/// All sign changes of the exact LLR over y, ascending, each refined by
/// bisection. This is the authoritative numeric route; tangencies do not
/// count as crossings.
std::vector<double> llr_sign_changes(const Pattern& p, const Snr& snr,
                                     const Constellation& c);

/// Numeric thresholds for any pattern and order. Boundaries come from the
/// LLR sign scan, cross-checked against the polynomial roots (companion
/// matrix) where the polynomial is representable. Virtual entries are
/// identified by tracking boundaries downward in SNR from a high-SNR
/// reference where all of them exist.
ThresholdSet bd_thresholds_numeric(const Pattern& p, const Snr& snr,
                                   const Constellation& c);

/// Same as bd_thresholds_numeric over a dB grid, sharing one tracking pass.
/// Results are returned in the order of the given grid.
std::vector<ThresholdSet> bd_thresholds_numeric_sweep(
    const Pattern& p, const std::vector<double>& snr_db_grid,
    const Constellation& c);

/// Closed form for order 4 (any pattern).
ThresholdSet bd_thresholds_4pam(const Pattern& p, const Snr& snr,
                                const Constellation& c);

/// Closed form for order 8, RE and ARE patterns only (the eleven
/// two-member classes). Asymmetric patterns must use the numeric route.
ThresholdSet bd_thresholds_8pam(const Pattern& p, const Snr& snr,
                                const Constellation& c);

/// Best available method: closed form for order 4 and for order-8 RE/ARE
/// patterns, sign scan otherwise.
ThresholdSet bd_thresholds(const Pattern& p, const Snr& snr,
                           const Constellation& c);

/// Intermediate quantities of the order-8 closed form, exposed so tests can
/// validate the cubic roots and the retained polynomial roots by residual.
struct CubicIntermediates {
  double A = 0;
  double T = 0;
  double C = 0;
  double D = 0;
  std::complex<double> B;
  std::array<std::complex<double>, 3> t;   // Cardano roots of the cubic
  std::vector<std::complex<double>> z;     // retained real positive roots
};

CubicIntermediates cubic_intermediates(const Pattern& p, const Snr& snr);

}  // namespace pamber
