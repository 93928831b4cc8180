#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pamber/constellation.hpp"
#include "pamber/labeling.hpp"
#include "pamber/pattern.hpp"
#include "pamber/thresholds.hpp"

namespace pamber {

enum class Demodulator { BD, ABD };

const char* to_string(Demodulator d);

/// Pattern error rate from a resolved threshold set:
///   P = 1/2 + (1/M) sum_i sum_{k in K} g_ik Q((beta_k - s_i) sqrt(2 rho)),
/// g_ik = (p_{k+1} - p_k)(1 - 2 p_i). Virtual entries must carry their
/// partner's value; the paired terms then cancel exactly.
double pber_closed_form(const Pattern& p, const ThresholdSet& ts,
                        const Snr& snr, const Constellation& c);

/// Pattern error rate straight from decision regions: boundaries ascending,
/// region_labels one bit per region (boundaries.size() + 1 of them).
double pber_from_regions(const Pattern& p, const std::vector<double>& boundaries,
                         const std::vector<std::uint8_t>& region_labels,
                         const Snr& snr, const Constellation& c);

/// Max-log pattern error rate, (1/M) sum_n a_n Q((2n-1) d sqrt(2 rho)).
double pber_abd(const Pattern& p, const Snr& snr, const Constellation& c);

/// Exact-LLR pattern error rate through the best available threshold method.
double pber_bd(const Pattern& p, const Snr& snr, const Constellation& c);

double pber(const Pattern& p, Demodulator d, const Snr& snr,
            const Constellation& c);

/// Average bit error rate of a labeling: mean of the column pattern error
/// rates (BD), or the weight-vector form (ABD).
double ber_labeling(const Labeling& l, Demodulator d, const Snr& snr,
                    const Constellation& c);

/// The matrices behind the closed-form expansion, exposed for validation:
/// e(i,k) flags label disagreement between points i and k, v(i,k) is the
/// probability of landing in the k-th threshold cell given s_i was sent,
/// and (1/M) sum e(i,k) v(i,k) reproduces the pattern error rate.
struct BerExpansion {
  Eigen::MatrixXi g;  // M x (M-1), nonzero exactly at threshold columns
  Eigen::MatrixXi e;  // M x M
  Eigen::MatrixXd v;  // M x M, rows sum to 1
};

BerExpansion make_ber_expansion(const Pattern& p, const ThresholdSet& ts,
                                const Snr& snr, const Constellation& c);

double pber_from_expansion(const BerExpansion& x);

struct BerCurvePoint {
  std::string subject;  // pattern index ("p165") or labeling name
  Demodulator demod = Demodulator::BD;
  double snr_db = 0;
  double value = 0;
  std::string method;
};

}  // namespace pamber
