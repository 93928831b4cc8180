#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace pamber {

enum class SymmetryType { RE, ARE, ASY };

const char* to_string(SymmetryType t);

/// A bit pattern: length-M binary vector of Hamming weight M/2, i.e. one
/// column of a labeling. Decision boundaries can only sit between positions
/// k, k+1 whose bits differ; those k form threshold_indices (1-based).
struct Pattern {
  int order = 0;                       // M
  std::vector<std::uint8_t> bits;      // bits[i-1] = p_i
  std::uint64_t index = 0;             // MSB-first decimal value of the bits
  std::vector<int> threshold_indices;  // ascending, subset of [1, M-1]
  SymmetryType sym = SymmetryType::ASY;

  int bit(int i) const { return bits[i - 1]; }          // 1-based
  int bipolar(int i) const { return 2 * bits[i - 1] - 1; }

  bool operator==(const Pattern& o) const {
    return order == o.order && index == o.index;
  }
};

Pattern pattern_from_index(std::uint64_t w, int order);
Pattern pattern_from_bits(std::vector<std::uint8_t> bits);

Pattern reflect(const Pattern& p);  // p'_i = p_{M+1-i}
Pattern negate(const Pattern& p);   // p'_i = 1 - p_i

/// RE if reflect(p) == p, ARE if negate(reflect(p)) == p, ASY otherwise.
SymmetryType classify_symmetry(const Pattern& p);

/// Integer weights a_1..a_{M-1} of the pattern's midpoint-threshold
/// (max-log) bit error rate, (1/M) sum_n a_n Q((2n-1) d sqrt(2 rho)).
/// Identical for all patterns related by reflection or negation.
Eigen::VectorXi abd_weights(const Pattern& p);

/// An equivalence class of patterns under reflection/negation. Every class
/// has two members (RE/ARE) or four (ASY), all with identical error rates.
struct PatternClass {
  int id = 0;                          // 1-based rank
  Pattern representative;
  std::vector<std::uint64_t> members;  // ascending (2 or 4 entries)
  SymmetryType sym = SymmetryType::ASY;
  Eigen::VectorXi weights;             // abd_weights of the representative
};

/// All pattern classes for order M <= 16. Two-member (RE/ARE) classes come
/// first, then four-member (ASY) classes; each block is sorted by
/// lexicographically ascending weight vector (best high-SNR error rate
/// first), ties broken by smallest member index.
std::vector<PatternClass> enumerate_classes(int order);

struct ClassCounts {
  std::uint64_t total = 0;
  std::uint64_t re = 0;
  std::uint64_t are = 0;
  std::uint64_t asy = 0;
};

/// Closed-form class counts:
///   total = (C(M,M/2) + C(M/2,M/4) + 2^(M/2)) / 4,
///   re    = C(M/2,M/4) / 2,  are = 2^(M/2-1),  asy = the rest.
/// Exact in 64 bits for M <= 64; agrees with enumerate_classes for M <= 16.
ClassCounts class_counts(int order);

/// Pattern index -> class id, over every pattern of every class.
std::unordered_map<std::uint64_t, int> class_id_lookup(
    const std::vector<PatternClass>& classes);

}  // namespace pamber
