#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pamber/pattern.hpp"

namespace pamber {

/// A binary labeling: the M x m matrix whose i-th row is the label of the
/// i-th constellation point. Each column read top to bottom is a pattern;
/// error rates depend only on the multiset of column patterns.
struct Labeling {
  std::string name;
  int order = 0;                              // M
  Eigen::MatrixXi code;                       // M x m, entries 0/1
  std::vector<std::uint64_t> column_indices;  // pattern index per column
  std::vector<int> class_vector;              // sorted class ids of columns
  Eigen::VectorXi abd_weights;                // column-wise sum of weights
};

enum class BuiltinLabeling { Brgc, Nbc, Fbc, Bsgc, Agc };

const char* to_string(BuiltinLabeling l);
BuiltinLabeling builtin_labeling_from_name(std::string_view name);

/// BRGC and NBC exist for every power-of-two order via the standard
/// reflect-and-prefix / binary-counting constructions. FBC and BSGC are
/// defined for order 8 only, AGC for orders 4 and 8.
Labeling builtin_labeling(BuiltinLabeling which, int order);

/// Build a labeling from explicit column pattern indices. Throws
/// NotABijection if the resulting rows are not all distinct.
Labeling labeling_from_columns(const std::vector<std::uint64_t>& columns,
                               int order);

struct LabelingCensus {
  std::uint64_t total_valid = 0;            // all bijective assignments: M!
  std::uint64_t distinct_class_vectors = 0; // number of BER-distinct labelings
};

/// Exhaustive census over all M! point-to-label assignments (M in {4, 8}).
LabelingCensus count_distinct_labelings(int order);

/// The distinct sorted class-id vectors behind the census.
std::set<std::vector<int>> distinct_class_vectors(int order);

}  // namespace pamber
