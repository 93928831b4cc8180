#include "pamber/labeling.hpp"

#include <algorithm>
#include <numeric>

#include "pamber/error.hpp"

namespace pamber {

const char* to_string(BuiltinLabeling l) {
  switch (l) {
    case BuiltinLabeling::Brgc: return "brgc";
    case BuiltinLabeling::Nbc: return "nbc";
    case BuiltinLabeling::Fbc: return "fbc";
    case BuiltinLabeling::Bsgc: return "bsgc";
    case BuiltinLabeling::Agc: return "agc";
  }
  return "?";
}

BuiltinLabeling builtin_labeling_from_name(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (n == "brgc") return BuiltinLabeling::Brgc;
  if (n == "nbc") return BuiltinLabeling::Nbc;
  if (n == "fbc") return BuiltinLabeling::Fbc;
  if (n == "bsgc") return BuiltinLabeling::Bsgc;
  if (n == "agc") return BuiltinLabeling::Agc;
  throw Error(ErrorCode::InvalidArgument, "unknown labeling '" + n + "'");
}

namespace {

int log2_order(int order) {
  int m = 0;
  for (int v = order; v > 1; v >>= 1) ++m;
  return m;
}

void check_order(int order) {
  if (order < 4 || (order & (order - 1)) != 0) {
    throw Error(ErrorCode::NotPowerOfTwo,
                "labeling order must be a power of two >= 4, got " +
                    std::to_string(order));
  }
}

/// Fills class_vector and abd_weights from the column patterns. Class ids
/// need the exhaustive enumeration, so class_vector stays empty beyond
/// order 16; the weight vector is available for any order.
void annotate(Labeling& l) {
  const int m = static_cast<int>(l.column_indices.size());
  l.class_vector.clear();
  l.abd_weights = Eigen::VectorXi::Zero(l.order - 1);
  std::unordered_map<std::uint64_t, int> lookup;
  if (l.order <= 16) lookup = class_id_lookup(enumerate_classes(l.order));
  for (int j = 0; j < m; ++j) {
    const Pattern p = pattern_from_index(l.column_indices[j], l.order);
    if (!lookup.empty()) l.class_vector.push_back(lookup.at(p.index));
    l.abd_weights += abd_weights(p);
  }
  std::sort(l.class_vector.begin(), l.class_vector.end());
}

Labeling from_rows(std::string name, int order,
                   const std::vector<std::uint64_t>& row_labels) {
  const int m = log2_order(order);
  Labeling l;
  l.name = std::move(name);
  l.order = order;
  l.code.resize(order, m);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < m; ++j) {
      l.code(i, j) = (row_labels[i] >> (m - 1 - j)) & 1u;
    }
  }
  l.column_indices.assign(m, 0);
  for (int j = 0; j < m; ++j) {
    std::uint64_t w = 0;
    for (int i = 0; i < order; ++i) w = (w << 1) | l.code(i, j);
    l.column_indices[j] = w;
  }
  annotate(l);
  return l;
}

std::vector<std::uint64_t> brgc_rows(int m) {
  std::vector<std::uint64_t> rows{0, 1};
  for (int j = 1; j < m; ++j) {
    const std::size_t n = rows.size();
    std::vector<std::uint64_t> next;
    next.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) next.push_back(rows[i]);
    for (std::size_t i = 0; i < n; ++i)
      next.push_back((1ull << j) | rows[n - 1 - i]);
    rows = std::move(next);
  }
  return rows;
}

std::vector<std::uint64_t> nbc_rows(int m) {
  std::vector<std::uint64_t> rows(1ull << m);
  std::iota(rows.begin(), rows.end(), 0ull);
  return rows;
}

}  // namespace

Labeling labeling_from_columns(const std::vector<std::uint64_t>& columns,
                               int order) {
  check_order(order);
  const int m = log2_order(order);
  if (static_cast<int>(columns.size()) != m) {
    throw Error(ErrorCode::WrongCount,
                "need " + std::to_string(m) + " columns for order " +
                    std::to_string(order) + ", got " +
                    std::to_string(columns.size()));
  }
  Labeling l;
  l.name = "custom";
  l.order = order;
  l.code.resize(order, m);
  l.column_indices = columns;
  for (int j = 0; j < m; ++j) {
    const Pattern p = pattern_from_index(columns[j], order);  // validates
    for (int i = 0; i < order; ++i) l.code(i, j) = p.bits[i];
  }
  std::vector<std::uint64_t> rows(order, 0);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < m; ++j) rows[i] = (rows[i] << 1) | l.code(i, j);
  }
  std::sort(rows.begin(), rows.end());
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
    throw Error(ErrorCode::NotABijection,
                "columns do not form a one-to-one labeling (duplicate rows)");
  }
  annotate(l);
  return l;
}

Labeling builtin_labeling(BuiltinLabeling which, int order) {
  check_order(order);
  const auto undefined = [&]() -> Error {
    return Error(ErrorCode::UndefinedForOrder,
                 std::string(to_string(which)) + " is not defined for order " +
                     std::to_string(order));
  };
  switch (which) {
    case BuiltinLabeling::Brgc:
      return from_rows("brgc", order, brgc_rows(log2_order(order)));
    case BuiltinLabeling::Nbc: {
      return from_rows("nbc", order, nbc_rows(log2_order(order)));
    }
    case BuiltinLabeling::Fbc: {
      if (order != 8) throw undefined();
      Labeling l = labeling_from_columns({15, 60, 90}, 8);
      l.name = "fbc";
      return l;
    }
    case BuiltinLabeling::Bsgc: {
      if (order != 8) throw undefined();
      Labeling l = labeling_from_columns({105, 60, 102}, 8);
      l.name = "bsgc";
      return l;
    }
    case BuiltinLabeling::Agc: {
      if (order == 4) {
        Labeling l = labeling_from_columns({5, 6}, 4);
        l.name = "agc";
        return l;
      }
      if (order == 8) {
        Labeling l = labeling_from_columns({90, 105, 85}, 8);
        l.name = "agc";
        return l;
      }
      throw undefined();
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown builtin labeling");
}

std::set<std::vector<int>> distinct_class_vectors(int order) {
  if (order != 4 && order != 8) {
    throw Error(ErrorCode::TooLarge,
                "exhaustive labeling census limited to orders 4 and 8");
  }
  const int m = log2_order(order);
  const auto classes = enumerate_classes(order);
  const auto lookup = class_id_lookup(classes);

  std::set<std::vector<int>> seen;
  std::vector<int> labels(order);
  std::iota(labels.begin(), labels.end(), 0);
  do {
    // labels[i] is the m-bit label of point i; column j is a pattern.
    std::vector<int> q(m);
    for (int j = 0; j < m; ++j) {
      std::uint64_t w = 0;
      for (int i = 0; i < order; ++i) {
        w = (w << 1) | ((labels[i] >> (m - 1 - j)) & 1);
      }
      q[j] = lookup.at(w);
    }
    std::sort(q.begin(), q.end());
    seen.insert(std::move(q));
  } while (std::next_permutation(labels.begin(), labels.end()));
  return seen;
}

LabelingCensus count_distinct_labelings(int order) {
  const auto seen = distinct_class_vectors(order);
  LabelingCensus c;
  c.total_valid = 1;
  for (int i = 2; i <= order; ++i) c.total_valid *= i;
  c.distinct_class_vectors = seen.size();
  return c;
}

}  // namespace pamber
