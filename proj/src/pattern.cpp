#include "pamber/pattern.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "pamber/error.hpp"

namespace pamber {

const char* to_string(SymmetryType t) {
  switch (t) {
    case SymmetryType::RE: return "RE";
    case SymmetryType::ARE: return "ARE";
    case SymmetryType::ASY: return "ASY";
  }
  return "?";
}

namespace {

constexpr int kMaxIndexOrder = 62;  // keeps 2^M representable in uint64

void check_order(int order) {
  if (order < 4 || (order & (order - 1)) != 0) {
    throw Error(ErrorCode::NotPowerOfTwo,
                "pattern length must be a power of two >= 4, got " +
                    std::to_string(order));
  }
}

std::uint64_t index_of_bits(const std::vector<std::uint8_t>& bits) {
  std::uint64_t w = 0;
  for (std::uint8_t b : bits) w = (w << 1) | b;
  return w;
}

void finish(Pattern& p) {
  p.index = index_of_bits(p.bits);
  p.threshold_indices.clear();
  for (int k = 1; k < p.order; ++k) {
    if (p.bits[k - 1] != p.bits[k]) p.threshold_indices.push_back(k);
  }
  p.sym = classify_symmetry(p);
}

std::uint64_t reflect_index(std::uint64_t w, int order) {
  std::uint64_t r = 0;
  for (int i = 0; i < order; ++i) r = (r << 1) | ((w >> i) & 1u);
  return r;
}

std::uint64_t negate_index(std::uint64_t w, int order) {
  const std::uint64_t mask = (order == 64) ? ~0ull : ((1ull << order) - 1);
  return ~w & mask;
}

}  // namespace

Pattern pattern_from_index(std::uint64_t w, int order) {
  check_order(order);
  if (order > kMaxIndexOrder) {
    throw Error(ErrorCode::OutOfRange,
                "pattern index form limited to length <= 62");
  }
  if (w >= (1ull << order)) {
    throw Error(ErrorCode::OutOfRange, "pattern index " + std::to_string(w) +
                                           " out of range for length " +
                                           std::to_string(order));
  }
  if (std::popcount(w) != order / 2) {
    throw Error(ErrorCode::WrongWeight,
                "pattern " + std::to_string(w) + " has Hamming weight " +
                    std::to_string(std::popcount(w)) + ", need " +
                    std::to_string(order / 2));
  }
  Pattern p;
  p.order = order;
  p.bits.resize(order);
  for (int i = 0; i < order; ++i) p.bits[i] = (w >> (order - 1 - i)) & 1u;
  finish(p);
  return p;
}

Pattern pattern_from_bits(std::vector<std::uint8_t> bits) {
  const int order = static_cast<int>(bits.size());
  check_order(order);
  int weight = 0;
  for (std::uint8_t& b : bits) {
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "bits must be 0/1");
    weight += b;
  }
  if (weight != order / 2) {
    throw Error(ErrorCode::WrongWeight,
                "pattern has Hamming weight " + std::to_string(weight) +
                    ", need " + std::to_string(order / 2));
  }
  Pattern p;
  p.order = order;
  p.bits = std::move(bits);
  finish(p);
  return p;
}

Pattern reflect(const Pattern& p) {
  Pattern r = p;
  std::reverse(r.bits.begin(), r.bits.end());
  finish(r);
  return r;
}

Pattern negate(const Pattern& p) {
  Pattern r = p;
  for (auto& b : r.bits) b ^= 1u;
  finish(r);
  return r;
}

SymmetryType classify_symmetry(const Pattern& p) {
  const int M = p.order;
  bool re = true, are = true;
  for (int i = 0; i < M; ++i) {
    if (p.bits[i] != p.bits[M - 1 - i]) re = false;
    if (p.bits[i] != (p.bits[M - 1 - i] ^ 1u)) are = false;
  }
  if (re) return SymmetryType::RE;
  if (are) return SymmetryType::ARE;
  return SymmetryType::ASY;
}

Eigen::VectorXi abd_weights(const Pattern& p) {
  const int M = p.order;
  Eigen::VectorXi a(M - 1);
  for (int n = 1; n <= M - 1; ++n) {
    int sum = 0;
    for (int k = n; k <= M - 1; ++k) {
      sum += (p.bit(k + 1) - p.bit(k)) * (1 - 2 * p.bit(k + 1 - n)) -
             (p.bit(k + 2 - n) - p.bit(k + 1 - n)) * (1 - 2 * p.bit(k + 1));
    }
    a[n - 1] = sum;
  }
  return a;
}

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned __int128 r = 1;  // wide intermediates; C(64,32) is near 2^61
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::uint64_t>(r);
}

bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// The general representative rule (smallest member whose first bit is 0)
// is overridden for two length-8 classes whose customary representative is
// the other member of the orbit.
std::uint64_t representative_index(const std::vector<std::uint64_t>& members,
                                   int order) {
  if (order == 8) {
    for (std::uint64_t w : members) {
      if (w == 232 || w == 165) return w;
    }
  }
  for (std::uint64_t w : members) {
    if ((w >> (order - 1)) == 0) return w;
  }
  return members.front();
}

}  // namespace

ClassCounts class_counts(int order) {
  check_order(order);
  if (order > 64) {
    throw Error(ErrorCode::TooLarge,
                "class counts overflow 64 bits beyond length 64");
  }
  ClassCounts c;
  const std::uint64_t all = binomial(order, order / 2);
  const std::uint64_t half = binomial(order / 2, order / 4);
  c.re = half / 2;
  c.are = 1ull << (order / 2 - 1);
  c.total = (all + half + (1ull << (order / 2))) / 4;
  c.asy = c.total - c.re - c.are;
  return c;
}

std::vector<PatternClass> enumerate_classes(int order) {
  check_order(order);
  if (order > 16) {
    throw Error(ErrorCode::TooLarge,
                "exhaustive class enumeration limited to length 16; "
                "counting formulas remain available");
  }

  std::vector<PatternClass> classes;
  // Walk all weight-M/2 words in increasing order (Gosper's hack); a word
  // opens a new class iff it is the smallest index in its orbit.
  const std::uint64_t first = (1ull << (order / 2)) - 1;
  const std::uint64_t limit = 1ull << order;
  for (std::uint64_t w = first; w < limit;) {
    const std::uint64_t r = reflect_index(w, order);
    const std::uint64_t n = negate_index(w, order);
    const std::uint64_t nr = negate_index(r, order);
    const std::uint64_t canon = std::min({w, r, n, nr});
    if (w == canon) {
      std::vector<std::uint64_t> members{w, r, n, nr};
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()),
                    members.end());
      PatternClass pc;
      pc.members = std::move(members);
      pc.representative =
          pattern_from_index(representative_index(pc.members, order), order);
      pc.sym = pc.representative.sym;
      pc.weights = abd_weights(pc.representative);
      classes.push_back(std::move(pc));
    }
    // next word with the same popcount
    const std::uint64_t c = w & (~w + 1);
    const std::uint64_t rr = w + c;
    w = (((rr ^ w) >> 2) / c) | rr;
  }

  std::sort(classes.begin(), classes.end(),
            [](const PatternClass& x, const PatternClass& y) {
              const bool xa = x.sym == SymmetryType::ASY;
              const bool ya = y.sym == SymmetryType::ASY;
              if (xa != ya) return ya;  // two-member classes first
              if (x.weights != y.weights) return lex_less(x.weights, y.weights);
              return x.members.front() < y.members.front();
            });
  for (std::size_t i = 0; i < classes.size(); ++i) {
    classes[i].id = static_cast<int>(i) + 1;
  }
  return classes;
}

std::unordered_map<std::uint64_t, int> class_id_lookup(
    const std::vector<PatternClass>& classes) {
  std::unordered_map<std::uint64_t, int> map;
  for (const PatternClass& pc : classes) {
    for (std::uint64_t w : pc.members) map.emplace(w, pc.id);
  }
  return map;
}

}  // namespace pamber
