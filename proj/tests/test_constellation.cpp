#include <doctest.h>

#include <cmath>

#include "pamber/constellation.hpp"
#include "pamber/error.hpp"

using namespace pamber;

namespace {

// Independent oracle for the Gaussian tail: composite Simpson quadrature of
// the density over [x, x+48] in extended precision. Never touches erfc.
double q_reference(double x) {
  const long double lo = x;
  const long double hi = x + 48.0L;
  const int n = 200000;  // even
  const long double h = (hi - lo) / n;
  const auto dens = [](long double t) { return std::exp(-t * t / 2.0L); };
  long double sum = dens(lo) + dens(hi);
  for (int i = 1; i < n; ++i) {
    sum += dens(lo + i * h) * (i % 2 ? 4.0L : 2.0L);
  }
  const long double integral = sum * h / 3.0L;
  return static_cast<double>(
      integral / std::sqrt(2.0L * 3.14159265358979323846264338327950288L));
}

}  // namespace

TEST_CASE("constellation geometry and normalization") {
  const Constellation c4 = make_constellation(4);
  CHECK(c4.half_spacing == doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));
  CHECK(c4.point(1) == doctest::Approx(-3 * c4.half_spacing));
  CHECK(c4.point(2) == doctest::Approx(-c4.half_spacing));
  CHECK(c4.point(3) == doctest::Approx(c4.half_spacing));
  CHECK(c4.point(4) == doctest::Approx(3 * c4.half_spacing));

  const Constellation c8 = make_constellation(8);
  CHECK(c8.half_spacing ==
        doctest::Approx(std::sqrt(1.0 / 21.0)).epsilon(1e-15));
  CHECK(c8.point(1) == doctest::Approx(-7 * c8.half_spacing));
  CHECK(c8.point(8) == doctest::Approx(7 * c8.half_spacing));
  CHECK(c8.bits_per_symbol == 3);

  for (int order : {4, 8, 16, 64, 1024}) {
    const Constellation c = make_constellation(order);
    double energy = 0;
    for (int i = 1; i <= order; ++i) {
      energy += c.point(i) * c.point(i);
      // antisymmetry must hold bit for bit
      CHECK(c.point(i) == -c.point(order + 1 - i));
      if (i > 1) CHECK(c.point(i) > c.point(i - 1));
    }
    CHECK(energy / order == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constellation rejects bad orders") {
  CHECK_THROWS_AS(make_constellation(3), Error);
  CHECK_THROWS_AS(make_constellation(2), Error);
  CHECK_THROWS_AS(make_constellation(12), Error);
  CHECK_THROWS_AS(make_constellation(1 << 21), Error);
  try {
    make_constellation(2);
    FAIL("unreachable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderTooSmall);
  }
  try {
    make_constellation(24);
    FAIL("unreachable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPowerOfTwo);
  }
}

TEST_CASE("q_function against the quadrature oracle") {
  CHECK(q_function(0.0) == 0.5);
  // frozen from the oracle
  CHECK(q_function(1.0) == doctest::Approx(0.158655253931457).epsilon(1e-12));
  for (double x : {-3.0, -1.5, -0.3, 0.2, 0.5, 1.0, 2.0, 3.7, 5.0, 7.5}) {
    CHECK(std::fabs(q_function(x) - q_reference(x)) <= 1e-14);
  }
}

TEST_CASE("q_function complement and monotonicity") {
  double prev = 1.1;
  for (double x = -45.0; x <= 45.0; x += 0.37) {
    CHECK(std::fabs(q_function(x) + q_function(-x) - 1.0) <= 1e-13);
    const double v = q_function(x);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(q_function(41.0) == 0.0);
  CHECK(q_function(-41.0) == 1.0);
}

TEST_CASE("snr conversions") {
  const Constellation c4 = make_constellation(4);
  const Snr s0 = snr_from_db(0.0, c4);
  CHECK(s0.rho == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s0.A == doctest::Approx(std::exp(-8.0 / 5.0)).epsilon(1e-14));

  const Snr s10 = snr_from_db(10.0, c4);
  CHECK(s10.rho == doctest::Approx(10.0).epsilon(1e-14));

  // A = 1/3 happens near -1.63 dB for order 4
  CHECK(snr_from_db(-1.63, c4).A == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  const double exact_db = 10.0 * std::log10(5.0 * std::log(3.0) / 8.0);
  CHECK(snr_from_db(exact_db, c4).A ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  for (double db = -20.0; db <= 30.0; db += 0.7) {
    const Snr s = snr_from_db(db, c4);
    CHECK(10.0 * std::log10(s.rho) == doctest::Approx(db).epsilon(1e-12));
  }

  // A strictly decreasing in rho
  double prev = 1.0;
  for (double db = -10.0; db <= 20.0; db += 0.5) {
    const double a = snr_from_db(db, c4).A;
    CHECK(a < prev);
    CHECK(a > 0.0);
    prev = a;
  }

  CHECK_THROWS_AS(snr_from_linear(0.0, c4), Error);
  CHECK_THROWS_AS(snr_from_db(std::nan(""), c4), Error);
}
