#include <doctest.h>

#include <cmath>

#include "pamber/simulation.hpp"

using namespace pamber;

TEST_CASE("exact llr basics") {
  const Constellation c = make_constellation(4);
  const Snr snr = snr_from_db(3.0, c);
  const Pattern p3 = pattern_from_index(3, 4);
  std::vector<double> zeros{c.point(1), c.point(2)};
  std::vector<double> ones{c.point(3), c.point(4)};
  CHECK(llr_exact(0.0, zeros, ones, snr) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(llr_exact(5.0, zeros, ones, snr) > 50.0);
  CHECK(llr_exact(-5.0, zeros, ones, snr) < -50.0);
  // stays finite at extreme SNR thanks to the max shift
  const Snr hi = snr_from_linear(1e6, c);
  CHECK(std::isfinite(llr_exact(0.37, zeros, ones, hi)));
  (void)p3;
}

TEST_CASE("max-log llr crosses exactly at the midpoints") {
  const Constellation c = make_constellation(8);
  const Snr snr = snr_from_db(6.0, c);
  const Pattern p = pattern_from_index(54, 8);
  std::vector<double> zeros, ones;
  for (int i = 1; i <= 8; ++i) {
    (p.bit(i) ? ones : zeros).push_back(c.point(i));
  }
  for (int k : p.threshold_indices) {
    const double mid = 0.5 * (c.point(k) + c.point(k + 1));
    const double eps = 1e-9;
    CHECK(llr_maxlog(mid - eps, zeros, ones, snr) *
              llr_maxlog(mid + eps, zeros, ones, snr) <
          0.0);
  }
  // the max-log decision is the nearest point's bit, everywhere
  for (double y = -2.0; y <= 2.0; y += 0.003) {
    int nearest = 1;
    for (int i = 2; i <= 8; ++i) {
      if (std::fabs(y - c.point(i)) < std::fabs(y - c.point(nearest))) {
        nearest = i;
      }
    }
    const int decided = llr_maxlog(y, zeros, ones, snr) >= 0 ? 1 : 0;
    CHECK(decided == p.bit(nearest));
  }
}

TEST_CASE("trial rng is deterministic and well distributed") {
  TrialRng a(123, 42), b(123, 42), d(123, 43);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != d.next_u64());

  // sample moments of the gaussian stream
  const int n = 1000000;
  double sum = 0, sum2 = 0;
  for (int t = 0; t < n; ++t) {
    TrialRng rng(7, t);
    const double z = rng.next_gaussian();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("simulations are reproducible and shard-independent") {
  const Constellation c = make_constellation(8);
  const Snr snr = snr_from_db(6.0, c);
  const Pattern p = pattern_from_index(165, 8);
  SimConfig cfg{100000, 31337, 1, Demodulator::BD};
  const SimResult r1 = run_pber_sim(cfg, p, snr, c);
  cfg.shards = 4;
  const SimResult r4 = run_pber_sim(cfg, p, snr, c);
  cfg.shards = 16;
  const SimResult r16 = run_pber_sim(cfg, p, snr, c);
  CHECK(r1.errors == r4.errors);
  CHECK(r1.errors == r16.errors);
  CHECK(r1.estimate == doctest::Approx(double(r1.errors) / 100000.0));
  CHECK(r1.ci95_halfwidth ==
        doctest::Approx(1.96 * std::sqrt(r1.estimate * (1 - r1.estimate) /
                                         100000.0)));
}

TEST_CASE("single-threshold patterns decide identically under both rules") {
  const Constellation c = make_constellation(8);
  const Snr snr = snr_from_db(5.0, c);
  const Pattern p15 = pattern_from_index(15, 8);
  SimConfig bd{200000, 99, 4, Demodulator::BD};
  SimConfig abd = bd;
  abd.demod = Demodulator::ABD;
  CHECK(run_pber_sim(bd, p15, snr, c).errors ==
        run_pber_sim(abd, p15, snr, c).errors);
}

TEST_CASE("estimates agree with the analytic values") {
  const Constellation c = make_constellation(8);
  const Snr snr = snr_from_db(8.0, c);
  const Pattern p = pattern_from_index(165, 8);
  SimConfig cfg{10000000, 2024, 16, Demodulator::BD};
  const SimResult r = run_pber_sim(cfg, p, snr, c);
  const double want = pber_bd(p, snr, c);
  const double sigma = std::sqrt(want * (1 - want) / double(r.trials));
  CHECK(std::fabs(r.estimate - want) <= 3 * sigma);

  const Labeling brgc = builtin_labeling(BuiltinLabeling::Brgc, 8);
  SimConfig cfg2{1000000, 5150, 16, Demodulator::BD};
  const SimResult rb = run_ber_sim(cfg2, brgc, snr, c);
  CHECK(rb.trials == 3000000);  // bit decisions, m per trial
  const double want_b = ber_labeling(brgc, Demodulator::BD, snr, c);
  const double sigma_b = std::sqrt(want_b * (1 - want_b) / double(rb.trials));
  CHECK(std::fabs(rb.estimate - want_b) <= 3 * sigma_b);
}

TEST_CASE("deep noise pushes the estimate to one half") {
  const Constellation c = make_constellation(4);
  const Snr snr = snr_from_db(-20.0, c);
  const Labeling nbc = builtin_labeling(BuiltinLabeling::Nbc, 4);
  SimConfig cfg{200000, 11, 4, Demodulator::BD};
  const SimResult r = run_ber_sim(cfg, nbc, snr, c);
  CHECK(r.estimate == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("bad configurations are rejected") {
  const Constellation c = make_constellation(4);
  const Snr snr = snr_from_db(3.0, c);
  const Pattern p = pattern_from_index(3, 4);
  SimConfig cfg{0, 1, 1, Demodulator::BD};
  CHECK_THROWS(run_pber_sim(cfg, p, snr, c));
  cfg.trials = 10;
  cfg.shards = 0;
  CHECK_THROWS(run_pber_sim(cfg, p, snr, c));
}
