#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "persuade/tracker.hpp"
#include "persuade/rng.hpp"

using namespace persuade;

TEST_CASE("recording and empirical rates") {
  DemandTracker tr({0.0, 0.5, 1.0}, 100);
  tr.record(1, true);
  CHECK(tr.empirical(1) == doctest::Approx(1.0));
  tr.record(1, false);
  CHECK(tr.empirical(1) == doctest::Approx(0.5));
  tr.record(0, true);
  CHECK(tr.rounds_recorded() == 3);
  CHECK(tr.visits(0) + tr.visits(1) + tr.visits(2) == 3);
  CHECK_THROWS_AS(tr.record(7, true), std::logic_error);
}

TEST_CASE("radius formula") {
  DemandTracker tr({0.0, 0.5}, 100);
  for (int i = 0; i < 4; ++i) tr.record(0, false);
  double expected = std::sqrt(16.0 * std::log(100.0) / 4.0) + std::sqrt(5.0 * std::log(5.0)) / 4.0;
  CHECK(tr.radius(0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(5.0011).epsilon(1e-4));
  CHECK(std::isinf(tr.radius(1)));

  // log T = 1, N = 16: the exploration term alone is exactly 1.
  DemandTracker tre({0.0}, 3);  // horizon placeholder; exercised via formula below
  double t_e = std::exp(1.0);
  double first_term = std::sqrt(16.0 * std::log(t_e) / 16.0);
  CHECK(first_term == doctest::Approx(1.0).epsilon(1e-12));

  // Nonincreasing in N for N >= 2.
  DemandTracker tr2({0.0}, 1000);
  tr2.record(0, false);
  tr2.record(0, false);
  double prev = tr2.radius(0);
  for (int n = 3; n <= 64; ++n) {
    tr2.record(0, false);
    CHECK(tr2.radius(0) <= prev + 1e-12);
    prev = tr2.radius(0);
  }
}

TEST_CASE("ucb envelope: clamping, prefix minimum, monotonicity") {
  DemandTracker fresh({0.0, 0.3, 0.6, 1.0}, 100);
  for (double v : fresh.ucb()) CHECK(v == 1.0);

  // One visited point whose index exceeds 1 clamps to 1 everywhere.
  DemandTracker one({0.0, 0.5, 1.0}, 100);
  for (int i = 0; i < 4; ++i) one.record(1, true);
  for (double v : one.ucb()) CHECK(v == 1.0);

  // Large-visit counts shrink the radius; envelope is the prefix minimum.
  DemandTracker tr({0.0, 0.5}, 100);
  // Drive the radius down to ~0.05 is impossible within T=100; check the
  // min-scan structure on empirical values instead via a large horizon.
  DemandTracker big({0.0, 0.5, 1.0}, 2);
  (void)big;

  // Hand check of the documented example with radii forced near 0.05: use a
  // synthetic tracker with heavy visits.
  DemandTracker heavy({0.0, 0.5}, 4);
  const int n = 2000000;
  for (int i = 0; i < n; ++i) heavy.record(0, i % 10 < 9);  // 0.9
  for (int i = 0; i < n; ++i) heavy.record(1, i % 10 < 2);  // 0.2
  double r0 = heavy.radius(0), r1 = heavy.radius(1);
  auto env = heavy.ucb();
  CHECK(env[0] == doctest::Approx(std::min(0.9 + r0, 1.0)).epsilon(1e-9));
  CHECK(env[1] == doctest::Approx(std::min({0.2 + r1, 0.9 + r0, 1.0})).epsilon(1e-9));

  // Monotone nonincreasing and in [0, 1] on random fills.
  Rng rng(8);
  DemandTracker rt({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, 500);
  for (int i = 0; i < 400; ++i)
    rt.record(static_cast<std::size_t>(rng.uniform01() * 6.0) % 6, rng.uniform01() < 0.5);
  auto envelope = rt.ucb();
  for (std::size_t k = 0; k < envelope.size(); ++k) {
    CHECK(envelope[k] >= 0.0);
    CHECK(envelope[k] <= 1.0);
    if (k > 0) CHECK(envelope[k] <= envelope[k - 1] + 1e-15);
  }
}

TEST_CASE("csv dump shape") {
  DemandTracker tr({0.0, 1.0}, 10);
  tr.record(0, true);
  auto csv = tr.to_csv();
  CHECK(csv.find("x,visits,purchases,empirical,radius,ucb") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
