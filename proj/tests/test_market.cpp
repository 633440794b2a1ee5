#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "persuade/market.hpp"
#include "testutil.hpp"

using namespace persuade;

namespace {

// Generic root-finding oracle for critical types, independent of the closed
// forms under test.
double kappa_bisect(const Valuation& val, double p, double q) {
  double at0 = valuation_at(val, 0.0, q);
  if (at0 >= p) return 0.0;
  if (valuation_at(val, 1.0, q) < p) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (valuation_at(val, mid, q) >= p ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("valuation families evaluate per definition") {
  CHECK(valuation_at(Valuation::additive(), 0.3, 0.5) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(valuation_at(Valuation::multiplicative(), 0.4, 0.0) == doctest::Approx(0.4).epsilon(1e-15));
  // alpha agreeing with theta^2 at the probed knot (theta^2 itself is not
  // 1-Lipschitz on [0,1], so the full curve is not admissible).
  auto val = Valuation::linear_generic(PiecewiseLinear({0.0, 0.5, 1.0}, {0.0, 0.25, 0.75}),
                                       PiecewiseLinear::constant(1.0));
  CHECK(valuation_at(val, 0.5, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(valuation_at(Valuation::additive(), -0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(valuation_at(Valuation::additive(), 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("linear_generic rejects assumption violations") {
  // decreasing alpha
  CHECK_THROWS(Valuation::linear_generic(PiecewiseLinear({0.0, 1.0}, {0.5, 0.2}), PiecewiseLinear::constant(1.0)));
  // negative beta
  CHECK_THROWS(Valuation::linear_generic(PiecewiseLinear::identity(), PiecewiseLinear({0.0, 1.0}, {0.5, -0.5})));
  // Lipschitz violation: alpha' + beta' = 1.5 at omega = 1
  CHECK_THROWS(Valuation::linear_generic(PiecewiseLinear::identity(), PiecewiseLinear({0.0, 1.0}, {0.0, 0.5})));
}

TEST_CASE("critical type closed forms and clamps") {
  auto add = Valuation::additive();
  CHECK(critical_type(add, 1.2, 0.5) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(critical_type(add, 0.3, 0.5) == 0.0);
  auto mul = Valuation::multiplicative();
  CHECK(critical_type(mul, 0.9, 0.5) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(critical_type(mul, 2.0, 0.0) == 1.0);
}

TEST_CASE("critical type agrees with bisection oracle on random inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    Valuation val = trial % 2 == 0 ? Valuation::additive() : Valuation::multiplicative();
    double q = rng.uniform01();
    double p = 2.2 * rng.uniform01();
    CHECK(critical_type(val, p, q) == doctest::Approx(kappa_bisect(val, p, q)).epsilon(1e-10));
  }
  for (int trial = 0; trial < 200; ++trial) {
    Valuation val = testutil::random_linear_generic(rng);
    double q = rng.uniform01();
    double p = 2.0 * rng.uniform01();
    CHECK(critical_type(val, p, q) == doctest::Approx(kappa_bisect(val, p, q)).epsilon(1e-10));
  }
}

TEST_CASE("critical type is monotone: nonincreasing in q, nondecreasing in p") {
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    Valuation val = trial % 3 == 0   ? Valuation::additive()
                    : trial % 3 == 1 ? Valuation::multiplicative()
                                     : testutil::random_linear_generic(rng);
    double q1 = rng.uniform01(), q2 = rng.uniform01();
    if (q1 > q2) std::swap(q1, q2);
    double p1 = 2.0 * rng.uniform01(), p2 = 2.0 * rng.uniform01();
    if (p1 > p2) std::swap(p1, p2);
    double p = 2.0 * rng.uniform01(), q = rng.uniform01();
    CHECK(critical_type(val, p, q1) >= critical_type(val, p, q2) - 1e-12);
    CHECK(critical_type(val, p2, q) >= critical_type(val, p1, q) - 1e-12);
  }
}

TEST_CASE("additive critical type satisfies the pooling Lipschitz property") {
  Rng rng(13);
  auto add = Valuation::additive();
  for (int trial = 0; trial < 10000; ++trial) {
    double q1 = rng.uniform01(), q2 = rng.uniform01();
    if (q1 > q2) std::swap(q1, q2);
    double p = 2.0 * rng.uniform01();
    CHECK(critical_type(add, p, q1) - critical_type(add, p, q2) <= q2 - q1 + 1e-12);
  }
}

TEST_CASE("critical type inverse") {
  auto add = Valuation::additive();
  CHECK(critical_type_inverse(add, 0.4, 0.2) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(critical_type_inverse(add, 1.5, 0.2) == doctest::Approx(1.3).epsilon(1e-15));  // unclamped
  CHECK(critical_type(add, 1.5, 1.0) == doctest::Approx(0.5));  // sanity: clipping is the caller's job
  auto mul = Valuation::multiplicative();
  CHECK(critical_type_inverse(mul, 0.9, 0.6) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(critical_type_inverse(mul, 0.9, 0.0), std::invalid_argument);

  // Round trip: kappa(v(x, q), q) = x within range.
  Rng rng(17);
  for (int trial = 0; trial < 3000; ++trial) {
    Valuation val = trial % 3 == 0   ? Valuation::additive()
                    : trial % 3 == 1 ? Valuation::multiplicative()
                                     : testutil::random_linear_generic(rng);
    double x = 0.01 + 0.98 * rng.uniform01();
    double q = rng.uniform01();
    if (val.beta_at(x) <= 1e-9) continue;
    double p = valuation_at(val, x, q);
    CHECK(critical_type(val, p, q) == doctest::Approx(x).epsilon(1e-10));
    double q_back = critical_type_inverse(val, p, x);
    CHECK(q_back == doctest::Approx(q).epsilon(1e-9));
  }
}

TEST_CASE("demand conventions") {
  auto uni = TypeDistribution::uniform();
  CHECK(demand(uni, 0.25) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(demand(uni, 0.0) == 1.0);

  auto atoms = TypeDistribution::discrete_atoms({0.3, 0.8}, {0.5, 0.5});
  CHECK(demand(atoms, 0.3) == doctest::Approx(1.0));  // weak inequality keeps the atom
  CHECK(demand(atoms, 0.30000001) == doctest::Approx(0.5));
  CHECK(demand(atoms, 0.0) == 1.0);

  auto pl = TypeDistribution::piecewise_cdf(PiecewiseLinear({0.0, 1.0}, {0.0, 1.0}));
  CHECK(demand(pl, 0.25) == doctest::Approx(0.75));

  // Nonincreasing everywhere.
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = rng.uniform01(), b = rng.uniform01();
    if (a > b) std::swap(a, b);
    CHECK(demand(atoms, a) >= demand(atoms, b) - 1e-12);
    CHECK(demand(uni, a) >= demand(uni, b) - 1e-12);
  }
}

TEST_CASE("sampling determinism and point masses") {
  auto uni = TypeDistribution::uniform();
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(sample_type(uni, a) == sample_type(uni, b));

  auto point = TypeDistribution::discrete_atoms({0.5}, {1.0});
  Rng c(1);
  for (int i = 0; i < 50; ++i) CHECK(sample_type(point, c) == 0.5);

  auto inst = Instance::make({1.0}, {1.0}, Valuation::additive());
  Rng d(2);
  for (int i = 0; i < 50; ++i) CHECK(sample_quality(inst, d) == 0);
}

TEST_CASE("prior mean and instance construction") {
  CHECK(prior_mean(testutil::binary_uniform_instance()) == doctest::Approx(0.5));
  auto skew = Instance::make({0.0, 1.0}, {0.9, 0.1}, Valuation::additive());
  CHECK(prior_mean(skew) == doctest::Approx(0.1));
  auto single = Instance::make({1.0}, {1.0}, Valuation::additive());
  CHECK(prior_mean(single) == doctest::Approx(1.0));

  // Zero-mass qualities are dropped.
  auto dropped = Instance::make({0.0, 0.4, 1.0}, {0.5, 0.0, 0.5}, Valuation::additive());
  CHECK(dropped.num_qualities() == 2);
  CHECK(dropped.quality(1) == 1.0);

  // Default price cap is the maximal valuation.
  CHECK(testutil::binary_uniform_instance().price_cap == doctest::Approx(2.0));
  CHECK_THROWS(Instance::make({0.5, 0.2}, {0.5, 0.5}, Valuation::additive()));  // not increasing
  CHECK_THROWS(Instance::make({0.2, 1.0}, {0.5, 0.5}, Valuation::additive(), std::nullopt, true));  // declared
}

TEST_CASE("purchase rule equivalence: theta >= kappa iff v(theta, q) >= p") {
  Rng rng(31);
  for (int trial = 0; trial < 100000; ++trial) {
    Valuation val = trial % 2 == 0 ? Valuation::additive() : Valuation::multiplicative();
    double theta = rng.uniform01();
    double q = rng.uniform01();
    double p = 2.2 * rng.uniform01();
    bool by_value = valuation_at(val, theta, q) >= p;
    bool by_kappa = theta >= critical_type(val, p, q);
    if (by_value != by_kappa) {
      // Only tolerable within root-finding noise of the indifference point.
      CHECK(std::abs(valuation_at(val, theta, q) - p) <= 1e-9);
    }
  }
}
