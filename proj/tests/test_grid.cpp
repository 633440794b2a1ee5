#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "persuade/grid.hpp"
#include "testutil.hpp"

using namespace persuade;

TEST_CASE("build_grids: additive binary at eps 0.5") {
  auto inst = testutil::binary_uniform_instance();  // U = 2
  auto grid = build_grids(inst, 0.5);
  CHECK(grid.prices == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  // kappa(p, 0) = p clamped, kappa(p, 1) = p - 1 clamped: all multiples of 0.5.
  REQUIRE(grid.types.size() == 3);
  CHECK(grid.types[0] == doctest::Approx(0.0));
  CHECK(grid.types[1] == doctest::Approx(0.5));
  CHECK(grid.types[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_grids(inst, 0.0), std::invalid_argument);
}

TEST_CASE("build_grids: eps 1 keeps the unit endpoints") {
  auto inst = testutil::binary_uniform_instance();
  auto grid = build_grids(inst, 1.0);
  CHECK(grid.types.front() == 0.0);
  CHECK(grid.types.back() == 1.0);
}

TEST_CASE("build_grids appends a non-multiple price cap") {
  auto inst = Instance::make({0.0, 1.0}, {0.5, 0.5}, Valuation::additive(), 1.7);
  auto grid = build_grids(inst, 0.5);
  CHECK(grid.prices == std::vector<double>{0.5, 1.0, 1.5, 1.7});
}

TEST_CASE("support grid preimages") {
  auto inst = testutil::binary_uniform_instance();
  auto grid = build_grids(inst, 0.5);

  // p = 1: kappa(1, q) = 1 - q on [0,1]; preimages are pointwise, plus the
  // q = 1 endpoint of the x = 0 clamp interval [1, 1].
  auto qp = support_grid(grid, inst, 1.0);
  CHECK(qp == std::vector<double>{0.0, 0.5, 1.0});

  // p = 0.5: the preimage of x = 0 is [0.5, 1]; both endpoints enter.
  auto qp2 = support_grid(grid, inst, 0.5);
  bool has_half = false, has_one = false;
  for (double q : qp2) {
    has_half = has_half || std::abs(q - 0.5) <= 1e-12;
    has_one = has_one || std::abs(q - 1.0) <= 1e-12;
  }
  CHECK(has_half);
  CHECK(has_one);

  CHECK_THROWS_AS(support_grid(grid, inst, 0.31), std::invalid_argument);

  // Quality points always belong to Q_p, for every price.
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto rinst = testutil::random_instance(rng, 2 + static_cast<std::size_t>(rng.uniform01() * 4.0));
    auto rgrid = build_grids(rinst, 0.1 + 0.2 * rng.uniform01());
    for (double p : rgrid.prices) {
      auto support = support_grid(rgrid, rinst, p);
      for (std::size_t i = 0; i < rinst.num_qualities(); ++i) {
        bool found = false;
        for (double q : support) found = found || std::abs(q - rinst.quality(i)) <= 1e-9;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("grid membership: kappa lands in S for all support points") {
  Rng rng(29);
  int checks = 0;
  while (checks < 5000) {
    auto inst = testutil::random_instance(rng, 2 + static_cast<std::size_t>(rng.uniform01() * 4.0));
    auto grid = build_grids(inst, 0.07 + 0.2 * rng.uniform01());
    for (double p : grid.prices) {
      auto support = support_grid(grid, inst, p);
      for (double q : support) {
        CHECK(grid.snap_distance(critical_type(inst.valuation, p, q)) <= 1e-9);
        ++checks;
      }
    }
  }
}

TEST_CASE("epsilon selection for equally spaced qualities") {
  // Largest unit fraction of the spacing below the bound.
  CHECK(epsilon_unit_fraction(2, 0.13) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(epsilon_unit_fraction(11, 0.05) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(epsilon_unit_fraction(1, 0.1), std::invalid_argument);

  // Large quality space: eps = spacing itself.
  CHECK(epsilon_equally_spaced(1001, 1000) == doctest::Approx(0.001).epsilon(1e-12));

  // Normal branch: (1/(m-1))/eps integral and eps <= (log T/T)^(1/3).
  for (std::size_t m : {2, 3, 5, 9}) {
    for (std::int64_t t : {1000, 10000, 100000}) {
      double eps = epsilon_equally_spaced(m, t);
      double bound = std::cbrt(std::log(static_cast<double>(t)) / static_cast<double>(t));
      double spacing = 1.0 / static_cast<double>(m - 1);
      if (spacing < bound) {
        CHECK(eps == doctest::Approx(spacing));
      } else {
        CHECK(eps <= bound + 1e-12);
        double ratio = spacing / eps;
        CHECK(std::abs(ratio - std::round(ratio)) <= 1e-9);
        // Largest such eps: the next-coarser unit fraction exceeds the bound.
        double coarser = spacing / (std::round(ratio) - 1.0);
        if (std::round(ratio) >= 2.0) CHECK(coarser > bound);
      }
    }
  }
}

TEST_CASE("theorem-2 regime: the kappa points add nothing to the mesh") {
  for (std::size_t m : {2, 3, 5}) {
    std::vector<double> qualities, prior;
    for (std::size_t i = 0; i < m; ++i) {
      qualities.push_back(static_cast<double>(i) / static_cast<double>(m - 1));
      prior.push_back(1.0 / static_cast<double>(m));
    }
    auto inst = Instance::make(qualities, prior, Valuation::additive());
    double eps = epsilon_equally_spaced(m, 20000);
    auto grid = build_grids(inst, eps);
    CHECK(grid.types.size() == static_cast<std::size_t>(std::lround(1.0 / eps)) + 1);
    for (double p : grid.prices)
      for (double om : inst.qualities.qualities) {
        double x = critical_type(inst.valuation, p, om);
        double steps = x / eps;
        CHECK(std::abs(steps - std::round(steps)) <= 1e-9 / eps);
      }
  }
}

TEST_CASE("pooling buckets, masses and means") {
  auto inst = Instance::make({0.0, 0.1, 0.9, 1.0}, {0.1, 0.3, 0.3, 0.3}, Valuation::additive());
  auto pooled = pool_instance(inst, 0.5);
  REQUIRE(pooled.instance.num_qualities() == 3);
  CHECK(pooled.instance.quality(0) == doctest::Approx(0.0));
  CHECK(pooled.instance.quality(1) == doctest::Approx(0.1));
  CHECK(pooled.instance.quality(2) == doctest::Approx(0.95));
  CHECK(pooled.instance.weight(0) == doctest::Approx(0.1));
  CHECK(pooled.instance.weight(1) == doctest::Approx(0.3));
  CHECK(pooled.instance.weight(2) == doctest::Approx(0.6));
  CHECK(pooled.bucket_of == std::vector<std::size_t>{0, 1, 2, 2});

  // eps_hat = 1: the zero atom plus one bucket for (0, 1].
  auto two = pool_instance(inst, 1.0);
  CHECK(two.instance.num_qualities() == 2);
  CHECK(two.instance.quality(0) == doctest::Approx(0.0));
  CHECK(two.instance.quality(1) == doctest::Approx((0.3 * 0.1 + 0.3 * 0.9 + 0.3 * 1.0) / 0.9));

  // Mass and mean conservation on random instances.
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    auto rinst = testutil::random_instance(rng, 2 + static_cast<std::size_t>(rng.uniform01() * 5.0));
    double eps_hat = 0.1 + 0.9 * rng.uniform01();
    auto rp = pool_instance(rinst, eps_hat);
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < rp.instance.num_qualities(); ++i) {
      mass += rp.instance.weight(i);
      mean += rp.instance.weight(i) * rp.instance.quality(i);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(prior_mean(rinst)).epsilon(1e-12));
    CHECK(rp.instance.num_qualities() <= static_cast<std::size_t>(std::ceil(1.0 / eps_hat)) + 1);
  }
}

TEST_CASE("pooling a continuous prior through quadrature") {
  ContinuousPrior prior;
  prior.density = [](double) { return 1.0; };  // uniform on [0,1]
  auto pooled = pool_instance(prior, Valuation::additive(), 0.25);
  REQUIRE(pooled.instance.num_qualities() == 4);
  for (std::size_t b = 0; b < 4; ++b) {
    CHECK(pooled.instance.weight(b) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(pooled.instance.quality(b) == doctest::Approx(0.125 + 0.25 * static_cast<double>(b)).epsilon(1e-4));
  }
}
