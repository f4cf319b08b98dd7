#include <doctest.h>

#include <algorithm>
#include <random>

#include "ierl/aggregate.hpp"
#include "support.hpp"

using namespace ierl;

namespace {
Vec vec(std::initializer_list<double> values) { return testing::to_vec(std::vector<double>(values)); }
}  // namespace

TEST_CASE("moment_lift examples") {
  CHECK(moment_lift(vec({2}), 3) == vec({1, 2, 4, 8}));
  CHECK(moment_lift(vec({1, -1}), 2) == vec({1, 1, 1, -1, 1, 1}));
  CHECK(moment_lift(vec({5}), 0) == vec({1}));
  CHECK(moment_lift(vec({0, 3}), 1) == vec({1, 1, 0, 3}));  // 0^0 = 1
}

TEST_CASE("moment_lift errors") {
  CHECK_THROWS_AS(moment_lift(vec({INFINITY}), 2), DataError);
  CHECK_THROWS_AS(moment_lift(vec({1e200}), 2), DataError);
  CHECK_THROWS_AS(moment_lift(vec({1}), -1), ConfigError);
}

TEST_CASE("agg_moments examples") {
  const std::vector<Vec> two{vec({1}), vec({3})};
  CHECK(agg_moments<double>(two, 3) == vec({1, 2, 5, 14}));

  const std::vector<Vec> single{vec({0.3, -0.7})};
  CHECK(agg_moments<double>(single, 4) == moment_lift(single[0], 4));

  CHECK_THROWS_WITH_AS(agg_moments<double>(std::vector<Vec>{}, 3),
                       "agg_moments: empty aggregation set", DataError);
  CHECK_THROWS_AS(agg_moments<double>(std::vector<Vec>{vec({1}), vec({1, 2})}, 1), DataError);
}

TEST_CASE("agg_mean examples") {
  CHECK(agg_mean<double>(std::vector<Vec>{vec({1, 0}), vec({0, 1})}) == vec({0.5, 0.5}));
  CHECK(agg_mean<double>(std::vector<Vec>{vec({2, 2})}) == vec({2, 2}));
  CHECK(agg_mean<double>(std::vector<Vec>{vec({1}), vec({-1})}) == vec({0}));
  CHECK_THROWS_AS(agg_mean<double>(std::vector<Vec>{}), DataError);
  CHECK_THROWS_AS(agg_mean<double>(std::vector<Vec>{vec({1}), vec({1, 2})}), DataError);
}

TEST_CASE("aggregation works in single precision too") {
  using Vf = VectorX<float>;
  std::vector<Vf> vs{Vf::Constant(2, 1.0f), Vf::Constant(2, 3.0f)};
  const Vf out = agg_moments<float>(vs, 2);
  CHECK(out[4] == doctest::Approx(5.0f));
}

TEST_CASE("property: agg_moments matches a brute-force loop and agg_mean") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int round = 0; round < 100; ++round) {
    const int d = 1 + static_cast<int>(rng() % 16);
    const int p = static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 12);
    std::vector<std::vector<double>> raw(n, std::vector<double>(d));
    std::vector<Vec> vs;
    for (auto& v : raw) {
      for (auto& x : v) x = u(rng);
      vs.push_back(testing::to_vec(v));
    }
    const Vec got = agg_moments<double>(vs, p);
    const Vec want = testing::to_vec(testing::brute_force_moments(raw, p));
    REQUIRE(got.size() == (p + 1) * d);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(got.head(d) == Vec::Ones(d));

    const Vec first = agg_moments<double>(vs, 1).segment(d, d);
    CHECK((first - agg_mean<double>(vs)).cwiseAbs().maxCoeff() <= 1e-12);

    std::shuffle(vs.begin(), vs.end(), rng);
    CHECK((agg_moments<double>(vs, p) - got).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
