#include <doctest.h>

#include <vector>

#include "gbench/error.hpp"
#include "gbench/rng.hpp"
#include "gbench/stats.hpp"

using namespace gbench;

TEST_CASE("median conventions") {
  const std::vector<double> odd{5.0, 1.0, 3.0};
  const std::vector<double> even{4.0, 1.0, 3.0, 2.0};
  CHECK(stats::median(odd) == 3.0);
  CHECK(stats::median(even) == 2.5);
  CHECK_THROWS_AS(stats::median(std::vector<double>{}), Error);
}

TEST_CASE("quantile interpolates between order statistics") {
  const std::vector<double> v{0.0, 10.0, 20.0, 30.0, 40.0};
  CHECK(stats::quantile_sorted(v, 0.0) == 0.0);
  CHECK(stats::quantile_sorted(v, 1.0) == 40.0);
  CHECK(stats::quantile_sorted(v, 0.5) == 20.0);
  CHECK(stats::quantile_sorted(v, 0.375) == doctest::Approx(15.0));
  const std::vector<double> shuffled{30.0, 0.0, 40.0, 20.0, 10.0};
  CHECK(stats::quantile(shuffled, 0.625) == doctest::Approx(25.0));
  CHECK_THROWS_AS(stats::quantile_sorted(v, 1.5), Error);
  // Quantile at one half equals the median for even sizes too.
  const std::vector<double> even{1.0, 2.0, 3.0, 4.0};
  CHECK(stats::quantile_sorted(even, 0.5) == stats::median(even));
}

TEST_CASE("moments and correlation") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK(stats::mean(x) == 2.5);
  CHECK(stats::stddev(x) == doctest::Approx(std::sqrt(1.25)));
  const std::vector<double> up{3.0, 5.0, 7.0, 9.0};
  const std::vector<double> down{1.0, 0.0, -1.0, -2.0};
  CHECK(*stats::pearson(x, up) == doctest::Approx(1.0));
  CHECK(*stats::pearson(x, down) == doctest::Approx(-1.0));
  CHECK_FALSE(stats::pearson(x, std::vector<double>{1.0, 1.0, 1.0, 1.0}).has_value());
}

TEST_CASE("seed derivation is stable and separates streams") {
  const auto a = derive_seed("sphere-10D", "method:PSO", 3, 7);
  CHECK(a == derive_seed("sphere-10D", "method:PSO", 3, 7));
  CHECK(a != derive_seed("sphere-10D", "method:PSO", 4, 7));
  CHECK(a != derive_seed("sphere-10D", "method:NM", 3, 7));
  CHECK(a != derive_seed("sphere-3D", "method:PSO", 3, 7));
  CHECK(a != derive_seed("sphere-10D", "method:PSO", 3, 8));
  // Concatenation of problem and role must not collide.
  CHECK(derive_seed("ab", "c", 0, 0) != derive_seed("a", "bc", 0, 0));
  CHECK(stream_seed(a, 0) != stream_seed(a, 1));
}
