#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "agentsim/distribution.hpp"
#include "agentsim/error.hpp"

using namespace agentsim;

namespace {
double total(const EmpiricalDistribution& d) {
  return std::accumulate(d.bin_mass().begin(), d.bin_mass().end(), 0.0);
}
}  // namespace

TEST_SUITE("distribution") {

TEST_CASE("construction validates edges and masses") {
  CHECK_NOTHROW(EmpiricalDistribution({0, 1, 2}, {0.5, 0.5}));
  CHECK_THROWS_AS(EmpiricalDistribution({0, 1, 1}, {0.5, 0.5}), ConfigError);
  CHECK_THROWS_AS(EmpiricalDistribution({0, 1, 2}, {0.5}), ConfigError);
  CHECK_THROWS_AS(EmpiricalDistribution({0, 1, 2}, {0.7, 0.5}), ConfigError);
  CHECK_THROWS_AS(EmpiricalDistribution({0, 1, 2}, {1.5, -0.5}), ConfigError);
  CHECK_THROWS_AS(EmpiricalDistribution({0}, {}), ConfigError);
}

TEST_CASE("mean uses bin midpoints") {
  EmpiricalDistribution d({0, 2, 6}, {0.25, 0.75});
  CHECK(d.mean() == doctest::Approx(0.25 * 1 + 0.75 * 4));
}

TEST_CASE("histogram covers the sample range with unit mass") {
  std::vector<double> v;
  for (int i = 0; i <= 1000; ++i) v.push_back(i * 0.37);
  const auto h = histogram(v);
  CHECK(h.bins() == kDefaultHistogramBins);
  CHECK(h.bin_edges().front() == 0.0);
  CHECK(h.bin_edges().back() == doctest::Approx(370.0));
  CHECK(total(h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.bin_mass().back() > 0.0);
}

TEST_CASE("histogram counts match a direct tally") {
  const std::vector<double> v{0.0, 0.1, 0.2, 0.5, 0.9, 1.0};
  const auto h = histogram(v, 2);
  // [0, 0.5) holds 3, [0.5, 1] holds 3
  CHECK(h.bin_mass()[0] == doctest::Approx(0.5));
  CHECK(h.bin_mass()[1] == doctest::Approx(0.5));
}

TEST_CASE("constant sample goes to the first bin") {
  const std::vector<double> v(10, 3.5);
  const auto h = histogram(v, 4);
  CHECK(h.bin_edges().front() == 3.5);
  CHECK(h.bin_mass()[0] == 1.0);
}

TEST_CASE("histogram on edges ignores values outside") {
  const std::vector<double> v{-1.0, 0.5, 1.5, 1.7, 5.0};
  const std::vector<double> edges{0.0, 1.0, 2.0};
  const auto h = histogram_on_edges(v, edges);
  CHECK(h.bin_mass()[0] == doctest::Approx(1.0 / 3.0));
  CHECK(h.bin_mass()[1] == doctest::Approx(2.0 / 3.0));
  const std::vector<double> outside{9.0};
  CHECK_THROWS(histogram_on_edges(outside, edges));
}

TEST_CASE("mass sums to one within 1e-9 for awkward sizes") {
  for (std::size_t n : {3u, 7u, 997u, 10007u}) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(static_cast<double>(i)) * 1e3;
    const auto h = histogram(v, 100);
    CHECK(std::abs(total(h) - 1.0) <= 1e-9);
  }
}

TEST_CASE("common edges span both samples") {
  const std::vector<double> a{1.0, 2.0};
  const std::vector<double> b{0.5, 3.0};
  const auto e = common_edges(a, b, 5);
  CHECK(e.size() == 6);
  CHECK(e.front() == 0.5);
  CHECK(e.back() == doctest::Approx(3.0));
}

}
