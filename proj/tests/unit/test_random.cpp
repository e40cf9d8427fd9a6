#include <doctest.h>

#include <cmath>
#include <vector>

#include "agentsim/error.hpp"
#include "agentsim/random.hpp"
#include "support.hpp"

using namespace agentsim;
using agentsim::testing::mean;
using agentsim::testing::variance;

TEST_SUITE("random") {

TEST_CASE("agent streams are reproducible and independent") {
  auto a = agent_stream(7, 3);
  auto b = agent_stream(7, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  auto other_agent = agent_stream(7, 4);
  auto other_seed = agent_stream(8, 3);
  auto other_purpose = agent_stream(7, 3, StreamPurpose::kObservation);
  auto base = agent_stream(7, 3);
  const double x = base.uniform();
  CHECK(x != other_agent.uniform());
  CHECK(x != other_seed.uniform());
  CHECK(x != other_purpose.uniform());
}

TEST_CASE("seeds differing only in the high word give different streams") {
  auto lo = agent_stream(1, 0);
  auto hi = agent_stream(1 + (std::uint64_t{1} << 32), 0);
  CHECK(lo.uniform() != hi.uniform());
}

TEST_CASE("uniform ranges") {
  auto s = agent_stream(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(s.uniform_positive() > 0.0);
    CHECK(s.uniform_index(7) < 7);
  }
}

TEST_CASE("exponential moments") {
  auto s = agent_stream(2, 0);
  std::vector<double> xs(200000);
  for (auto& x : xs) {
    x = s.exponential(0.25);
    REQUIRE(x > 0.0);
  }
  // mean 4, sd 4; standard error of the mean ~0.009
  CHECK(mean(xs) == doctest::Approx(4.0).epsilon(0.01));
  CHECK(variance(xs) == doctest::Approx(16.0).epsilon(0.03));
}

TEST_CASE("normal moments") {
  auto s = agent_stream(3, 0);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = s.normal(1.5, 2.0);
  CHECK(std::abs(mean(xs) - 1.5) < 0.02);
  CHECK(std::sqrt(variance(xs)) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("categorical frequencies and zero-weight exclusion") {
  auto s = agent_stream(4, 0);
  const std::vector<double> w{0.0, 1.0, 0.0, 3.0, 0.0};
  std::vector<double> counts(w.size(), 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[s.categorical(w)] += 1.0;
  CHECK(counts[0] == 0.0);
  CHECK(counts[2] == 0.0);
  CHECK(counts[4] == 0.0);
  CHECK(counts[1] / n == doctest::Approx(0.25).epsilon(0.02));
  CHECK(counts[3] / n == doctest::Approx(0.75).epsilon(0.01));
  const std::vector<double> none{0.0, 0.0};
  CHECK_THROWS_AS(s.categorical(none), Error);
}

TEST_CASE("dirichlet support, normalization and mean") {
  auto s = agent_stream(5, 0);
  const std::vector<double> alpha{2.0, 0.0, 1.0, 5.0};
  std::vector<double> sums(alpha.size(), 0.0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto p = sample_dirichlet(alpha, s);
    double total = 0.0;
    for (double x : p) total += x;
    REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(p[1] == 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) sums[k] += p[k];
  }
  CHECK(sums[0] / n == doctest::Approx(0.25).epsilon(0.02));
  CHECK(sums[2] / n == doctest::Approx(0.125).epsilon(0.03));
  CHECK(sums[3] / n == doctest::Approx(0.625).epsilon(0.01));
  const std::vector<double> zeros{0.0, 0.0};
  CHECK_THROWS_AS(sample_dirichlet(zeros, s), Error);
}

TEST_CASE("dirichlet with tiny concentrations stays a valid simplex point") {
  auto s = agent_stream(6, 0);
  const std::vector<double> alpha(5, 0.001);
  for (int i = 0; i < 1000; ++i) {
    const auto p = sample_dirichlet(alpha, s);
    double total = 0.0;
    for (double x : p) {
      REQUIRE(std::isfinite(x));
      REQUIRE(x >= 0.0);
      total += x;
    }
    REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dirichlet marginal variance matches beta") {
  // p_0 ~ Beta(a0, a_total - a0): var = a0 (A - a0) / (A^2 (A + 1))
  auto s = agent_stream(9, 0);
  const std::vector<double> alpha{0.5, 1.5, 2.0};
  std::vector<double> p0(100000);
  for (auto& x : p0) x = sample_dirichlet(alpha, s)[0];
  const double A = 4.0;
  CHECK(mean(p0) == doctest::Approx(0.125).epsilon(0.02));
  CHECK(variance(p0) == doctest::Approx(0.5 * 3.5 / (A * A * (A + 1))).epsilon(0.03));
}

}
