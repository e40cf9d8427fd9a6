#include "agentsim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "agentsim/error.hpp"

namespace agentsim {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> bin_edges,
                                             std::vector<double> bin_mass)
    : edges_(std::move(bin_edges)), mass_(std::move(bin_mass)) {
  if (edges_.size() < 2) {
    throw ConfigError("bin_edges", ConfigError::npos, "need at least 2 edges");
  }
  if (mass_.size() + 1 != edges_.size()) {
    throw ConfigError("bin_mass", ConfigError::npos,
                      "expected " + std::to_string(edges_.size() - 1) +
                          " masses, got " + std::to_string(mass_.size()));
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) {
      throw ConfigError("bin_edges", i, "edge is not finite");
    }
    if (i > 0 && !(edges_[i] > edges_[i - 1])) {
      throw ConfigError("bin_edges", i, "edges must be strictly ascending");
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (!(mass_[i] >= 0.0) || !std::isfinite(mass_[i])) {
      throw ConfigError("bin_mass", i, "mass must be finite and non-negative");
    }
    total += mass_[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("bin_mass", ConfigError::npos,
                      "masses sum to " + std::to_string(total) + ", not 1");
  }
}

double EmpiricalDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    m += mass_[i] * 0.5 * (edges_[i] + edges_[i + 1]);
  }
  return m;
}

namespace {

std::vector<double> equal_edges(double lo, double hi, std::size_t nbins) {
  std::vector<double> edges(nbins + 1);
  const double width = (hi - lo) / static_cast<double>(nbins);
  for (std::size_t i = 0; i <= nbins; ++i) {
    edges[i] = lo + width * static_cast<double>(i);
  }
  edges.back() = hi;
  return edges;
}

// Constant samples still need a valid strictly ascending edge vector.
double span_for(double lo, double hi) {
  if (hi > lo) return hi;
  return lo + std::max(1.0, std::abs(lo) * 1e-6);
}

EmpiricalDistribution normalize(std::vector<double> edges,
                                std::vector<double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  for (double& c : counts) c /= total;
  // Pin the sum at exactly 1 up to one rounding step.
  const double drift = 1.0 - std::accumulate(counts.begin(), counts.end(), 0.0);
  auto biggest = std::max_element(counts.begin(), counts.end());
  *biggest += drift;
  return EmpiricalDistribution(std::move(edges), std::move(counts));
}

}  // namespace

EmpiricalDistribution histogram(std::span<const double> values,
                                std::size_t nbins) {
  if (values.empty()) throw Error("histogram: no values");
  if (nbins == 0) throw Error("histogram: nbins must be >= 1");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!std::isfinite(*mn) || !std::isfinite(*mx)) {
    throw Error("histogram: non-finite value");
  }
  return histogram_on_edges(values, equal_edges(*mn, span_for(*mn, *mx), nbins));
}

EmpiricalDistribution histogram_on_edges(std::span<const double> values,
                                         std::span<const double> edges) {
  if (edges.size() < 2) throw Error("histogram_on_edges: need >= 2 edges");
  const std::size_t nbins = edges.size() - 1;
  std::vector<double> counts(nbins, 0.0);
  std::size_t inside = 0;
  for (double v : values) {
    if (v < edges.front() || v > edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : std::min(bin - 1, nbins - 1);
    counts[bin] += 1.0;
    ++inside;
  }
  if (inside == 0) throw Error("histogram_on_edges: no values inside edges");
  return normalize(std::vector<double>(edges.begin(), edges.end()),
                   std::move(counts));
}

std::vector<double> common_edges(std::span<const double> a,
                                 std::span<const double> b,
                                 std::size_t nbins) {
  if (a.empty() && b.empty()) throw Error("common_edges: no values");
  if (nbins == 0) throw Error("common_edges: nbins must be >= 1");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto s : {a, b}) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return equal_edges(lo, span_for(lo, hi), nbins);
}

}  // namespace agentsim
