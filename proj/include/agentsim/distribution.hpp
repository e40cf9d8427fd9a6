#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agentsim {

// Piecewise-uniform distribution given by a histogram. Bin i covers
// [edges[i], edges[i+1]); the last bin is closed on the right.
class EmpiricalDistribution {
 public:
  // Throws ConfigError unless edges are strictly ascending, masses are
  // non-negative, there is one mass per bin and the masses sum to 1 within
  // 1e-9.
  EmpiricalDistribution(std::vector<double> bin_edges,
                        std::vector<double> bin_mass);

  const std::vector<double>& bin_edges() const { return edges_; }
  const std::vector<double>& bin_mass() const { return mass_; }
  std::size_t bins() const { return mass_.size(); }

  // Mean of the piecewise-uniform density (mass-weighted bin midpoints).
  double mean() const;

  friend bool operator==(const EmpiricalDistribution&,
                         const EmpiricalDistribution&) = default;

 private:
  std::vector<double> edges_;
  std::vector<double> mass_;
};

inline constexpr std::size_t kDefaultHistogramBins = 100;

// Equal-width bins spanning [min, max] of `values`, normalized to unit mass.
// The maximum lands in the last bin. Constant input puts all mass in bin 0.
EmpiricalDistribution histogram(std::span<const double> values,
                                std::size_t nbins = kDefaultHistogramBins);

// Normalized histogram on caller-supplied edges. Values outside
// [edges.front(), edges.back()] are ignored; throws if none fall inside.
EmpiricalDistribution histogram_on_edges(std::span<const double> values,
                                         std::span<const double> edges);

// `nbins` equal-width edges spanning the union range of both samples.
std::vector<double> common_edges(std::span<const double> a,
                                 std::span<const double> b,
                                 std::size_t nbins = kDefaultHistogramBins);

}  // namespace agentsim
