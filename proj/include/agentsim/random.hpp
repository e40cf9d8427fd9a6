#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace agentsim {

// Which consumer a per-agent stream feeds. Each purpose yields an
// independent sequence for the same (seed, agent).
enum class StreamPurpose : std::uint32_t {
  kActivity = 1,
  kObservation = 2,
  kLabeling = 3,
};

// Deterministic pseudo-random stream. Single owner; not thread-safe.
class RandomStream {
 public:
  using Engine = std::mt19937_64;

  explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

  // Uniform on [0, 1).
  double uniform();
  // Uniform on (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }
  // Uniform integer on [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  double exponential(double rate);
  double normal(double mean, double sd);
  bool bernoulli(double p);

  // Natural log of a Gamma(shape, 1) variate. Stays finite for shapes small
  // enough that the variate itself underflows to zero.
  double log_gamma_variate(double shape);

  // Index drawn proportionally to non-negative `weights`. Zero-weight
  // entries are never returned. Requires a positive total.
  std::size_t categorical(std::span<const double> weights);

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
};

RandomStream agent_stream(std::uint64_t seed, std::uint64_t agent_id,
                          StreamPurpose purpose = StreamPurpose::kActivity);

// Dirichlet draw. Entries with zero concentration are excluded from the
// support and get exactly zero mass. Throws if no entry is positive.
std::vector<double> sample_dirichlet(std::span<const double> concentration,
                                     RandomStream& stream);

}  // namespace agentsim
