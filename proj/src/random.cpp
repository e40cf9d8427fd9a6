#include "agentsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agentsim/error.hpp"

namespace agentsim {

double RandomStream::uniform() {
  return std::generate_canonical<double, 53>(engine_);
}

std::size_t RandomStream::uniform_index(std::size_t n) {
  if (n == 0) throw Error("uniform_index: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

double RandomStream::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error("exponential: rate must be positive and finite");
  }
  // -log(U) with U in (0,1] is strictly positive except at U == 1.
  for (;;) {
    double v = -std::log(uniform_positive()) / rate;
    if (v > 0.0) return v;
  }
}

double RandomStream::normal(double mean, double sd) {
  std::normal_distribution<double> dist(mean, sd);
  return dist(engine_);
}

bool RandomStream::bernoulli(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform() < p;
}

double RandomStream::log_gamma_variate(double shape) {
  if (!(shape > 0.0)) throw Error("log_gamma_variate: shape must be positive");
  if (shape >= 1.0) {
    std::gamma_distribution<double> dist(shape, 1.0);
    double g = dist(engine_);
    while (g <= 0.0) g = dist(engine_);
    return std::log(g);
  }
  // Gamma(a) = Gamma(a + 1) * U^(1/a), evaluated in log space.
  std::gamma_distribution<double> dist(shape + 1.0, 1.0);
  double g = dist(engine_);
  while (g <= 0.0) g = dist(engine_);
  return std::log(g) + std::log(uniform_positive()) / shape;
}

std::size_t RandomStream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw Error("categorical: weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw Error("categorical: weights sum to zero");
  const double target = uniform() * total;
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cum += weights[i];
    if (target < cum) return i;
  }
  return last_positive;
}

RandomStream agent_stream(std::uint64_t seed, std::uint64_t agent_id,
                          StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(agent_id),
                    static_cast<std::uint32_t>(agent_id >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return RandomStream(seq);
}

std::vector<double> sample_dirichlet(std::span<const double> concentration,
                                     RandomStream& stream) {
  std::vector<double> out(concentration.size(), 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    const double a = concentration[i];
    if (a < 0.0 || !std::isfinite(a)) {
      throw Error("sample_dirichlet: concentrations must be finite and >= 0");
    }
    if (a == 0.0) continue;
    out[i] = stream.log_gamma_variate(a);
    max_log = std::max(max_log, out[i]);
    any = true;
  }
  if (!any) throw Error("sample_dirichlet: all concentrations are zero");

  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (concentration[i] == 0.0) continue;
    out[i] = std::exp(out[i] - max_log);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace agentsim
