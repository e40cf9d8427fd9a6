#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "agentsim/config.hpp"
#include "agentsim/random.hpp"

namespace agentsim {

// An agent's routine: the actions it deems normal.
struct AgentProfile {
  std::size_t agent_id = 0;
  std::vector<std::uint8_t> normal_actions;  // length A, binary
  // Normal actions in the order they were drawn (role 0 first).
  std::vector<std::size_t> draw_order;
};

// Sparse simplex vector: (index, weight) pairs, ascending index.
using SparseMixture = std::vector<std::pair<std::size_t, double>>;

struct EventRecord {
  std::size_t agent_id = 0;
  std::size_t event_index = 0;
  double time_min = 0.0;
  std::size_t timespan = 0;
  std::size_t role = 0;
  std::vector<double> role_mixture;  // pi, length R
  bool is_normal = false;
  SparseMixture action_mixture;      // rho, support = eligible actions
  std::size_t action = 0;
  double duration_min = 0.0;
  // Eligibility for (role, is_normal) was empty; the whole role was used.
  bool fallback = false;
  // No route could be found; the event produced no movement.
  bool dropped = false;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct RoleDraw {
  std::vector<double> mixture;
  std::size_t role = 0;
};

struct EligibleSet {
  std::vector<std::uint8_t> mask;  // length A
  bool fallback = false;
};

struct ActionDraw {
  SparseMixture mixture;
  std::size_t action = 0;
};

// Per role r, normal_counts[r] distinct actions of r chosen uniformly.
AgentProfile draw_normal_actions(const ValidatedConfig& cfg,
                                 std::size_t agent_id, RandomStream& stream);

// Exponential waiting time with mean 1 / rate, in minutes.
double draw_wait(double event_rate_per_min, RandomStream& stream);

// pi ~ Dirichlet(X[timespan]); role ~ Categorical(pi).
RoleDraw draw_role(const SimulationConfig& cfg, std::size_t timespan,
                   RandomStream& stream);

// (H_i if normal else not H_i) restricted to the role's actions. An empty
// intersection falls back to every action of the role.
EligibleSet eligible_actions(const AgentProfile& profile,
                             const ValidatedConfig& cfg, std::size_t role,
                             bool is_normal);

// rho ~ Dirichlet(1 on each eligible action); action ~ Categorical(rho).
ActionDraw draw_action(const std::vector<std::uint8_t>& eligible,
                       RandomStream& stream);

// Returns the event's duration in minutes. May rewrite `action` or set
// `dropped`; must be non-negative.
using DurationFn = std::function<double(EventRecord&)>;

inline double zero_duration(EventRecord&) { return 0.0; }

// One agent's event stream. The clock advances by an exponential wait plus
// the previous event's duration; generation stops once the next start time
// would pass total_time_min.
std::vector<EventRecord> simulate_agent(const ValidatedConfig& cfg,
                                        const AgentProfile& profile,
                                        const DurationFn& duration_fn,
                                        RandomStream& stream);

// Runs `task(i)` for i in [0, count) on `workers` threads. Each index is
// handled exactly once; exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

// All agents, each on agent_stream(seed, i). `duration_fn` must be safe to
// call concurrently when workers > 1. Output is ordered by agent id and
// does not depend on the worker count.
std::vector<std::vector<EventRecord>> simulate_population(
    const ValidatedConfig& cfg, const DurationFn& duration_fn,
    std::uint64_t seed, std::size_t workers = 1);

}  // namespace agentsim
