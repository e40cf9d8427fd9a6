#include "agentsim/activity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "agentsim/error.hpp"

namespace agentsim {

AgentProfile draw_normal_actions(const ValidatedConfig& cfg,
                                 std::size_t agent_id, RandomStream& stream) {
  AgentProfile profile;
  profile.agent_id = agent_id;
  profile.normal_actions.assign(cfg->num_actions, 0);
  for (std::size_t r = 0; r < cfg->num_roles; ++r) {
    std::vector<std::size_t> pool = cfg.role_actions(r);
    const std::size_t k = cfg->normal_counts[r];
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + stream.uniform_index(pool.size() - i);
      std::swap(pool[i], pool[j]);
      profile.normal_actions[pool[i]] = 1;
      profile.draw_order.push_back(pool[i]);
    }
  }
  return profile;
}

double draw_wait(double event_rate_per_min, RandomStream& stream) {
  if (!(event_rate_per_min > 0.0)) {
    throw Error("draw_wait: event rate must be positive");
  }
  return stream.exponential(event_rate_per_min);
}

RoleDraw draw_role(const SimulationConfig& cfg, std::size_t timespan,
                   RandomStream& stream) {
  if (timespan >= cfg.role_concentration.size()) {
    throw Error("draw_role: timespan out of range");
  }
  const auto& row = cfg.role_concentration[timespan];
  if (std::none_of(row.begin(), row.end(), [](double x) { return x > 0.0; })) {
    throw Error("draw_role: concentration row " + std::to_string(timespan) +
                " is all zeros");
  }
  RoleDraw out;
  out.mixture = sample_dirichlet(row, stream);
  out.role = stream.categorical(out.mixture);
  return out;
}

EligibleSet eligible_actions(const AgentProfile& profile,
                             const ValidatedConfig& cfg, std::size_t role,
                             bool is_normal) {
  if (role >= cfg->num_roles) throw Error("eligible_actions: role out of range");
  const auto& members = cfg.role_actions(role);
  if (members.empty()) {
    throw Error("eligible_actions: role " + std::to_string(role) +
                " has no actions");
  }
  EligibleSet out;
  out.mask.assign(cfg->num_actions, 0);
  bool any = false;
  for (std::size_t a : members) {
    const bool normal = profile.normal_actions[a] != 0;
    if (normal == is_normal) {
      out.mask[a] = 1;
      any = true;
    }
  }
  if (!any) {
    out.fallback = true;
    for (std::size_t a : members) out.mask[a] = 1;
  }
  return out;
}

ActionDraw draw_action(const std::vector<std::uint8_t>& eligible,
                       RandomStream& stream) {
  std::vector<std::size_t> support;
  for (std::size_t a = 0; a < eligible.size(); ++a) {
    if (eligible[a]) support.push_back(a);
  }
  if (support.empty()) throw Error("draw_action: no eligible actions");

  const std::vector<double> ones(support.size(), 1.0);
  const std::vector<double> rho = sample_dirichlet(ones, stream);
  const std::size_t pick = stream.categorical(rho);

  ActionDraw out;
  out.mixture.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    out.mixture.emplace_back(support[i], rho[i]);
  }
  out.action = support[pick];
  return out;
}

std::vector<EventRecord> simulate_agent(const ValidatedConfig& cfg,
                                        const AgentProfile& profile,
                                        const DurationFn& duration_fn,
                                        RandomStream& stream) {
  std::vector<EventRecord> events;
  double clock = 0.0;
  double previous_duration = 0.0;
  for (;;) {
    clock += draw_wait(cfg->event_rate_per_min, stream) + previous_duration;
    if (clock > cfg->total_time_min) break;

    EventRecord ev;
    ev.agent_id = profile.agent_id;
    ev.event_index = events.size();
    ev.time_min = clock;
    ev.timespan = timespan_index(clock, cfg.get());
    RoleDraw role = draw_role(cfg.get(), ev.timespan, stream);
    ev.role = role.role;
    ev.role_mixture = std::move(role.mixture);
    ev.is_normal = stream.bernoulli(cfg->normal_prob);
    EligibleSet eligible = eligible_actions(profile, cfg, ev.role, ev.is_normal);
    ev.fallback = eligible.fallback;
    ActionDraw action = draw_action(eligible.mask, stream);
    ev.action = action.action;
    ev.action_mixture = std::move(action.mixture);

    const double d = duration_fn(ev);
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw Error("simulate_agent: duration must be finite and non-negative");
    }
    ev.duration_min = d;
    previous_duration = d;
    events.push_back(std::move(ev));
  }
  return events;
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        if (failed.load()) return;
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::vector<EventRecord>> simulate_population(
    const ValidatedConfig& cfg, const DurationFn& duration_fn,
    std::uint64_t seed, std::size_t workers) {
  std::vector<std::vector<EventRecord>> out(cfg->num_agents);
  parallel_for(cfg->num_agents, workers, [&](std::size_t i) {
    RandomStream stream = agent_stream(seed, i, StreamPurpose::kActivity);
    const AgentProfile profile = draw_normal_actions(cfg, i, stream);
    out[i] = simulate_agent(cfg, profile, duration_fn, stream);
  });
  return out;
}

}  // namespace agentsim
