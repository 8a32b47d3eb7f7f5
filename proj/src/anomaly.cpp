#include "dabg/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "dabg/error.hpp"
#include "dabg/rng.hpp"

namespace dabg {
namespace {

// Seed streams, one per independent random decision.
enum Stream : std::uint64_t {
  kStreamAttackersU = 1,
  kStreamAttackersV = 2,
  kStreamVictimsU = 3,
  kStreamVictimsV = 4,
  kStreamEdges = 5,    // indexed by snapshot
  kStreamPromote = 6,  // indexed by snapshot
};

// k distinct uniform picks from `pool` (partial Fisher-Yates), sorted.
std::vector<std::uint32_t> pick_uniform(std::vector<std::uint32_t> pool,
                                        std::size_t k, std::uint64_t seed) {
  if (k > pool.size()) {
    throw std::logic_error("pick_uniform: k exceeds pool size");
  }
  Rng rng(seed);
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    chosen.push_back(pool[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::uint32_t> pool_without(std::uint32_t size,
                                        const std::vector<std::uint32_t>& out) {
  std::vector<std::uint32_t> pool;
  pool.reserve(size - out.size());
  std::size_t next = 0;
  for (std::uint32_t i = 0; i < size; ++i) {
    if (next < out.size() && out[next] == i) {
      ++next;
      continue;
    }
    pool.push_back(i);
  }
  return pool;
}

std::vector<std::uint32_t> iota_pool(std::uint32_t size) {
  std::vector<std::uint32_t> pool(size);
  for (std::uint32_t i = 0; i < size; ++i) pool[i] = i;
  return pool;
}

void insert_sorted(std::vector<std::uint32_t>& sorted, std::uint32_t value) {
  sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), value), value);
}

}  // namespace

void AnomalyConfig::validate() const {
  if (!(anomaly_percentage > 0.0) || anomaly_percentage > 1.0) {
    throw ValidationError("anomaly_percentage", "must be in (0, 1]");
  }
  if (burstiness < 1) {
    throw ValidationError("burstiness", "must be a positive integer");
  }
  if (!(propagation_ratio >= 0.0) || propagation_ratio > 1.0) {
    throw ValidationError("propagation_ratio", "must be in [0, 1]");
  }
  if (window_start < 0 || window_end <= window_start) {
    throw ValidationError("window", "window [start, end) must be non-empty");
  }
  if (propagation_enabled && side_mode != SideMode::Both) {
    throw ValidationError("side_mode",
                          "propagation requires attackers on both sides");
  }
}

InjectionResult inject(const DynamicBipartiteGraph& graph,
                       const AnomalyConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.window_end > graph.t_total()) {
    throw ValidationError("window", "window extends past the last snapshot");
  }
  if (config.initial_attackers_u > graph.size_u()) {
    throw ValidationError("initial_attackers_u", "exceeds |U|");
  }
  if (config.initial_attackers_v > graph.size_v()) {
    throw ValidationError("initial_attackers_v", "exceeds |V|");
  }
  const std::uint64_t victims_u_count =
      std::uint64_t{config.initial_attackers_u} * config.burstiness;
  const std::uint64_t victims_v_count =
      std::uint64_t{config.initial_attackers_v} * config.burstiness;
  if (victims_u_count + config.initial_attackers_u > graph.size_u()) {
    throw ValidationError(
        "burstiness", "victim demand on side U exceeds the remaining pool");
  }
  if (victims_v_count + config.initial_attackers_v > graph.size_v()) {
    throw ValidationError(
        "burstiness", "victim demand on side V exceeds the remaining pool");
  }

  // Per-snapshot budgets from the pre-injection counts.
  std::vector<std::int64_t> budget(
      static_cast<std::size_t>(graph.t_total()), 0);
  bool any_edges = false;
  for (std::int32_t t = config.window_start; t < config.window_end; ++t) {
    const double pre =
        static_cast<double>(graph.snapshot(t).edges.size());
    budget[static_cast<std::size_t>(t)] =
        static_cast<std::int64_t>(std::floor(pre * config.anomaly_percentage));
    any_edges = any_edges || budget[static_cast<std::size_t>(t)] > 0;
  }
  if (any_edges) {
    const bool need_u_attack = config.side_mode != SideMode::VOnly;
    const bool need_v_attack = config.side_mode != SideMode::UOnly;
    if (need_u_attack &&
        (config.initial_attackers_u == 0 || victims_v_count == 0)) {
      throw ValidationError(
          "side_mode",
          "U-side attacks need attackers on U and victims on V");
    }
    if (need_v_attack &&
        (config.initial_attackers_v == 0 || victims_u_count == 0)) {
      throw ValidationError(
          "side_mode",
          "V-side attacks need attackers on V and victims on U");
    }
  }

  InjectionResult result{graph, AnomalyLedger{}};
  AnomalyLedger& ledger = result.ledger;
  const auto t_total = static_cast<std::size_t>(graph.t_total());
  ledger.attackers_u.resize(t_total);
  ledger.attackers_v.resize(t_total);
  ledger.infected_u.resize(t_total);
  ledger.infected_v.resize(t_total);
  ledger.window_start = config.window_start;
  ledger.window_end = config.window_end;
  ledger.propagation_enabled = config.propagation_enabled;

  ledger.initial_attackers_u =
      pick_uniform(iota_pool(graph.size_u()), config.initial_attackers_u,
                   derive_seed(seed, kStreamAttackersU));
  ledger.initial_attackers_v =
      pick_uniform(iota_pool(graph.size_v()), config.initial_attackers_v,
                   derive_seed(seed, kStreamAttackersV));
  ledger.victims_u = pick_uniform(
      pool_without(graph.size_u(), ledger.initial_attackers_u),
      static_cast<std::size_t>(victims_u_count),
      derive_seed(seed, kStreamVictimsU));
  ledger.victims_v = pick_uniform(
      pool_without(graph.size_v(), ledger.initial_attackers_v),
      static_cast<std::size_t>(victims_v_count),
      derive_seed(seed, kStreamVictimsV));

  std::vector<std::uint32_t> attackers_u = ledger.initial_attackers_u;
  std::vector<std::uint32_t> attackers_v = ledger.initial_attackers_v;
  std::vector<std::uint32_t> unpromoted_u = ledger.victims_u;
  std::vector<std::uint32_t> unpromoted_v = ledger.victims_v;

  std::vector<TimedEdge> batch;
  for (std::int32_t t = config.window_start; t < config.window_end; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const std::int64_t c_e = budget[ts];
    std::int64_t from_u = 0;
    std::int64_t from_v = 0;
    switch (config.side_mode) {
      case SideMode::UOnly:
        from_u = c_e;
        break;
      case SideMode::VOnly:
        from_v = c_e;
        break;
      case SideMode::Both:
        from_u = c_e / 2;
        from_v = c_e - from_u;
        break;
    }

    Rng edge_rng(derive_seed(seed, kStreamEdges, static_cast<std::uint64_t>(t)));
    batch.clear();
    batch.reserve(static_cast<std::size_t>(c_e));
    for (std::int64_t k = 0; k < from_u; ++k) {
      const std::uint32_t u = attackers_u[edge_rng.below(attackers_u.size())];
      const std::uint32_t v =
          ledger.victims_v[edge_rng.below(ledger.victims_v.size())];
      batch.push_back(TimedEdge{u, v, t, EdgeLabel::Anomalous, -1});
    }
    for (std::int64_t k = 0; k < from_v; ++k) {
      const std::uint32_t u =
          ledger.victims_u[edge_rng.below(ledger.victims_u.size())];
      const std::uint32_t v = attackers_v[edge_rng.below(attackers_v.size())];
      batch.push_back(TimedEdge{u, v, t, EdgeLabel::Anomalous, -1});
    }
    const auto offset =
        static_cast<std::uint32_t>(result.graph.snapshot(t).edges.size());
    result.graph.merge_snapshot_edges(t, batch);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      ledger.anomalous_edges.push_back(
          EdgeId{t, offset + static_cast<std::uint32_t>(k)});
    }

    ledger.attackers_u[ts] = attackers_u;
    ledger.attackers_v[ts] = attackers_v;

    if (config.propagation_enabled && config.propagation_ratio > 0.0) {
      Rng promote_rng(
          derive_seed(seed, kStreamPromote, static_cast<std::uint64_t>(t)));
      const auto promote = [&](std::vector<std::uint32_t>& unpromoted,
                               std::size_t victim_total,
                               std::vector<std::uint32_t>& attackers,
                               std::vector<std::uint32_t>& infected) {
        auto want = static_cast<std::size_t>(std::floor(
            static_cast<double>(victim_total) * config.propagation_ratio));
        want = std::min(want, unpromoted.size());
        for (std::size_t k = 0; k < want; ++k) {
          const std::size_t j = static_cast<std::size_t>(
              promote_rng.below(unpromoted.size()));
          const std::uint32_t node = unpromoted[j];
          unpromoted[j] = unpromoted.back();
          unpromoted.pop_back();
          insert_sorted(attackers, node);
          infected.push_back(node);
        }
        std::sort(infected.begin(), infected.end());
      };
      promote(unpromoted_u, ledger.victims_u.size(), attackers_u,
              ledger.infected_u[ts]);
      promote(unpromoted_v, ledger.victims_v.size(), attackers_v,
              ledger.infected_v[ts]);
    }
  }

  // Compromised nodes stay attackers after the window closes, which keeps
  // attacker membership non-decreasing from window_start onward.
  for (std::int32_t t = config.window_end;
       t < static_cast<std::int32_t>(t_total); ++t) {
    ledger.attackers_u[static_cast<std::size_t>(t)] = attackers_u;
    ledger.attackers_v[static_cast<std::size_t>(t)] = attackers_v;
  }
  return result;
}

double measured_burstiness(const AnomalyLedger& ledger) {
  const std::size_t attackers =
      ledger.initial_attackers_u.size() + ledger.initial_attackers_v.size();
  const std::size_t victims = ledger.victims_u.size() + ledger.victims_v.size();
  if (victims == 0) {
    throw std::runtime_error("measured_burstiness: empty victim set");
  }
  return static_cast<double>(attackers) / static_cast<double>(victims);
}

bool verify_propagation(const AnomalyLedger& ledger) {
  // Victims hold that role throughout the window, so any victim found in an
  // attacker set after window_start was promoted at an earlier snapshot.
  const auto t_total = static_cast<std::int32_t>(ledger.attackers_u.size());
  for (std::int32_t t = ledger.window_start + 1; t < t_total; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    for (const std::uint32_t node : ledger.attackers_u[ts]) {
      if (std::binary_search(ledger.victims_u.begin(), ledger.victims_u.end(),
                             node)) {
        return true;
      }
    }
    for (const std::uint32_t node : ledger.attackers_v[ts]) {
      if (std::binary_search(ledger.victims_v.begin(), ledger.victims_v.end(),
                             node)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace dabg
