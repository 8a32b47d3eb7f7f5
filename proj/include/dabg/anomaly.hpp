#pragma once

#include <cstdint>

#include "dabg/graph.hpp"

namespace dabg {

// Which attacker side emits anomalous edges. Both splits each snapshot's
// budget between U-side attackers and V-side attackers.
enum class SideMode { UOnly, VOnly, Both };

struct AnomalyConfig {
  std::uint32_t initial_attackers_u = 0;  // |A^U| before propagation
  std::uint32_t initial_attackers_v = 0;  // |A^V| before propagation
  double anomaly_percentage = 0.01;       // fraction of each snapshot's edges
  std::uint32_t burstiness = 1;           // victims per attacker
  double propagation_ratio = 0.0;         // victim share promoted per snapshot
  bool propagation_enabled = false;
  std::int32_t window_start = 0;  // inclusive
  std::int32_t window_end = 0;    // exclusive
  SideMode side_mode = SideMode::Both;

  void validate() const;
};

struct InjectionResult {
  DynamicBipartiteGraph graph;
  AnomalyLedger ledger;
};

// Adds labeled anomalous edges to a copy of `graph` and returns it with the
// ground-truth ledger.
//
// Attackers are drawn uniformly without replacement from each side's node
// pool, victim sets (sizes |A^U|*b and |A^V|*b) likewise but disjoint from
// the same side's attackers. For each window snapshot the budget is
// c_e = floor(|E_t| * anomaly_percentage) with |E_t| the pre-injection edge
// count; Both mode sends floor(c_e/2) edges A^U x V^victim and the remainder
// U^victim x A^V, UOnly/VOnly send all c_e from the one attacker side.
// Endpoints are drawn uniformly with replacement, so parallel anomalous
// edges are expected. With propagation enabled, after each window snapshot
// floor(|victims| * propagation_ratio) not-yet-promoted victims per side
// join the attacker set and are recorded as infected at that snapshot.
// Normal edges are never touched. Deterministic in (graph, config, seed).
InjectionResult inject(const DynamicBipartiteGraph& graph,
                       const AnomalyConfig& config, std::uint64_t seed);

// Ratio of initial attackers to victims across both sides; equals
// 1/burstiness because victim pools are sized |A|*b per side.
double measured_burstiness(const AnomalyLedger& ledger);

// True iff some node sits in a victim set at one snapshot and in an attacker
// set at a strictly later one, i.e. a promotion became visible.
bool verify_propagation(const AnomalyLedger& ledger);

}  // namespace dabg
