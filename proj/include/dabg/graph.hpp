#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dabg {

enum class Side { U, V };

enum class EdgeLabel : std::uint8_t { Normal, Anomalous };

struct NodeRef {
  Side side = Side::U;
  std::uint32_t index = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// One interaction event. Parallel edges are meaningful (multigraph), so edges
// have no identity of their own beyond their (snapshot, offset) position.
struct TimedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::int32_t t = 0;
  EdgeLabel label = EdgeLabel::Normal;
  std::int64_t attr_row = -1;  // index into the attribute table, -1 when unset

  friend bool operator==(const TimedEdge&, const TimedEdge&) = default;
};

// Position of an edge inside a graph: snapshot index plus offset within that
// snapshot's edge vector.
struct EdgeId {
  std::int32_t t = 0;
  std::uint32_t offset = 0;

  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct Snapshot {
  std::int32_t t = 0;
  std::vector<TimedEdge> edges;
  // Nodes with at least one incident edge in this snapshot, sorted.
  std::vector<std::uint32_t> active_u;
  std::vector<std::uint32_t> active_v;
};

class DynamicBipartiteGraph {
 public:
  DynamicBipartiteGraph(int t_total, std::uint32_t size_u,
                        std::uint32_t size_v);

  int t_total() const { return t_total_; }
  std::uint32_t size_u() const { return size_u_; }
  std::uint32_t size_v() const { return size_v_; }
  std::uint32_t side_size(Side side) const {
    return side == Side::U ? size_u_ : size_v_;
  }

  const Snapshot& snapshot(int t) const;
  std::span<const Snapshot> snapshots() const { return snapshots_; }
  std::int64_t edge_count() const;
  std::int64_t anomalous_edge_count() const;
  const TimedEdge& edge(EdgeId id) const;

  // Appends `edges` (all carrying timestamp t) to snapshot t as a multiset and
  // extends the active sets.
  void merge_snapshot_edges(int t, std::span<const TimedEdge> edges);

  void set_attr_row(EdgeId id, std::int64_t attr_row);

  // Aggregate degree across all snapshots; parallel edges count with
  // multiplicity.
  std::int64_t degree(NodeRef node) const;
  // Degree within one snapshot.
  std::int64_t degree(NodeRef node, int t) const;
  // Aggregate degree of every declared node of a side (degree-0 included).
  std::vector<std::int64_t> aggregate_degrees(Side side) const;

  // All edges in (t, offset) order.
  std::vector<TimedEdge> all_edges() const;

 private:
  void check_node(NodeRef node) const;

  int t_total_;
  std::uint32_t size_u_;
  std::uint32_t size_v_;
  std::vector<Snapshot> snapshots_;
};

// Ground truth emitted by anomaly injection. Victim sets are fixed when the
// injection starts (promoted victims stay victims); attacker and infected
// membership is tracked per snapshot. attackers_*[t] is the attacker set in
// effect while snapshot t was injected, infected_*[t] the victims promoted
// right after it.
struct AnomalyLedger {
  std::vector<std::uint32_t> initial_attackers_u;
  std::vector<std::uint32_t> initial_attackers_v;
  std::vector<std::uint32_t> victims_u;
  std::vector<std::uint32_t> victims_v;
  std::vector<std::vector<std::uint32_t>> attackers_u;  // length T
  std::vector<std::vector<std::uint32_t>> attackers_v;  // length T
  std::vector<std::vector<std::uint32_t>> infected_u;   // length T
  std::vector<std::vector<std::uint32_t>> infected_v;   // length T
  std::vector<EdgeId> anomalous_edges;                  // (t, offset) ascending
  std::int32_t window_start = 0;
  std::int32_t window_end = 0;
  bool propagation_enabled = false;

  // Minimal ledger for a graph whose edges already carry labels (e.g. parsed
  // from an edge-list file): anomalous edge ids only.
  static AnomalyLedger from_labels(const DynamicBipartiteGraph& graph);
};

// Subgraph induced by the ledger's anomalous edges, timestamps preserved.
// Every referenced edge must exist and be labeled anomalous.
DynamicBipartiteGraph anomaly_subgraph(const DynamicBipartiteGraph& graph,
                                       const AnomalyLedger& ledger);

}  // namespace dabg
