#include "dabg/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dabg/error.hpp"

namespace dabg {

DynamicBipartiteGraph::DynamicBipartiteGraph(int t_total, std::uint32_t size_u,
                                             std::uint32_t size_v)
    : t_total_(t_total), size_u_(size_u), size_v_(size_v) {
  if (t_total < 1) {
    throw ValidationError("t_total", "must be positive");
  }
  if (size_u < 1 || size_v < 1) {
    throw ValidationError("size", "both sides must be non-empty");
  }
  snapshots_.resize(static_cast<std::size_t>(t_total));
  for (int t = 0; t < t_total; ++t) {
    snapshots_[static_cast<std::size_t>(t)].t = t;
  }
}

const Snapshot& DynamicBipartiteGraph::snapshot(int t) const {
  if (t < 0 || t >= t_total_) {
    throw std::out_of_range("snapshot index " + std::to_string(t) +
                            " outside [0, " + std::to_string(t_total_) + ")");
  }
  return snapshots_[static_cast<std::size_t>(t)];
}

std::int64_t DynamicBipartiteGraph::edge_count() const {
  std::int64_t n = 0;
  for (const Snapshot& s : snapshots_) {
    n += static_cast<std::int64_t>(s.edges.size());
  }
  return n;
}

std::int64_t DynamicBipartiteGraph::anomalous_edge_count() const {
  std::int64_t n = 0;
  for (const Snapshot& s : snapshots_) {
    for (const TimedEdge& e : s.edges) {
      if (e.label == EdgeLabel::Anomalous) ++n;
    }
  }
  return n;
}

const TimedEdge& DynamicBipartiteGraph::edge(EdgeId id) const {
  const Snapshot& s = snapshot(id.t);
  if (id.offset >= s.edges.size()) {
    throw std::out_of_range("edge offset " + std::to_string(id.offset) +
                            " outside snapshot " + std::to_string(id.t));
  }
  return s.edges[id.offset];
}

namespace {

void merge_sorted_unique(std::vector<std::uint32_t>& dst,
                         std::vector<std::uint32_t> extra) {
  if (extra.empty()) return;
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  std::vector<std::uint32_t> merged;
  merged.reserve(dst.size() + extra.size());
  std::merge(dst.begin(), dst.end(), extra.begin(), extra.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  dst = std::move(merged);
}

}  // namespace

void DynamicBipartiteGraph::merge_snapshot_edges(
    int t, std::span<const TimedEdge> edges) {
  if (t < 0 || t >= t_total_) {
    throw std::out_of_range("snapshot index " + std::to_string(t) +
                            " outside [0, " + std::to_string(t_total_) + ")");
  }
  Snapshot& s = snapshots_[static_cast<std::size_t>(t)];
  std::vector<std::uint32_t> new_u;
  std::vector<std::uint32_t> new_v;
  for (const TimedEdge& e : edges) {
    if (e.t != t) {
      throw ValidationError("edges", "edge timestamp " + std::to_string(e.t) +
                                         " does not match snapshot " +
                                         std::to_string(t));
    }
    if (e.u >= size_u_ || e.v >= size_v_) {
      throw ValidationError("edges", "endpoint outside the declared node pool");
    }
    new_u.push_back(e.u);
    new_v.push_back(e.v);
  }
  s.edges.insert(s.edges.end(), edges.begin(), edges.end());
  merge_sorted_unique(s.active_u, std::move(new_u));
  merge_sorted_unique(s.active_v, std::move(new_v));
}

void DynamicBipartiteGraph::set_attr_row(EdgeId id, std::int64_t attr_row) {
  const Snapshot& s = snapshot(id.t);
  if (id.offset >= s.edges.size()) {
    throw std::out_of_range("edge offset " + std::to_string(id.offset) +
                            " outside snapshot " + std::to_string(id.t));
  }
  snapshots_[static_cast<std::size_t>(id.t)].edges[id.offset].attr_row =
      attr_row;
}

void DynamicBipartiteGraph::check_node(NodeRef node) const {
  const std::uint32_t limit = side_size(node.side);
  if (node.index >= limit) {
    throw std::out_of_range("node index " + std::to_string(node.index) +
                            " outside side of size " + std::to_string(limit));
  }
}

std::int64_t DynamicBipartiteGraph::degree(NodeRef node) const {
  check_node(node);
  std::int64_t d = 0;
  for (const Snapshot& s : snapshots_) {
    for (const TimedEdge& e : s.edges) {
      const std::uint32_t endpoint = node.side == Side::U ? e.u : e.v;
      if (endpoint == node.index) ++d;
    }
  }
  return d;
}

std::int64_t DynamicBipartiteGraph::degree(NodeRef node, int t) const {
  check_node(node);
  std::int64_t d = 0;
  for (const TimedEdge& e : snapshot(t).edges) {
    const std::uint32_t endpoint = node.side == Side::U ? e.u : e.v;
    if (endpoint == node.index) ++d;
  }
  return d;
}

std::vector<std::int64_t> DynamicBipartiteGraph::aggregate_degrees(
    Side side) const {
  std::vector<std::int64_t> degrees(side_size(side), 0);
  for (const Snapshot& s : snapshots_) {
    for (const TimedEdge& e : s.edges) {
      degrees[side == Side::U ? e.u : e.v] += 1;
    }
  }
  return degrees;
}

std::vector<TimedEdge> DynamicBipartiteGraph::all_edges() const {
  std::vector<TimedEdge> edges;
  edges.reserve(static_cast<std::size_t>(edge_count()));
  for (const Snapshot& s : snapshots_) {
    edges.insert(edges.end(), s.edges.begin(), s.edges.end());
  }
  return edges;
}

AnomalyLedger AnomalyLedger::from_labels(const DynamicBipartiteGraph& graph) {
  AnomalyLedger ledger;
  const int t_total = graph.t_total();
  ledger.attackers_u.resize(static_cast<std::size_t>(t_total));
  ledger.attackers_v.resize(static_cast<std::size_t>(t_total));
  ledger.infected_u.resize(static_cast<std::size_t>(t_total));
  ledger.infected_v.resize(static_cast<std::size_t>(t_total));
  ledger.window_end = t_total;
  for (int t = 0; t < t_total; ++t) {
    const Snapshot& s = graph.snapshot(t);
    for (std::uint32_t i = 0; i < s.edges.size(); ++i) {
      if (s.edges[i].label == EdgeLabel::Anomalous) {
        ledger.anomalous_edges.push_back(EdgeId{t, i});
      }
    }
  }
  return ledger;
}

DynamicBipartiteGraph anomaly_subgraph(const DynamicBipartiteGraph& graph,
                                       const AnomalyLedger& ledger) {
  DynamicBipartiteGraph sub(graph.t_total(), graph.size_u(), graph.size_v());
  std::vector<std::vector<TimedEdge>> per_snapshot(
      static_cast<std::size_t>(graph.t_total()));
  for (EdgeId id : ledger.anomalous_edges) {
    if (id.t < 0 || id.t >= graph.t_total() ||
        id.offset >= graph.snapshot(id.t).edges.size()) {
      throw std::runtime_error("ledger references unknown edge at t=" +
                               std::to_string(id.t));
    }
    const TimedEdge& e = graph.edge(id);
    if (e.label != EdgeLabel::Anomalous) {
      throw std::runtime_error(
          "ledger references a non-anomalous edge at t=" + std::to_string(id.t));
    }
    per_snapshot[static_cast<std::size_t>(id.t)].push_back(e);
  }
  for (int t = 0; t < graph.t_total(); ++t) {
    const auto& edges = per_snapshot[static_cast<std::size_t>(t)];
    if (!edges.empty()) sub.merge_snapshot_edges(t, edges);
  }
  return sub;
}

}  // namespace dabg
