#include "dabg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dabg/error.hpp"
#include "dabg/rng.hpp"

namespace dabg {
namespace {

// Sample compressed to (sorted unique value, multiplicity). Time samples
// collapse to at most T entries, degree samples to the distinct degrees, so
// kernel sums run over K^2 terms instead of n^2.
struct WeightedSample {
  std::vector<double> values;   // ascending
  std::vector<double> weights;  // positive counts
  double total = 0.0;           // sum of weights
};

WeightedSample compress(const std::vector<double>& raw) {
  WeightedSample out;
  std::vector<double> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    out.values.push_back(sorted[i]);
    out.weights.push_back(static_cast<double>(j - i + 1));
    i = j + 1;
  }
  out.total = static_cast<double>(sorted.size());
  return out;
}

WeightedSample pool(const WeightedSample& a, const WeightedSample& b) {
  WeightedSample out;
  out.values.reserve(a.values.size() + b.values.size());
  out.weights.reserve(a.values.size() + b.values.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&](double v, double w) {
    if (!out.values.empty() && out.values.back() == v) {
      out.weights.back() += w;
    } else {
      out.values.push_back(v);
      out.weights.push_back(w);
    }
  };
  while (i < a.values.size() || j < b.values.size()) {
    if (j == b.values.size() ||
        (i < a.values.size() && a.values[i] <= b.values[j])) {
      push(a.values[i], a.weights[i]);
      ++i;
    } else {
      push(b.values[j], b.weights[j]);
      ++j;
    }
  }
  out.total = a.total + b.total;
  return out;
}

// Ordered pairs of distinct points at distance <= d within the pooled sample.
double pairs_within(const WeightedSample& s, const std::vector<double>& cum,
                    double d) {
  double count = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    const auto lo = static_cast<std::size_t>(
        std::lower_bound(s.values.begin(), s.values.end(), s.values[k] - d) -
        s.values.begin());
    const auto hi = static_cast<std::size_t>(
        std::upper_bound(s.values.begin(), s.values.end(), s.values[k] + d) -
        s.values.begin());
    const double mass = cum[hi] - cum[lo];
    count += s.weights[k] * mass;
  }
  return count - s.total;  // drop i == i self pairs
}

// Realized pairwise distance nearest to d. The bisection below lands within
// an ulp of one (the rounding of values[k] +/- d can blur the count boundary
// by that much), so snapping recovers the exact distance.
double snap_to_pair_distance(const WeightedSample& s, double d) {
  double best = d;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
    const auto idx = static_cast<std::size_t>(
        std::lower_bound(s.values.begin() + k + 1, s.values.end(),
                         s.values[k] + d) -
        s.values.begin());
    for (std::size_t j = (idx > k + 1 ? idx - 1 : k + 1);
         j < s.values.size() && j <= idx; ++j) {
      const double cand = s.values[j] - s.values[k];
      const double err = std::abs(cand - d);
      if (err < best_err) {
        best_err = err;
        best = cand;
      }
    }
  }
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() *
                     std::max(std::abs(best), std::abs(d));
  return best_err <= tol ? best : d;
}

// Smallest pairwise distance d such that at least half of all ordered
// distinct-point pairs lie within d. Bisection over representable doubles;
// pairs_within is monotone in d, so this converges to an actual pairwise
// distance.
double weighted_median_distance(const WeightedSample& pooled) {
  if (pooled.values.empty()) {
    throw std::runtime_error("median bandwidth: empty sample");
  }
  std::vector<double> cum(pooled.values.size() + 1, 0.0);
  for (std::size_t i = 0; i < pooled.values.size(); ++i) {
    cum[i + 1] = cum[i] + pooled.weights[i];
  }
  const double n = pooled.total;
  const double total_pairs = n * n - n;
  if (total_pairs <= 0.0) return 0.0;  // a single point
  const double target = total_pairs / 2.0;
  if (pairs_within(pooled, cum, 0.0) >= target) return 0.0;
  double lo = 0.0;
  double hi = pooled.values.back() - pooled.values.front();
  while (true) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (pairs_within(pooled, cum, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return snap_to_pair_distance(pooled, hi);
}

double kernel_self_sum(const WeightedSample& s, double inv_two_sigma_sq) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    sum += s.weights[i] * s.weights[i];  // k(x, x) = 1
    for (std::size_t j = i + 1; j < s.values.size(); ++j) {
      const double d = s.values[j] - s.values[i];
      sum += 2.0 * s.weights[i] * s.weights[j] *
             std::exp(-d * d * inv_two_sigma_sq);
    }
  }
  return sum / (s.total * s.total);
}

double kernel_cross_sum(const WeightedSample& a, const WeightedSample& b,
                        double inv_two_sigma_sq) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t j = 0; j < b.values.size(); ++j) {
      const double d = a.values[i] - b.values[j];
      sum += a.weights[i] * b.weights[j] * std::exp(-d * d * inv_two_sigma_sq);
    }
  }
  return sum / (a.total * b.total);
}

double mmd_weighted(const WeightedSample& a, const WeightedSample& b,
                    double bandwidth) {
  if (a.values.empty() || b.values.empty()) {
    throw std::runtime_error("mmd: empty sample");
  }
  if (!(bandwidth > 0.0)) {
    throw std::runtime_error("mmd: bandwidth must be positive");
  }
  // Equal distributions score exactly zero instead of summation noise.
  if (a.values == b.values && a.weights == b.weights) return 0.0;
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  // The cross sum iterates in a canonical order so the result is bitwise
  // symmetric in (a, b).
  const bool a_first =
      a.values < b.values || (a.values == b.values && a.weights <= b.weights);
  const double cross = a_first ? kernel_cross_sum(a, b, inv)
                               : kernel_cross_sum(b, a, inv);
  const double value =
      kernel_self_sum(a, inv) + kernel_self_sum(b, inv) - 2.0 * cross;
  return std::max(value, 0.0);
}

double median_bandwidth_weighted(const WeightedSample& a,
                                 const WeightedSample& b) {
  return std::max(weighted_median_distance(pool(a, b)), kBandwidthFloor);
}

std::vector<std::vector<std::uint32_t>> collapsed_neighbors(
    const DynamicBipartiteGraph& graph, Side side) {
  const std::size_t n = graph.side_size(side);
  std::vector<std::vector<std::uint32_t>> neigh(n);
  for (const Snapshot& snap : graph.snapshots()) {
    for (const TimedEdge& e : snap.edges) {
      if (side == Side::U) {
        neigh[e.u].push_back(e.v);
      } else {
        neigh[e.v].push_back(e.u);
      }
    }
  }
  for (auto& list : neigh) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return neigh;
}

double jaccard_sorted(const std::vector<std::uint32_t>& a,
                      const std::vector<std::uint32_t>& b) {
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<double> bcc_values(const DynamicBipartiteGraph& graph, Side side) {
  const Side other = side == Side::U ? Side::V : Side::U;
  const auto own = collapsed_neighbors(graph, side);
  const auto opp = collapsed_neighbors(graph, other);
  std::vector<double> values;
  std::vector<std::uint32_t> second;
  for (std::uint32_t node = 0; node < own.size(); ++node) {
    const auto& firsts = own[node];
    if (firsts.empty()) continue;  // no neighborhood, out of the sample
    second.clear();
    for (const std::uint32_t mid : firsts) {
      for (const std::uint32_t w : opp[mid]) {
        if (w != node) second.push_back(w);
      }
    }
    std::sort(second.begin(), second.end());
    second.erase(std::unique(second.begin(), second.end()), second.end());
    if (second.empty()) {
      values.push_back(0.0);
      continue;
    }
    double sum = 0.0;
    for (const std::uint32_t w : second) {
      sum += jaccard_sorted(firsts, own[w]);
    }
    values.push_back(sum / static_cast<double>(second.size()));
  }
  return values;
}

double tv_distance(const TabularColumn& a, const TabularColumn& b) {
  std::map<std::string, double> freq;
  const double na = static_cast<double>(a.categorical.size());
  const double nb = static_cast<double>(b.categorical.size());
  for (const auto& v : a.categorical) freq[v] += 1.0 / na;
  for (const auto& v : b.categorical) freq[v] -= 1.0 / nb;
  double tv = 0.0;
  for (const auto& [cat, diff] : freq) tv += std::abs(diff);
  return tv / 2.0;
}

constexpr int kAttributeBins = 100;

WeightedSample binned_sample(const std::vector<double>& values, double lo,
                             double hi) {
  std::vector<double> counts(kAttributeBins, 0.0);
  const double span = hi - lo;
  for (const double v : values) {
    int bin = span > 0.0
                  ? static_cast<int>((v - lo) / span * kAttributeBins)
                  : 0;
    bin = std::clamp(bin, 0, kAttributeBins - 1);
    counts[static_cast<std::size_t>(bin)] += 1.0;
  }
  WeightedSample out;
  for (int b = 0; b < kAttributeBins; ++b) {
    if (counts[static_cast<std::size_t>(b)] == 0.0) continue;
    out.values.push_back((static_cast<double>(b) + 0.5) /
                         static_cast<double>(kAttributeBins));
    out.weights.push_back(counts[static_cast<std::size_t>(b)]);
  }
  out.total = static_cast<double>(values.size());
  return out;
}

}  // namespace

ScalarSample degree_distribution(const DynamicBipartiteGraph& graph,
                                 Side side) {
  ScalarSample out;
  out.kind = side == Side::U ? SampleKind::DegreeU : SampleKind::DegreeV;
  const auto degrees = graph.aggregate_degrees(side);
  out.values.reserve(degrees.size());
  for (const std::int64_t d : degrees) {
    out.values.push_back(static_cast<double>(d));
  }
  return out;
}

TimeSamples time_distributions(const DynamicBipartiteGraph& graph) {
  TimeSamples out;
  out.edge.kind = SampleKind::EdgeTime;
  out.node_u.kind = SampleKind::NodeTimeU;
  out.node_v.kind = SampleKind::NodeTimeV;
  for (const Snapshot& snap : graph.snapshots()) {
    const auto t = static_cast<double>(snap.t);
    out.edge.values.insert(out.edge.values.end(), snap.edges.size(), t);
    out.node_u.values.insert(out.node_u.values.end(), snap.active_u.size(), t);
    out.node_v.values.insert(out.node_v.values.end(), snap.active_v.size(), t);
  }
  return out;
}

ScalarSample bcc(const DynamicBipartiteGraph& graph, Side side) {
  ScalarSample out;
  out.kind = side == Side::U ? SampleKind::BccU : SampleKind::BccV;
  out.values = bcc_values(graph, side);
  return out;
}

double median_bandwidth(const ScalarSample& a, const ScalarSample& b) {
  return median_bandwidth_weighted(compress(a.values), compress(b.values));
}

double mmd(const ScalarSample& a, const ScalarSample& b, double bandwidth) {
  return mmd_weighted(compress(a.values), compress(b.values), bandwidth);
}

double mmd(const ScalarSample& a, const ScalarSample& b) {
  const WeightedSample wa = compress(a.values);
  const WeightedSample wb = compress(b.values);
  return mmd_weighted(wa, wb, median_bandwidth_weighted(wa, wb));
}

double anomaly_similarity(const DynamicBipartiteGraph& graph_a,
                          const AnomalyLedger& ledger_a,
                          const DynamicBipartiteGraph& graph_b,
                          const AnomalyLedger& ledger_b, double bandwidth) {
  const DynamicBipartiteGraph sub_a = anomaly_subgraph(graph_a, ledger_a);
  const DynamicBipartiteGraph sub_b = anomaly_subgraph(graph_b, ledger_b);
  if (sub_a.edge_count() == 0 || sub_b.edge_count() == 0) {
    throw std::runtime_error("anomaly_similarity: empty anomaly subgraph");
  }
  auto pooled_bcc = [](const DynamicBipartiteGraph& g) {
    std::vector<double> values = bcc_values(g, Side::U);
    const std::vector<double> v_side = bcc_values(g, Side::V);
    values.insert(values.end(), v_side.begin(), v_side.end());
    return compress(values);
  };
  const WeightedSample wa = pooled_bcc(sub_a);
  const WeightedSample wb = pooled_bcc(sub_b);
  const double sigma =
      bandwidth > 0.0 ? bandwidth : median_bandwidth_weighted(wa, wb);
  return mmd_weighted(wa, wb, sigma);
}

AttributeSimilarity attribute_similarity(const TabularDataset& a,
                                         const TabularDataset& b,
                                         double bandwidth) {
  if (a.columns.size() != b.columns.size()) {
    throw ValidationError("attributes", "column counts differ");
  }
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    if (a.columns[c].name != b.columns[c].name ||
        a.columns[c].kind != b.columns[c].kind) {
      throw ValidationError("attributes",
                            "schema mismatch at column " + a.columns[c].name);
    }
  }
  AttributeSimilarity out;
  double sum = 0.0;
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    const TabularColumn& ca = a.columns[c];
    const TabularColumn& cb = b.columns[c];
    ColumnScore score;
    score.column = ca.name;
    if (ca.kind == ColumnKind::Categorical) {
      if (ca.categorical.empty() || cb.categorical.empty()) {
        throw std::runtime_error("attribute_similarity: empty column " +
                                 ca.name);
      }
      score.categorical = true;
      score.score = tv_distance(ca, cb);
    } else {
      if (ca.numeric.empty() || cb.numeric.empty()) {
        throw std::runtime_error("attribute_similarity: empty column " +
                                 ca.name);
      }
      double lo = ca.numeric.front();
      double hi = lo;
      for (const double v : ca.numeric) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      for (const double v : cb.numeric) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const WeightedSample wa = binned_sample(ca.numeric, lo, hi);
      const WeightedSample wb = binned_sample(cb.numeric, lo, hi);
      score.bandwidth =
          bandwidth > 0.0 ? bandwidth : median_bandwidth_weighted(wa, wb);
      score.score = mmd_weighted(wa, wb, score.bandwidth);
    }
    sum += score.score;
    out.columns.push_back(std::move(score));
  }
  out.mean = out.columns.empty()
                 ? 0.0
                 : sum / static_cast<double>(out.columns.size());
  return out;
}

DynamicBipartiteGraph er_baseline(std::uint32_t size_u, std::uint32_t size_v,
                                  std::int64_t total_edges, int t_total,
                                  std::uint64_t seed) {
  if (size_u == 0 || size_v == 0 || t_total < 1) {
    throw ValidationError("er_baseline", "sizes and horizon must be positive");
  }
  if (total_edges < 0) {
    throw ValidationError("er_baseline", "edge count must be non-negative");
  }
  Rng rng(seed);
  std::vector<std::vector<TimedEdge>> per_t(static_cast<std::size_t>(t_total));
  for (std::int64_t k = 0; k < total_edges; ++k) {
    const auto t = static_cast<std::int32_t>(
        rng.below(static_cast<std::uint64_t>(t_total)));
    const auto u = static_cast<std::uint32_t>(rng.below(size_u));
    const auto v = static_cast<std::uint32_t>(rng.below(size_v));
    per_t[static_cast<std::size_t>(t)].push_back(
        TimedEdge{u, v, t, EdgeLabel::Normal, -1});
  }
  DynamicBipartiteGraph graph(t_total, size_u, size_v);
  for (int t = 0; t < t_total; ++t) {
    graph.merge_snapshot_edges(t, per_t[static_cast<std::size_t>(t)]);
  }
  return graph;
}

EvalReport evaluate(const DynamicBipartiteGraph& graph_a,
                    const AnomalyLedger* ledger_a,
                    const TabularDataset* attrs_a,
                    const DynamicBipartiteGraph& graph_b,
                    const AnomalyLedger* ledger_b,
                    const TabularDataset* attrs_b,
                    const EvalOptions& options) {
  EvalReport report;
  const auto scored = [&](const ScalarSample& a, const ScalarSample& b,
                          const std::string& name) {
    const double sigma = options.bandwidth > 0.0 ? options.bandwidth
                                                 : median_bandwidth(a, b);
    report.bandwidths.emplace_back(name, sigma);
    return mmd(a, b, sigma);
  };

  report.degree_mmd_u = scored(degree_distribution(graph_a, Side::U),
                               degree_distribution(graph_b, Side::U),
                               "degree_u");
  report.degree_mmd_v = scored(degree_distribution(graph_a, Side::V),
                               degree_distribution(graph_b, Side::V),
                               "degree_v");
  report.degree_mmd = (report.degree_mmd_u + report.degree_mmd_v) / 2.0;

  report.bcc_mmd_u = scored(bcc(graph_a, Side::U), bcc(graph_b, Side::U),
                            "bcc_u");
  report.bcc_mmd_v = scored(bcc(graph_a, Side::V), bcc(graph_b, Side::V),
                            "bcc_v");
  report.bcc_mmd = (report.bcc_mmd_u + report.bcc_mmd_v) / 2.0;

  const TimeSamples times_a = time_distributions(graph_a);
  const TimeSamples times_b = time_distributions(graph_b);
  report.time_mmd_edge = scored(times_a.edge, times_b.edge, "time_edge");
  report.time_mmd_node_u =
      scored(times_a.node_u, times_b.node_u, "time_node_u");
  report.time_mmd_node_v =
      scored(times_a.node_v, times_b.node_v, "time_node_v");
  report.time_mmd =
      (report.time_mmd_edge + report.time_mmd_node_u + report.time_mmd_node_v) /
      3.0;

  if (ledger_a != nullptr && ledger_b != nullptr) {
    report.anomaly_mmd = anomaly_similarity(graph_a, *ledger_a, graph_b,
                                            *ledger_b, options.bandwidth);
  }
  if (attrs_a != nullptr && attrs_b != nullptr) {
    AttributeSimilarity attrs =
        attribute_similarity(*attrs_a, *attrs_b, options.bandwidth);
    for (const ColumnScore& col : attrs.columns) {
      if (!col.categorical) {
        report.bandwidths.emplace_back("attr_" + col.column, col.bandwidth);
      }
    }
    report.attribute_columns = std::move(attrs.columns);
    report.attribute_mmd = attrs.mean;
  }
  return report;
}

}  // namespace dabg
