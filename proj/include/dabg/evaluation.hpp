#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dabg/attributes.hpp"
#include "dabg/graph.hpp"

namespace dabg {

enum class SampleKind : std::uint8_t {
  DegreeU,
  DegreeV,
  EdgeTime,
  NodeTimeU,
  NodeTimeV,
  BccU,
  BccV,
  Attribute,
};

// Empirical scalar sample feeding the MMD estimator.
struct ScalarSample {
  SampleKind kind = SampleKind::DegreeU;
  std::string column;  // set for SampleKind::Attribute
  std::vector<double> values;
};

// Aggregate degree of every declared node of the side, degree-0 included
// (the distribution normalizes by the full side size).
ScalarSample degree_distribution(const DynamicBipartiteGraph& graph, Side side);

struct TimeSamples {
  ScalarSample edge;    // one value (snapshot index) per edge
  ScalarSample node_u;  // one value per (active U node, snapshot)
  ScalarSample node_v;
};

TimeSamples time_distributions(const DynamicBipartiteGraph& graph);

// Bipartite clustering coefficient per node with at least one edge, using
// time-collapsed deduplicated neighborhoods: c_u is the mean Jaccard overlap
// between N(u) and N(w) over all second-order neighbors w, 0 when u has no
// second-order neighbors. Degree-0 nodes carry no neighborhood and are left
// out of the sample.
ScalarSample bcc(const DynamicBipartiteGraph& graph, Side side);

inline constexpr double kBandwidthFloor = 1e-9;

// Median pairwise distance over the pooled sample (every ordered pair of
// distinct points), floored at kBandwidthFloor so it is always usable as a
// kernel bandwidth.
double median_bandwidth(const ScalarSample& a, const ScalarSample& b);

// Biased squared-MMD estimate under the Gaussian RBF kernel
// k(x, y) = exp(-(x-y)^2 / (2 sigma^2)), clamped at 0. Exactly symmetric in
// its arguments. Throws on empty samples or non-positive bandwidth.
double mmd(const ScalarSample& a, const ScalarSample& b, double bandwidth);
// Same, with the median-heuristic bandwidth.
double mmd(const ScalarSample& a, const ScalarSample& b);

// MMD between the BCC samples (both sides pooled) of the two anomaly
// subgraphs. bandwidth <= 0 selects the median heuristic.
double anomaly_similarity(const DynamicBipartiteGraph& graph_a,
                          const AnomalyLedger& ledger_a,
                          const DynamicBipartiteGraph& graph_b,
                          const AnomalyLedger& ledger_b,
                          double bandwidth = 0.0);

struct ColumnScore {
  std::string column;
  double score = 0.0;
  bool categorical = false;  // categorical columns score total variation
  double bandwidth = 0.0;    // 0 for categorical columns
};

struct AttributeSimilarity {
  std::vector<ColumnScore> columns;
  double mean = 0.0;  // over every column score
};

// Numeric columns: both samples are min-max normalized with the pooled
// min/max, bucketed into 100 equal bins, and compared by MMD over
// frequency-weighted bin centers. Categorical columns: total-variation
// distance. bandwidth <= 0 selects the median heuristic per column.
AttributeSimilarity attribute_similarity(const TabularDataset& a,
                                         const TabularDataset& b,
                                         double bandwidth = 0.0);

// Uniform bipartite baseline: every edge draws (t, u, v) independently and
// uniformly, with replacement.
DynamicBipartiteGraph er_baseline(std::uint32_t size_u, std::uint32_t size_v,
                                  std::int64_t total_edges, int t_total,
                                  std::uint64_t seed);

struct EvalOptions {
  double bandwidth = 0.0;  // > 0 overrides the median heuristic everywhere
};

struct EvalReport {
  double degree_mmd_u = 0.0;
  double degree_mmd_v = 0.0;
  double degree_mmd = 0.0;  // mean of the two sides
  double bcc_mmd_u = 0.0;
  double bcc_mmd_v = 0.0;
  double bcc_mmd = 0.0;  // mean of the two sides
  double time_mmd_edge = 0.0;
  double time_mmd_node_u = 0.0;
  double time_mmd_node_v = 0.0;
  double time_mmd = 0.0;  // mean of the three time scores
  std::optional<double> anomaly_mmd;            // needs both ledgers
  std::vector<ColumnScore> attribute_columns;   // needs both attribute tables
  std::optional<double> attribute_mmd;          // mean over attribute columns
  std::vector<std::pair<std::string, double>> bandwidths;  // per metric
};

// Scores graph_b against graph_a. Ledgers/attribute tables are optional;
// passing both of a pair enables the corresponding block.
EvalReport evaluate(const DynamicBipartiteGraph& graph_a,
                    const AnomalyLedger* ledger_a,
                    const TabularDataset* attrs_a,
                    const DynamicBipartiteGraph& graph_b,
                    const AnomalyLedger* ledger_b,
                    const TabularDataset* attrs_b,
                    const EvalOptions& options = {});

}  // namespace dabg
