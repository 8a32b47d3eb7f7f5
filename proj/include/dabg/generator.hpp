#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dabg/distributions.hpp"
#include "dabg/graph.hpp"

namespace dabg {

struct GeneratorConfig {
  int t_total = 0;       // number of snapshots (hours)
  int cycle_length = 0;  // snapshots per cycle; must divide t_total
  std::uint32_t size_u = 0;
  std::uint32_t size_v = 0;
  std::int64_t total_edges = 0;
  CauchyParams cauchy_u;
  CauchyParams cauchy_v;
  CauchyParams cauchy_e;
  GammaParams gamma_u;
  GammaParams gamma_v;
  std::uint64_t seed = 0;

  void validate() const;  // throws ValidationError naming the offending field
};

// Weighted sampling without replacement: `count` successive draws, each
// proportional to the remaining weights, chosen nodes removed. Returns sorted
// distinct indices.
std::vector<std::uint32_t> sample_nodes(std::uint32_t pool_size,
                                        std::int64_t count,
                                        std::span<const double> weights,
                                        std::uint64_t seed);

// Degree prescription for one snapshot: retained node ids per side plus their
// degrees, both sides summing to the same edge count.
struct DegreeSequencePair {
  std::vector<std::uint32_t> nodes_u;
  std::vector<std::uint32_t> nodes_v;
  std::vector<std::int64_t> seq_u;
  std::vector<std::int64_t> seq_v;

  std::int64_t sum_u() const;
  std::int64_t sum_v() const;
  bool empty() const { return seq_u.empty() && seq_v.empty(); }
};

// Draws a raw weight per node from its side's gamma law and converts it to an
// integer degree sequence summing exactly to edge_count, with every retained
// node keeping degree >= 1. When edge_count < |nodes| the side keeps only the
// edge_count nodes with the largest raw draws.
DegreeSequencePair sample_degree_sequence(
    std::span<const std::uint32_t> nodes_u,
    std::span<const std::uint32_t> nodes_v, std::int64_t edge_count,
    const GammaParams& gamma_u, const GammaParams& gamma_v, std::uint64_t seed);

// Bipartite configuration model via stub matching: U-stubs in order are paired
// with a seeded uniform permutation of V-stubs. Parallel edges are retained;
// realized degrees equal the prescription exactly. Returns positional
// (u, v) index pairs into the two sequences.
std::vector<std::pair<std::uint32_t, std::uint32_t>> bicm(
    std::span<const std::int64_t> seq_u, std::span<const std::int64_t> seq_v,
    std::uint64_t seed);

struct GenerationTrace {
  CyclicCountSeries count_u;
  CyclicCountSeries count_v;
  CyclicCountSeries count_e;
  DegreeProbabilityTable table_u;
  DegreeProbabilityTable table_v;
  std::vector<DegreeSequencePair> plans;  // one per snapshot
};

struct GenerationResult {
  DynamicBipartiteGraph graph;
  GenerationTrace trace;
};

// Full generation pass: three cyclic count series, two degree-probability
// tables, then per snapshot node sampling, degree sequencing, and BiCM.
// Snapshots use seeds derived from (config.seed, t), so any thread count
// produces the same graph.
GenerationResult generate_traced(const GeneratorConfig& config,
                                 int threads = 1);
DynamicBipartiteGraph generate(const GeneratorConfig& config, int threads = 1);

}  // namespace dabg
