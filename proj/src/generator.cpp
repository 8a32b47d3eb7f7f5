#include "dabg/generator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "dabg/error.hpp"
#include "dabg/rng.hpp"

namespace dabg {

namespace {

// Seed streams for the independent random decisions inside one generation.
enum Stream : std::uint64_t {
  kStreamTableU = 1,
  kStreamTableV = 2,
  kStreamSampleU = 3,
  kStreamSampleV = 4,
  kStreamDegreeSeq = 5,
  kStreamBicm = 6,
};

// Fenwick tree over node weights; supports prefix sampling and removal.
class WeightIndex {
 public:
  explicit WeightIndex(std::span<const double> weights)
      : n_(weights.size()), tree_(weights.size() + 1, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      add(i, weights[i]);
    }
  }

  double total() const { return prefix(n_); }

  void remove(std::size_t i, double weight) { add(i, -weight); }

  // Smallest index whose cumulative weight exceeds target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while ((step << 1) <= n_) step <<= 1;
    for (; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= n_ && tree_[next] <= target) {
        target -= tree_[next];
        pos = next;
      }
    }
    return pos;  // in [0, n), caller guarantees target < total
  }

 private:
  void add(std::size_t i, double delta) {
    for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1)) {
      tree_[j] += delta;
    }
  }

  double prefix(std::size_t count) const {
    double s = 0.0;
    for (std::size_t j = count; j > 0; j -= j & (~j + 1)) {
      s += tree_[j];
    }
    return s;
  }

  std::size_t n_;
  std::vector<double> tree_;
};

}  // namespace

void GeneratorConfig::validate() const {
  if (t_total < 1) {
    throw ValidationError("generator.t_total", "must be positive");
  }
  if (cycle_length < 1 || cycle_length > t_total) {
    throw ValidationError("generator.cycle_length", "must be in [1, t_total]");
  }
  if (t_total % cycle_length != 0) {
    throw ValidationError("generator.t_total",
                          "must be a multiple of cycle_length");
  }
  if (size_u < 1) {
    throw ValidationError("generator.size_u", "must be positive");
  }
  if (size_v < 1) {
    throw ValidationError("generator.size_v", "must be positive");
  }
  if (total_edges < 1) {
    throw ValidationError("generator.total_edges", "must be positive");
  }
  cauchy_u.validate("generator.cauchy_u");
  cauchy_v.validate("generator.cauchy_v");
  cauchy_e.validate("generator.cauchy_e");
  gamma_u.validate("generator.gamma_u");
  gamma_v.validate("generator.gamma_v");
}

std::vector<std::uint32_t> sample_nodes(std::uint32_t pool_size,
                                        std::int64_t count,
                                        std::span<const double> weights,
                                        std::uint64_t seed) {
  if (weights.size() != pool_size) {
    throw ValidationError("weights", "must have one entry per pool node");
  }
  if (count < 0 || count > static_cast<std::int64_t>(pool_size)) {
    throw ValidationError("count",
                          "must be in [0, pool_size]; got " +
                              std::to_string(count) + " of " +
                              std::to_string(pool_size));
  }
  std::vector<std::uint32_t> chosen;
  if (count == 0) return chosen;
  if (count == static_cast<std::int64_t>(pool_size)) {
    chosen.resize(pool_size);
    std::iota(chosen.begin(), chosen.end(), 0u);
    return chosen;
  }

  Rng rng(seed);
  WeightIndex index(weights);
  std::vector<char> taken(pool_size, 0);
  chosen.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const double total = index.total();
    if (!(total > 0.0)) {
      throw std::runtime_error("sample_nodes: remaining weight is zero");
    }
    std::size_t i = index.find(rng.uniform01() * total);
    // Rounding can push the target onto (or past) the final cumulative
    // boundary; probe forward to the next unchosen slot in that corner.
    if (i >= pool_size) i = pool_size - 1;
    while (taken[i]) i = (i + 1) % pool_size;
    taken[i] = 1;
    chosen.push_back(static_cast<std::uint32_t>(i));
    index.remove(i, weights[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::int64_t DegreeSequencePair::sum_u() const {
  return std::accumulate(seq_u.begin(), seq_u.end(), std::int64_t{0});
}

std::int64_t DegreeSequencePair::sum_v() const {
  return std::accumulate(seq_v.begin(), seq_v.end(), std::int64_t{0});
}

namespace {

// One side of the degree prescription: raw gamma draws, truncation to the
// highest draws when edge_count < n, then 1 + largest-remainder share of the
// remaining edges.
void sequence_side(std::span<const std::uint32_t> nodes,
                   std::int64_t edge_count, const GammaParams& params,
                   Rng& rng, std::vector<std::uint32_t>& out_nodes,
                   std::vector<std::int64_t>& out_seq) {
  std::vector<double> raw(nodes.size());
  for (double& r : raw) {
    r = std::max(draw_gamma(rng, params), 1e-12);
  }

  std::vector<std::size_t> keep(nodes.size());
  std::iota(keep.begin(), keep.end(), 0);
  if (edge_count < static_cast<std::int64_t>(nodes.size())) {
    std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
      return raw[a] > raw[b];
    });
    keep.resize(static_cast<std::size_t>(edge_count));
    std::sort(keep.begin(), keep.end());
  }

  std::vector<double> kept_raw(keep.size());
  out_nodes.resize(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    kept_raw[i] = raw[keep[i]];
    out_nodes[i] = nodes[keep[i]];
  }

  const std::int64_t extra = edge_count - static_cast<std::int64_t>(keep.size());
  const std::vector<std::int64_t> shares =
      apportion_largest_remainder(kept_raw, extra);
  out_seq.resize(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out_seq[i] = 1 + shares[i];
  }
}

}  // namespace

DegreeSequencePair sample_degree_sequence(
    std::span<const std::uint32_t> nodes_u,
    std::span<const std::uint32_t> nodes_v, std::int64_t edge_count,
    const GammaParams& gamma_u, const GammaParams& gamma_v,
    std::uint64_t seed) {
  DegreeSequencePair pair;
  if (edge_count < 1) return pair;
  if (nodes_u.empty() || nodes_v.empty()) {
    throw ValidationError("nodes",
                          "both node sets must be non-empty when edge_count > 0");
  }
  Rng rng_u(derive_seed(seed, 0));
  Rng rng_v(derive_seed(seed, 1));
  sequence_side(nodes_u, edge_count, gamma_u, rng_u, pair.nodes_u, pair.seq_u);
  sequence_side(nodes_v, edge_count, gamma_v, rng_v, pair.nodes_v, pair.seq_v);
  return pair;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> bicm(
    std::span<const std::int64_t> seq_u, std::span<const std::int64_t> seq_v,
    std::uint64_t seed) {
  std::int64_t sum_u = 0;
  std::int64_t sum_v = 0;
  for (std::int64_t d : seq_u) sum_u += d;
  for (std::int64_t d : seq_v) sum_v += d;
  if (sum_u != sum_v) {
    throw ValidationError("degree_sequences",
                          "stub sums differ: " + std::to_string(sum_u) +
                              " vs " + std::to_string(sum_v));
  }

  std::vector<std::uint32_t> v_stubs;
  v_stubs.reserve(static_cast<std::size_t>(sum_v));
  for (std::size_t j = 0; j < seq_v.size(); ++j) {
    for (std::int64_t k = 0; k < seq_v[j]; ++k) {
      v_stubs.push_back(static_cast<std::uint32_t>(j));
    }
  }

  Rng rng(seed);
  for (std::size_t i = v_stubs.size(); i > 1; --i) {
    std::swap(v_stubs[i - 1], v_stubs[rng.below(i)]);
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(static_cast<std::size_t>(sum_u));
  std::size_t next = 0;
  for (std::size_t i = 0; i < seq_u.size(); ++i) {
    for (std::int64_t k = 0; k < seq_u[i]; ++k) {
      edges.emplace_back(static_cast<std::uint32_t>(i), v_stubs[next++]);
    }
  }
  return edges;
}

namespace {

struct SnapshotBuild {
  DegreeSequencePair plan;
  std::vector<TimedEdge> edges;
};

SnapshotBuild build_snapshot(const GeneratorConfig& config, int t,
                             std::int64_t count_u, std::int64_t count_v,
                             std::int64_t count_e,
                             const DegreeProbabilityTable& table_u,
                             const DegreeProbabilityTable& table_v) {
  SnapshotBuild build;
  const auto ut = static_cast<std::uint64_t>(t);
  const std::vector<std::uint32_t> nodes_u =
      sample_nodes(config.size_u, count_u, table_u.weight,
                   derive_seed(config.seed, kStreamSampleU, ut));
  const std::vector<std::uint32_t> nodes_v =
      sample_nodes(config.size_v, count_v, table_v.weight,
                   derive_seed(config.seed, kStreamSampleV, ut));
  if (count_e > 0 && (nodes_u.empty() || nodes_v.empty())) {
    throw std::runtime_error(
        "generate: snapshot " + std::to_string(t) +
        " has a positive edge count but an empty node side");
  }
  if (count_e < 1) return build;

  build.plan = sample_degree_sequence(
      nodes_u, nodes_v, count_e, config.gamma_u, config.gamma_v,
      derive_seed(config.seed, kStreamDegreeSeq, ut));
  const auto pairs = bicm(build.plan.seq_u, build.plan.seq_v,
                          derive_seed(config.seed, kStreamBicm, ut));
  build.edges.reserve(pairs.size());
  for (const auto& [ui, vi] : pairs) {
    build.edges.push_back(TimedEdge{build.plan.nodes_u[ui],
                                    build.plan.nodes_v[vi],
                                    static_cast<std::int32_t>(t),
                                    EdgeLabel::Normal, -1});
  }
  return build;
}

}  // namespace

GenerationResult generate_traced(const GeneratorConfig& config, int threads) {
  config.validate();
  if (threads < 1) {
    throw ValidationError("threads", "must be at least 1");
  }

  GenerationTrace trace;
  trace.count_u = cyclic_count_series(config.size_u, config.t_total,
                                      config.cycle_length, config.cauchy_u);
  trace.count_v = cyclic_count_series(config.size_v, config.t_total,
                                      config.cycle_length, config.cauchy_v);
  trace.count_e = cyclic_count_series(config.total_edges, config.t_total,
                                      config.cycle_length, config.cauchy_e);
  trace.table_u = degree_probability_table(
      config.size_u, config.gamma_u, derive_seed(config.seed, kStreamTableU));
  trace.table_v = degree_probability_table(
      config.size_v, config.gamma_v, derive_seed(config.seed, kStreamTableV));

  const auto t_total = static_cast<std::size_t>(config.t_total);
  std::vector<SnapshotBuild> builds(t_total);
  const int workers = std::min(threads, config.t_total);
  if (workers <= 1) {
    for (std::size_t t = 0; t < t_total; ++t) {
      builds[t] = build_snapshot(config, static_cast<int>(t),
                                 trace.count_u.counts[t],
                                 trace.count_v.counts[t],
                                 trace.count_e.counts[t], trace.table_u,
                                 trace.table_v);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (std::size_t t = static_cast<std::size_t>(w); t < t_total;
               t += static_cast<std::size_t>(workers)) {
            builds[t] = build_snapshot(config, static_cast<int>(t),
                                       trace.count_u.counts[t],
                                       trace.count_v.counts[t],
                                       trace.count_e.counts[t], trace.table_u,
                                       trace.table_v);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  DynamicBipartiteGraph graph(config.t_total, config.size_u, config.size_v);
  trace.plans.resize(t_total);
  for (std::size_t t = 0; t < t_total; ++t) {
    trace.plans[t] = std::move(builds[t].plan);
    if (!builds[t].edges.empty()) {
      graph.merge_snapshot_edges(static_cast<int>(t), builds[t].edges);
    }
  }
  return GenerationResult{std::move(graph), std::move(trace)};
}

DynamicBipartiteGraph generate(const GeneratorConfig& config, int threads) {
  return generate_traced(config, threads).graph;
}

}  // namespace dabg
