// End-to-end checks for the toolchain's headline guarantees. Each test case
// prints one `[criterion N] PASS/FAIL` line with the measured values so a run
// of this binary doubles as a conformance report.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dabg/anomaly.hpp"
#include "dabg/attributes.hpp"
#include "dabg/distributions.hpp"
#include "dabg/evaluation.hpp"
#include "dabg/generator.hpp"
#include "dabg/graph.hpp"
#include "dabg/io.hpp"
#include "dabg/pipeline.hpp"
#include "dabg/rng.hpp"
#include "doctest.h"

using namespace dabg;
namespace fs = std::filesystem;

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void report(int criterion, bool pass, const std::string& details) {
  std::printf("[criterion %d] %s - %s\n", criterion, pass ? "PASS" : "FAIL",
              details.c_str());
  std::fflush(stdout);
}

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", value);
  return buf;
}

fs::path scratch(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("dabg_acceptance_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string("'") + DABG_CLI_PATH + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

GeneratorConfig desk_generator(std::uint64_t seed) {
  GeneratorConfig config = find_preset("pcore-desk")->config.generator;
  config.seed = seed;
  return config;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    sup = std::max(sup,
                   std::abs(static_cast<double>(i) / na -
                            static_cast<double>(j) / nb));
  }
  return sup;
}

}  // namespace

TEST_CASE("criterion 1: randomized configs conserve every count exactly") {
  const Timer timer;
  std::mt19937_64 rng(20260815);
  int configs_ok = 0;
  std::string first_failure;
  for (int trial = 0; trial < 50; ++trial) {
    const int cycle = std::vector<int>{6, 8, 12, 24}[rng() % 4];
    const int reps = 1 + static_cast<int>(rng() % 3);
    std::uniform_real_distribution<double> loc(0.25 * cycle, 0.75 * cycle);
    std::uniform_real_distribution<double> sc(0.5 * cycle, 2.0 * cycle);
    std::uniform_real_distribution<double> shape(0.4, 2.5);
    std::uniform_real_distribution<double> gsc(0.5, 2.5);
    GeneratorConfig config;
    config.t_total = cycle * reps;
    config.cycle_length = cycle;
    const auto span = static_cast<std::uint32_t>(4 * cycle * reps);
    config.size_u = span + static_cast<std::uint32_t>(rng() % span);
    config.size_v = span + static_cast<std::uint32_t>(rng() % span);
    const std::int64_t base = 2LL * (config.size_u + config.size_v);
    config.total_edges =
        base + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * base));
    config.cauchy_u = {loc(rng), sc(rng)};
    config.cauchy_v = {loc(rng), sc(rng)};
    config.cauchy_e = {loc(rng), sc(rng)};
    config.gamma_u = {shape(rng), 0.0, gsc(rng)};
    config.gamma_v = {shape(rng), 0.0, gsc(rng)};
    config.seed = rng();

    const GenerationResult result = generate_traced(config);
    const auto& [graph, trace] = result;
    bool ok = graph.edge_count() == config.total_edges;
    std::int64_t sum_u = 0;
    std::int64_t sum_v = 0;
    std::int64_t sum_e = 0;
    for (int t = 0; t < config.t_total; ++t) {
      sum_u += trace.count_u.counts[t];
      sum_v += trace.count_v.counts[t];
      sum_e += trace.count_e.counts[t];
      const DegreeSequencePair& plan = trace.plans[t];
      ok = ok &&
           static_cast<std::int64_t>(graph.snapshot(t).edges.size()) ==
               trace.count_e.counts[t] &&
           plan.sum_u() == trace.count_e.counts[t] &&
           plan.sum_v() == trace.count_e.counts[t];
      for (std::size_t i = 0; ok && i < plan.nodes_u.size(); ++i) {
        ok = graph.degree({Side::U, plan.nodes_u[i]}, t) == plan.seq_u[i];
      }
      for (std::size_t i = 0; ok && i < plan.nodes_v.size(); ++i) {
        ok = graph.degree({Side::V, plan.nodes_v[i]}, t) == plan.seq_v[i];
      }
      ok = ok && graph.snapshot(t).active_u == plan.nodes_u &&
           graph.snapshot(t).active_v == plan.nodes_v;
    }
    ok = ok && sum_u == config.size_u && sum_v == config.size_v &&
         sum_e == config.total_edges;
    if (ok) {
      ++configs_ok;
    } else if (first_failure.empty()) {
      first_failure = " first failure at trial " + std::to_string(trial);
    }
  }
  const double elapsed = timer.seconds();
  const bool pass = configs_ok == 50 && elapsed < 60.0;
  report(1, pass,
         std::to_string(configs_ok) +
             "/50 randomized configs conserve edge totals, per-snapshot degree "
             "sequences, and count-series sums (" +
             fmt(elapsed) + " s < 60 s)" + first_failure);
  CHECK(pass);
}

TEST_CASE("criterion 2: injection hits exact budgets and preserves normals") {
  const Timer timer;
  std::mt19937_64 rng(77);
  bool budgets_ok = true;
  bool normals_ok = true;
  bool burstiness_ok = true;

  GeneratorConfig base;
  base.t_total = 24;
  base.cycle_length = 12;
  base.size_u = 120;
  base.size_v = 100;
  base.total_edges = 2400;
  base.cauchy_u = {6.0, 8.0};
  base.cauchy_v = {5.0, 9.0};
  base.cauchy_e = {6.5, 7.0};
  base.gamma_u = {0.6, 0.0, 2.0};
  base.gamma_v = {0.8, 0.0, 1.5};

  const double rates[] = {0.005, 0.01, 0.02, 0.05, 0.1};
  for (int trial = 0; trial < 12; ++trial) {
    base.seed = 1000 + trial;
    const DynamicBipartiteGraph original = generate(base);
    AnomalyConfig anomaly;
    anomaly.initial_attackers_u = 2 + static_cast<std::uint32_t>(rng() % 3);
    anomaly.initial_attackers_v = 2 + static_cast<std::uint32_t>(rng() % 3);
    anomaly.anomaly_percentage = rates[rng() % 5];
    anomaly.burstiness = 1 + static_cast<std::uint32_t>(rng() % 3);
    anomaly.window_start = static_cast<std::int32_t>(rng() % 8);
    anomaly.window_end =
        anomaly.window_start + 4 + static_cast<std::int32_t>(rng() % 12);
    const InjectionResult result = inject(original, anomaly, rng());

    std::int64_t expected = 0;
    for (std::int32_t t = anomaly.window_start; t < anomaly.window_end; ++t) {
      expected += static_cast<std::int64_t>(
          std::floor(static_cast<double>(original.snapshot(t).edges.size()) *
                     anomaly.anomaly_percentage));
    }
    budgets_ok = budgets_ok &&
                 result.graph.anomalous_edge_count() == expected &&
                 static_cast<std::int64_t>(
                     result.ledger.anomalous_edges.size()) == expected;

    const auto key = [](const TimedEdge& e) {
      return std::tuple(e.t, e.u, e.v);
    };
    std::vector<std::tuple<std::int32_t, std::uint32_t, std::uint32_t>> before;
    std::vector<std::tuple<std::int32_t, std::uint32_t, std::uint32_t>> after;
    for (const TimedEdge& e : original.all_edges()) before.push_back(key(e));
    for (const TimedEdge& e : result.graph.all_edges()) {
      if (e.label == EdgeLabel::Normal) after.push_back(key(e));
    }
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    normals_ok = normals_ok && before == after;

    burstiness_ok =
        burstiness_ok &&
        measured_burstiness(result.ledger) ==
            1.0 / static_cast<double>(anomaly.burstiness);
  }

  // Propagation: attacker sets must strictly grow until victims run out.
  base.seed = 4242;
  const DynamicBipartiteGraph original = generate(base);
  AnomalyConfig prop;
  prop.initial_attackers_u = 3;
  prop.initial_attackers_v = 3;
  prop.anomaly_percentage = 0.02;
  prop.burstiness = 2;  // 6 victims per side
  prop.propagation_enabled = true;
  prop.propagation_ratio = 0.4;  // floor(6 * 0.4) = 2 promotions per step
  prop.window_start = 2;
  prop.window_end = 10;
  prop.side_mode = SideMode::Both;
  const InjectionResult propagated = inject(original, prop, 99);
  bool growth_ok = verify_propagation(propagated.ledger);
  std::size_t victims = propagated.ledger.victims_u.size();
  std::string sizes;
  for (std::int32_t t = prop.window_start; t < prop.window_end; ++t) {
    const std::size_t now =
        propagated.ledger.attackers_u[static_cast<std::size_t>(t)].size();
    const std::size_t next =
        t + 1 < prop.window_end
            ? propagated.ledger.attackers_u[static_cast<std::size_t>(t) + 1]
                  .size()
            : now;
    sizes += (sizes.empty() ? "" : ">") + std::to_string(now);
    const bool exhausted = now - prop.initial_attackers_u >= victims;
    if (t + 1 < prop.window_end) {
      growth_ok = growth_ok && (exhausted ? next == now : next > now);
    }
  }

  const double elapsed = timer.seconds();
  const bool pass = budgets_ok && normals_ok && burstiness_ok && growth_ok &&
                    elapsed < 30.0;
  report(2, pass,
         std::string("12 injections: budgets ") +
             (budgets_ok ? "exact" : "WRONG") + ", normal multiset " +
             (normals_ok ? "preserved" : "BROKEN") + ", burstiness " +
             (burstiness_ok ? "== 1/b" : "WRONG") + ", attacker growth " +
             sizes + (growth_ok ? " strict until exhaustion" : " WRONG") +
             " (" + fmt(elapsed) + " s < 30 s)");
  CHECK(pass);
}

TEST_CASE("criterion 3: mmd axioms hold on random sample pairs") {
  std::mt19937_64 rng(555);
  std::normal_distribution<double> normal(0.0, 5.0);
  double worst_sym = 0.0;
  double worst_self = 0.0;
  bool nonneg = true;
  for (int trial = 0; trial < 100; ++trial) {
    ScalarSample a;
    ScalarSample b;
    const std::size_t na = 1 + rng() % 150;
    const std::size_t nb = 1 + rng() % 150;
    for (std::size_t i = 0; i < na; ++i) a.values.push_back(normal(rng));
    for (std::size_t i = 0; i < nb; ++i)
      b.values.push_back(normal(rng) + (trial % 3 == 0 ? 2.0 : 0.0));
    const double ab = mmd(a, b);
    const double ba = mmd(b, a);
    nonneg = nonneg && ab >= 0.0 && ba >= 0.0;
    worst_sym = std::max(worst_sym, std::abs(ab - ba));
    ScalarSample a_copy = a;
    worst_self = std::max(worst_self, mmd(a, a_copy));
  }

  double worst_singleton = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ScalarSample x;
    ScalarSample y;
    x.values = {normal(rng)};
    y.values = {normal(rng)};
    const double sigma = median_bandwidth(x, y);
    const double d = x.values[0] - y.values[0];
    const double closed = 2.0 - 2.0 * std::exp(-d * d / (2.0 * sigma * sigma));
    worst_singleton =
        std::max(worst_singleton, std::abs(mmd(x, y, sigma) - closed));
  }

  const bool pass = nonneg && worst_sym <= 1e-12 && worst_self <= 1e-12 &&
                    worst_singleton <= 1e-10;
  report(3, pass,
         "100 pairs: mmd >= 0, symmetry gap " + fmt(worst_sym) +
             " <= 1e-12, self gap " + fmt(worst_self) +
             " <= 1e-12; singleton closed-form gap " + fmt(worst_singleton) +
             " <= 1e-10");
  CHECK(pass);
}

TEST_CASE("criterion 4: clustering matches a brute-force oracle exactly") {
  const Timer timer;
  // 4x4 bipartite adjacency as a 16-bit mask; smaller graphs appear as
  // isolated nodes, which both implementations leave out of the sample.
  const auto oracle_side = [](const std::array<std::uint32_t, 4>& mask) {
    std::vector<double> values;
    for (int x = 0; x < 4; ++x) {
      if (mask[static_cast<std::size_t>(x)] == 0) continue;
      double sum = 0.0;
      int partners = 0;
      for (int w = 0; w < 4; ++w) {
        if (w == x ||
            (mask[static_cast<std::size_t>(x)] &
             mask[static_cast<std::size_t>(w)]) == 0) {
          continue;
        }
        const int inter = std::popcount(mask[static_cast<std::size_t>(x)] &
                                        mask[static_cast<std::size_t>(w)]);
        const int uni = std::popcount(mask[static_cast<std::size_t>(x)] |
                                      mask[static_cast<std::size_t>(w)]);
        sum += static_cast<double>(inter) / static_cast<double>(uni);
        ++partners;
      }
      values.push_back(partners == 0 ? 0.0
                                     : sum / static_cast<double>(partners));
    }
    return values;
  };

  long graphs = 0;
  long mismatches = 0;
  for (std::uint32_t cells = 0; cells < (1u << 16); ++cells) {
    if (std::popcount(cells) > 8) continue;
    ++graphs;
    std::vector<TimedEdge> edges;
    std::array<std::uint32_t, 4> rows{};  // U-side neighborhoods
    std::array<std::uint32_t, 4> cols{};  // V-side neighborhoods
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) {
        if (cells & (1u << (u * 4 + v))) {
          edges.push_back({static_cast<std::uint32_t>(u),
                           static_cast<std::uint32_t>(v), 0,
                           EdgeLabel::Normal, -1});
          rows[static_cast<std::size_t>(u)] |= 1u << v;
          cols[static_cast<std::size_t>(v)] |= 1u << u;
        }
      }
    }
    DynamicBipartiteGraph g(1, 4, 4);
    g.merge_snapshot_edges(0, edges);
    if (bcc(g, Side::U).values != oracle_side(rows) ||
        bcc(g, Side::V).values != oracle_side(cols)) {
      ++mismatches;
    }

    // Parallel edges and multiple snapshots must collapse to the same values.
    if (!edges.empty() && cells % 97 == 0) {
      DynamicBipartiteGraph multi(2, 4, 4);
      std::vector<TimedEdge> first(edges.begin(),
                                   edges.begin() + edges.size() / 2 + 1);
      std::vector<TimedEdge> second;
      for (std::size_t i = edges.size() / 2; i < edges.size(); ++i) {
        TimedEdge e = edges[i];
        e.t = 1;
        second.push_back(e);
      }
      multi.merge_snapshot_edges(0, first);
      multi.merge_snapshot_edges(1, second);
      if (bcc(multi, Side::U).values != oracle_side(rows) ||
          bcc(multi, Side::V).values != oracle_side(cols)) {
        ++mismatches;
      }
    }
  }

  const double elapsed = timer.seconds();
  const bool pass = mismatches == 0;
  report(4, pass,
         std::to_string(graphs) +
             " bipartite graphs (<= 4+4 nodes, <= 8 edges) enumerated, " +
             std::to_string(mismatches) +
             " mismatches against the independent oracle (" + fmt(elapsed) +
             " s)");
  CHECK(pass);
}

TEST_CASE("criterion 5: generator beats the uniform baseline two-fold") {
  const Timer timer;
  bool pass = true;
  double worst_degree_ratio = 0.0;
  double worst_time_ratio = 0.0;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const DynamicBipartiteGraph reference = generate(desk_generator(10 * s + 1));
    const DynamicBipartiteGraph redraw = generate(desk_generator(10 * s + 2));
    const DynamicBipartiteGraph uniform =
        er_baseline(2000, 1200, 50000, 48, 10 * s + 3);
    const EvalReport twin =
        evaluate(reference, nullptr, nullptr, redraw, nullptr, nullptr);
    const EvalReport er =
        evaluate(reference, nullptr, nullptr, uniform, nullptr, nullptr);
    pass = pass && twin.degree_mmd <= 0.5 * er.degree_mmd &&
           twin.time_mmd <= 0.5 * er.time_mmd;
    if (er.degree_mmd > 0.0) {
      worst_degree_ratio =
          std::max(worst_degree_ratio, twin.degree_mmd / er.degree_mmd);
    }
    if (er.time_mmd > 0.0) {
      worst_time_ratio =
          std::max(worst_time_ratio, twin.time_mmd / er.time_mmd);
    }
  }
  const double elapsed = timer.seconds();
  pass = pass && elapsed < 300.0;
  report(5, pass,
         "desk-scale redraws vs uniform baseline over 5 seeds: worst "
         "degree-mmd ratio " +
             fmt(worst_degree_ratio) + " <= 0.5, worst time-mmd ratio " +
             fmt(worst_time_ratio) + " <= 0.5 (" + fmt(elapsed) +
             " s < 300 s)");
  CHECK(pass);
}

TEST_CASE("criterion 6: refitting a generated graph beats the baseline") {
  const Timer timer;
  const fs::path dir = scratch("fit");
  bool pass = true;
  std::string ratios;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const DynamicBipartiteGraph original = generate(desk_generator(20 * s + 1));
    const fs::path edges = dir / ("edges_" + std::to_string(s) + ".csv");
    const fs::path fitted_path = dir / ("fitted_" + std::to_string(s) + ".json");
    write_edge_list(edges, original, nullptr, 20 * s + 1);
    pass = pass && run_cli("fit '" + edges.string() + "' --cycle 24 -o '" +
                           fitted_path.string() + "'") == 0;
    if (!pass) break;
    GeneratorConfig fitted = read_config(fitted_path).generator;
    fitted.seed = 20 * s + 2;
    const DynamicBipartiteGraph regenerated = generate(fitted);
    const DynamicBipartiteGraph uniform = er_baseline(
        original.size_u(), original.size_v(), original.edge_count(),
        original.t_total(), 20 * s + 3);
    const EvalReport vs_fit =
        evaluate(original, nullptr, nullptr, regenerated, nullptr, nullptr);
    const EvalReport vs_er =
        evaluate(original, nullptr, nullptr, uniform, nullptr, nullptr);
    pass = pass && vs_fit.degree_mmd < vs_er.degree_mmd;
    ratios += (ratios.empty() ? "" : ", ") + fmt(vs_fit.degree_mmd) + " < " +
              fmt(vs_er.degree_mmd);
  }
  const double elapsed = timer.seconds();
  report(6, pass,
         "fit -> regenerate over 3 seeds, degree-mmd vs uniform baseline: " +
             ratios + " (" + fmt(elapsed) + " s)");
  CHECK(pass);
}

TEST_CASE("criterion 7: attributes track the reference and the ledger") {
  const Timer timer;
  // Reference with known marginals: lognormal-ish amount, correlated
  // latency, three-way categorical, ~12% anomalous rows.
  std::mt19937_64 rng(321);
  std::normal_distribution<double> noise(0.0, 1.0);
  TabularDataset reference;
  TabularColumn amount{"amount", ColumnKind::Numeric, {}, {}};
  TabularColumn latency{"latency", ColumnKind::Numeric, {}, {}};
  TabularColumn channel{"channel", ColumnKind::Categorical, {}, {}};
  TabularColumn label{"label", ColumnKind::Categorical, {}, {}};
  for (int i = 0; i < 4000; ++i) {
    const bool anomalous = i % 8 == 0;
    const double a = anomalous ? 400.0 + 40.0 * noise(rng)
                               : std::exp(3.0 + 0.5 * noise(rng));
    amount.numeric.push_back(a);
    latency.numeric.push_back(2.0 * a + 5.0 * noise(rng));
    const int c = static_cast<int>(rng() % 10);
    channel.categorical.push_back(anomalous ? (c < 7 ? "wire" : "crypto")
                                            : (c < 5   ? "card"
                                               : c < 8 ? "ach"
                                                       : "wire"));
    label.categorical.push_back(anomalous ? "anomalous" : "normal");
  }
  reference.columns = {amount, latency, channel, label};
  reference.label_column = "label";

  const auto [normal_rows, anomalous_rows] = split_by_label(reference, 1);
  const AttributeModel model_normal = fit(normal_rows);
  const AttributeModel model_anomalous = fit(anomalous_rows);
  const TabularDataset drawn = sample(model_normal, 10000, 42);

  double worst_ks = 0.0;
  double worst_tv = 0.0;
  for (std::size_t c = 0; c < normal_rows.columns.size(); ++c) {
    const TabularColumn& ref_col = normal_rows.columns[c];
    const TabularColumn& new_col = drawn.columns[c];
    if (ref_col.kind == ColumnKind::Numeric) {
      worst_ks =
          std::max(worst_ks, ks_statistic(ref_col.numeric, new_col.numeric));
    } else {
      std::map<std::string, double> freq;
      for (const auto& v : ref_col.categorical)
        freq[v] += 1.0 / static_cast<double>(ref_col.categorical.size());
      for (const auto& v : new_col.categorical)
        freq[v] -= 1.0 / static_cast<double>(new_col.categorical.size());
      double tv = 0.0;
      for (const auto& [cat, diff] : freq) tv += std::abs(diff);
      worst_tv = std::max(worst_tv, tv / 2.0);
    }
  }

  // Every anomalous edge must draw from the anomalous model and vice versa;
  // provenance is positional (rows >= normal_rows come from model_anomalous).
  GeneratorConfig small;
  small.t_total = 12;
  small.cycle_length = 12;
  small.size_u = 80;
  small.size_v = 60;
  small.total_edges = 1200;
  small.cauchy_u = {6.0, 6.0};
  small.cauchy_v = {6.0, 6.0};
  small.cauchy_e = {6.0, 6.0};
  small.gamma_u = {0.6, 0.0, 2.0};
  small.gamma_v = {0.8, 0.0, 1.5};
  small.seed = 9;
  AnomalyConfig anomaly;
  anomaly.initial_attackers_u = 3;
  anomaly.initial_attackers_v = 3;
  anomaly.anomaly_percentage = 0.05;
  anomaly.burstiness = 2;
  anomaly.window_start = 0;
  anomaly.window_end = 12;
  const InjectionResult injected = inject(generate(small), anomaly, 11);
  const MappedAttributes mapped = map_attributes(
      injected.graph, injected.ledger, model_normal, model_anomalous, 13);
  bool provenance_ok = injected.graph.anomalous_edge_count() > 0;
  for (const TimedEdge& e : mapped.graph.all_edges()) {
    const bool from_anomalous_model =
        static_cast<std::size_t>(e.attr_row) >= mapped.normal_rows;
    provenance_ok =
        provenance_ok && (e.label == EdgeLabel::Anomalous) == from_anomalous_model;
  }

  TabularDataset self = normal_rows;
  const AttributeSimilarity similarity = attribute_similarity(self, normal_rows);
  double worst_self = std::abs(similarity.mean);
  for (const ColumnScore& col : similarity.columns) {
    worst_self = std::max(worst_self, std::abs(col.score));
  }

  const double elapsed = timer.seconds();
  const bool pass = worst_ks < 0.05 && worst_tv < 0.05 && provenance_ok &&
                    worst_self <= 1e-12;
  report(7, pass,
         "n=10000 draw: worst numeric KS " + fmt(worst_ks) +
             " < 0.05, worst categorical TV " + fmt(worst_tv) +
             " < 0.05; ledger/model provenance " +
             (provenance_ok ? "exact" : "BROKEN") + "; self-similarity " +
             fmt(worst_self) + " <= 1e-12 (" + fmt(elapsed) + " s)");
  CHECK(pass);
}

TEST_CASE("criterion 8: pipeline reruns are byte-identical") {
  const Timer timer;
  const fs::path dir = scratch("determinism");
  const fs::path ref = dir / "reference.csv";
  {
    std::ofstream out(ref);
    out << "amount,channel,label\n";
    for (int i = 0; i < 200; ++i) {
      if (i % 10 == 0) {
        out << 500.0 + i << ",wire,anomalous\n";
      } else {
        out << 40.0 + (i % 17) << ",card,normal\n";
      }
    }
  }
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({
      "generator": {
        "t_total": 24, "cycle_length": 24,
        "size_u": 300, "size_v": 200, "total_edges": 6000,
        "cauchy": [12.0, 3.0], "gamma": [0.5, 0.0, 2.0], "seed": 5
      },
      "anomaly": {
        "initial_attackers_u": 2, "initial_attackers_v": 2,
        "anomaly_percentage": 0.02, "burstiness": 1, "window": [0, 24]
      },
      "attributes": {"reference_dataset_path": ")"
        << ref.string() << R"(", "label_column": "label"}
    })";
  }

  const fs::path r1 = dir / "run1";
  const fs::path r2 = dir / "run2";
  const fs::path r3 = dir / "run3";
  bool pass =
      run_cli("pipeline -c '" + cfg.string() + "' -o '" + r1.string() + "'") ==
          0 &&
      run_cli("pipeline -c '" + cfg.string() + "' -o '" + r2.string() + "'") ==
          0 &&
      run_cli("pipeline -c '" + cfg.string() + "' -o '" + r3.string() +
              "' --threads 4") == 0;
  bool identical = pass;
  for (const char* name :
       {"edges.csv", "edges.meta.json", "ground_truth.json"}) {
    const std::string first = slurp(r1 / name);
    identical = identical && !first.empty() && first == slurp(r2 / name) &&
                first == slurp(r3 / name);
  }
  pass = pass && identical;
  const double elapsed = timer.seconds();
  report(8, pass,
         std::string("two reruns and a --threads 4 run of the full pipeline "
                     "(generate, inject, attributes, export): edges.csv, "
                     "edges.meta.json, ground_truth.json ") +
             (identical ? "byte-identical" : "DIFFER") + " (" + fmt(elapsed) +
             " s)");
  CHECK(pass);
}

TEST_CASE("criterion 9: a million edges generate inside the time budget") {
  GeneratorConfig config;
  config.t_total = 48;
  config.cycle_length = 24;
  config.size_u = 20000;
  config.size_v = 12000;
  config.total_edges = 1000000;
  config.cauchy_u = {12.0, 3.0};
  config.cauchy_v = {12.0, 3.0};
  config.cauchy_e = {12.0, 3.0};
  config.gamma_u = {0.5, 0.0, 2.0};
  config.gamma_v = {0.5, 0.0, 2.0};
  config.seed = 7;
  const Timer timer;
  const DynamicBipartiteGraph graph = generate(config, 1);
  const double elapsed = timer.seconds();
  const bool pass = graph.edge_count() == 1000000 && elapsed < 30.0;
  report(9, pass,
         std::to_string(graph.edge_count()) + " edges across " +
             std::to_string(graph.t_total()) + " snapshots on one thread in " +
             fmt(elapsed) + " s < 30 s");
  CHECK(pass);
}
