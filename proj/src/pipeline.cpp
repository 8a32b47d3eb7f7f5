#include "dabg/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <tuple>
#include <utility>
#include <vector>

#include "dabg/attributes.hpp"
#include "dabg/error.hpp"
#include "dabg/io.hpp"
#include "dabg/rng.hpp"

namespace dabg {
namespace {

// Seed streams hanging off the generator seed so one top-level seed pins the
// whole run even when the optional stages have no seed of their own.
constexpr std::uint64_t kStreamAnomaly = 101;
constexpr std::uint64_t kStreamAttributes = 102;

PipelineConfig base_config(int t_total, int cycle_length, std::uint32_t size_u,
                           std::uint32_t size_v, std::int64_t total_edges,
                           CauchyParams cauchy, GammaParams gamma) {
  PipelineConfig c;
  c.generator.t_total = t_total;
  c.generator.cycle_length = cycle_length;
  c.generator.size_u = size_u;
  c.generator.size_v = size_v;
  c.generator.total_edges = total_edges;
  c.generator.cauchy_u = cauchy;
  c.generator.cauchy_v = cauchy;
  c.generator.cauchy_e = cauchy;
  c.generator.gamma_u = gamma;
  c.generator.gamma_v = gamma;
  c.generator.seed = 42;
  return c;
}

AnomalyConfig window_attack(std::uint32_t attackers, double percentage,
                            std::uint32_t burstiness, std::int32_t start,
                            std::int32_t end) {
  AnomalyConfig a;
  a.initial_attackers_u = attackers;
  a.initial_attackers_v = attackers;
  a.anomaly_percentage = percentage;
  a.burstiness = burstiness;
  a.window_start = start;
  a.window_end = end;
  a.side_mode = SideMode::Both;
  return a;
}

std::vector<Preset> build_presets() {
  // Diurnal shape: activity peaks mid-cycle and nearly vanishes at the edges.
  const CauchyParams diurnal{12.0, 3.0};
  // Flattened shape for month-long horizons: mild mid-cycle bump, but every
  // hour keeps enough mass that small node sides still land in every slot.
  const CauchyParams flat{12.0, 24.0};
  const GammaParams degrees{0.5, 0.0, 2.0};

  std::vector<Preset> out;

  {
    Preset p{"pcore-desk", "two diurnal days, 2000x1200 nodes, 50k edges, "
                           "1% anomalies", {}};
    p.config = base_config(48, 24, 2000, 1200, 50000, diurnal, degrees);
    p.config.anomaly = window_attack(5, 0.01, 1, 0, 48);
    out.push_back(std::move(p));
  }
  {
    Preset p{"pcore-desk-light", "pcore-desk with a 0.5% anomaly rate", {}};
    p.config = base_config(48, 24, 2000, 1200, 50000, diurnal, degrees);
    p.config.anomaly = window_attack(5, 0.005, 1, 0, 48);
    out.push_back(std::move(p));
  }
  {
    Preset p{"pcore-desk-burst", "pcore-desk at 5% anomalies with 3 victims "
                                 "per attacker", {}};
    p.config = base_config(48, 24, 2000, 1200, 50000, diurnal, degrees);
    p.config.anomaly = window_attack(5, 0.05, 3, 0, 48);
    out.push_back(std::move(p));
  }
  {
    Preset p{"pcore-desk-prop", "pcore-desk with victim-to-attacker "
                                "propagation", {}};
    p.config = base_config(48, 24, 2000, 1200, 50000, diurnal, degrees);
    AnomalyConfig a = window_attack(5, 0.01, 2, 0, 48);
    a.propagation_enabled = true;
    a.propagation_ratio = 0.25;
    p.config.anomaly = a;
    out.push_back(std::move(p));
  }
  {
    Preset p{"pcore-full", "transaction-scale: 157225x96037 nodes, 597k "
                           "edges over two diurnal days, 1% anomalies", {}};
    p.config = base_config(48, 24, 157225, 96037, 597098, diurnal, degrees);
    p.config.anomaly = window_attack(30, 0.01, 1, 0, 48);
    out.push_back(std::move(p));
  }
  {
    Preset p{"reddit-desk", "one month hourly, 1000x984 nodes, 6.7k edges",
             {}};
    p.config = base_config(744, 24, 1000, 984, 6724, flat, degrees);
    out.push_back(std::move(p));
  }
  {
    Preset p{"reddit-full", "post-scale: 10000x984 nodes, 672k edges over a "
                            "month, 5% anomalies in an 8h window", {}};
    p.config = base_config(744, 24, 10000, 984, 672447, flat, degrees);
    p.config.anomaly = window_attack(5, 0.05, 1, 360, 368);
    out.push_back(std::move(p));
  }
  {
    Preset p{"wiki-desk", "one month hourly, 1000x1000 nodes, 1.6k edges",
             {}};
    p.config = base_config(744, 24, 1000, 1000, 1575, flat, degrees);
    out.push_back(std::move(p));
  }
  {
    Preset p{"wiki-full", "edit-scale: 8227x1000 nodes, 157k edges over a "
                          "month, 5% anomalies in a 20h window", {}};
    p.config = base_config(744, 24, 8227, 1000, 157474, flat, degrees);
    p.config.anomaly = window_attack(5, 0.05, 1, 360, 380);
    out.push_back(std::move(p));
  }
  return out;
}

// Reorders every snapshot into the order an edge-list file round trip yields,
// so attribute rows land on the same edges whether the attribute stage runs
// in-process or on a written file.
DynamicBipartiteGraph file_order(const DynamicBipartiteGraph& graph) {
  DynamicBipartiteGraph out(graph.t_total(), graph.size_u(), graph.size_v());
  for (const Snapshot& snap : graph.snapshots()) {
    std::vector<TimedEdge> edges = snap.edges;
    std::sort(edges.begin(), edges.end(),
              [](const TimedEdge& a, const TimedEdge& b) {
                return std::tie(a.u, a.v, a.label, a.attr_row) <
                       std::tie(b.u, b.v, b.label, b.attr_row);
              });
    out.merge_snapshot_edges(snap.t, edges);
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  generator.validate();
  if (anomaly.has_value()) {
    anomaly->validate();
    if (anomaly->window_end > generator.t_total) {
      throw ValidationError("anomaly.window",
                            "window end exceeds the generator horizon");
    }
  }
  if (attributes.has_value() && attributes->reference_dataset_path.empty()) {
    throw ValidationError("attributes.reference_dataset_path",
                          "must not be empty");
  }
  if (output.directory.empty()) {
    throw ValidationError("output.directory", "must not be empty");
  }
  if (output.formats.empty()) {
    throw ValidationError("output.formats", "must list at least one format");
  }
  for (const std::string& f : output.formats) {
    if (f != "csv") {
      throw ValidationError("output.formats", "unsupported format '" + f + "'");
    }
  }
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

GeneratorConfig fit_config_from_graph(const DynamicBipartiteGraph& graph,
                                      int cycle_length) {
  if (cycle_length < 1 || graph.t_total() % cycle_length != 0) {
    throw ValidationError("cycle_length",
                          "must be positive and divide the horizon");
  }
  GeneratorConfig config;
  config.t_total = graph.t_total();
  config.cycle_length = cycle_length;
  config.size_u = graph.size_u();
  config.size_v = graph.size_v();
  config.total_edges = graph.edge_count();
  config.seed = 1;

  // Fold timestamps into one cycle at slot midpoints, matching where the
  // generator evaluates its densities.
  const auto folded = [cycle_length](std::int32_t t) {
    return static_cast<double>(t % cycle_length) + 0.5;
  };
  std::vector<double> edge_times;
  std::vector<double> node_times_u;
  std::vector<double> node_times_v;
  edge_times.reserve(static_cast<std::size_t>(graph.edge_count()));
  for (const Snapshot& snap : graph.snapshots()) {
    const double x = folded(snap.t);
    edge_times.insert(edge_times.end(), snap.edges.size(), x);
    node_times_u.insert(node_times_u.end(), snap.active_u.size(), x);
    node_times_v.insert(node_times_v.end(), snap.active_v.size(), x);
  }
  if (edge_times.empty()) {
    throw ValidationError("graph", "cannot fit parameters to an empty graph");
  }
  config.cauchy_e = fit_cauchy(edge_times);
  config.cauchy_u =
      node_times_u.empty() ? config.cauchy_e : fit_cauchy(node_times_u);
  config.cauchy_v =
      node_times_v.empty() ? config.cauchy_e : fit_cauchy(node_times_v);

  const auto degree_fit = [](const std::vector<std::int64_t>& degrees) {
    std::vector<double> values;
    values.reserve(degrees.size());
    for (const std::int64_t d : degrees) {
      values.push_back(static_cast<double>(d));
    }
    return fit_gamma(values);
  };
  config.gamma_u = degree_fit(graph.aggregate_degrees(Side::U));
  config.gamma_v = degree_fit(graph.aggregate_degrees(Side::V));
  return config;
}

PipelineArtifacts run_pipeline(const PipelineConfig& config, int threads) {
  config.validate();

  DynamicBipartiteGraph graph = generate(config.generator, threads);

  std::optional<AnomalyLedger> ledger;
  std::uint64_t anomaly_seed = 0;
  if (config.anomaly.has_value()) {
    anomaly_seed = config.anomaly_seed.has_value()
                       ? *config.anomaly_seed
                       : derive_seed(config.generator.seed, kStreamAnomaly);
    InjectionResult injected = inject(graph, *config.anomaly, anomaly_seed);
    graph = std::move(injected.graph);
    ledger = std::move(injected.ledger);
  }

  PipelineArtifacts artifacts;
  std::optional<TabularDataset> attr_rows;
  if (config.attributes.has_value()) {
    graph = file_order(graph);
    if (ledger.has_value()) {
      ledger->anomalous_edges =
          AnomalyLedger::from_labels(graph).anomalous_edges;
    }
    const std::uint64_t attr_seed =
        config.attributes->seed.has_value()
            ? *config.attributes->seed
            : derive_seed(config.generator.seed, kStreamAttributes);
    TabularFile reference =
        read_tabular(config.attributes->reference_dataset_path,
                     config.attributes->label_column);
    artifacts.dropped_reference_rows = reference.dropped_rows;
    const auto [normal, anomalous] =
        split_by_label(reference.data, derive_seed(attr_seed, 1));
    const AttributeModel model_normal = fit(normal);
    const AttributeModel model_anomalous = fit(anomalous);
    const AnomalyLedger& edge_ledger =
        ledger.has_value() ? *ledger : AnomalyLedger::from_labels(graph);
    MappedAttributes mapped =
        map_attributes(graph, edge_ledger, model_normal, model_anomalous,
                       derive_seed(attr_seed, 2));
    graph = std::move(mapped.graph);
    attr_rows = std::move(mapped.rows);
  }

  const std::filesystem::path dir(config.output.directory);
  std::filesystem::create_directories(dir);
  artifacts.edges_csv = dir / "edges.csv";
  artifacts.meta_json = dir / "edges.meta.json";
  write_edge_list(artifacts.edges_csv, graph,
                  attr_rows.has_value() ? &*attr_rows : nullptr,
                  config.generator.seed);
  if (ledger.has_value()) {
    artifacts.ground_truth_json = dir / "ground_truth.json";
    write_ground_truth(*artifacts.ground_truth_json, *ledger, anomaly_seed);
  }
  artifacts.edge_count = graph.edge_count();
  artifacts.anomalous_edge_count = graph.anomalous_edge_count();
  return artifacts;
}

}  // namespace dabg
