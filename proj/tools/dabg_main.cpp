#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "dabg/anomaly.hpp"
#include "dabg/attributes.hpp"
#include "dabg/error.hpp"
#include "dabg/evaluation.hpp"
#include "dabg/generator.hpp"
#include "dabg/io.hpp"
#include "dabg/pipeline.hpp"
#include "dabg/rng.hpp"
#include "dabg/version.hpp"

namespace {

using namespace dabg;

// Matches the derived-seed streams run_pipeline uses, so running the stages
// one file at a time lands on the same bits as the one-shot pipeline.
constexpr std::uint64_t kStreamAnomaly = 101;
constexpr std::uint64_t kStreamAttributes = 102;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

PipelineConfig resolve_config(const CommonOpts& opts) {
  if (!opts.config_path.empty() && !opts.preset.empty()) {
    throw ValidationError("config", "pass either --config or --preset, not both");
  }
  if (!opts.config_path.empty()) {
    return read_config(opts.config_path);
  }
  if (!opts.preset.empty()) {
    const Preset* p = find_preset(opts.preset);
    if (p == nullptr) {
      throw ValidationError("preset", "unknown preset '" + opts.preset +
                                          "' (see `dabg presets`)");
    }
    return p->config;
  }
  throw ValidationError("config", "need --config <file> or --preset <name>");
}

void pad_horizon(GeneratorConfig& g) {
  if (g.cycle_length > 0 && g.t_total > 0 &&
      g.t_total % g.cycle_length != 0) {
    const int padded = (g.t_total / g.cycle_length + 1) * g.cycle_length;
    std::cerr << "note: padding the horizon from " << g.t_total << " to "
              << padded << " snapshots to cover whole cycles\n";
    g.t_total = padded;
  }
}

void apply_overrides(PipelineConfig& config, const CommonOpts& opts) {
  if (opts.seed_set) config.generator.seed = opts.seed;
  if (!opts.out.empty()) config.output.directory = opts.out;
  pad_horizon(config.generator);
}

void report_artifacts(const PipelineArtifacts& artifacts) {
  std::cout << "wrote " << artifacts.edge_count << " edges ("
            << artifacts.anomalous_edge_count << " anomalous) to "
            << artifacts.edges_csv.string() << "\n";
  if (artifacts.ground_truth_json.has_value()) {
    std::cout << "wrote ground truth to "
              << artifacts.ground_truth_json->string() << "\n";
  }
  if (artifacts.dropped_reference_rows > 0) {
    std::cerr << "note: dropped " << artifacts.dropped_reference_rows
              << " incomplete reference rows\n";
  }
}

void cmd_generate(const CommonOpts& opts) {
  PipelineConfig config = resolve_config(opts);
  apply_overrides(config, opts);
  // Generation only; `inject` and `attrs` add their stages file-to-file,
  // `pipeline` runs everything in one go.
  config.anomaly.reset();
  config.anomaly_seed.reset();
  config.attributes.reset();
  const PipelineArtifacts artifacts = run_pipeline(config, opts.threads);
  write_config(std::filesystem::path(config.output.directory) / "config.json",
               config);
  report_artifacts(artifacts);
}

void cmd_pipeline(const CommonOpts& opts) {
  PipelineConfig config = resolve_config(opts);
  apply_overrides(config, opts);
  const PipelineArtifacts artifacts = run_pipeline(config, opts.threads);
  write_config(std::filesystem::path(config.output.directory) / "config.json",
               config);
  report_artifacts(artifacts);
}

void cmd_inject(const std::string& input, const CommonOpts& opts) {
  EdgeListFile in = read_edge_list(input);
  if (!in.attrs.columns.empty()) {
    throw ValidationError(
        "input", "edge list already carries attribute columns; inject first, "
                 "then attach attributes");
  }
  PipelineConfig config = resolve_config(opts);
  if (!config.anomaly.has_value()) {
    throw ValidationError("anomaly", "config has no anomaly block");
  }
  const std::uint64_t seed =
      opts.seed_set ? opts.seed
      : config.anomaly_seed.has_value()
          ? *config.anomaly_seed
          : derive_seed(in.seed_known ? in.seed : 1, kStreamAnomaly);
  InjectionResult result = inject(in.graph, *config.anomaly, seed);

  const std::filesystem::path dir(opts.out.empty() ? "out" : opts.out);
  const std::filesystem::path edges = dir / "edges.csv";
  write_edge_list(edges, result.graph, nullptr,
                  in.seed_known ? in.seed : seed);
  write_ground_truth(dir / "ground_truth.json", result.ledger, seed);
  std::cout << "wrote " << result.graph.edge_count() << " edges ("
            << result.graph.anomalous_edge_count() << " anomalous) to "
            << edges.string() << "\n";
  std::cout << "wrote ground truth to " << (dir / "ground_truth.json").string()
            << "\n";
}

void cmd_attrs(const std::string& input, const std::string& reference,
               const std::string& label_column, const CommonOpts& opts) {
  EdgeListFile in = read_edge_list(input);
  TabularFile ref = read_tabular(reference, label_column);
  if (ref.dropped_rows > 0) {
    std::cerr << "note: dropped " << ref.dropped_rows
              << " incomplete reference rows\n";
  }
  const std::uint64_t seed =
      opts.seed_set ? opts.seed
                    : derive_seed(in.seed_known ? in.seed : 1,
                                  kStreamAttributes);
  const auto [normal, anomalous] =
      split_by_label(ref.data, derive_seed(seed, 1));
  const AttributeModel model_normal = fit(normal);
  const AttributeModel model_anomalous = fit(anomalous);
  const AnomalyLedger ledger = AnomalyLedger::from_labels(in.graph);
  MappedAttributes mapped = map_attributes(in.graph, ledger, model_normal,
                                           model_anomalous,
                                           derive_seed(seed, 2));
  const std::filesystem::path out_path =
      opts.out.empty() ? std::filesystem::path(input)
                       : std::filesystem::path(opts.out) / "edges.csv";
  write_edge_list(out_path, mapped.graph, &mapped.rows,
                  in.seed_known ? in.seed : seed);
  std::cout << "wrote " << mapped.graph.edge_count() << " edges with "
            << mapped.rows.columns.size() << " attribute columns to "
            << out_path.string() << "\n";
}

void cmd_eval(const std::string& path_a, const std::string& path_b,
              double bandwidth, const std::string& out) {
  const EdgeListFile a = read_edge_list(path_a);
  const EdgeListFile b = read_edge_list(path_b);
  const AnomalyLedger ledger_a = AnomalyLedger::from_labels(a.graph);
  const AnomalyLedger ledger_b = AnomalyLedger::from_labels(b.graph);
  const bool with_anomaly = !ledger_a.anomalous_edges.empty() &&
                            !ledger_b.anomalous_edges.empty();
  const bool with_attrs =
      !a.attrs.columns.empty() && !b.attrs.columns.empty();
  EvalOptions options;
  options.bandwidth = bandwidth;
  const EvalReport report =
      evaluate(a.graph, with_anomaly ? &ledger_a : nullptr,
               with_attrs ? &a.attrs : nullptr, b.graph,
               with_anomaly ? &ledger_b : nullptr,
               with_attrs ? &b.attrs : nullptr, options);
  const std::string json = eval_report_to_json(report);
  if (!out.empty()) {
    write_eval_report(out, report);
  }
  std::cout << json;
}

void cmd_fit(const std::string& input, int cycle_length,
             const std::string& out) {
  const EdgeListFile in = read_edge_list(input);
  if (in.graph.edge_count() < 100) {
    throw ValidationError("edges",
                          "need at least 100 edges to fit parameters, got " +
                              std::to_string(in.graph.edge_count()));
  }
  PipelineConfig config;
  config.generator = fit_config_from_graph(in.graph, cycle_length);
  const std::filesystem::path out_path =
      out.empty() ? std::filesystem::path("fitted_config.json")
                  : std::filesystem::path(out);
  write_config(out_path, config);
  std::cout << "wrote fitted config to " << out_path.string() << "\n";
}

void cmd_presets() {
  for (const Preset& p : presets()) {
    std::cout << p.name << "  " << p.summary << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) +
               " — dynamic attributed bipartite graphs with labeled anomalies"};
  app.set_version_flag("--version", std::string(kToolName) + " " +
                                        std::string(kToolVersion));
  app.require_subcommand(1);

  CommonOpts gen_opts;
  CLI::App* gen = app.add_subcommand(
      "generate", "generate a normal (anomaly-free) edge list from a config");
  gen->add_option("-c,--config", gen_opts.config_path, "config JSON file");
  gen->add_option("-p,--preset", gen_opts.preset, "built-in preset name");
  gen->add_option("-o,--out", gen_opts.out, "output directory");
  gen->add_option("-s,--seed", gen_opts.seed, "override the generator seed")
      ->each([&](const std::string&) { gen_opts.seed_set = true; });
  gen->add_option("-t,--threads", gen_opts.threads, "worker threads");

  CommonOpts pipe_opts;
  CLI::App* pipe = app.add_subcommand(
      "pipeline", "run every configured stage and export the artifacts");
  pipe->add_option("-c,--config", pipe_opts.config_path, "config JSON file");
  pipe->add_option("-p,--preset", pipe_opts.preset, "built-in preset name");
  pipe->add_option("-o,--out", pipe_opts.out, "output directory");
  pipe->add_option("-s,--seed", pipe_opts.seed, "override the generator seed")
      ->each([&](const std::string&) { pipe_opts.seed_set = true; });
  pipe->add_option("-t,--threads", pipe_opts.threads, "worker threads");

  CommonOpts inject_opts;
  std::string inject_input;
  CLI::App* inj = app.add_subcommand(
      "inject", "add labeled anomalous edges to an existing edge list");
  inj->add_option("edges", inject_input, "input edge list CSV")->required();
  inj->add_option("-c,--config", inject_opts.config_path,
                  "config JSON file with an anomaly block");
  inj->add_option("-p,--preset", inject_opts.preset, "built-in preset name");
  inj->add_option("-o,--out", inject_opts.out, "output directory");
  inj->add_option("-s,--seed", inject_opts.seed, "injection seed")
      ->each([&](const std::string&) { inject_opts.seed_set = true; });

  CommonOpts attr_opts;
  std::string attr_input;
  std::string attr_reference;
  std::string attr_label;
  CLI::App* att = app.add_subcommand(
      "attrs", "attach sampled attribute columns to an edge list");
  att->add_option("edges", attr_input, "input edge list CSV")->required();
  att->add_option("-r,--reference", attr_reference,
                  "reference attribute CSV to model")
      ->required();
  att->add_option("--label-column", attr_label,
                  "reference column holding normal/anomalous labels");
  att->add_option("-o,--out", attr_opts.out,
                  "output directory (default: rewrite in place)");
  att->add_option("-s,--seed", attr_opts.seed, "attribute sampling seed")
      ->each([&](const std::string&) { attr_opts.seed_set = true; });

  std::string eval_a;
  std::string eval_b;
  std::string eval_out;
  double eval_bandwidth = 0.0;
  CLI::App* ev = app.add_subcommand(
      "eval", "score how well edge list B matches edge list A");
  ev->add_option("a", eval_a, "reference edge list CSV")->required();
  ev->add_option("b", eval_b, "candidate edge list CSV")->required();
  ev->add_option("--bandwidth", eval_bandwidth,
                 "fixed kernel bandwidth (default: median heuristic)");
  ev->add_option("-o,--out", eval_out, "also write the report JSON here");

  std::string fit_input;
  std::string fit_out;
  int fit_cycle = 24;
  CLI::App* ft = app.add_subcommand(
      "fit", "recover generator parameters from an edge list");
  ft->add_option("edges", fit_input, "input edge list CSV")->required();
  ft->add_option("--cycle", fit_cycle, "cycle length in snapshots");
  ft->add_option("-o,--out", fit_out, "output config path");

  CLI::App* pr = app.add_subcommand("presets", "list built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a validation failure
  }

  try {
    if (gen->parsed()) cmd_generate(gen_opts);
    if (pipe->parsed()) cmd_pipeline(pipe_opts);
    if (inj->parsed()) cmd_inject(inject_input, inject_opts);
    if (att->parsed()) {
      cmd_attrs(attr_input, attr_reference, attr_label, attr_opts);
    }
    if (ev->parsed()) cmd_eval(eval_a, eval_b, eval_bandwidth, eval_out);
    if (ft->parsed()) cmd_fit(fit_input, fit_cycle, fit_out);
    if (pr->parsed()) cmd_presets();
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
