#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dabg/anomaly.hpp"
#include "dabg/generator.hpp"
#include "dabg/graph.hpp"

namespace dabg {

struct AttributesConfig {
  std::string reference_dataset_path;
  std::string label_column;  // empty: split falls back to clustering
  std::optional<std::uint64_t> seed;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv"};
};

struct PipelineConfig {
  GeneratorConfig generator;
  std::optional<AnomalyConfig> anomaly;
  std::optional<std::uint64_t> anomaly_seed;  // defaults to a derived seed
  std::optional<AttributesConfig> attributes;
  OutputConfig output;

  void validate() const;
};

struct Preset {
  std::string name;
  std::string summary;
  PipelineConfig config;
};

// Built-in configurations: desk-scale shapes that run in seconds plus
// full-scale shapes mirroring published real-world dataset sizes.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

// Recovers generator parameters from an existing graph: Cauchy fits on the
// cycle-folded edge and active-node timestamps, gamma fits on the aggregate
// degrees of each side. Sizes and horizon are copied from the graph.
GeneratorConfig fit_config_from_graph(const DynamicBipartiteGraph& graph,
                                      int cycle_length);

struct PipelineArtifacts {
  std::filesystem::path edges_csv;
  std::filesystem::path meta_json;
  std::optional<std::filesystem::path> ground_truth_json;
  std::int64_t edge_count = 0;
  std::int64_t anomalous_edge_count = 0;
  std::size_t dropped_reference_rows = 0;
};

// generate -> inject (optional) -> attach attributes (optional) -> write the
// edge list, metadata sidecar, and ground-truth file into output.directory.
PipelineArtifacts run_pipeline(const PipelineConfig& config, int threads = 1);

}  // namespace dabg
