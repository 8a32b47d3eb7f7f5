#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "dabg/attributes.hpp"
#include "dabg/evaluation.hpp"
#include "dabg/graph.hpp"
#include "dabg/pipeline.hpp"

namespace dabg {

// Edge lists are UTF-8 CSV: a `# dabg v... seed=...` comment line, a header
// `t,u,v,label[,attr_<name>...]`, then one row per edge with `U<k>` / `V<k>`
// node ids and labels normal/anomalous, sorted by (t, u, v, label, attr
// values). A `<stem>.meta.json` sidecar records sizes, horizon, seed, and
// counts so parsing does not have to infer them.

// Writes the edge list plus its metadata sidecar; `attrs` (optional) supplies
// one attribute row per edge, indexed by the edges' attr_row.
void write_edge_list(const std::filesystem::path& path,
                     const DynamicBipartiteGraph& graph,
                     const TabularDataset* attrs, std::uint64_t seed);

struct EdgeListFile {
  DynamicBipartiteGraph graph;
  TabularDataset attrs;  // no columns when the file carries no attributes
  std::uint64_t seed = 0;
  bool seed_known = false;
};

// Parses an edge list; sizes and horizon come from the sidecar when present
// and are inferred from the data otherwise. Malformed rows raise
// ValidationError naming the line.
EdgeListFile read_edge_list(const std::filesystem::path& path);

void write_ground_truth(const std::filesystem::path& path,
                        const AnomalyLedger& ledger, std::uint64_t seed);
// Rebuilds the ledger's membership sets (anomalous edge ids live in the edge
// list's label column, not here).
AnomalyLedger read_ground_truth(const std::filesystem::path& path);

struct TabularFile {
  TabularDataset data;
  std::size_t dropped_rows = 0;  // incomplete rows are dropped, not imputed
};

// Reads a reference attribute table. Column kinds are inferred: numeric iff
// every non-empty cell parses as a finite decimal. Rows with missing cells
// (wrong field count or empty values) are dropped and counted.
TabularFile read_tabular(const std::filesystem::path& path,
                         const std::string& label_column);
void write_tabular(const std::filesystem::path& path,
                   const TabularDataset& data);

PipelineConfig read_config(const std::filesystem::path& path);
void write_config(const std::filesystem::path& path,
                  const PipelineConfig& config);

std::string eval_report_to_json(const EvalReport& report);
void write_eval_report(const std::filesystem::path& path,
                       const EvalReport& report);

}  // namespace dabg
