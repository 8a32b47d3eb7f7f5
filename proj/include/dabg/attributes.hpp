#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dabg/graph.hpp"

namespace dabg {

enum class ColumnKind : std::uint8_t { Numeric, Categorical };

// Column-major storage; exactly one of the value vectors is populated,
// matching `kind`.
struct TabularColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<double> numeric;
  std::vector<std::string> categorical;

  std::size_t size() const {
    return kind == ColumnKind::Numeric ? numeric.size() : categorical.size();
  }
};

struct TabularDataset {
  std::vector<TabularColumn> columns;
  std::string label_column;  // empty when the data carries no labels

  std::size_t row_count() const {
    return columns.empty() ? 0 : columns.front().size();
  }
  const TabularColumn* find(const std::string& name) const;
  // Throws ValidationError when column lengths disagree, a value vector does
  // not match its kind, a numeric cell is non-finite, or label_column names
  // a missing column.
  void validate() const;
};

// Partition into (normal, anomalous); the label column is consumed and not
// part of the outputs. With a label column: exactly two distinct values are
// required; a value spelled like an anomaly marker ("anomalous", "anomaly",
// "attack", "fraud", "1", "true", case-insensitive) marks that class,
// otherwise the minority class is anomalous (ties: lexicographically larger
// label). Without labels: k-means (k=2, k-means++ start, Lloyd's iteration)
// on standardized numeric columns, minority cluster = anomalous. Requires
// >= 4 rows and at least two distinct rows.
std::pair<TabularDataset, TabularDataset> split_by_label(
    const TabularDataset& data, std::uint64_t seed = 0);

struct NumericMarginal {
  std::string name;
  std::vector<double> knots;  // ascending quantile table
  bool degenerate = false;    // constant column, excluded from the copula
};

struct CategoricalMarginal {
  std::string name;
  std::vector<std::string> categories;  // sorted
  std::vector<double> frequencies;      // sums to 1
};

// Empirical marginals plus a Gaussian copula over the non-degenerate numeric
// columns. Deliberately swappable: anything exposing fit/sample with this
// schema layout can stand in for the synthesizer.
struct AttributeModel {
  std::vector<std::string> column_names;  // full schema, dataset order
  std::vector<ColumnKind> column_kinds;
  std::vector<NumericMarginal> numeric;          // dataset order
  std::vector<CategoricalMarginal> categorical;  // dataset order
  std::vector<std::string> copula_columns;       // names, dataset order
  std::vector<double> correlation;  // d*d row-major, PSD, unit diagonal
  std::vector<double> transform;    // d*d row-major A with A*A^T == correlation
  std::size_t fitted_rows = 0;

  bool same_schema(const AttributeModel& other) const {
    return column_names == other.column_names &&
           column_kinds == other.column_kinds;
  }
};

inline constexpr std::size_t kQuantileKnots = 1000;
inline constexpr double kCopulaEigenFloor = 1e-9;

// Fits marginals (numeric: kQuantileKnots-point quantile table; categorical:
// frequency table) and the copula correlation: Spearman rank correlation
// mapped to Pearson via 2*sin(pi*rho/6), then eigenvalue-clipped to PSD and
// renormalized to unit diagonal. Requires >= 4 rows. `seed` is accepted for
// interface stability; this backend is deterministic without it.
AttributeModel fit(const TabularDataset& data, std::uint64_t seed = 0);

// Draws n rows: correlated standard normals -> uniforms via the normal CDF
// -> numeric values via inverse quantile interpolation; categorical columns
// sampled independently. Deterministic in (model, n, seed).
TabularDataset sample(const AttributeModel& model, std::size_t n,
                      std::uint64_t seed);

struct MappedAttributes {
  DynamicBipartiteGraph graph;  // attr_row set on every edge
  TabularDataset rows;          // normal block first, then anomalous block
  std::size_t normal_rows = 0;  // rows[0, normal_rows) came from model_normal
};

// Samples one fresh attribute row per edge — normal edges from model_normal,
// anomalous edges from model_anomalous — and assigns attr_row in (t, offset)
// edge order. Row provenance is positional: indices >= normal_rows are
// anomalous-model rows. Models must share a schema.
MappedAttributes map_attributes(const DynamicBipartiteGraph& graph,
                                const AnomalyLedger& ledger,
                                const AttributeModel& model_normal,
                                const AttributeModel& model_anomalous,
                                std::uint64_t seed);

}  // namespace dabg
