#include "dabg/attributes.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dabg/distributions.hpp"
#include "dabg/error.hpp"
#include "dabg/rng.hpp"

namespace dabg {
namespace {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool looks_anomalous(const std::string& value) {
  static const std::array<const char*, 6> kMarkers = {
      "anomalous", "anomaly", "attack", "fraud", "1", "true"};
  const std::string v = lower(value);
  return std::find(kMarkers.begin(), kMarkers.end(), v) != kMarkers.end();
}

std::string cell_as_string(const TabularColumn& col, std::size_t row) {
  return col.kind == ColumnKind::Numeric ? format_number(col.numeric[row])
                                         : col.categorical[row];
}

TabularDataset select_rows(const TabularDataset& data,
                           const std::vector<std::size_t>& rows,
                           const std::string& drop) {
  TabularDataset out;
  for (const auto& col : data.columns) {
    if (!drop.empty() && col.name == drop) continue;
    TabularColumn c;
    c.name = col.name;
    c.kind = col.kind;
    if (col.kind == ColumnKind::Numeric) {
      c.numeric.reserve(rows.size());
      for (const std::size_t r : rows) c.numeric.push_back(col.numeric[r]);
    } else {
      c.categorical.reserve(rows.size());
      for (const std::size_t r : rows) c.categorical.push_back(col.categorical[r]);
    }
    out.columns.push_back(std::move(c));
  }
  return out;
}

// n x d matrix of standardized numeric features, row-major.
std::vector<double> standardized_features(const TabularDataset& data,
                                          const std::string& skip,
                                          std::size_t& d_out) {
  std::vector<const TabularColumn*> cols;
  for (const auto& col : data.columns) {
    if (col.kind == ColumnKind::Numeric && col.name != skip) cols.push_back(&col);
  }
  const std::size_t n = data.row_count();
  const std::size_t d = cols.size();
  d_out = d;
  std::vector<double> x(n * d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    const auto& v = cols[c]->numeric;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) /
                        static_cast<double>(n);
    double ss = 0.0;
    for (const double val : v) ss += (val - mean) * (val - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd == 0.0) continue;  // constant column contributes nothing
    for (std::size_t r = 0; r < n; ++r) x[r * d + c] = (v[r] - mean) / sd;
  }
  return x;
}

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// Two-cluster Lloyd's iteration with k-means++ seeding; returns assignments.
std::vector<int> kmeans2(const std::vector<double>& x, std::size_t n,
                         std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::array<std::vector<double>, 2> centers;
  const std::size_t first = static_cast<std::size_t>(rng.below(n));
  centers[0].assign(x.begin() + static_cast<std::ptrdiff_t>(first * d),
                    x.begin() + static_cast<std::ptrdiff_t>((first + 1) * d));

  std::vector<double> d2(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    d2[r] = sq_dist(&x[r * d], centers[0].data(), d);
    total += d2[r];
  }
  if (!(total > 0.0)) {
    throw ValidationError("rows", "all rows are identical");
  }
  const double target = rng.uniform01() * total;
  std::size_t second = n - 1;
  double cum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    cum += d2[r];
    if (cum > target) {
      second = r;
      break;
    }
  }
  centers[1].assign(x.begin() + static_cast<std::ptrdiff_t>(second * d),
                    x.begin() + static_cast<std::ptrdiff_t>((second + 1) * d));

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t r = 0; r < n; ++r) {
      const double d0 = sq_dist(&x[r * d], centers[0].data(), d);
      const double d1 = sq_dist(&x[r * d], centers[1].data(), d);
      const int a = d1 < d0 ? 1 : 0;  // ties resolve to the lower index
      if (a != assign[r]) {
        assign[r] = a;
        changed = true;
      }
    }
    std::array<std::size_t, 2> count{0, 0};
    for (const int a : assign) ++count[static_cast<std::size_t>(a)];
    for (int c = 0; c < 2; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) continue;
      // Empty cluster: adopt the point farthest from the surviving center.
      std::size_t far = 0;
      double best = -1.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double dist = sq_dist(&x[r * d], centers[1 - c].data(), d);
        if (dist > best) {
          best = dist;
          far = r;
        }
      }
      assign[far] = c;
      count[static_cast<std::size_t>(c)] = 1;
      count[static_cast<std::size_t>(1 - c)] -= 1;
      changed = true;
    }
    for (int c = 0; c < 2; ++c) {
      std::fill(centers[static_cast<std::size_t>(c)].begin(),
                centers[static_cast<std::size_t>(c)].end(), 0.0);
    }
    for (std::size_t r = 0; r < n; ++r) {
      auto& ctr = centers[static_cast<std::size_t>(assign[r])];
      for (std::size_t i = 0; i < d; ++i) ctr[i] += x[r * d + i];
    }
    for (int c = 0; c < 2; ++c) {
      auto& ctr = centers[static_cast<std::size_t>(c)];
      const auto cnt = static_cast<double>(count[static_cast<std::size_t>(c)]);
      for (double& v : ctr) v /= cnt;
    }
    if (!changed && iter > 0) break;
  }
  return assign;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double inverse_quantile(const std::vector<double>& knots, double u) {
  const std::size_t k = knots.size();
  if (k == 1) return knots.front();
  double p = u * static_cast<double>(k - 1);
  if (p < 0.0) p = 0.0;
  auto i = static_cast<std::size_t>(p);
  if (i > k - 2) i = k - 2;
  const double frac = p - static_cast<double>(i);
  return knots[i] + frac * (knots[i + 1] - knots[i]);
}

}  // namespace

const TabularColumn* TabularDataset::find(const std::string& name) const {
  for (const auto& col : columns) {
    if (col.name == name) return &col;
  }
  return nullptr;
}

void TabularDataset::validate() const {
  const std::size_t n = row_count();
  for (const auto& col : columns) {
    if (col.size() != n) {
      throw ValidationError(col.name, "column length differs from the rest");
    }
    if (col.kind == ColumnKind::Numeric) {
      if (!col.categorical.empty()) {
        throw ValidationError(col.name, "numeric column holds categorical data");
      }
      for (const double v : col.numeric) {
        if (!std::isfinite(v)) {
          throw ValidationError(col.name, "numeric column holds a non-finite value");
        }
      }
    } else if (!col.numeric.empty()) {
      throw ValidationError(col.name, "categorical column holds numeric data");
    }
  }
  if (!label_column.empty() && find(label_column) == nullptr) {
    throw ValidationError("label_column",
                          "names a column that is not in the dataset");
  }
}

std::pair<TabularDataset, TabularDataset> split_by_label(
    const TabularDataset& data, std::uint64_t seed) {
  data.validate();
  const std::size_t n = data.row_count();
  if (n < 4) {
    throw ValidationError("rows", "need at least 4 rows to split");
  }

  std::vector<std::size_t> normal_rows;
  std::vector<std::size_t> anomalous_rows;
  if (!data.label_column.empty()) {
    const TabularColumn* col = data.find(data.label_column);
    std::vector<std::string> labels(n);
    for (std::size_t r = 0; r < n; ++r) labels[r] = cell_as_string(*col, r);
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    if (counts.size() != 2) {
      throw ValidationError("label_column",
                            "expected exactly two distinct label values, got " +
                                std::to_string(counts.size()));
    }
    const auto& [first_label, first_count] = *counts.begin();
    const auto& [second_label, second_count] = *std::next(counts.begin());
    std::string anomalous_label;
    const bool first_marked = looks_anomalous(first_label);
    const bool second_marked = looks_anomalous(second_label);
    if (first_marked != second_marked) {
      anomalous_label = first_marked ? first_label : second_label;
    } else if (first_count != second_count) {
      anomalous_label = first_count < second_count ? first_label : second_label;
    } else {
      anomalous_label = second_label;  // tie: lexicographically larger
    }
    for (std::size_t r = 0; r < n; ++r) {
      (labels[r] == anomalous_label ? anomalous_rows : normal_rows).push_back(r);
    }
    return {select_rows(data, normal_rows, data.label_column),
            select_rows(data, anomalous_rows, data.label_column)};
  }

  std::size_t d = 0;
  const std::vector<double> x = standardized_features(data, "", d);
  if (d == 0) {
    throw ValidationError(
        "label_column",
        "unlabeled data needs numeric columns for the clustering fallback");
  }
  const std::vector<int> assign = kmeans2(x, n, d, seed);
  std::array<std::size_t, 2> count{0, 0};
  for (const int a : assign) ++count[static_cast<std::size_t>(a)];
  int anomalous_cluster;
  if (count[0] != count[1]) {
    anomalous_cluster = count[0] < count[1] ? 0 : 1;
  } else {
    anomalous_cluster = 1 - assign[0];  // tie: row 0 stays normal
  }
  for (std::size_t r = 0; r < n; ++r) {
    (assign[r] == anomalous_cluster ? anomalous_rows : normal_rows).push_back(r);
  }
  return {select_rows(data, normal_rows, ""), select_rows(data, anomalous_rows, "")};
}

AttributeModel fit(const TabularDataset& data, std::uint64_t seed) {
  (void)seed;  // the copula fit has no random component
  data.validate();
  const std::size_t n = data.row_count();
  if (n < 4) {
    throw ValidationError("rows", "need at least 4 rows to fit");
  }

  AttributeModel model;
  model.fitted_rows = n;
  std::vector<const TabularColumn*> copula_cols;
  for (const auto& col : data.columns) {
    model.column_names.push_back(col.name);
    model.column_kinds.push_back(col.kind);
    if (col.kind == ColumnKind::Numeric) {
      std::vector<double> sorted = col.numeric;
      std::sort(sorted.begin(), sorted.end());
      NumericMarginal m;
      m.name = col.name;
      m.degenerate = sorted.front() == sorted.back();
      m.knots.resize(kQuantileKnots);
      for (std::size_t j = 0; j < kQuantileKnots; ++j) {
        m.knots[j] = sorted_quantile(
            sorted, static_cast<double>(j) /
                        static_cast<double>(kQuantileKnots - 1));
      }
      if (!m.degenerate) {
        model.copula_columns.push_back(col.name);
        copula_cols.push_back(&col);
      }
      model.numeric.push_back(std::move(m));
    } else {
      std::map<std::string, std::size_t> counts;
      for (const auto& v : col.categorical) ++counts[v];
      CategoricalMarginal m;
      m.name = col.name;
      for (const auto& [cat, cnt] : counts) {
        m.categories.push_back(cat);
        m.frequencies.push_back(static_cast<double>(cnt) /
                                static_cast<double>(n));
      }
      model.categorical.push_back(std::move(m));
    }
  }

  const std::size_t d = copula_cols.size();
  if (d == 0) return model;

  std::vector<std::vector<double>> ranks(d);
  for (std::size_t c = 0; c < d; ++c) ranks[c] = average_ranks(copula_cols[c]->numeric);

  Eigen::MatrixXd corr(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t j = i + 1; j < d; ++j) {
      const double rho_s = pearson(ranks[i], ranks[j]);
      double rho = 2.0 * std::sin(std::numbers::pi * rho_s / 6.0);
      rho = std::clamp(rho, -1.0, 1.0);
      corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho;
      corr(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rho;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(kCopulaEigenFloor);
  Eigen::MatrixXd psd =
      es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::VectorXd scale = psd.diagonal().cwiseSqrt().cwiseInverse();
  psd = scale.asDiagonal() * psd * scale.asDiagonal();
  psd = ((psd + psd.transpose()) / 2.0).eval();
  psd.diagonal().setOnes();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(psd);
  const Eigen::VectorXd root = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd transform = es2.eigenvectors() * root.asDiagonal();

  model.correlation.resize(d * d);
  model.transform.resize(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      model.correlation[i * d + j] =
          psd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      model.transform[i * d + j] =
          transform(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return model;
}

TabularDataset sample(const AttributeModel& model, std::size_t n,
                      std::uint64_t seed) {
  TabularDataset out;
  out.columns.resize(model.column_names.size());
  std::size_t numeric_at = 0;
  std::size_t categorical_at = 0;
  // Per-column cursors into the model blocks, plus the copula slot (or -1)
  // for each numeric column.
  std::vector<std::ptrdiff_t> copula_slot(model.column_names.size(), -1);
  std::vector<std::size_t> marginal_of(model.column_names.size(), 0);
  std::size_t next_slot = 0;
  for (std::size_t c = 0; c < model.column_names.size(); ++c) {
    out.columns[c].name = model.column_names[c];
    out.columns[c].kind = model.column_kinds[c];
    if (model.column_kinds[c] == ColumnKind::Numeric) {
      marginal_of[c] = numeric_at;
      if (!model.numeric[numeric_at].degenerate) {
        copula_slot[c] = static_cast<std::ptrdiff_t>(next_slot++);
      }
      out.columns[c].numeric.reserve(n);
      ++numeric_at;
    } else {
      marginal_of[c] = categorical_at++;
      out.columns[c].categorical.reserve(n);
    }
  }
  const std::size_t d = model.copula_columns.size();

  Rng rng(seed);
  std::vector<double> z(d);
  std::vector<double> y(d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += model.transform[i * d + j] * z[j];
      y[i] = s;
    }
    for (std::size_t c = 0; c < model.column_names.size(); ++c) {
      if (model.column_kinds[c] == ColumnKind::Numeric) {
        const NumericMarginal& m = model.numeric[marginal_of[c]];
        if (m.degenerate) {
          out.columns[c].numeric.push_back(m.knots.front());
        } else {
          const double u =
              normal_cdf(y[static_cast<std::size_t>(copula_slot[c])]);
          out.columns[c].numeric.push_back(inverse_quantile(m.knots, u));
        }
      } else {
        const CategoricalMarginal& m = model.categorical[marginal_of[c]];
        const double u = rng.uniform01();
        double cum = 0.0;
        std::size_t pick = m.categories.size() - 1;
        for (std::size_t k = 0; k < m.categories.size(); ++k) {
          cum += m.frequencies[k];
          if (u < cum) {
            pick = k;
            break;
          }
        }
        out.columns[c].categorical.push_back(m.categories[pick]);
      }
    }
  }
  return out;
}

MappedAttributes map_attributes(const DynamicBipartiteGraph& graph,
                                const AnomalyLedger& ledger,
                                const AttributeModel& model_normal,
                                const AttributeModel& model_anomalous,
                                std::uint64_t seed) {
  if (!model_normal.same_schema(model_anomalous)) {
    throw ValidationError("models",
                          "normal and anomalous models have different schemas");
  }
  const auto total = static_cast<std::size_t>(graph.edge_count());
  const auto anomalous = static_cast<std::size_t>(graph.anomalous_edge_count());
  if (ledger.anomalous_edges.size() != anomalous) {
    throw ValidationError("ledger",
                          "anomalous edge count disagrees with the graph");
  }
  const std::size_t normal = total - anomalous;

  MappedAttributes result{graph,
                          sample(model_normal, normal, derive_seed(seed, 1)),
                          normal};
  TabularDataset anomalous_rows =
      sample(model_anomalous, anomalous, derive_seed(seed, 2));
  for (std::size_t c = 0; c < result.rows.columns.size(); ++c) {
    auto& dst = result.rows.columns[c];
    auto& src = anomalous_rows.columns[c];
    dst.numeric.insert(dst.numeric.end(), src.numeric.begin(), src.numeric.end());
    dst.categorical.insert(dst.categorical.end(), src.categorical.begin(),
                           src.categorical.end());
  }

  std::int64_t next_normal = 0;
  auto next_anomalous = static_cast<std::int64_t>(normal);
  for (const Snapshot& snap : graph.snapshots()) {
    for (std::size_t o = 0; o < snap.edges.size(); ++o) {
      const EdgeId id{snap.t, static_cast<std::uint32_t>(o)};
      const bool is_anomalous = snap.edges[o].label == EdgeLabel::Anomalous;
      result.graph.set_attr_row(id, is_anomalous ? next_anomalous++ : next_normal++);
    }
  }
  return result;
}

}  // namespace dabg
