#include "dabg/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dabg/error.hpp"
#include "dabg/version.hpp"

namespace dabg {
namespace {

using nlohmann::json;

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

bool parse_double(std::string_view s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_int64(std::string_view s, std::int64_t& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      std::size_t len = i - start;
      if (len > 0 && text[start + len - 1] == '\r') --len;
      lines.emplace_back(text, start, len);
      start = i + 1;
    }
  }
  if (start < text.size()) {
    std::size_t len = text.size() - start;
    if (len > 0 && text[start + len - 1] == '\r') --len;
    lines.emplace_back(text, start, len);
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(path.string(), "cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

std::vector<std::string> split_csv(const std::string& line,
                                   const std::string& where) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  while (i <= line.size()) {
    if (i == line.size()) {
      if (quoted) {
        throw ValidationError(where, "unterminated quoted field");
      }
      fields.push_back(cur);
      break;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          i += 2;
        } else {
          quoted = false;
          ++i;
        }
      } else {
        cur.push_back(c);
        ++i;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
      ++i;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
      ++i;
    } else {
      cur.push_back(c);
      ++i;
    }
  }
  return fields;
}

std::string csv_cell(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string node_name(Side side, std::uint32_t index) {
  return (side == Side::U ? "U" : "V") + std::to_string(index);
}

std::uint32_t parse_node(const std::string& text, char prefix,
                         const std::string& where) {
  if (text.size() < 2 || text[0] != prefix) {
    throw ValidationError(where, std::string("expected a node id like ") +
                                     prefix + "<index>, got '" + text + "'");
  }
  std::int64_t idx = 0;
  if (!parse_int64(std::string_view(text).substr(1), idx) || idx < 0 ||
      idx > 0xFFFFFFFFLL) {
    throw ValidationError(where, "bad node index in '" + text + "'");
  }
  return static_cast<std::uint32_t>(idx);
}

std::filesystem::path meta_path_for(const std::filesystem::path& path) {
  std::filesystem::path meta = path;
  meta.replace_extension(".meta.json");
  return meta;
}

json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

const char* kind_name(ColumnKind kind) {
  return kind == ColumnKind::Numeric ? "numeric" : "categorical";
}

// ---- config helpers ----------------------------------------------------

[[noreturn]] void missing(const std::string& field) {
  throw ValidationError(field, "missing required field");
}

const json& req(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) missing(path + "." + key);
  return *it;
}

std::int64_t req_int(const json& j, const char* key, const std::string& path) {
  const json& v = req(j, key, path);
  if (!v.is_number_integer()) {
    throw ValidationError(path + "." + key, "must be an integer");
  }
  return v.get<std::int64_t>();
}

double req_double(const json& j, const char* key, const std::string& path) {
  const json& v = req(j, key, path);
  if (!v.is_number()) {
    throw ValidationError(path + "." + key, "must be a number");
  }
  return v.get<double>();
}

std::string req_string(const json& j, const char* key,
                       const std::string& path) {
  const json& v = req(j, key, path);
  if (!v.is_string()) {
    throw ValidationError(path + "." + key, "must be a string");
  }
  return v.get<std::string>();
}

double opt_double(const json& j, const char* key, double fallback,
                  const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    throw ValidationError(path + "." + key, "must be a number");
  }
  return it->get<double>();
}

CauchyParams parse_cauchy(const json& j, const std::string& path) {
  CauchyParams p;
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      throw ValidationError(path, "array form is [location, scale]");
    }
    p.location = j[0].get<double>();
    p.scale = j[1].get<double>();
  } else if (j.is_object()) {
    p.location = req_double(j, "location", path);
    p.scale = req_double(j, "scale", path);
  } else {
    throw ValidationError(path, "must be an object or [location, scale]");
  }
  return p;
}

GammaParams parse_gamma(const json& j, const std::string& path) {
  GammaParams p;
  if (j.is_array()) {
    if (j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number()) {
      throw ValidationError(path, "array form is [shape, location, scale]");
    }
    p.shape = j[0].get<double>();
    p.location = j[1].get<double>();
    p.scale = j[2].get<double>();
  } else if (j.is_object()) {
    p.shape = req_double(j, "shape", path);
    p.location = opt_double(j, "location", 0.0, path);
    p.scale = req_double(j, "scale", path);
  } else {
    throw ValidationError(path, "must be an object or [shape, location, scale]");
  }
  return p;
}

json cauchy_json(const CauchyParams& p) {
  return json{{"location", p.location}, {"scale", p.scale}};
}

json gamma_json(const GammaParams& p) {
  return json{{"shape", p.shape}, {"location", p.location}, {"scale", p.scale}};
}

std::string side_mode_name(SideMode mode) {
  switch (mode) {
    case SideMode::UOnly:
      return "u_only";
    case SideMode::VOnly:
      return "v_only";
    case SideMode::Both:
      break;
  }
  return "both";
}

SideMode parse_side_mode(const std::string& text, const std::string& path) {
  if (text == "u_only") return SideMode::UOnly;
  if (text == "v_only") return SideMode::VOnly;
  if (text == "both") return SideMode::Both;
  throw ValidationError(path, "must be one of u_only, v_only, both");
}

std::vector<std::string> node_names(Side side,
                                    const std::vector<std::uint32_t>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (const std::uint32_t n : nodes) out.push_back(node_name(side, n));
  return out;
}

std::vector<std::uint32_t> parse_nodes(const json& arr, char prefix,
                                       const std::string& path) {
  if (!arr.is_array()) {
    throw ValidationError(path, "must be an array of node ids");
  }
  std::vector<std::uint32_t> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw ValidationError(path, "node ids must be strings");
    }
    out.push_back(parse_node(v.get<std::string>(), prefix, path));
  }
  return out;
}

}  // namespace

void write_edge_list(const std::filesystem::path& path,
                     const DynamicBipartiteGraph& graph,
                     const TabularDataset* attrs, std::uint64_t seed) {
  if (attrs != nullptr &&
      attrs->row_count() != static_cast<std::size_t>(graph.edge_count())) {
    throw std::runtime_error(
        "write_edge_list: attribute table must have one row per edge");
  }

  std::vector<TimedEdge> edges = graph.all_edges();
  std::sort(edges.begin(), edges.end(),
            [](const TimedEdge& a, const TimedEdge& b) {
              return std::tie(a.t, a.u, a.v, a.label, a.attr_row) <
                     std::tie(b.t, b.u, b.v, b.label, b.attr_row);
            });

  std::string out;
  out.reserve(64 + edges.size() * 24);
  out += "# ";
  out += kToolName;
  out += " v";
  out += kToolVersion;
  out += " seed=";
  out += std::to_string(seed);
  out += "\n";
  out += "t,u,v,label";
  if (attrs != nullptr) {
    for (const auto& col : attrs->columns) {
      out += ",attr_";
      out += col.name;
    }
  }
  out += "\n";
  for (const TimedEdge& e : edges) {
    out += std::to_string(e.t);
    out += ",U";
    out += std::to_string(e.u);
    out += ",V";
    out += std::to_string(e.v);
    out += e.label == EdgeLabel::Anomalous ? ",anomalous" : ",normal";
    if (attrs != nullptr) {
      if (e.attr_row < 0 ||
          static_cast<std::size_t>(e.attr_row) >= attrs->row_count()) {
        throw std::runtime_error(
            "write_edge_list: edge has no attribute row assigned");
      }
      const auto row = static_cast<std::size_t>(e.attr_row);
      for (const auto& col : attrs->columns) {
        out += ",";
        out += col.kind == ColumnKind::Numeric
                   ? format_number(col.numeric[row])
                   : csv_cell(col.categorical[row]);
      }
    }
    out += "\n";
  }
  write_file(path, out);

  json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["seed"] = seed;
  meta["t_total"] = graph.t_total();
  meta["size_u"] = graph.size_u();
  meta["size_v"] = graph.size_v();
  meta["edges"] = graph.edge_count();
  meta["anomalous_edges"] = graph.anomalous_edge_count();
  json cols = json::array();
  if (attrs != nullptr) {
    for (const auto& col : attrs->columns) {
      cols.push_back(json{{"name", col.name}, {"kind", kind_name(col.kind)}});
    }
  }
  meta["attr_columns"] = cols;
  write_file(meta_path_for(path), meta.dump(2) + "\n");
}

EdgeListFile read_edge_list(const std::filesystem::path& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));

  std::uint64_t seed = 0;
  bool seed_known = false;
  std::size_t i = 0;
  while (i < lines.size() && (lines[i].empty() || lines[i][0] == '#')) {
    const auto pos = lines[i].find("seed=");
    if (pos != std::string::npos) {
      std::int64_t s = 0;
      if (parse_int64(std::string_view(lines[i]).substr(pos + 5), s)) {
        seed = static_cast<std::uint64_t>(s);
        seed_known = true;
      }
    }
    ++i;
  }
  if (i == lines.size()) {
    throw ValidationError(path.string(), "missing header line");
  }
  const std::size_t header_line = i + 1;
  const std::vector<std::string> header =
      split_csv(lines[i], location(path, header_line));
  if (header.size() < 4 || header[0] != "t" || header[1] != "u" ||
      header[2] != "v" || header[3] != "label") {
    throw ValidationError(location(path, header_line),
                          "header must start with t,u,v,label");
  }
  std::vector<std::string> attr_names;
  for (std::size_t c = 4; c < header.size(); ++c) {
    std::string name = header[c];
    if (name.rfind("attr_", 0) == 0) name = name.substr(5);
    attr_names.push_back(name);
  }
  ++i;

  struct Row {
    std::int32_t t;
    std::uint32_t u;
    std::uint32_t v;
    EdgeLabel label;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;
  std::int64_t max_t = -1;
  std::int64_t max_u = -1;
  std::int64_t max_v = -1;
  for (; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    const std::string where = location(path, i + 1);
    const std::vector<std::string> cells = split_csv(lines[i], where);
    if (cells.size() != header.size()) {
      throw ValidationError(
          where, "expected " + std::to_string(header.size()) + " fields, got " +
                     std::to_string(cells.size()));
    }
    Row row;
    std::int64_t t = 0;
    if (!parse_int64(cells[0], t) || t < 0) {
      throw ValidationError(where, "bad snapshot index '" + cells[0] + "'");
    }
    row.t = static_cast<std::int32_t>(t);
    row.u = parse_node(cells[1], 'U', where);
    row.v = parse_node(cells[2], 'V', where);
    if (cells[3] == "normal") {
      row.label = EdgeLabel::Normal;
    } else if (cells[3] == "anomalous") {
      row.label = EdgeLabel::Anomalous;
    } else {
      throw ValidationError(where,
                            "label must be normal or anomalous, got '" +
                                cells[3] + "'");
    }
    for (std::size_t c = 4; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        throw ValidationError(where, "empty attribute cell in column " +
                                         header[c]);
      }
      row.cells.push_back(cells[c]);
    }
    max_t = std::max(max_t, t);
    max_u = std::max(max_u, static_cast<std::int64_t>(row.u));
    max_v = std::max(max_v, static_cast<std::int64_t>(row.v));
    rows.push_back(std::move(row));
  }

  // Sidecar metadata wins over inference when present.
  int t_total = static_cast<int>(max_t + 1);
  auto size_u = static_cast<std::uint32_t>(max_u + 1);
  auto size_v = static_cast<std::uint32_t>(max_v + 1);
  std::vector<ColumnKind> meta_kinds;
  bool have_meta_kinds = false;
  const std::filesystem::path meta_path = meta_path_for(path);
  if (std::filesystem::exists(meta_path)) {
    const json meta = parse_json_file(meta_path);
    if (meta.contains("t_total") && meta["t_total"].is_number_integer()) {
      t_total = std::max(t_total, meta["t_total"].get<int>());
    }
    if (meta.contains("size_u") && meta["size_u"].is_number_integer()) {
      size_u = std::max(size_u, meta["size_u"].get<std::uint32_t>());
    }
    if (meta.contains("size_v") && meta["size_v"].is_number_integer()) {
      size_v = std::max(size_v, meta["size_v"].get<std::uint32_t>());
    }
    if (!seed_known && meta.contains("seed") && meta["seed"].is_number()) {
      seed = meta["seed"].get<std::uint64_t>();
      seed_known = true;
    }
    if (meta.contains("attr_columns") && meta["attr_columns"].is_array() &&
        meta["attr_columns"].size() == attr_names.size()) {
      bool names_match = true;
      std::vector<ColumnKind> kinds;
      for (std::size_t c = 0; c < attr_names.size(); ++c) {
        const json& col = meta["attr_columns"][c];
        if (!col.is_object() || col.value("name", "") != attr_names[c]) {
          names_match = false;
          break;
        }
        kinds.push_back(col.value("kind", "categorical") == "numeric"
                            ? ColumnKind::Numeric
                            : ColumnKind::Categorical);
      }
      if (names_match) {
        meta_kinds = std::move(kinds);
        have_meta_kinds = true;
      }
    }
  }
  if (rows.empty() && t_total < 1) {
    throw ValidationError(path.string(),
                          "empty edge list and no metadata sidecar to size it");
  }

  EdgeListFile out{DynamicBipartiteGraph(std::max(t_total, 1), std::max(size_u, 1u),
                                         std::max(size_v, 1u)),
                   TabularDataset{}, seed, seed_known};

  // Column kinds: numeric iff every cell parses as a finite decimal.
  std::vector<ColumnKind> kinds(attr_names.size(), ColumnKind::Numeric);
  if (have_meta_kinds) {
    kinds = meta_kinds;
  } else {
    for (std::size_t c = 0; c < attr_names.size(); ++c) {
      for (const Row& row : rows) {
        double v = 0.0;
        if (!parse_double(row.cells[c], v)) {
          kinds[c] = ColumnKind::Categorical;
          break;
        }
      }
    }
  }
  for (std::size_t c = 0; c < attr_names.size(); ++c) {
    TabularColumn col;
    col.name = attr_names[c];
    col.kind = kinds[c];
    out.attrs.columns.push_back(std::move(col));
  }

  std::vector<std::vector<const Row*>> by_t(
      static_cast<std::size_t>(out.graph.t_total()));
  for (const Row& row : rows) {
    if (row.t >= out.graph.t_total()) {
      throw ValidationError(path.string(),
                            "snapshot index " + std::to_string(row.t) +
                                " outside the declared horizon");
    }
    if (row.u >= out.graph.size_u() || row.v >= out.graph.size_v()) {
      throw ValidationError(path.string(), "node index outside declared sizes");
    }
    by_t[static_cast<std::size_t>(row.t)].push_back(&row);
  }
  std::int64_t attr_counter = 0;
  std::vector<TimedEdge> batch;
  for (int t = 0; t < out.graph.t_total(); ++t) {
    batch.clear();
    for (const Row* row : by_t[static_cast<std::size_t>(t)]) {
      TimedEdge e{row->u, row->v, row->t, row->label, -1};
      if (!attr_names.empty()) {
        e.attr_row = attr_counter++;
        for (std::size_t c = 0; c < attr_names.size(); ++c) {
          auto& col = out.attrs.columns[c];
          if (col.kind == ColumnKind::Numeric) {
            double v = 0.0;
            parse_double(row->cells[c], v);
            col.numeric.push_back(v);
          } else {
            col.categorical.push_back(row->cells[c]);
          }
        }
      }
      batch.push_back(e);
    }
    out.graph.merge_snapshot_edges(t, batch);
  }
  return out;
}

void write_ground_truth(const std::filesystem::path& path,
                        const AnomalyLedger& ledger, std::uint64_t seed) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["seed"] = seed;
  j["window"] = json::array({ledger.window_start, ledger.window_end});
  j["propagation_enabled"] = ledger.propagation_enabled;
  j["initial_attackers_u"] = node_names(Side::U, ledger.initial_attackers_u);
  j["initial_attackers_v"] = node_names(Side::V, ledger.initial_attackers_v);
  j["victims_u"] = node_names(Side::U, ledger.victims_u);
  j["victims_v"] = node_names(Side::V, ledger.victims_v);
  json attackers_u = json::array();
  json attackers_v = json::array();
  json infected = json::array();
  for (std::size_t t = 0; t < ledger.attackers_u.size(); ++t) {
    attackers_u.push_back(node_names(Side::U, ledger.attackers_u[t]));
    attackers_v.push_back(node_names(Side::V, ledger.attackers_v[t]));
    std::vector<std::string> merged =
        node_names(Side::U, ledger.infected_u[t]);
    const std::vector<std::string> v_side =
        node_names(Side::V, ledger.infected_v[t]);
    merged.insert(merged.end(), v_side.begin(), v_side.end());
    infected.push_back(merged);
  }
  j["attackers_u"] = std::move(attackers_u);
  j["attackers_v"] = std::move(attackers_v);
  j["infected"] = std::move(infected);
  j["anomalous_edge_count"] = ledger.anomalous_edges.size();
  write_file(path, j.dump(2) + "\n");
}

AnomalyLedger read_ground_truth(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  const std::string p = path.string();
  AnomalyLedger ledger;
  const json& window = req(j, "window", p);
  if (!window.is_array() || window.size() != 2) {
    throw ValidationError(p + ".window", "must be [start, end]");
  }
  ledger.window_start = window[0].get<std::int32_t>();
  ledger.window_end = window[1].get<std::int32_t>();
  ledger.propagation_enabled = req(j, "propagation_enabled", p).get<bool>();
  ledger.initial_attackers_u =
      parse_nodes(req(j, "initial_attackers_u", p), 'U', p + ".initial_attackers_u");
  ledger.initial_attackers_v =
      parse_nodes(req(j, "initial_attackers_v", p), 'V', p + ".initial_attackers_v");
  ledger.victims_u = parse_nodes(req(j, "victims_u", p), 'U', p + ".victims_u");
  ledger.victims_v = parse_nodes(req(j, "victims_v", p), 'V', p + ".victims_v");
  const json& attackers_u = req(j, "attackers_u", p);
  const json& attackers_v = req(j, "attackers_v", p);
  const json& infected = req(j, "infected", p);
  if (!attackers_u.is_array() || !attackers_v.is_array() ||
      !infected.is_array() || attackers_u.size() != attackers_v.size() ||
      attackers_u.size() != infected.size()) {
    throw ValidationError(p, "attackers_u/attackers_v/infected must be "
                             "equal-length per-snapshot arrays");
  }
  const std::size_t t_total = attackers_u.size();
  ledger.attackers_u.resize(t_total);
  ledger.attackers_v.resize(t_total);
  ledger.infected_u.resize(t_total);
  ledger.infected_v.resize(t_total);
  for (std::size_t t = 0; t < t_total; ++t) {
    ledger.attackers_u[t] =
        parse_nodes(attackers_u[t], 'U', p + ".attackers_u");
    ledger.attackers_v[t] =
        parse_nodes(attackers_v[t], 'V', p + ".attackers_v");
    if (!infected[t].is_array()) {
      throw ValidationError(p + ".infected", "entries must be arrays");
    }
    for (const auto& id : infected[t]) {
      if (!id.is_string() || id.get<std::string>().empty()) {
        throw ValidationError(p + ".infected", "node ids must be strings");
      }
      const std::string name = id.get<std::string>();
      if (name[0] == 'U') {
        ledger.infected_u[t].push_back(parse_node(name, 'U', p + ".infected"));
      } else {
        ledger.infected_v[t].push_back(parse_node(name, 'V', p + ".infected"));
      }
    }
  }
  return ledger;
}

TabularFile read_tabular(const std::filesystem::path& path,
                         const std::string& label_column) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  std::size_t i = 0;
  while (i < lines.size() && (lines[i].empty() || lines[i][0] == '#')) ++i;
  if (i == lines.size()) {
    throw ValidationError(path.string(), "missing header line");
  }
  const std::vector<std::string> header =
      split_csv(lines[i], location(path, i + 1));
  if (header.empty() || header.front().empty()) {
    throw ValidationError(location(path, i + 1), "empty header");
  }
  ++i;

  TabularFile out;
  std::vector<std::vector<std::string>> rows;
  for (; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    std::vector<std::string> cells =
        split_csv(lines[i], location(path, i + 1));
    bool complete = cells.size() == header.size();
    if (complete) {
      for (const auto& cell : cells) {
        if (cell.empty()) {
          complete = false;
          break;
        }
      }
    }
    if (!complete) {
      ++out.dropped_rows;
      continue;
    }
    rows.push_back(std::move(cells));
  }

  for (std::size_t c = 0; c < header.size(); ++c) {
    TabularColumn col;
    col.name = header[c];
    col.kind = ColumnKind::Numeric;
    for (const auto& row : rows) {
      double v = 0.0;
      if (!parse_double(row[c], v)) {
        col.kind = ColumnKind::Categorical;
        break;
      }
    }
    if (col.kind == ColumnKind::Numeric) {
      col.numeric.reserve(rows.size());
      for (const auto& row : rows) {
        double v = 0.0;
        parse_double(row[c], v);
        col.numeric.push_back(v);
      }
    } else {
      col.categorical.reserve(rows.size());
      for (const auto& row : rows) col.categorical.push_back(row[c]);
    }
    out.data.columns.push_back(std::move(col));
  }
  if (!label_column.empty()) {
    if (out.data.find(label_column) == nullptr) {
      throw ValidationError("label_column", "no column named '" + label_column +
                                                "' in " + path.string());
    }
    out.data.label_column = label_column;
  }
  return out;
}

void write_tabular(const std::filesystem::path& path,
                   const TabularDataset& data) {
  std::string out;
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (c > 0) out += ",";
    out += csv_cell(data.columns[c].name);
  }
  out += "\n";
  const std::size_t n = data.row_count();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
      if (c > 0) out += ",";
      const auto& col = data.columns[c];
      out += col.kind == ColumnKind::Numeric ? format_number(col.numeric[r])
                                             : csv_cell(col.categorical[r]);
    }
    out += "\n";
  }
  write_file(path, out);
}

PipelineConfig read_config(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  PipelineConfig config;

  const json& gen = req(j, "generator", "config");
  const std::string gp = "generator";
  config.generator.t_total = static_cast<int>(req_int(gen, "t_total", gp));
  config.generator.cycle_length =
      static_cast<int>(req_int(gen, "cycle_length", gp));
  config.generator.size_u =
      static_cast<std::uint32_t>(req_int(gen, "size_u", gp));
  config.generator.size_v =
      static_cast<std::uint32_t>(req_int(gen, "size_v", gp));
  config.generator.total_edges = req_int(gen, "total_edges", gp);
  config.generator.seed = gen.contains("seed")
                              ? static_cast<std::uint64_t>(
                                    req_int(gen, "seed", gp))
                              : 1;

  const auto cauchy_field = [&](const char* key) {
    if (gen.contains(key)) return parse_cauchy(gen[key], gp + "." + key);
    if (gen.contains("cauchy")) return parse_cauchy(gen["cauchy"], gp + ".cauchy");
    missing(gp + "." + key);
  };
  config.generator.cauchy_u = cauchy_field("cauchy_u");
  config.generator.cauchy_v = cauchy_field("cauchy_v");
  config.generator.cauchy_e = cauchy_field("cauchy_e");
  const auto gamma_field = [&](const char* key) {
    if (gen.contains(key)) return parse_gamma(gen[key], gp + "." + key);
    if (gen.contains("gamma")) return parse_gamma(gen["gamma"], gp + ".gamma");
    missing(gp + "." + key);
  };
  config.generator.gamma_u = gamma_field("gamma_u");
  config.generator.gamma_v = gamma_field("gamma_v");

  if (j.contains("anomaly") && !j["anomaly"].is_null()) {
    const json& an = j["anomaly"];
    const std::string ap = "anomaly";
    AnomalyConfig a;
    a.initial_attackers_u =
        static_cast<std::uint32_t>(req_int(an, "initial_attackers_u", ap));
    a.initial_attackers_v =
        static_cast<std::uint32_t>(req_int(an, "initial_attackers_v", ap));
    a.anomaly_percentage = req_double(an, "anomaly_percentage", ap);
    a.burstiness = static_cast<std::uint32_t>(req_int(an, "burstiness", ap));
    a.propagation_ratio = opt_double(an, "propagation_ratio", 0.0, ap);
    a.propagation_enabled = an.value("propagation_enabled", false);
    const json& window = req(an, "window", ap);
    if (!window.is_array() || window.size() != 2 ||
        !window[0].is_number_integer() || !window[1].is_number_integer()) {
      throw ValidationError("anomaly.window", "must be [start, end]");
    }
    a.window_start = window[0].get<std::int32_t>();
    a.window_end = window[1].get<std::int32_t>();
    a.side_mode = an.contains("side_mode")
                      ? parse_side_mode(req_string(an, "side_mode", ap),
                                        "anomaly.side_mode")
                      : SideMode::Both;
    config.anomaly = a;
    if (an.contains("seed")) {
      config.anomaly_seed = static_cast<std::uint64_t>(req_int(an, "seed", ap));
    }
  }

  if (j.contains("attributes") && !j["attributes"].is_null()) {
    const json& at = j["attributes"];
    const std::string ap = "attributes";
    AttributesConfig a;
    a.reference_dataset_path = req_string(at, "reference_dataset_path", ap);
    a.label_column = at.value("label_column", "");
    if (at.contains("seed")) {
      a.seed = static_cast<std::uint64_t>(req_int(at, "seed", ap));
    }
    config.attributes = a;
  }

  if (j.contains("output") && !j["output"].is_null()) {
    const json& outp = j["output"];
    config.output.directory = outp.value("directory", "out");
    if (outp.contains("formats")) {
      if (!outp["formats"].is_array()) {
        throw ValidationError("output.formats", "must be an array");
      }
      config.output.formats.clear();
      for (const auto& f : outp["formats"]) {
        if (!f.is_string()) {
          throw ValidationError("output.formats", "entries must be strings");
        }
        config.output.formats.push_back(f.get<std::string>());
      }
    }
  }
  return config;
}

void write_config(const std::filesystem::path& path,
                  const PipelineConfig& config) {
  json j;
  json gen;
  gen["t_total"] = config.generator.t_total;
  gen["cycle_length"] = config.generator.cycle_length;
  gen["size_u"] = config.generator.size_u;
  gen["size_v"] = config.generator.size_v;
  gen["total_edges"] = config.generator.total_edges;
  gen["seed"] = config.generator.seed;
  gen["cauchy_u"] = cauchy_json(config.generator.cauchy_u);
  gen["cauchy_v"] = cauchy_json(config.generator.cauchy_v);
  gen["cauchy_e"] = cauchy_json(config.generator.cauchy_e);
  gen["gamma_u"] = gamma_json(config.generator.gamma_u);
  gen["gamma_v"] = gamma_json(config.generator.gamma_v);
  j["generator"] = std::move(gen);
  if (config.anomaly.has_value()) {
    const AnomalyConfig& a = *config.anomaly;
    json an;
    an["initial_attackers_u"] = a.initial_attackers_u;
    an["initial_attackers_v"] = a.initial_attackers_v;
    an["anomaly_percentage"] = a.anomaly_percentage;
    an["burstiness"] = a.burstiness;
    an["propagation_ratio"] = a.propagation_ratio;
    an["propagation_enabled"] = a.propagation_enabled;
    an["window"] = json::array({a.window_start, a.window_end});
    an["side_mode"] = side_mode_name(a.side_mode);
    if (config.anomaly_seed.has_value()) an["seed"] = *config.anomaly_seed;
    j["anomaly"] = std::move(an);
  }
  if (config.attributes.has_value()) {
    json at;
    at["reference_dataset_path"] = config.attributes->reference_dataset_path;
    if (!config.attributes->label_column.empty()) {
      at["label_column"] = config.attributes->label_column;
    }
    if (config.attributes->seed.has_value()) {
      at["seed"] = *config.attributes->seed;
    }
    j["attributes"] = std::move(at);
  }
  json outp;
  outp["directory"] = config.output.directory;
  outp["formats"] = config.output.formats;
  j["output"] = std::move(outp);
  write_file(path, j.dump(2) + "\n");
}

std::string eval_report_to_json(const EvalReport& report) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["degree_mmd"] = json{{"u", report.degree_mmd_u},
                         {"v", report.degree_mmd_v},
                         {"mean", report.degree_mmd}};
  j["bcc_mmd"] = json{{"u", report.bcc_mmd_u},
                      {"v", report.bcc_mmd_v},
                      {"mean", report.bcc_mmd}};
  j["time_mmd"] = json{{"edge", report.time_mmd_edge},
                       {"node_u", report.time_mmd_node_u},
                       {"node_v", report.time_mmd_node_v},
                       {"mean", report.time_mmd}};
  j["anomaly_mmd"] =
      report.anomaly_mmd.has_value() ? json(*report.anomaly_mmd) : json();
  if (report.attribute_mmd.has_value()) {
    json cols = json::array();
    for (const ColumnScore& col : report.attribute_columns) {
      cols.push_back(json{{"name", col.column},
                          {"kind", col.categorical ? "categorical" : "numeric"},
                          {"score", col.score}});
    }
    j["attributes"] = json{{"columns", std::move(cols)},
                           {"mean", *report.attribute_mmd}};
  } else {
    j["attributes"] = json();
  }
  json bw;
  for (const auto& [name, value] : report.bandwidths) bw[name] = value;
  j["bandwidths"] = std::move(bw);
  return j.dump(2) + "\n";
}

void write_eval_report(const std::filesystem::path& path,
                       const EvalReport& report) {
  write_file(path, eval_report_to_json(report));
}

}  // namespace dabg
