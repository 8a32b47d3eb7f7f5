#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <doctest.h>

#include "dabg/anomaly.hpp"
#include "dabg/error.hpp"
#include "dabg/evaluation.hpp"
#include "dabg/graph.hpp"
#include "dabg/rng.hpp"

using namespace dabg;

namespace {

ScalarSample sample_of(std::vector<double> values) {
  ScalarSample s;
  s.values = std::move(values);
  return s;
}

DynamicBipartiteGraph from_pairs(
    int t_total, std::uint32_t size_u, std::uint32_t size_v,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
    int t = 0) {
  DynamicBipartiteGraph g(t_total, size_u, size_v);
  std::vector<TimedEdge> edges;
  for (const auto& [u, v] : pairs) {
    edges.push_back(TimedEdge{u, v, t, EdgeLabel::Normal, -1});
  }
  g.merge_snapshot_edges(t, edges);
  return g;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TabularColumn num_col(std::string name, std::vector<double> values) {
  TabularColumn c;
  c.name = std::move(name);
  c.kind = ColumnKind::Numeric;
  c.numeric = std::move(values);
  return c;
}

TabularColumn cat_col(std::string name, std::vector<std::string> values) {
  TabularColumn c;
  c.name = std::move(name);
  c.kind = ColumnKind::Categorical;
  c.categorical = std::move(values);
  return c;
}

}  // namespace

TEST_CASE("degree distributions include isolated nodes") {
  // U side degrees 1,1,1,0 (node 3 never appears).
  const auto g = from_pairs(1, 4, 2, {{0, 0}, {1, 0}, {2, 1}});
  const ScalarSample deg_u = degree_distribution(g, Side::U);
  CHECK(deg_u.kind == SampleKind::DegreeU);
  CHECK(sorted(deg_u.values) == std::vector<double>{0, 1, 1, 1});
  const ScalarSample deg_v = degree_distribution(g, Side::V);
  CHECK(sorted(deg_v.values) == std::vector<double>{1, 2});
}

TEST_CASE("time distributions carry one entry per edge and active node") {
  DynamicBipartiteGraph g(2, 3, 3);
  const std::vector<TimedEdge> t0{
      {0, 0, 0, EdgeLabel::Normal, -1},
      {1, 0, 0, EdgeLabel::Normal, -1},
      {1, 1, 0, EdgeLabel::Normal, -1},
  };
  const std::vector<TimedEdge> t1{{2, 2, 1, EdgeLabel::Normal, -1}};
  g.merge_snapshot_edges(0, t0);
  g.merge_snapshot_edges(1, t1);

  const TimeSamples times = time_distributions(g);
  CHECK(times.edge.values == std::vector<double>{0, 0, 0, 1});  // 75% / 25%
  CHECK(times.node_u.values == std::vector<double>{0, 0, 1});   // u0,u1 / u2
  CHECK(times.node_v.values == std::vector<double>{0, 0, 1});
}

TEST_CASE("bcc closed forms: star, path, complete, single edge") {
  // Star K_{1,4}: every V leaf overlaps every other leaf exactly.
  const auto star = from_pairs(1, 1, 4, {{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  const ScalarSample star_v = bcc(star, Side::V);
  REQUIRE(star_v.values.size() == 4);
  for (const double c : star_v.values) CHECK(c == doctest::Approx(1.0));
  // The hub has no second-order neighbors.
  CHECK(bcc(star, Side::U).values == std::vector<double>{0.0});

  // Path u0-v0-u1-v1.
  const auto path = from_pairs(1, 2, 2, {{0, 0}, {1, 0}, {1, 1}});
  CHECK(sorted(bcc(path, Side::U).values) ==
        std::vector<double>{0.5, 0.5});
  CHECK(sorted(bcc(path, Side::V).values) ==
        std::vector<double>{0.5, 0.5});

  // Complete K_{3,2}: everything overlaps fully.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> complete;
  for (std::uint32_t u = 0; u < 3; ++u) {
    for (std::uint32_t v = 0; v < 2; ++v) complete.push_back({u, v});
  }
  const auto k32 = from_pairs(1, 3, 2, complete);
  for (const double c : bcc(k32, Side::U).values) {
    CHECK(c == doctest::Approx(1.0));
  }
  for (const double c : bcc(k32, Side::V).values) {
    CHECK(c == doctest::Approx(1.0));
  }

  // A single edge has no second-order structure; isolated nodes are skipped.
  const auto lone = from_pairs(1, 3, 3, {{0, 0}});
  CHECK(bcc(lone, Side::U).values == std::vector<double>{0.0});
  CHECK(bcc(lone, Side::V).values == std::vector<double>{0.0});

  // Parallel edges do not change collapsed neighborhoods.
  const auto doubled = from_pairs(1, 2, 2, {{0, 0}, {0, 0}, {1, 0}, {1, 1}});
  CHECK(sorted(bcc(doubled, Side::U).values) ==
        std::vector<double>{0.5, 0.5});
}

TEST_CASE("median bandwidth is the median pairwise distance") {
  CHECK(median_bandwidth(sample_of({0.0}), sample_of({1.0})) == 1.0);
  // Pooled {0,1,3}: distances 1,2,3; median 2.
  CHECK(median_bandwidth(sample_of({0.0, 1.0}), sample_of({3.0})) == 2.0);
  // Identical points have no spread; the floor keeps the kernel usable.
  CHECK(median_bandwidth(sample_of({5.0}), sample_of({5.0})) ==
        kBandwidthFloor);
}

TEST_CASE("mmd axioms and the singleton closed form") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t na = 1 + rng.below(40);
    const std::size_t nb = 1 + rng.below(40);
    std::vector<double> a(na);
    std::vector<double> b(nb);
    for (double& x : a) x = std::floor(rng.uniform01() * 8.0);
    for (double& x : b) x = std::floor(rng.uniform01() * 8.0) + rng.uniform01();
    const ScalarSample sa = sample_of(a);
    const ScalarSample sb = sample_of(b);
    const double forward = mmd(sa, sb);
    const double backward = mmd(sb, sa);
    CHECK(forward >= 0.0);
    CHECK(std::abs(forward - backward) <= 1e-12);
    CHECK(mmd(sa, sa) <= 1e-12);
    CHECK(mmd(sb, sb) <= 1e-12);
  }

  // Two singletons: MMD^2 = 2 - 2 exp(-d^2 / (2 sigma^2)).
  for (const auto [x, y, bw] :
       {std::tuple{0.0, 1.0, 1.0}, std::tuple{2.0, 7.0, 3.0},
        std::tuple{-4.0, 4.0, 0.5}}) {
    const double d = y - x;
    const double expected = 2.0 - 2.0 * std::exp(-d * d / (2.0 * bw * bw));
    CHECK(std::abs(mmd(sample_of({x}), sample_of({y}), bw) - expected) <=
          1e-10);
  }

  CHECK_THROWS(mmd(sample_of({}), sample_of({1.0})));
  CHECK_THROWS(mmd(sample_of({1.0}), sample_of({2.0}), 0.0));
}

TEST_CASE("mmd separates distributions monotonically in distance") {
  Rng rng(7);
  std::vector<double> base(500);
  for (double& x : base) x = rng.normal();
  std::vector<double> near(500);
  std::vector<double> far(500);
  for (std::size_t i = 0; i < 500; ++i) {
    near[i] = base[i] + 0.5;
    far[i] = base[i] + 5.0;
  }
  const double bw = median_bandwidth(sample_of(base), sample_of(base));
  const double d_near = mmd(sample_of(base), sample_of(near), bw);
  const double d_far = mmd(sample_of(base), sample_of(far), bw);
  CHECK(d_near > 0.0);
  CHECK(d_far > 5.0 * d_near);
}

TEST_CASE("anomaly similarity compares the anomaly subgraphs") {
  const auto make = [](std::uint64_t seed) {
    DynamicBipartiteGraph g(4, 30, 30);
    std::vector<TimedEdge> edges;
    for (std::uint32_t i = 0; i < 30; ++i) {
      edges.push_back(TimedEdge{i, (i * 3) % 30, 0, EdgeLabel::Normal, -1});
    }
    g.merge_snapshot_edges(0, edges);
    AnomalyConfig config;
    config.initial_attackers_u = 2;
    config.initial_attackers_v = 2;
    config.anomaly_percentage = 0.4;
    config.burstiness = 2;
    config.window_start = 0;
    config.window_end = 1;
    return inject(g, config, seed);
  };
  const InjectionResult a = make(1);
  const InjectionResult b = make(2);
  const double self =
      anomaly_similarity(a.graph, a.ledger, a.graph, a.ledger);
  CHECK(self <= 1e-12);
  const double cross =
      anomaly_similarity(a.graph, a.ledger, b.graph, b.ledger);
  CHECK(cross >= 0.0);

  AnomalyLedger empty;
  CHECK_THROWS(anomaly_similarity(a.graph, empty, b.graph, b.ledger));
}

TEST_CASE("attribute similarity: identity, separation, and categories") {
  TabularDataset a;
  TabularDataset b;
  TabularDataset far;
  Rng rng(3);
  std::vector<double> xa(2000);
  std::vector<double> xb(2000);
  std::vector<double> xf(2000);
  for (std::size_t i = 0; i < xa.size(); ++i) {
    xa[i] = rng.normal();
    xb[i] = rng.normal();       // same law, different draws
    xf[i] = rng.normal() + 8.0; // disjoint law
  }
  a.columns.push_back(num_col("x", xa));
  b.columns.push_back(num_col("x", xb));
  far.columns.push_back(num_col("x", xf));

  const AttributeSimilarity self = attribute_similarity(a, a);
  CHECK(self.mean <= 1e-12);
  const AttributeSimilarity close = attribute_similarity(a, b);
  const AttributeSimilarity apart = attribute_similarity(a, far);
  CHECK(apart.mean > 10.0 * close.mean);

  // Categorical columns score total-variation distance.
  TabularDataset ca;
  TabularDataset cb;
  ca.columns.push_back(cat_col("c", {"a", "a", "b", "b"}));
  cb.columns.push_back(cat_col("c", {"a", "b", "b", "b"}));
  const AttributeSimilarity tv = attribute_similarity(ca, cb);
  REQUIRE(tv.columns.size() == 1);
  CHECK(tv.columns[0].categorical);
  CHECK(tv.columns[0].score == doctest::Approx(0.25));

  TabularDataset disjoint;
  disjoint.columns.push_back(cat_col("c", {"x", "x", "y", "y"}));
  CHECK(attribute_similarity(ca, disjoint).mean == doctest::Approx(1.0));

  // Mixed schema: the mean runs over every column score.
  TabularDataset ma = a;
  ma.columns.push_back(cat_col("c", std::vector<std::string>(2000, "k")));
  TabularDataset mb = b;
  mb.columns.push_back(cat_col("c", std::vector<std::string>(2000, "k")));
  const AttributeSimilarity mixed = attribute_similarity(ma, mb);
  REQUIRE(mixed.columns.size() == 2);
  CHECK(mixed.mean == doctest::Approx((mixed.columns[0].score +
                                       mixed.columns[1].score) /
                                      2.0));

  TabularDataset renamed;
  renamed.columns.push_back(num_col("y", xa));
  CHECK_THROWS_AS(attribute_similarity(a, renamed), ValidationError);
}

TEST_CASE("er baseline spreads edges uniformly and deterministically") {
  const auto g = er_baseline(100, 80, 60000, 6, 9);
  CHECK(g.t_total() == 6);
  CHECK(g.size_u() == 100);
  CHECK(g.size_v() == 80);
  CHECK(g.edge_count() == 60000);
  const auto h = er_baseline(100, 80, 60000, 6, 9);
  CHECK(g.all_edges() == h.all_edges());

  const auto degrees = g.aggregate_degrees(Side::U);
  const double mean = 600.0;
  for (const auto d : degrees) {
    CHECK(static_cast<double>(d) > mean * 0.75);
    CHECK(static_cast<double>(d) < mean * 1.25);
  }
  std::vector<std::int64_t> per_t;
  for (const auto& snap : g.snapshots()) {
    per_t.push_back(static_cast<std::int64_t>(snap.edges.size()));
  }
  const auto [lo, hi] = std::minmax_element(per_t.begin(), per_t.end());
  CHECK(static_cast<double>(*hi - *lo) < 10000.0 * 0.25);

  CHECK_THROWS_AS(er_baseline(0, 1, 10, 1, 1), ValidationError);
}

TEST_CASE("evaluate fills the report and is zero against a relabeled twin") {
  Rng rng(15);
  DynamicBipartiteGraph g(3, 20, 15);
  for (int t = 0; t < 3; ++t) {
    std::vector<TimedEdge> edges;
    for (int i = 0; i < 40; ++i) {
      edges.push_back(TimedEdge{static_cast<std::uint32_t>(rng.below(20)),
                                static_cast<std::uint32_t>(rng.below(15)), t,
                                EdgeLabel::Normal, -1});
    }
    g.merge_snapshot_edges(t, edges);
  }

  // Relabeled twin: U indices reversed, V indices rotated.
  DynamicBipartiteGraph h(3, 20, 15);
  for (int t = 0; t < 3; ++t) {
    std::vector<TimedEdge> edges;
    for (const TimedEdge& e : g.snapshot(t).edges) {
      edges.push_back(TimedEdge{19 - e.u, (e.v + 4) % 15, t, e.label, -1});
    }
    h.merge_snapshot_edges(t, edges);
  }

  const EvalReport report = evaluate(g, nullptr, nullptr, h, nullptr, nullptr);
  CHECK(report.degree_mmd_u <= 1e-12);
  CHECK(report.degree_mmd_v <= 1e-12);
  CHECK(report.degree_mmd <= 1e-12);
  CHECK(report.bcc_mmd <= 1e-12);
  CHECK(report.time_mmd <= 1e-12);
  CHECK_FALSE(report.anomaly_mmd.has_value());
  CHECK_FALSE(report.attribute_mmd.has_value());
  CHECK(report.bandwidths.size() == 7);  // degree/bcc per side, three times

  const EvalReport self = evaluate(g, nullptr, nullptr, g, nullptr, nullptr);
  CHECK(self.degree_mmd == 0.0);
  CHECK(self.bcc_mmd == 0.0);
  CHECK(self.time_mmd == 0.0);
}
