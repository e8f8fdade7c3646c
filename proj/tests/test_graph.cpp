#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "storychart/graph.hpp"
#include "storychart/unicode.hpp"
#include "test_util.hpp"

using namespace storychart;
using namespace storychart::graph;

namespace {

// One entity per name, with a mention at every occurrence of the name.
std::vector<entities::Entity> entities_by_name(const corpus::Document& doc,
                                               const std::vector<std::string>& names) {
  std::vector<entities::Entity> out;
  for (const auto& name : names) {
    entities::Entity e;
    e.canonical = name;
    e.aliases = {name};
    const auto needle = unicode::decode_utf8(name);
    for (std::size_t pos = doc.text().find(needle); pos != std::u32string::npos;
         pos = doc.text().find(needle, pos + 1)) {
      entities::EntityMention m;
      m.surface = name;
      m.span = {pos, pos + needle.size()};
      m.sentence_index = doc.sentence_containing(m.span).value();
      e.mentions.push_back(m);
    }
    e.reference_count = e.mentions.size();
    out.push_back(e);
  }
  return out;
}

CooccurrenceGraph two_triangles() {
  return oracle::make_graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

CooccurrenceGraph three_cliques() {
  std::vector<oracle::EdgeSpec> edges;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) edges.push_back({4 * c + i, 4 * c + j, 1});
    }
  }
  edges.push_back({3, 4, 1});
  edges.push_back({7, 8, 1});
  edges.push_back({11, 0, 1});
  return oracle::make_graph(12, edges);
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("graph container rules") {
  CooccurrenceGraph g;
  CHECK(error_of([&] { g.add_node("zero", 0); }) == ErrorCode::InvalidArgument);
  const auto a = g.add_node("a", 2);
  const auto b = g.add_node("b", 1);
  CHECK(error_of([&] { g.add_edge_weight(a, a); }) == ErrorCode::InvalidArgument);
  g.add_edge_weight(b, a, 2);
  g.add_edge_weight(a, b, 1);
  CHECK(g.weight(a, b) == 3);
  CHECK(g.weight(b, a) == 3);
  CHECK(g.total_weight() == 3);
  CHECK(g.strength(a) == 3);
  CHECK(g.degree(b) == 1);
}

TEST_CASE("sentence co-occurrence example") {
  const auto doc = corpus::load_document("Ana viu Bruno. Ana, Bruno, Carla. Ana saiu.", 1);
  const auto ents = entities_by_name(doc, {"Ana", "Bruno", "Carla"});
  const auto g = build_cooccurrence_graph(ents, doc);
  CHECK(g.nodes()[0].weight == 3);
  CHECK(g.nodes()[1].weight == 2);
  CHECK(g.nodes()[2].weight == 1);
  CHECK(g.weight(0, 1) == 2);
  CHECK(g.weight(0, 2) == 1);
  CHECK(g.weight(1, 2) == 1);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> expected(
      oracle::sentence_pair_counts(ents, doc));
  CHECK(g.edges() == expected);
}

TEST_CASE("a pair counts once per sentence") {
  const auto doc = corpus::load_document("Ana viu Ana e Bruno.", 1);
  const auto g = build_cooccurrence_graph(entities_by_name(doc, {"Ana", "Bruno"}), doc);
  CHECK(g.weight(0, 1) == 1);
  const auto apart = corpus::load_document("Ana saiu. Bruno ficou.", 1);
  CHECK(build_cooccurrence_graph(entities_by_name(apart, {"Ana", "Bruno"}), apart).edges().empty());
}

TEST_CASE("window co-occurrence counts mention pairs within W tokens") {
  const auto doc = corpus::load_document("Ana um dois Bruno tres quatro cinco Carla. Ana fim", 1);
  const auto ents = entities_by_name(doc, {"Ana", "Bruno", "Carla"});
  // Token positions: Ana 0, Bruno 3, Carla 7, Ana 9.
  const auto g3 = build_cooccurrence_graph(ents, doc, CooccurrenceUnit::tokens(3));
  CHECK(g3.weight(0, 1) == 1);
  CHECK(g3.weight(1, 2) == 0);
  CHECK(g3.weight(0, 2) == 1);
  const auto g4 = build_cooccurrence_graph(ents, doc, CooccurrenceUnit::tokens(4));
  CHECK(g4.weight(1, 2) == 1);
  CHECK(g4.weight(0, 2) == 1);
  const auto g7 = build_cooccurrence_graph(ents, doc, CooccurrenceUnit::tokens(7));
  CHECK(g7.weight(0, 2) == 2);
  CHECK(g7.weight(0, 1) == 2);
}

TEST_CASE("unit and mode parsing") {
  CHECK(CooccurrenceUnit::parse("sentence") == CooccurrenceUnit::sentence());
  CHECK(CooccurrenceUnit::parse("window:12") == CooccurrenceUnit::tokens(12));
  CHECK(CooccurrenceUnit::tokens(12).to_string() == "window:12");
  CHECK(error_of([] { CooccurrenceUnit::parse("paragraph"); }) == ErrorCode::ConfigError);
  CHECK(error_of([] { CooccurrenceUnit::parse("window:0"); }) == ErrorCode::ConfigError);
  CHECK(parse_path_mode("weighted") == PathMode::Weighted);
  CHECK(error_of([] { parse_path_mode("fast"); }) == ErrorCode::ConfigError);
}

TEST_CASE("betweenness on small fixtures") {
  const auto path = betweenness_centrality(oracle::make_graph(3, {{0, 1, 1}, {1, 2, 1}}));
  CHECK(path.values == std::vector<double>{0.0, 1.0, 0.0});
  const auto star = betweenness_centrality(oracle::make_graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}));
  CHECK(star.values == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  const auto cycle =
      betweenness_centrality(oracle::make_graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}));
  for (double v : cycle.values) CHECK(v == doctest::Approx(0.5 / 3).epsilon(1e-12));
  CHECK(betweenness_centrality(oracle::make_graph(2, {{0, 1, 1}})).values ==
        std::vector<double>{0.0, 0.0});
  CHECK(betweenness_centrality(oracle::make_graph(1, {})).values == std::vector<double>{0.0});
}

TEST_CASE("weighted betweenness prefers strong ties") {
  // Direct edge 0-2 has length 1, the detour through 1 has length 1/4 + 1/4.
  const auto g = oracle::make_graph(3, {{0, 1, 4}, {1, 2, 4}, {0, 2, 1}});
  CHECK(betweenness_centrality(g, PathMode::Unweighted).values[1] == 0.0);
  CHECK(betweenness_centrality(g, PathMode::Weighted).values[1] == 1.0);
}

TEST_CASE("betweenness matches path enumeration on random graphs") {
  factors::SplitMix64 rng(11);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 1 + rng.next() % 7;
    const auto g = oracle::random_connected_graph(rng, n, 0.35, 3);
    for (bool weighted : {false, true}) {
      const auto scores = betweenness_centrality(g, weighted ? PathMode::Weighted : PathMode::Unweighted);
      const auto expected = oracle::brute_force_betweenness(g, weighted);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK(std::abs(scores.values[v] - expected[v]) <= 1e-9);
        CHECK(scores.values[v] >= 0.0);
        CHECK(scores.values[v] <= 1.0);
      }
    }
  }
}

TEST_CASE("betweenness on disconnected graphs ignores unreachable pairs") {
  const auto g = oracle::make_graph(5, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}});
  const auto scores = betweenness_centrality(g);
  CHECK(scores.values[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(scores.values[3] == 0.0);
}

TEST_CASE("on trees raw betweenness counts the pairs separated by a vertex") {
  factors::SplitMix64 rng(5);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 3 + rng.next() % 20;
    const auto tree = oracle::random_connected_graph(rng, n, 0.0, 1);
    const auto scores = betweenness_centrality(tree);
    const double norm = static_cast<double>((n - 1) * (n - 2)) / 2.0;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> sizes;
      std::vector<bool> seen(n, false);
      seen[v] = true;
      for (const auto& [start, w] : tree.neighbors(v)) {
        std::size_t size = 0;
        std::vector<std::size_t> stack{start};
        seen[start] = true;
        while (!stack.empty()) {
          const auto at = stack.back();
          stack.pop_back();
          ++size;
          for (const auto& [next, w2] : tree.neighbors(at)) {
            if (!seen[next]) {
              seen[next] = true;
              stack.push_back(next);
            }
          }
        }
        sizes.push_back(size);
      }
      std::size_t sum = 0, squares = 0;
      for (auto s : sizes) {
        sum += s;
        squares += s * s;
      }
      const double pairs = static_cast<double>(sum * sum - squares) / 2.0;
      CHECK(std::abs(scores.values[v] * norm - pairs) <= 1e-9);
    }
  }
}

TEST_CASE("modularity examples") {
  const auto edge = oracle::make_graph(2, {{0, 1, 1}});
  CHECK(modularity(edge, std::vector<std::size_t>{0, 0}) == 0.0);
  CHECK(modularity(edge, std::vector<std::size_t>{0, 1}) == -0.5);
  const auto q = modularity(two_triangles(), std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(std::abs(q - 5.0 / 14.0) <= 1e-12);
  CHECK(std::abs(oracle::exhaustive_best_modularity(two_triangles()) - 5.0 / 14.0) <= 1e-12);
  CHECK(error_of([] { modularity(oracle::make_graph(2, {}), std::vector<std::size_t>{0, 0}); }) ==
        ErrorCode::EmptyGraph);
}

TEST_CASE("modularity agrees with the definition and stays within bounds") {
  factors::SplitMix64 rng(21);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng.next() % 9;
    const auto g = oracle::random_connected_graph(rng, n, 0.3, 4);
    std::vector<std::size_t> partition(n);
    for (auto& c : partition) c = rng.next() % n;
    const double q = modularity(g, partition);
    CHECK(std::abs(q - oracle::modularity_by_definition(g, partition)) <= 1e-12);
    CHECK(q >= -0.5);
    CHECK(q <= 1.0);
  }
}

TEST_CASE("louvain examples") {
  const auto single = louvain(oracle::make_graph(2, {{0, 1, 1}}));
  CHECK(single.community == std::vector<std::size_t>{0, 0});
  CHECK(single.modularity_q == 0.0);

  const auto tri = louvain(two_triangles());
  CHECK(tri.community == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(std::abs(tri.modularity_q - 5.0 / 14.0) <= 1e-9);

  const auto cliques = louvain(three_cliques());
  CHECK(cliques.community == std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2});
  CHECK(cliques.community_count == 3);

  CHECK(error_of([] { louvain(oracle::make_graph(3, {})); }) == ErrorCode::EmptyGraph);
}

TEST_CASE("relabelling orders communities by smallest member") {
  CHECK(relabel_communities(std::vector<std::size_t>{7, 3, 7, 9, 3}) ==
        std::vector<std::size_t>{0, 1, 0, 2, 1});
}

TEST_CASE("louvain properties on random graphs") {
  factors::SplitMix64 rng(99);
  for (int round = 0; round < 80; ++round) {
    const std::size_t n = 2 + rng.next() % 25;
    const auto g = oracle::random_connected_graph(rng, n, 0.15, 5);
    const auto result = louvain(g);
    REQUIRE(result.community.size() == n);

    CHECK(std::abs(result.modularity_q - modularity(g, result.community)) <= 1e-9);
    CHECK(result.community == relabel_communities(result.community));
    CHECK(louvain(g) == result);
    for (std::size_t i = 1; i < result.pass_modularity.size(); ++i) {
      CHECK(result.pass_modularity[i] >= result.pass_modularity[i - 1]);
    }

    // No single-node move to a neighbouring community or to isolation helps.
    const double q = oracle::modularity_by_definition(g, result.community);
    for (std::size_t v = 0; v < n; ++v) {
      std::set<std::size_t> targets{n + 1};
      for (const auto& [u, w] : g.neighbors(v)) targets.insert(result.community[u]);
      for (auto target : targets) {
        if (target == result.community[v]) continue;
        auto moved = result.community;
        moved[v] = target;
        CHECK(oracle::modularity_by_definition(g, moved) <= q + 1e-10);
      }
    }
  }
}

}
