#include <algorithm>
#include <limits>
#include <map>

#include "storychart/error.hpp"
#include "storychart/graph.hpp"

namespace storychart::graph {

double modularity(const CooccurrenceGraph& graph, std::span<const std::size_t> partition) {
  if (partition.size() != graph.node_count()) {
    throw Error(ErrorCode::InvalidArgument, "partition must assign every node");
  }
  if (graph.total_weight() == 0) throw Error(ErrorCode::EmptyGraph, "graph has no edges");

  std::map<std::size_t, double> internal;
  std::map<std::size_t, double> degree_sum;
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    degree_sum[partition[u]] += static_cast<double>(graph.strength(u));
  }
  for (const auto& [edge, w] : graph.edges()) {
    if (partition[edge.first] == partition[edge.second]) {
      internal[partition[edge.first]] += static_cast<double>(w);
    }
  }
  const double m = static_cast<double>(graph.total_weight());
  double q = 0.0;
  for (const auto& [c, d] : degree_sum) {
    const double share = d / (2.0 * m);
    q += internal[c] / m - share * share;
  }
  return q;
}

std::vector<std::size_t> relabel_communities(std::span<const std::size_t> partition) {
  std::map<std::size_t, std::size_t> fresh;
  std::vector<std::size_t> out(partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    auto [it, inserted] = fresh.emplace(partition[i], fresh.size());
    out[i] = it->second;
  }
  return out;
}

namespace {

constexpr double kMinGain = 1e-10;

// Weighted graph that may carry self-loops; one per Louvain level.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> strength;
  double m = 0.0;

  std::size_t size() const { return adj.size(); }
};

LevelGraph from_graph(const CooccurrenceGraph& g) {
  LevelGraph level;
  const std::size_t n = g.node_count();
  level.adj.resize(n);
  level.self_loop.assign(n, 0.0);
  level.strength.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (const auto& [v, w] : g.neighbors(u)) {
      level.adj[u].push_back({v, static_cast<double>(w)});
      level.strength[u] += static_cast<double>(w);
    }
  }
  level.m = static_cast<double>(g.total_weight());
  return level;
}

// `community` must be contiguous.
LevelGraph aggregate(const LevelGraph& level, const std::vector<std::size_t>& community) {
  const std::size_t count = *std::max_element(community.begin(), community.end()) + 1;
  LevelGraph next;
  next.m = level.m;
  next.self_loop.assign(count, 0.0);
  next.strength.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> links(count);
  for (std::size_t u = 0; u < level.size(); ++u) {
    const std::size_t cu = community[u];
    next.self_loop[cu] += level.self_loop[u];
    next.strength[cu] += level.strength[u];
    for (const auto& [v, w] : level.adj[u]) {
      const std::size_t cv = community[v];
      if (cu == cv) {
        if (u < v) next.self_loop[cu] += w;
      } else {
        links[cu][cv] += w;
      }
    }
  }
  next.adj.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    next.adj[c].assign(links[c].begin(), links[c].end());
  }
  return next;
}

// Repeated sweeps of single-node moves in ascending node order. Returns true if
// any node changed community.
bool local_moving(const LevelGraph& level, std::vector<std::size_t>& community) {
  const std::size_t n = level.size();
  const double m = level.m;
  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    total[community[u]] += level.strength[u];
    ++members[community[u]];
  }

  auto gain = [&](double links_to, double k, double tot) {
    return links_to / m - k * tot / (2.0 * m * m);
  };

  bool any_move = false;
  for (std::size_t sweep = 0; sweep < 10000; ++sweep) {
    bool moved = false;
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t current = community[u];
      const double k = level.strength[u];
      std::map<std::size_t, double> links;
      for (const auto& [v, w] : level.adj[u]) links[community[v]] += w;

      total[current] -= k;
      --members[current];

      const double stay = gain(links.contains(current) ? links[current] : 0.0, k, total[current]);
      std::size_t best = current;
      double best_gain = -std::numeric_limits<double>::infinity();
      auto consider = [&](std::size_t c, double g) {
        if (g > best_gain || (g == best_gain && c < best)) {
          best = c;
          best_gain = g;
        }
      };
      for (const auto& [c, w] : links) {
        if (c != current) consider(c, gain(w, k, total[c]));
      }
      if (members[current] > 0) {
        const auto empty = std::find(members.begin(), members.end(), 0u);
        if (empty != members.end()) consider(static_cast<std::size_t>(empty - members.begin()), 0.0);
      }

      std::size_t target = current;
      if (best != current && best_gain > stay + kMinGain) target = best;
      community[u] = target;
      total[target] += k;
      ++members[target];
      if (target != current) moved = true;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

}  // namespace

CommunityAssignment louvain(const CooccurrenceGraph& graph) {
  if (graph.total_weight() == 0) throw Error(ErrorCode::EmptyGraph, "graph has no edges");
  const std::size_t n = graph.node_count();
  const LevelGraph base = from_graph(graph);

  CommunityAssignment result;
  std::vector<std::size_t> partition(n);
  for (std::size_t i = 0; i < n; ++i) partition[i] = i;

  // Each round refines the current partition on the original nodes, then runs
  // the usual aggregate-and-move phases. Rounds stop once nothing moves, which
  // leaves the partition locally optimal for single original nodes as well.
  for (std::size_t round = 0; round < 1000; ++round) {
    bool any_move = local_moving(base, partition);
    partition = relabel_communities(partition);
    result.pass_modularity.push_back(modularity(graph, partition));

    std::vector<std::size_t> level_of(partition);
    LevelGraph level = aggregate(base, partition);
    while (true) {
      std::vector<std::size_t> community(level.size());
      for (std::size_t i = 0; i < community.size(); ++i) community[i] = i;
      if (!local_moving(level, community)) break;
      any_move = true;
      community = relabel_communities(community);
      for (std::size_t u = 0; u < n; ++u) {
        level_of[u] = community[level_of[u]];
        partition[u] = level_of[u];
      }
      partition = relabel_communities(partition);
      result.pass_modularity.push_back(modularity(graph, partition));
      level = aggregate(level, community);
    }
    if (!any_move) break;
  }

  result.community = relabel_communities(partition);
  result.community_count =
      n == 0 ? 0 : *std::max_element(result.community.begin(), result.community.end()) + 1;
  result.modularity_q = modularity(graph, result.community);
  return result;
}

}  // namespace storychart::graph
