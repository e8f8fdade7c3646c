#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "storychart/error.hpp"
#include "storychart/graph.hpp"

namespace storychart::graph {

std::string_view to_string(PathMode mode) {
  return mode == PathMode::Weighted ? "weighted" : "unweighted";
}

PathMode parse_path_mode(std::string_view text) {
  if (text == "unweighted") return PathMode::Unweighted;
  if (text == "weighted") return PathMode::Weighted;
  throw Error(ErrorCode::ConfigError,
              "betweenness mode must be \"unweighted\" or \"weighted\", got \"" + std::string(text) + "\"");
}

namespace {

// Single-source shortest paths for Brandes: fills the settle order, the
// predecessor lists and the path counts.
struct SourceState {
  std::vector<NodeId> order;
  std::vector<std::vector<NodeId>> preds;
  std::vector<double> sigma;
  std::vector<double> dist;

  explicit SourceState(std::size_t n)
      : preds(n), sigma(n, 0.0), dist(n, std::numeric_limits<double>::infinity()) {
    order.reserve(n);
  }
};

void bfs_paths(const CooccurrenceGraph& g, NodeId s, SourceState& st) {
  std::queue<NodeId> queue;
  st.dist[s] = 0.0;
  st.sigma[s] = 1.0;
  queue.push(s);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    st.order.push_back(u);
    for (const auto& [v, w] : g.neighbors(u)) {
      if (std::isinf(st.dist[v])) {
        st.dist[v] = st.dist[u] + 1.0;
        queue.push(v);
      }
      if (st.dist[v] == st.dist[u] + 1.0) {
        st.sigma[v] += st.sigma[u];
        st.preds[v].push_back(u);
      }
    }
  }
}

bool same_length(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void dijkstra_paths(const CooccurrenceGraph& g, NodeId s, SourceState& st) {
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<bool> settled(g.node_count(), false);
  st.dist[s] = 0.0;
  st.sigma[s] = 1.0;
  heap.push({0.0, s});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > st.dist[u]) continue;
    settled[u] = true;
    st.order.push_back(u);
    for (const auto& [v, w] : g.neighbors(u)) {
      if (settled[v]) continue;
      const double candidate = st.dist[u] + 1.0 / static_cast<double>(w);
      if (std::isinf(st.dist[v]) || (candidate < st.dist[v] && !same_length(candidate, st.dist[v]))) {
        st.dist[v] = candidate;
        st.sigma[v] = st.sigma[u];
        st.preds[v].assign(1, u);
        heap.push({candidate, v});
      } else if (same_length(candidate, st.dist[v])) {
        st.sigma[v] += st.sigma[u];
        st.preds[v].push_back(u);
      }
    }
  }
}

}  // namespace

CentralityScores betweenness_centrality(const CooccurrenceGraph& graph, PathMode mode) {
  const std::size_t n = graph.node_count();
  CentralityScores scores;
  scores.mode = mode;
  scores.values.assign(n, 0.0);
  if (n <= 2) return scores;

  std::vector<double> raw(n, 0.0);
  std::vector<double> delta(n);
  for (NodeId s = 0; s < n; ++s) {
    SourceState st(n);
    if (mode == PathMode::Weighted) {
      dijkstra_paths(graph, s, st);
    } else {
      bfs_paths(graph, s, st);
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = st.order.rbegin(); it != st.order.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : st.preds[w]) delta[v] += st.sigma[v] / st.sigma[w] * (1.0 + delta[w]);
      if (w != s) raw[w] += delta[w];
    }
  }
  // Every unordered pair was visited from both ends.
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (NodeId v = 0; v < n; ++v) {
    scores.values[v] = std::clamp(raw[v] / 2.0 / pairs, 0.0, 1.0);
  }
  return scores;
}

}  // namespace storychart::graph
