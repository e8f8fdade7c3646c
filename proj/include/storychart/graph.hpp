#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "storychart/corpus.hpp"
#include "storychart/entities.hpp"

namespace storychart::graph {

using NodeId = std::size_t;

struct Node {
  NodeId id = 0;
  std::string label;
  std::size_t weight = 1;  // reference count

  bool operator==(const Node&) const = default;
};

/// Weighted undirected simple graph. Node ids are dense and follow insertion order.
class CooccurrenceGraph {
 public:
  NodeId add_node(std::string label, std::size_t weight);
  /// Adds `w` to the weight of edge {u, v}. Self-loops are rejected.
  void add_edge_weight(NodeId u, NodeId v, std::size_t w = 1);

  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  /// Keyed by (min, max).
  const std::map<std::pair<NodeId, NodeId>, std::size_t>& edges() const { return edges_; }
  /// Neighbours of `u` in ascending id order with edge weights.
  const std::vector<std::pair<NodeId, std::size_t>>& neighbors(NodeId u) const {
    return adjacency_.at(u);
  }

  std::size_t weight(NodeId u, NodeId v) const;
  std::size_t degree(NodeId u) const { return adjacency_.at(u).size(); }
  std::size_t strength(NodeId u) const;
  std::size_t total_weight() const { return total_weight_; }

  bool operator==(const CooccurrenceGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> edges_;
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adjacency_;
  std::size_t total_weight_ = 0;
};

struct CooccurrenceUnit {
  enum class Kind { Sentence, Window };
  Kind kind = Kind::Sentence;
  std::size_t window = 50;  // tokens, used when kind == Window

  static CooccurrenceUnit sentence() { return {}; }
  static CooccurrenceUnit tokens(std::size_t w) { return {Kind::Window, w}; }
  /// "sentence" or "window:<W>".
  static CooccurrenceUnit parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const CooccurrenceUnit&) const = default;
};

/// Node i corresponds to entities[i]. Sentence unit: a pair counts at most once
/// per sentence. Window unit: every unordered mention pair of distinct entities
/// whose first tokens are at most W tokens apart counts once.
CooccurrenceGraph build_cooccurrence_graph(std::span<const entities::Entity> entities,
                                           const corpus::Document& doc,
                                           const CooccurrenceUnit& unit = {});

enum class PathMode { Unweighted, Weighted };

std::string_view to_string(PathMode mode);
PathMode parse_path_mode(std::string_view text);

struct CentralityScores {
  std::vector<double> values;  // normalized, indexed by node id
  PathMode mode = PathMode::Unweighted;

  bool operator==(const CentralityScores&) const = default;
};

/// Brandes accumulation. Weighted mode uses edge length 1/w. Scores are divided
/// by (n-1)(n-2)/2 so they lie in [0, 1]; all zero when n <= 2.
CentralityScores betweenness_centrality(const CooccurrenceGraph& graph,
                                        PathMode mode = PathMode::Unweighted);

/// Weighted Newman modularity. Throws EmptyGraph when the graph has no edges.
double modularity(const CooccurrenceGraph& graph, std::span<const std::size_t> partition);

struct CommunityAssignment {
  std::vector<std::size_t> community;  // node id -> community id
  std::size_t community_count = 0;
  double modularity_q = 0.0;
  // Modularity after every local-moving pass, in order.
  std::vector<double> pass_modularity;

  bool operator==(const CommunityAssignment& other) const {
    return community == other.community && community_count == other.community_count;
  }
};

/// Renumbers labels 0..C-1 in order of each community's smallest member.
std::vector<std::size_t> relabel_communities(std::span<const std::size_t> partition);

/// Deterministic Louvain. Throws EmptyGraph.
CommunityAssignment louvain(const CooccurrenceGraph& graph);

}  // namespace storychart::graph
