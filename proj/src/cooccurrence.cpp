#include <algorithm>
#include <charconv>
#include <set>

#include "storychart/error.hpp"
#include "storychart/graph.hpp"

namespace storychart::graph {

NodeId CooccurrenceGraph::add_node(std::string label, std::size_t weight) {
  if (weight == 0) {
    throw Error(ErrorCode::InvalidArgument, "node \"" + label + "\" must have weight >= 1");
  }
  const NodeId id = nodes_.size();
  nodes_.push_back({id, std::move(label), weight});
  adjacency_.emplace_back();
  return id;
}

void CooccurrenceGraph::add_edge_weight(NodeId u, NodeId v, std::size_t w) {
  if (u >= nodes_.size() || v >= nodes_.size()) {
    throw Error(ErrorCode::OutOfBounds, "edge endpoint is not a node");
  }
  if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loops are not allowed");
  if (w == 0) return;
  const auto key = std::minmax(u, v);
  const bool fresh = !edges_.contains(key);
  edges_[key] += w;
  total_weight_ += w;

  auto bump = [&](NodeId from, NodeId to) {
    auto& adj = adjacency_[from];
    auto it = std::lower_bound(adj.begin(), adj.end(), to,
                               [](const auto& p, NodeId id) { return p.first < id; });
    if (fresh) {
      adj.insert(it, {to, w});
    } else {
      it->second += w;
    }
  };
  bump(u, v);
  bump(v, u);
}

std::size_t CooccurrenceGraph::weight(NodeId u, NodeId v) const {
  auto it = edges_.find(std::minmax(u, v));
  return it == edges_.end() ? 0 : it->second;
}

std::size_t CooccurrenceGraph::strength(NodeId u) const {
  std::size_t total = 0;
  for (const auto& [v, w] : adjacency_.at(u)) total += w;
  return total;
}

CooccurrenceUnit CooccurrenceUnit::parse(std::string_view text) {
  if (text == "sentence") return sentence();
  constexpr std::string_view prefix = "window:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::size_t w = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), w);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && w >= 1) return tokens(w);
  }
  throw Error(ErrorCode::ConfigError, "co-occurrence unit must be \"sentence\" or \"window:<W>\", got \"" +
                                          std::string(text) + "\"");
}

std::string CooccurrenceUnit::to_string() const {
  return kind == Kind::Sentence ? "sentence" : "window:" + std::to_string(window);
}

CooccurrenceGraph build_cooccurrence_graph(std::span<const entities::Entity> entities,
                                           const corpus::Document& doc,
                                           const CooccurrenceUnit& unit) {
  CooccurrenceGraph graph;
  for (const auto& e : entities) graph.add_node(e.canonical, e.reference_count);

  if (unit.kind == CooccurrenceUnit::Kind::Sentence) {
    std::map<std::size_t, std::set<NodeId>> present;
    for (NodeId id = 0; id < entities.size(); ++id) {
      for (const auto& m : entities[id].mentions) present[m.sentence_index].insert(id);
    }
    for (const auto& [sentence, ids] : present) {
      for (auto a = ids.begin(); a != ids.end(); ++a) {
        for (auto b = std::next(a); b != ids.end(); ++b) graph.add_edge_weight(*a, *b);
      }
    }
    return graph;
  }

  struct Located {
    std::size_t token;
    NodeId node;
  };
  std::vector<Located> located;
  for (NodeId id = 0; id < entities.size(); ++id) {
    for (const auto& m : entities[id].mentions) located.push_back({doc.token_at(m.span.start), id});
  }
  std::sort(located.begin(), located.end(), [](const Located& a, const Located& b) {
    return a.token != b.token ? a.token < b.token : a.node < b.node;
  });
  for (std::size_t i = 0; i < located.size(); ++i) {
    for (std::size_t j = i + 1; j < located.size(); ++j) {
      if (located[j].token - located[i].token > unit.window) break;
      if (located[i].node != located[j].node) graph.add_edge_weight(located[i].node, located[j].node);
    }
  }
  return graph;
}

}  // namespace storychart::graph
