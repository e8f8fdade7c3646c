#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "storychart/error.hpp"
#include "storychart/output.hpp"

namespace storychart::output {

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string export_graphml(const AnnotatedGraph& annotated) {
  const auto& g = annotated.graph;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  out += "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  out += "  <key id=\"frequency\" for=\"node\" attr.name=\"frequency\" attr.type=\"int\"/>\n";
  if (annotated.centrality) {
    out += "  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n";
    out += "  <key id=\"betweenness_mode\" for=\"graph\" attr.name=\"betweenness_mode\" "
           "attr.type=\"string\"/>\n";
  }
  if (annotated.communities) {
    out += "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
  }
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n";
  out += "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  if (annotated.centrality) {
    out += "    <data key=\"betweenness_mode\">" +
           std::string(graph::to_string(annotated.centrality->mode)) + "</data>\n";
  }
  for (const auto& node : g.nodes()) {
    out += "    <node id=\"n" + std::to_string(node.id) + "\">";
    out += "<data key=\"label\">" + xml_escape(node.label) + "</data>";
    out += "<data key=\"frequency\">" + std::to_string(node.weight) + "</data>";
    if (annotated.centrality) {
      out += "<data key=\"betweenness\">" +
             format_double(annotated.centrality->values.at(node.id)) + "</data>";
    }
    if (annotated.communities) {
      out += "<data key=\"community\">" +
             std::to_string(annotated.communities->community.at(node.id)) + "</data>";
    }
    out += "</node>\n";
  }
  std::size_t edge_id = 0;
  for (const auto& [edge, w] : g.edges()) {
    out += "    <edge id=\"e" + std::to_string(edge_id++) + "\" source=\"n" +
           std::to_string(edge.first) + "\" target=\"n" + std::to_string(edge.second) + "\">";
    out += "<data key=\"weight\">" + std::to_string(w) + "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

namespace {

namespace pt = boost::property_tree;

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "GraphML: bad " + what + " value \"" + text + "\"");
  }
  return value;
}

std::map<std::string, std::string> data_values(const pt::ptree& element) {
  std::map<std::string, std::string> values;
  for (const auto& [name, child] : element) {
    if (name != "data") continue;
    values[child.get<std::string>("<xmlattr>.key")] = child.get_value<std::string>();
  }
  return values;
}

}  // namespace

AnnotatedGraph parse_graphml(std::string_view xml) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::ParseError, std::string("GraphML: ") + e.what());
  }

  AnnotatedGraph result;
  try {
    const auto& root = tree.get_child("graphml");
    std::map<std::string, std::string> key_names;  // key id -> attr.name
    for (const auto& [name, child] : root) {
      if (name == "key") {
        key_names[child.get<std::string>("<xmlattr>.id")] =
            child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'));
      }
    }
    auto named = [&](const std::map<std::string, std::string>& raw) {
      std::map<std::string, std::string> out;
      for (const auto& [key, value] : raw) {
        auto it = key_names.find(key);
        out[it == key_names.end() ? key : it->second] = value;
      }
      return out;
    };

    const auto& graph_node = root.get_child("graph");
    std::map<std::string, graph::NodeId> ids;
    std::vector<double> betweenness;
    std::vector<std::size_t> community;
    bool has_betweenness = true;
    bool has_community = true;
    for (const auto& [name, child] : graph_node) {
      if (name != "node") continue;
      const auto values = named(data_values(child));
      const std::string id = child.get<std::string>("<xmlattr>.id");
      auto label = values.find("label");
      auto freq = values.find("frequency");
      if (label == values.end() || freq == values.end()) {
        throw Error(ErrorCode::ParseError, "GraphML: node " + id + " lacks label or frequency");
      }
      ids[id] = result.graph.add_node(label->second, parse_number<std::size_t>(freq->second, "frequency"));
      if (auto b = values.find("betweenness"); b != values.end()) {
        betweenness.push_back(parse_number<double>(b->second, "betweenness"));
      } else {
        has_betweenness = false;
      }
      if (auto c = values.find("community"); c != values.end()) {
        community.push_back(parse_number<std::size_t>(c->second, "community"));
      } else {
        has_community = false;
      }
    }
    for (const auto& [name, child] : graph_node) {
      if (name != "edge") continue;
      const auto values = named(data_values(child));
      const auto source = ids.find(child.get<std::string>("<xmlattr>.source"));
      const auto target = ids.find(child.get<std::string>("<xmlattr>.target"));
      if (source == ids.end() || target == ids.end()) {
        throw Error(ErrorCode::ParseError, "GraphML: edge refers to an unknown node");
      }
      auto w = values.find("weight");
      const std::size_t weight = w == values.end() ? 1 : parse_number<std::size_t>(w->second, "weight");
      result.graph.add_edge_weight(source->second, target->second, weight);
    }

    const std::size_t n = result.graph.node_count();
    if (has_betweenness && n > 0) {
      const auto graph_values = named(data_values(graph_node));
      auto mode = graph_values.find("betweenness_mode");
      result.centrality = graph::CentralityScores{
          betweenness, mode == graph_values.end() ? graph::PathMode::Unweighted
                                                  : graph::parse_path_mode(mode->second)};
    }
    if (has_community && n > 0) {
      graph::CommunityAssignment assignment;
      assignment.community = community;
      assignment.community_count = *std::max_element(community.begin(), community.end()) + 1;
      if (result.graph.total_weight() > 0) {
        assignment.modularity_q = graph::modularity(result.graph, community);
      }
      result.communities = std::move(assignment);
    }
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::ParseError, std::string("GraphML: ") + e.what());
  }
  return result;
}

}  // namespace storychart::output
