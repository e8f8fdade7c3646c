#include <array>
#include <cmath>
#include <cstdio>

#include "storychart/output.hpp"

namespace storychart::output {

namespace {

constexpr std::array<std::string_view, 12> kPalette = {
    "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
    "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928"};

std::string fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string_view palette_color(std::size_t index) { return kPalette[index % kPalette.size()]; }

std::string export_dot(const AnnotatedGraph& annotated) {
  const auto& g = annotated.graph;
  std::string out = "graph storychart {\n";
  out += "  node [shape=circle, style=filled, fixedsize=true, fontname=\"sans-serif\", "
         "fillcolor=\"#dddddd\"];\n";
  out += "  edge [color=\"#555555\"];\n";
  for (const auto& node : g.nodes()) {
    out += "  n" + std::to_string(node.id) + " [label=" + dot_quote(node.label) +
           ", width=" + fixed2(0.3 * std::sqrt(static_cast<double>(node.weight)));
    if (annotated.communities) {
      out += ", fillcolor=\"" +
             std::string(palette_color(annotated.communities->community.at(node.id))) + "\"";
    }
    if (annotated.centrality) {
      out += ", betweenness=\"" + format_double(annotated.centrality->values.at(node.id)) + "\"";
    }
    out += "];\n";
  }
  for (const auto& [edge, w] : g.edges()) {
    out += "  n" + std::to_string(edge.first) + " -- n" + std::to_string(edge.second) +
           " [penwidth=" + fixed2(std::sqrt(static_cast<double>(w))) +
           ", weight=" + std::to_string(w) + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace storychart::output
