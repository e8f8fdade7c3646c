#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "storychart/corpus.hpp"
#include "storychart/entities.hpp"
#include "storychart/factors.hpp"
#include "storychart/graph.hpp"

// Serializers for analysis results. Every function here is deterministic.
namespace storychart::output {

struct AnnotatedGraph {
  graph::CooccurrenceGraph graph;
  std::optional<graph::CentralityScores> centrality;
  std::optional<graph::CommunityAssignment> communities;

  bool operator==(const AnnotatedGraph&) const = default;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// ---- CSV (RFC 4180, LF line endings) ----

using CsvRow = std::vector<std::string>;

std::string csv_field(std::string_view field);
std::string write_csv(const CsvRow& header, std::span<const CsvRow> rows);
/// Header row included. Throws ParseError on malformed quoting.
std::vector<CsvRow> parse_csv(std::string_view text);

/// term,count in ranked order; `top` = 0 keeps every row.
std::string frequencies_csv(const corpus::FrequencyTable& table, std::size_t top = 0);
std::string trends_csv(const corpus::TrendSeries& series);
std::string centrality_csv(const graph::CooccurrenceGraph& g, const graph::CentralityScores& scores);
std::string communities_csv(const graph::CooccurrenceGraph& g,
                            const graph::CommunityAssignment& communities);
std::string clusters_csv(std::span<const std::string> labels,
                         const factors::ClusterAssignment& clusters);
std::string factor_scores_csv(std::span<const std::string> labels, const factors::FactorModel& model);

// ---- graph formats ----

std::string export_graphml(const AnnotatedGraph& graph);
/// Reads documents produced by export_graphml. Throws ParseError.
AnnotatedGraph parse_graphml(std::string_view xml);

std::string export_dot(const AnnotatedGraph& graph);

/// Fill colours indexed by community id modulo 12.
std::string_view palette_color(std::size_t index);

// ---- SVG figures ----

struct PlotArea {
  double left = 0, top = 0, right = 0, bottom = 0;
};

PlotArea trend_plot_area(double width_px, double height_px);

/// One polyline per term; throws DegenerateSeries when there are fewer than two segments.
std::string render_trend_svg(const corpus::TrendSeries& series, double width_px = 800,
                             double height_px = 450);

struct PlacedWord {
  std::string term;
  std::size_t count = 0;
  double font_size = 0;
  // Bounding box, top-left corner plus extent.
  double x = 0, y = 0, width = 0, height = 0;

  bool intersects(const PlacedWord& other) const;
};

double wordcloud_font_size(std::size_t count, std::size_t max_count);

/// Archimedean spiral placement from the canvas centre with box collision
/// rejection. Throws EmptyTable.
std::vector<PlacedWord> layout_wordcloud(const corpus::FrequencyTable& table, std::size_t top_n,
                                         std::uint64_t seed);
std::string render_wordcloud_svg(const corpus::FrequencyTable& table, std::size_t top_n,
                                 std::uint64_t seed);

}  // namespace storychart::output
