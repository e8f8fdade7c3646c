#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "storychart/error.hpp"
#include "storychart/output.hpp"
#include "storychart/unicode.hpp"

namespace storychart::output {

namespace {

std::string num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string text_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open(double width, double height, std::string_view view_box) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" viewBox=\"" + std::string(view_box) +
         "\" font-family=\"sans-serif\">\n";
}

}  // namespace

PlotArea trend_plot_area(double width_px, double height_px) {
  return {60.0, 30.0, width_px - 160.0, height_px - 50.0};
}

std::string render_trend_svg(const corpus::TrendSeries& series, double width_px, double height_px) {
  if (series.segment_count < 2) {
    throw Error(ErrorCode::DegenerateSeries, "trend chart needs at least 2 segments");
  }
  if (series.terms.empty()) {
    throw Error(ErrorCode::DegenerateSeries, "trend chart needs at least one term");
  }
  const PlotArea area = trend_plot_area(width_px, height_px);
  if (area.right <= area.left || area.bottom <= area.top) {
    throw Error(ErrorCode::InvalidArgument, "trend chart canvas is too small");
  }
  std::size_t max_count = 0;
  for (const auto& row : series.counts) {
    for (auto c : row) max_count = std::max(max_count, c);
  }
  const double x_step = (area.right - area.left) / static_cast<double>(series.segment_count - 1);
  auto x_of = [&](std::size_t s) { return area.left + x_step * static_cast<double>(s); };
  auto y_of = [&](std::size_t c) {
    if (max_count == 0) return area.bottom;
    return area.bottom - (area.bottom - area.top) * static_cast<double>(c) / static_cast<double>(max_count);
  };

  std::string out = svg_open(width_px, height_px,
                             "0 0 " + num(width_px) + " " + num(height_px));
  out += "  <rect x=\"0\" y=\"0\" width=\"" + num(width_px) + "\" height=\"" + num(height_px) +
         "\" fill=\"#ffffff\"/>\n";
  out += "  <g stroke=\"#333333\" stroke-width=\"1\">\n";
  out += "    <line x1=\"" + num(area.left) + "\" y1=\"" + num(area.bottom) + "\" x2=\"" +
         num(area.right) + "\" y2=\"" + num(area.bottom) + "\"/>\n";
  out += "    <line x1=\"" + num(area.left) + "\" y1=\"" + num(area.top) + "\" x2=\"" +
         num(area.left) + "\" y2=\"" + num(area.bottom) + "\"/>\n";
  for (std::size_t s = 0; s < series.segment_count; ++s) {
    out += "    <line x1=\"" + num(x_of(s)) + "\" y1=\"" + num(area.bottom) + "\" x2=\"" +
           num(x_of(s)) + "\" y2=\"" + num(area.bottom + 5) + "\"/>\n";
  }
  out += "  </g>\n";
  out += "  <g font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">\n";
  for (std::size_t s = 0; s < series.segment_count; ++s) {
    out += "    <text x=\"" + num(x_of(s)) + "\" y=\"" + num(area.bottom + 18) + "\">" +
           std::to_string(s + 1) + "</text>\n";
  }
  out += "    <text x=\"" + num((area.left + area.right) / 2) + "\" y=\"" + num(area.bottom + 38) +
         "\">segment</text>\n";
  out += "  </g>\n";
  out += "  <g font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">\n";
  out += "    <text x=\"" + num(area.left - 8) + "\" y=\"" + num(area.bottom + 4) + "\">0</text>\n";
  out += "    <text x=\"" + num(area.left - 8) + "\" y=\"" + num(area.top + 4) + "\">" +
         std::to_string(max_count) + "</text>\n";
  out += "  </g>\n";

  for (std::size_t t = 0; t < series.terms.size(); ++t) {
    out += "  <polyline fill=\"none\" stroke=\"" + std::string(palette_color(t)) +
           "\" stroke-width=\"2\" points=\"";
    for (std::size_t s = 0; s < series.segment_count; ++s) {
      if (s > 0) out += ' ';
      out += num(x_of(s)) + "," + num(y_of(series.counts[t][s]));
    }
    out += "\"/>\n";
  }

  out += "  <g font-size=\"12\">\n";
  for (std::size_t t = 0; t < series.terms.size(); ++t) {
    const double y = area.top + 20.0 * static_cast<double>(t);
    out += "    <line x1=\"" + num(area.right + 15) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(area.right + 35) + "\" y2=\"" + num(y) + "\" stroke=\"" +
           std::string(palette_color(t)) + "\" stroke-width=\"2\"/>\n";
    out += "    <text x=\"" + num(area.right + 40) + "\" y=\"" + num(y + 4) + "\">" +
           text_escape(series.terms[t]) + "</text>\n";
  }
  out += "  </g>\n</svg>\n";
  return out;
}

bool PlacedWord::intersects(const PlacedWord& o) const {
  return x < o.x + o.width && o.x < x + width && y < o.y + o.height && o.y < y + height;
}

double wordcloud_font_size(std::size_t count, std::size_t max_count) {
  return 12.0 + 52.0 * std::sqrt(static_cast<double>(count) / static_cast<double>(max_count));
}

std::vector<PlacedWord> layout_wordcloud(const corpus::FrequencyTable& table, std::size_t top_n,
                                         std::uint64_t seed) {
  if (table.entries.empty()) throw Error(ErrorCode::EmptyTable, "word cloud needs a non-empty table");
  if (top_n == 0) throw Error(ErrorCode::InvalidArgument, "word cloud needs top_n >= 1");

  auto ranked = table.ranked();
  if (ranked.size() > top_n) ranked.resize(top_n);
  const std::size_t max_count = ranked.front().second;

  constexpr double kCharWidth = 0.6;   // em
  constexpr double kPadding = 2.0;     // px
  constexpr double kTurnSpacing = 6.0; // px between spiral arms
  constexpr double kAngleStep = 0.05;  // rad

  factors::SplitMix64 rng(seed);
  std::vector<PlacedWord> placed;
  placed.reserve(ranked.size());
  for (const auto& [term, count] : ranked) {
    PlacedWord word;
    word.term = term;
    word.count = count;
    word.font_size = wordcloud_font_size(count, max_count);
    word.width = kCharWidth * word.font_size * static_cast<double>(unicode::length(term)) + 2 * kPadding;
    word.height = word.font_size + 2 * kPadding;

    const double phase = rng.uniform() * 2.0 * std::numbers::pi;
    for (std::size_t step = 0;; ++step) {
      const double theta = kAngleStep * static_cast<double>(step);
      const double radius = kTurnSpacing * theta / (2.0 * std::numbers::pi);
      word.x = radius * std::cos(theta + phase) - word.width / 2.0;
      word.y = radius * std::sin(theta + phase) - word.height / 2.0;
      const bool clash = std::any_of(placed.begin(), placed.end(),
                                     [&](const PlacedWord& other) { return word.intersects(other); });
      if (!clash) break;
    }
    placed.push_back(std::move(word));
  }
  return placed;
}

std::string render_wordcloud_svg(const corpus::FrequencyTable& table, std::size_t top_n,
                                 std::uint64_t seed) {
  const auto words = layout_wordcloud(table, top_n, seed);
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  for (const auto& w : words) {
    min_x = std::min(min_x, w.x);
    min_y = std::min(min_y, w.y);
    max_x = std::max(max_x, w.x + w.width);
    max_y = std::max(max_y, w.y + w.height);
  }
  constexpr double kMargin = 10.0;
  min_x -= kMargin;
  min_y -= kMargin;
  const double width = max_x - min_x + kMargin;
  const double height = max_y - min_y + kMargin;

  std::string out = svg_open(width, height,
                             num(min_x) + " " + num(min_y) + " " + num(width) + " " + num(height));
  out += "  <rect x=\"" + num(min_x) + "\" y=\"" + num(min_y) + "\" width=\"" + num(width) +
         "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
  out += "  <g text-anchor=\"middle\" dominant-baseline=\"central\">\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    out += "    <text x=\"" + num(w.x + w.width / 2) + "\" y=\"" + num(w.y + w.height / 2) +
           "\" font-size=\"" + num(w.font_size) + "\" fill=\"" + std::string(palette_color(i)) +
           "\">" + text_escape(w.term) + "</text>\n";
  }
  out += "  </g>\n</svg>\n";
  return out;
}

}  // namespace storychart::output
