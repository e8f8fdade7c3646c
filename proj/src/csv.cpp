#include <charconv>
#include <cmath>

#include "storychart/error.hpp"
#include "storychart/output.hpp"

namespace storychart::output {

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

void append_row(std::string& out, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(row[i]);
  }
  out += '\n';
}

}  // namespace

std::string write_csv(const CsvRow& header, std::span<const CsvRow> rows) {
  std::string out;
  append_row(out, header);
  for (const auto& row : rows) append_row(out, row);
  return out;
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw Error(ErrorCode::ParseError, "CSV: text after closing quote");
        }
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
      ++i;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      ++i;
    } else if (c == '\n' || c == '\r') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      rows.push_back(std::move(row));
      row.clear();
      i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
    } else {
      field += c;
      field_started = true;
      ++i;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "CSV: unterminated quoted field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string frequencies_csv(const corpus::FrequencyTable& table, std::size_t top) {
  std::vector<CsvRow> rows;
  for (const auto& [term, count] : table.ranked()) {
    if (top != 0 && rows.size() == top) break;
    rows.push_back({term, std::to_string(count)});
  }
  return write_csv({"term", "count"}, rows);
}

std::string trends_csv(const corpus::TrendSeries& series) {
  CsvRow header{"term"};
  for (std::size_t s = 0; s < series.segment_count; ++s) header.push_back("s" + std::to_string(s));
  std::vector<CsvRow> rows;
  for (std::size_t t = 0; t < series.terms.size(); ++t) {
    CsvRow row{series.terms[t]};
    for (auto c : series.counts[t]) row.push_back(std::to_string(c));
    rows.push_back(std::move(row));
  }
  return write_csv(header, rows);
}

std::string centrality_csv(const graph::CooccurrenceGraph& g, const graph::CentralityScores& scores) {
  std::vector<CsvRow> rows;
  for (const auto& node : g.nodes()) {
    rows.push_back({std::to_string(node.id), node.label, format_double(scores.values.at(node.id))});
  }
  return write_csv({"id", "label", "betweenness"}, rows);
}

std::string communities_csv(const graph::CooccurrenceGraph& g,
                            const graph::CommunityAssignment& communities) {
  std::vector<CsvRow> rows;
  for (const auto& node : g.nodes()) {
    rows.push_back({std::to_string(node.id), node.label,
                    std::to_string(communities.community.at(node.id))});
  }
  return write_csv({"id", "label", "community"}, rows);
}

std::string clusters_csv(std::span<const std::string> labels,
                         const factors::ClusterAssignment& clusters) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rows.push_back({std::to_string(i), labels[i], std::to_string(clusters.cluster.at(i))});
  }
  return write_csv({"id", "label", "cluster"}, rows);
}

std::string factor_scores_csv(std::span<const std::string> labels, const factors::FactorModel& model) {
  CsvRow header{"id", "label"};
  for (Eigen::Index j = 0; j < model.scores.cols(); ++j) {
    header.push_back("factor_" + std::to_string(j + 1));
  }
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CsvRow row{std::to_string(i), labels[i]};
    for (Eigen::Index j = 0; j < model.scores.cols(); ++j) {
      row.push_back(format_double(model.scores(static_cast<Eigen::Index>(i), j)));
    }
    rows.push_back(std::move(row));
  }
  return write_csv(header, rows);
}

}  // namespace storychart::output
