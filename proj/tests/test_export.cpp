#include <doctest.h>

#include <cctype>
#include <regex>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "storychart/output.hpp"
#include "test_util.hpp"

using namespace storychart;
using namespace storychart::output;

namespace {

// Accepts the DOT subset: strict? graph ID { (attr_stmt | node_stmt | edge_stmt) ;? * }
class DotChecker {
 public:
  explicit DotChecker(std::string text) : text_(std::move(text)) {}

  bool valid() {
    try {
      expect_keyword("graph");
      if (peek_id()) id();
      expect('{');
      while (!at('}')) {
        statement();
        if (at(';')) ++pos_;
      }
      expect('}');
      skip();
      return pos_ == text_.size();
    } catch (const std::runtime_error&) {
      return false;
    }
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!at(c)) throw std::runtime_error(std::string("expected ") + c);
    ++pos_;
  }
  bool peek_id() {
    skip();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '"' || c == '_' || c == '.' || c == '-' || std::isalnum(static_cast<unsigned char>(c));
  }
  std::string id() {
    skip();
    if (pos_ >= text_.size()) throw std::runtime_error("eof");
    std::string out;
    if (text_[pos_] == '"') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) throw std::runtime_error("unterminated string");
        const char c = text_[pos_++];
        if (c == '"') break;
        if (c == '\\') {
          if (pos_ >= text_.size()) throw std::runtime_error("dangling escape");
          out += text_[pos_++];
          continue;
        }
        if (c == '\n') throw std::runtime_error("raw newline in string");
        out += c;
      }
      return out;
    }
    if (text_[pos_] == '-' || text_[pos_] == '.' || std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      static const std::regex numeral(R"(^-?(\.[0-9]+|[0-9]+(\.[0-9]*)?))");
      std::smatch m;
      const std::string rest = text_.substr(pos_);
      if (!std::regex_search(rest, m, numeral)) throw std::runtime_error("bad numeral");
      pos_ += static_cast<std::size_t>(m.length(0));
      return m.str(0);
    }
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out += text_[pos_++];
    }
    if (out.empty()) throw std::runtime_error("empty id");
    return out;
  }
  void expect_keyword(const std::string& word) {
    if (id() != word) throw std::runtime_error("expected " + word);
  }
  void attr_list() {
    expect('[');
    while (!at(']')) {
      id();
      expect('=');
      id();
      if (at(',') || at(';')) ++pos_;
    }
    expect(']');
  }
  void statement() {
    const std::string first = id();
    skip();
    if (text_.compare(pos_, 2, "--") == 0) {
      pos_ += 2;
      id();
    } else if (text_.compare(pos_, 2, "->") == 0) {
      throw std::runtime_error("directed edge in undirected graph");
    }
    if (at('[')) attr_list();
    (void)first;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

AnnotatedGraph random_annotated(factors::SplitMix64& rng) {
  const std::size_t n = 1 + rng.next() % 20;
  AnnotatedGraph a;
  for (std::size_t i = 0; i < n; ++i) {
    std::string label = "Nó " + std::to_string(i);
    if (rng.uniform() < 0.3) label += " & <\"aspas\">";
    a.graph.add_node(label, 1 + rng.next() % 50);
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.uniform() < 0.2) a.graph.add_edge_weight(u, v, 1 + rng.next() % 9);
    }
  }
  if (a.graph.total_weight() > 0 && rng.uniform() < 0.7) {
    a.communities = graph::louvain(a.graph);
    a.centrality = graph::betweenness_centrality(
        a.graph, rng.uniform() < 0.5 ? graph::PathMode::Unweighted : graph::PathMode::Weighted);
  }
  return a;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

corpus::FrequencyTable table_of(std::map<std::string, std::size_t> entries) {
  corpus::FrequencyTable t;
  t.entries = std::move(entries);
  for (const auto& [k, v] : t.entries) t.total_tokens += v;
  return t;
}

}  // namespace

TEST_SUITE("export") {

TEST_CASE("graphml for a single weighted edge") {
  AnnotatedGraph a;
  a.graph = oracle::make_graph(2, {{0, 1, 2}});
  const auto xml = export_graphml(a);
  CHECK(count_of(xml, "<node ") == 2);
  CHECK(count_of(xml, "<edge ") == 1);
  CHECK(xml.find("<data key=\"weight\">2</data>") != std::string::npos);
  CHECK(export_graphml(a) == xml);
}

TEST_CASE("graphml round trip on random graphs") {
  factors::SplitMix64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    const auto a = random_annotated(rng);
    const auto xml = export_graphml(a);
    const auto back = parse_graphml(xml);
    CHECK(back.graph == a.graph);
    CHECK(back.centrality.has_value() == a.centrality.has_value());
    CHECK(back.communities.has_value() == a.communities.has_value());
    if (a.centrality) CHECK(*back.centrality == *a.centrality);
    if (a.communities) {
      CHECK(*back.communities == *a.communities);
      CHECK(std::abs(back.communities->modularity_q - a.communities->modularity_q) <= 1e-12);
    }
    CHECK(export_graphml(back) == xml);
  }
}

TEST_CASE("graphml parse errors") {
  CHECK(error_of([] { parse_graphml("<graphml><graph>"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { parse_graphml("<graphml/>"); }) == ErrorCode::ParseError);
}

TEST_CASE("dot sizes follow square-root scaling") {
  AnnotatedGraph a;
  a.graph.add_node("Ana", 9);
  a.graph.add_node("Bia", 1);
  a.graph.add_edge_weight(0, 1, 4);
  const auto dot = export_dot(a);
  CHECK(dot.find("width=0.90") != std::string::npos);
  CHECK(dot.find("width=0.30") != std::string::npos);
  CHECK(dot.find("penwidth=2.00") != std::string::npos);
  CHECK(DotChecker(dot).valid());
}

TEST_CASE("dot escapes labels and parses under the grammar") {
  AnnotatedGraph a;
  a.graph.add_node("O \"Dono\" \\ disto", 2);
  a.graph.add_node("linha\nnova", 2);
  a.graph.add_edge_weight(0, 1, 1);
  a.communities = graph::louvain(a.graph);
  a.centrality = graph::betweenness_centrality(a.graph);
  const auto dot = export_dot(a);
  CHECK(dot.find(R"(label="O \"Dono\" \\ disto")") != std::string::npos);
  CHECK(dot.find(std::string("fillcolor=\"") + std::string(palette_color(0))) != std::string::npos);
  CHECK(DotChecker(dot).valid());
  CHECK_FALSE(DotChecker("graph { n0 [label=\"x] }").valid());
  CHECK_FALSE(DotChecker("digraph g { a -> b }").valid());

  factors::SplitMix64 rng(77);
  for (int round = 0; round < 50; ++round) {
    const auto random = random_annotated(rng);
    const auto text = export_dot(random);
    CHECK(DotChecker(text).valid());
    CHECK(export_dot(random) == text);
  }
}

TEST_CASE("palette wraps after twelve colours") {
  CHECK(palette_color(0) == palette_color(12));
  CHECK(palette_color(0) != palette_color(1));
}

TEST_CASE("frequency csv") {
  CHECK(frequencies_csv(table_of({{"bes", 2}, {"salgado", 1}})) == "term,count\nbes,2\nsalgado,1\n");
  CHECK(frequencies_csv(table_of({{"a,b", 1}})) == "term,count\n\"a,b\",1\n");
  CHECK(frequencies_csv(table_of({})) == "term,count\n");
  CHECK(frequencies_csv(table_of({{"a", 3}, {"b", 2}, {"c", 1}}), 2) == "term,count\na,3\nb,2\n");
}

TEST_CASE("csv quoting round trips") {
  const std::vector<CsvRow> rows{{"plain", "com,virgula"}, {"com \"aspas\"", "linha\nnova"}};
  const auto text = write_csv({"a", "b"}, rows);
  CHECK(text.find("\"com \"\"aspas\"\"\"") != std::string::npos);
  const auto parsed = parse_csv(text);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[1] == rows[0]);
  CHECK(parsed[2] == rows[1]);
  CHECK(error_of([] { parse_csv("a,\"b\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("other csv tables") {
  corpus::TrendSeries series;
  series.terms = {"bes", "troika"};
  series.counts = {{1, 0, 2}, {0, 0, 1}};
  series.segment_count = 3;
  CHECK(trends_csv(series) == "term,s0,s1,s2\nbes,1,0,2\ntroika,0,0,1\n");

  const auto g = oracle::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
  CHECK(centrality_csv(g, graph::betweenness_centrality(g)) ==
        "id,label,betweenness\n0,v0,0\n1,v1,1\n2,v2,0\n");
  CHECK(communities_csv(g, graph::louvain(g)).starts_with("id,label,community\n0,v0,"));
}

TEST_CASE("trend svg geometry") {
  corpus::TrendSeries series;
  series.terms = {"a", "b", "c"};
  series.counts = {{10, 5}, {0, 1}, {2, 2}};
  series.segment_count = 2;
  const auto svg = render_trend_svg(series, 800, 450);
  CHECK(count_of(svg, "<polyline") == 3);
  const auto area = trend_plot_area(800, 450);
  char expected[64];
  std::snprintf(expected, sizeof expected, "%.2f,%.2f\"", area.right, (area.top + area.bottom) / 2);
  CHECK(svg.find(std::string(expected)) != std::string::npos);
  CHECK(svg.find("sans-serif") != std::string::npos);
  CHECK(render_trend_svg(series, 800, 450) == svg);

  series.segment_count = 1;
  series.counts = {{1}, {1}, {1}};
  CHECK(error_of([&] { render_trend_svg(series); }) == ErrorCode::DegenerateSeries);
}

TEST_CASE("word cloud sizes and geometry") {
  CHECK(wordcloud_font_size(10, 10) == 64.0);
  CHECK(wordcloud_font_size(0, 10) == 12.0);
  const auto table = table_of({{"bes", 10}, {"banco", 5}});
  const auto placed = layout_wordcloud(table, 10, 1);
  REQUIRE(placed.size() == 2);
  CHECK(placed[0].term == "bes");
  CHECK(placed[0].font_size > placed[1].font_size);
  CHECK_FALSE(placed[0].intersects(placed[1]));
  CHECK(error_of([] { layout_wordcloud(table_of({}), 5, 1); }) == ErrorCode::EmptyTable);
  CHECK(error_of([&] { layout_wordcloud(table, 0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("word cloud on the fixture keeps boxes disjoint and terms unique") {
  const auto doc = corpus::load_document(oracle::slurp(oracle::fixture_path("governador.txt")), 10,
                                         corpus::bundled_stopwords());
  const auto table = corpus::term_frequencies(doc);
  for (std::uint64_t seed : {1u, 42u}) {
    const auto placed = layout_wordcloud(table, 100, seed);
    REQUIRE(placed.size() == 100);
    std::set<std::string> terms;
    for (std::size_t i = 0; i < placed.size(); ++i) {
      CHECK(terms.insert(placed[i].term).second);
      for (std::size_t j = i + 1; j < placed.size(); ++j) CHECK_FALSE(placed[i].intersects(placed[j]));
    }
    std::set<std::string> expected;
    const auto ranked = table.ranked();
    for (std::size_t i = 0; i < 100; ++i) expected.insert(ranked[i].first);
    CHECK(terms == expected);
  }
  CHECK(render_wordcloud_svg(table, 100, 42) == render_wordcloud_svg(table, 100, 42));
  const auto a = layout_wordcloud(table, 30, 1);
  const auto b = layout_wordcloud(table, 30, 2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].term == b[i].term);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}
