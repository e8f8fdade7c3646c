#include "storychart/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "storychart/corpus.hpp"
#include "storychart/entities.hpp"
#include "storychart/error.hpp"
#include "storychart/factors.hpp"
#include "storychart/graph.hpp"
#include "storychart/output.hpp"
#include "storychart/unicode.hpp"

namespace storychart::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "error while reading " + path.string());
  return buffer.str();
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Freq: return "freq";
    case Stage::Trend: return "trend";
    case Stage::Entities: return "entities";
    case Stage::Graph: return "graph";
    case Stage::Communities: return "communities";
    case Stage::Centrality: return "centrality";
    case Stage::Factors: return "factors";
  }
  return "unknown";
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {Stage::Freq,  Stage::Trend,       Stage::Entities,
                                            Stage::Graph, Stage::Communities, Stage::Centrality,
                                            Stage::Factors};
  return stages;
}

const std::vector<std::string>& bundle_files() {
  static const std::vector<std::string> files = {
      "frequencies.csv", "wordcloud.svg",  "trends.csv",      "trends.svg",
      "entities.csv",    "graph.graphml",  "graph.dot",       "centrality.csv",
      "communities.csv", "factors.csv",    "clusters.csv",    "report.json"};
  return files;
}

bool Bundle::contains(const std::string& name) const {
  return cache_.contains(name) || (backing_ && fs::exists(*backing_ / name));
}

const std::string& Bundle::read(const std::string& name) {
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  if (!backing_ || !fs::exists(*backing_ / name)) {
    throw Error(ErrorCode::MissingPrerequisite,
                "missing prerequisite file " + name + " (run the stage that produces it first)");
  }
  return cache_[name] = read_file(*backing_ / name);
}

void Bundle::write(const std::string& name, std::string contents) {
  cache_[name] = contents;
  written_[name] = std::move(contents);
}

void Bundle::flush(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, contents] : written_) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
  }
}

namespace {

// Shared state for the stages of one invocation.
struct Context {
  const PipelineConfig& config;
  Bundle& bundle;
  std::optional<corpus::Document> document;
  std::string stopword_source;

  const corpus::Document& doc() {
    if (!document) {
      corpus::StopwordSet stopwords;
      if (config.stopword_path) {
        stopwords = corpus::parse_stopwords(read_file(*config.stopword_path));
        stopword_source = *config.stopword_path;
      } else if (const char* env = std::getenv("STORYCHART_STOPWORDS"); env && *env) {
        stopwords = corpus::parse_stopwords(read_file(env));
        stopword_source = std::string("env:") + env;
      } else {
        stopwords = corpus::bundled_stopwords();
        stopword_source = "bundled";
      }
      document = corpus::load_document(read_file(config.input_path), config.segment_count, stopwords);
    }
    return *document;
  }

  json report() {
    json r = bundle.contains(std::string(kReportFile))
                 ? json::parse(bundle.read(std::string(kReportFile)))
                 : json::object();
    r["parameters"] = parameters_json(config);
    const auto& d = doc();
    r["document"] = {{"characters", d.text().size()},
                     {"sentences", d.sentences().size()},
                     {"tokens", d.tokens().size()},
                     {"segments", d.segment_count()},
                     {"stopwords", stopword_source}};
    return r;
  }

  void save_report(const json& r) { bundle.write(std::string(kReportFile), r.dump(2) + "\n"); }

  std::vector<entities::EntityMention> mentions() {
    if (config.mentions_path) {
      return entities::import_mentions(read_file(*config.mentions_path), doc());
    }
    return entities::detect_proper_nouns(doc());
  }

  entities::AliasPairs aliases() {
    if (!config.alias_map_path) return {};
    return entities::parse_alias_map(read_file(*config.alias_map_path));
  }

  graph::CooccurrenceUnit unit() const { return graph::CooccurrenceUnit::parse(config.cooccurrence_unit); }

  // Rebuilds the selected entities listed in entities.csv from the document.
  std::vector<entities::Entity> selected_entities() {
    const auto rows = output::parse_csv(bundle.read("entities.csv"));
    if (rows.empty() || rows.front() != output::CsvRow{"id", "canonical", "references", "partners", "aliases"}) {
      throw Error(ErrorCode::ParseError, "entities.csv has an unexpected header");
    }
    std::vector<entities::Entity> selected;
    std::map<std::string, std::size_t> owner;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != 5) throw Error(ErrorCode::ParseError, "entities.csv row " + std::to_string(r) + " is malformed");
      entities::Entity e;
      e.canonical = rows[r][1];
      std::string_view list = rows[r][4];
      while (!list.empty()) {
        const auto bar = list.find('|');
        e.aliases.insert(std::string(list.substr(0, bar)));
        list = bar == std::string_view::npos ? std::string_view{} : list.substr(bar + 1);
      }
      for (const auto& alias : e.aliases) owner[alias] = selected.size();
      selected.push_back(std::move(e));
    }
    for (const auto& m : mentions()) {
      auto it = owner.find(entities::mention_key(m.surface));
      if (it != owner.end()) selected[it->second].mentions.push_back(m);
    }
    for (auto& e : selected) e.reference_count = e.mentions.size();
    return selected;
  }

  output::AnnotatedGraph load_graph() { return output::parse_graphml(bundle.read("graph.graphml")); }

  void save_graph(const output::AnnotatedGraph& g) {
    bundle.write("graph.graphml", output::export_graphml(g));
    bundle.write("graph.dot", output::export_dot(g));
  }
};

std::vector<std::string> labels_of(const std::vector<entities::Entity>& list) {
  std::vector<std::string> labels;
  for (const auto& e : list) labels.push_back(e.canonical);
  return labels;
}

void stage_freq(Context& ctx) {
  const auto table = corpus::term_frequencies(ctx.doc());
  ctx.bundle.write("frequencies.csv", output::frequencies_csv(table, ctx.config.top));
  ctx.bundle.write("wordcloud.svg",
                   output::render_wordcloud_svg(table, ctx.config.wordcloud_top, ctx.config.seed));
  auto r = ctx.report();
  r["frequencies"] = {{"distinct_terms", table.entries.size()},
                      {"word_tokens", table.total_tokens},
                      {"top_terms", json::array()}};
  for (const auto& [term, count] : table.ranked()) {
    if (r["frequencies"]["top_terms"].size() == 10) break;
    r["frequencies"]["top_terms"].push_back({{"term", term}, {"count", count}});
  }
  ctx.save_report(r);
}

void stage_trend(Context& ctx) {
  std::vector<std::string> terms;
  for (const auto& t : ctx.config.trend_terms) terms.push_back(unicode::normalize(std::string_view(t)));
  if (terms.empty()) {
    const auto ranked = corpus::term_frequencies(ctx.doc()).ranked();
    for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) terms.push_back(ranked[i].first);
  }
  const auto series = corpus::trend_series(ctx.doc(), terms);
  ctx.bundle.write("trends.csv", output::trends_csv(series));
  ctx.bundle.write("trends.svg", output::render_trend_svg(series));
  auto r = ctx.report();
  r["trends"] = {{"terms", series.terms}, {"warnings", series.warnings}};
  ctx.save_report(r);
}

void stage_entities(Context& ctx) {
  const auto mentions = ctx.mentions();
  const auto candidates = entities::resolve_aliases(mentions, ctx.aliases());
  const auto preview = graph::build_cooccurrence_graph(candidates, ctx.doc(), ctx.unit());
  entities::SelectionCriteria criteria{ctx.config.min_refs, ctx.config.min_interactions, ctx.config.top_n};
  const auto selected = entities::select_entities(candidates, preview, criteria);

  std::map<std::string, std::size_t> partners;
  for (std::size_t i = 0; i < candidates.size(); ++i) partners[candidates[i].canonical] = preview.degree(i);

  std::vector<output::CsvRow> rows;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    std::string aliases;
    for (const auto& a : selected[i].aliases) {
      if (!aliases.empty()) aliases += '|';
      aliases += a;
    }
    rows.push_back({std::to_string(i), selected[i].canonical, std::to_string(selected[i].reference_count),
                    std::to_string(partners[selected[i].canonical]), aliases});
  }
  ctx.bundle.write("entities.csv",
                   output::write_csv({"id", "canonical", "references", "partners", "aliases"}, rows));
  auto r = ctx.report();
  r["entities"] = {{"mentions", mentions.size()},
                   {"candidates", candidates.size()},
                   {"selected", selected.size()}};
  ctx.save_report(r);
}

void stage_graph(Context& ctx) {
  const auto selected = ctx.selected_entities();
  output::AnnotatedGraph annotated;
  annotated.graph = graph::build_cooccurrence_graph(selected, ctx.doc(), ctx.unit());
  ctx.save_graph(annotated);
  auto r = ctx.report();
  r["graph"] = {{"nodes", annotated.graph.node_count()},
                {"edges", annotated.graph.edges().size()},
                {"total_weight", annotated.graph.total_weight()},
                {"unit", ctx.unit().to_string()}};
  ctx.save_report(r);
}

void stage_communities(Context& ctx) {
  auto annotated = ctx.load_graph();
  const auto communities = graph::louvain(annotated.graph);
  annotated.communities = communities;
  ctx.save_graph(annotated);
  ctx.bundle.write("communities.csv", output::communities_csv(annotated.graph, communities));
  auto r = ctx.report();
  r["communities"] = {{"count", communities.community_count},
                      {"modularity_q", communities.modularity_q},
                      {"pass_modularity", communities.pass_modularity}};
  ctx.save_report(r);
}

void stage_centrality(Context& ctx) {
  auto annotated = ctx.load_graph();
  const auto mode = graph::parse_path_mode(ctx.config.betweenness_mode);
  const auto scores = graph::betweenness_centrality(annotated.graph, mode);
  annotated.centrality = scores;
  ctx.save_graph(annotated);
  ctx.bundle.write("centrality.csv", output::centrality_csv(annotated.graph, scores));
  auto r = ctx.report();
  r["centrality"] = {{"mode", std::string(graph::to_string(mode))}};
  ctx.save_report(r);
}

void stage_factors(Context& ctx) {
  const auto selected = ctx.selected_entities();
  const auto standardized = factors::standardize(factors::build_feature_matrix(selected, ctx.doc()));
  std::vector<std::string> warnings;
  for (auto column : standardized.dropped_columns) {
    warnings.push_back("segment " + std::to_string(column) + " has zero variance and was dropped");
  }
  const auto p = static_cast<std::size_t>(standardized.values.cols());
  std::size_t k = ctx.config.pca_k;
  if (k > p) {
    warnings.push_back("pca_k " + std::to_string(k) + " exceeds the " + std::to_string(p) +
                       " usable segments; using " + std::to_string(p));
    k = p;
  }
  const auto model = factors::pca(standardized, k);
  std::size_t clusters_k = ctx.config.cluster_k;
  if (clusters_k > selected.size()) {
    warnings.push_back("cluster_k exceeds the number of entities; using " + std::to_string(selected.size()));
    clusters_k = selected.size();
  }
  const auto clusters = factors::kmeans(model.scores, clusters_k, ctx.config.seed);

  const auto labels = labels_of(selected);
  ctx.bundle.write("factors.csv", output::factor_scores_csv(labels, model));
  ctx.bundle.write("clusters.csv", output::clusters_csv(labels, clusters));

  double total = 0.0;
  for (double ratio : model.explained_variance_ratio) total += ratio;
  std::vector<double> eigenvalues(model.eigenvalues.data(), model.eigenvalues.data() + model.eigenvalues.size());
  auto r = ctx.report();
  r["factors"] = {{"k", k},
                  {"eigenvalues", eigenvalues},
                  {"explained_variance_ratio", model.explained_variance_ratio},
                  {"total_explained_variance", total},
                  {"dropped_segments", standardized.dropped_columns},
                  {"clusters", clusters_k},
                  {"sse", clusters.sse},
                  {"iterations", clusters.iterations},
                  {"warnings", warnings}};
  ctx.save_report(r);
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config, Bundle& bundle) {
  Context ctx{config, bundle, std::nullopt, {}};
  const std::string prefix = "stage " + std::string(to_string(stage)) + ": ";
  try {
    switch (stage) {
      case Stage::Freq: stage_freq(ctx); break;
      case Stage::Trend: stage_trend(ctx); break;
      case Stage::Entities: stage_entities(ctx); break;
      case Stage::Graph: stage_graph(ctx); break;
      case Stage::Communities: stage_communities(ctx); break;
      case Stage::Centrality: stage_centrality(ctx); break;
      case Stage::Factors: stage_factors(ctx); break;
    }
  } catch (const Error& e) {
    throw Error(e.code(), prefix + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, prefix + e.what());
  }
}

void run_pipeline(const PipelineConfig& config) {
  validate(config);
  Bundle bundle;
  for (Stage stage : all_stages()) run_stage(stage, config, bundle);
  bundle.flush(config.output_dir);
}

int exit_code_for(const std::exception& error) {
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    return is_analysis_error(e->code()) ? 3 : 2;
  }
  return 3;
}

}  // namespace storychart::pipeline
