#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "storychart/error.hpp"
#include "storychart/pipeline.hpp"

namespace {

using storychart::pipeline::PipelineConfig;

// Flag values; only the ones given on the command line override the config file.
struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::string> input_path;
  std::optional<std::string> output_dir;
  std::optional<std::size_t> segment_count;
  std::optional<std::string> stopword_path;
  std::optional<std::string> alias_map_path;
  std::optional<std::string> mentions_path;
  std::optional<std::string> cooccurrence_unit;
  std::optional<std::size_t> min_refs;
  std::optional<std::size_t> min_interactions;
  std::optional<std::size_t> top_n;
  std::optional<std::string> betweenness_mode;
  std::optional<std::size_t> pca_k;
  std::optional<std::size_t> cluster_k;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::string>> trend_terms;
  std::optional<std::size_t> top;
  std::optional<std::size_t> wordcloud_top;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--input,--input-path", f.input_path, "UTF-8 plain-text input");
  cmd->add_option("--output,--output-dir", f.output_dir, "Result directory (default storychart-out)");
  cmd->add_option("--segment-count", f.segment_count, "Number of equal token segments (default 10)");
  cmd->add_option("--stopword-path", f.stopword_path,
                  "Stopword file, one term per line (else $STORYCHART_STOPWORDS, else bundled list)");
  cmd->add_option("--alias-map-path", f.alias_map_path, "JSON object mapping alias to canonical name");
  cmd->add_option("--mentions-path", f.mentions_path,
                  "Imported mention JSON; replaces the built-in proper-noun detector");
  cmd->add_option("--cooccurrence-unit", f.cooccurrence_unit, "sentence | window:<W> (default sentence)");
  cmd->add_option("--min-refs", f.min_refs, "Minimum references per entity (default 3)");
  cmd->add_option("--min-interactions", f.min_interactions,
                  "Minimum distinct co-occurrence partners (default 1)");
  cmd->add_option("--top-n", f.top_n, "Maximum number of selected entities (default 40)");
  cmd->add_option("--betweenness-mode", f.betweenness_mode, "unweighted | weighted (default unweighted)");
  cmd->add_option("--pca-k", f.pca_k, "Number of principal components (default 3)");
  cmd->add_option("--cluster-k", f.cluster_k, "Number of k-means clusters (default 3)");
  cmd->add_option("--seed", f.seed, "Seed for k-means and word-cloud placement (default 42)");
  cmd->add_option("--terms,--trend-terms", f.trend_terms, "Comma-separated trend terms")->delimiter(',');
  cmd->add_option("--top", f.top, "Rows kept in frequencies.csv (default all)");
  cmd->add_option("--wordcloud-top", f.wordcloud_top, "Terms drawn in the word cloud (default 100)");
}

PipelineConfig resolve(const Flags& f) {
  PipelineConfig c;
  if (f.config_path) {
    c = storychart::pipeline::apply_config_json(c, storychart::pipeline::read_file(*f.config_path));
  }
  auto take = [](auto& field, const auto& flag) {
    if (flag) field = *flag;
  };
  take(c.input_path, f.input_path);
  take(c.output_dir, f.output_dir);
  take(c.segment_count, f.segment_count);
  if (f.stopword_path) c.stopword_path = f.stopword_path;
  if (f.alias_map_path) c.alias_map_path = f.alias_map_path;
  if (f.mentions_path) c.mentions_path = f.mentions_path;
  take(c.cooccurrence_unit, f.cooccurrence_unit);
  take(c.min_refs, f.min_refs);
  take(c.min_interactions, f.min_interactions);
  take(c.top_n, f.top_n);
  take(c.betweenness_mode, f.betweenness_mode);
  take(c.pca_k, f.pca_k);
  take(c.cluster_k, f.cluster_k);
  take(c.seed, f.seed);
  take(c.trend_terms, f.trend_terms);
  take(c.top, f.top);
  take(c.wordcloud_top, f.wordcloud_top);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  namespace sp = storychart::pipeline;
  CLI::App app{"storychart: turn a plain-text book into frequency, trend, network and factor summaries"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<std::pair<CLI::App*, std::optional<sp::Stage>>> commands;
  commands.emplace_back(app.add_subcommand("run", "Run every stage and write the full result bundle"),
                        std::nullopt);
  const std::map<sp::Stage, std::string> descriptions = {
      {sp::Stage::Freq, "Term frequencies and word cloud (frequencies.csv, wordcloud.svg)"},
      {sp::Stage::Trend, "Per-segment term trends (trends.csv, trends.svg)"},
      {sp::Stage::Entities, "Detect, merge and select entities (entities.csv)"},
      {sp::Stage::Graph, "Co-occurrence network from entities.csv (graph.graphml, graph.dot)"},
      {sp::Stage::Communities, "Louvain communities on graph.graphml (communities.csv)"},
      {sp::Stage::Centrality, "Betweenness centrality on graph.graphml (centrality.csv)"},
      {sp::Stage::Factors, "PCA and k-means over entities.csv (factors.csv, clusters.csv)"},
  };
  for (sp::Stage stage : sp::all_stages()) {
    commands.emplace_back(app.add_subcommand(std::string(sp::to_string(stage)), descriptions.at(stage)),
                          stage);
  }
  for (auto& [cmd, stage] : commands) add_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig config = resolve(flags);
    sp::validate(config);
    for (auto& [cmd, stage] : commands) {
      if (!cmd->parsed()) continue;
      if (!stage) {
        sp::run_pipeline(config);
      } else {
        sp::Bundle bundle{std::filesystem::path(config.output_dir)};
        sp::run_stage(*stage, config, bundle);
        bundle.flush(config.output_dir);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "storychart: error: " << e.what() << "\n";
    return sp::exit_code_for(e);
  }
  return 0;
}
