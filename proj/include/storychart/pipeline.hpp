#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace storychart::pipeline {

struct PipelineConfig {
  std::string input_path;
  std::string output_dir = "storychart-out";
  std::size_t segment_count = 10;
  std::optional<std::string> stopword_path;
  std::optional<std::string> alias_map_path;
  std::optional<std::string> mentions_path;  // set => imported mentions replace the heuristic
  std::string cooccurrence_unit = "sentence";
  std::size_t min_refs = 3;
  std::size_t min_interactions = 1;
  std::size_t top_n = 40;
  std::string betweenness_mode = "unweighted";
  std::size_t pca_k = 3;
  std::size_t cluster_k = 3;
  std::uint64_t seed = 42;
  std::vector<std::string> trend_terms;  // empty => five most frequent terms
  std::size_t top = 0;                   // rows in frequencies.csv, 0 = all
  std::size_t wordcloud_top = 100;
};

/// Applies the fields present in a JSON config file on top of `base`.
/// Unknown fields and wrong types raise ConfigError.
PipelineConfig apply_config_json(PipelineConfig base, std::string_view json_text);

/// Throws ConfigError when a field is out of range.
void validate(const PipelineConfig& config);

/// Run parameters as recorded in report.json (output_dir is omitted so that
/// bundles written to different directories stay identical).
nlohmann::json parameters_json(const PipelineConfig& config);

enum class Stage { Freq, Trend, Entities, Graph, Communities, Centrality, Factors };

std::string_view to_string(Stage stage);
const std::vector<Stage>& all_stages();

inline constexpr std::string_view kReportFile = "report.json";

/// The 12 files of a complete result bundle.
const std::vector<std::string>& bundle_files();

/// Named file contents produced or consumed by stages. Reads fall back to a
/// directory on disk when one is given.
class Bundle {
 public:
  explicit Bundle(std::optional<std::filesystem::path> backing = std::nullopt)
      : backing_(std::move(backing)) {}

  bool contains(const std::string& name) const;
  /// Throws MissingPrerequisite naming the file.
  const std::string& read(const std::string& name);
  void write(const std::string& name, std::string contents);

  const std::map<std::string, std::string>& written() const { return written_; }
  /// Writes every file produced in this session into `dir`. Throws IoError.
  void flush(const std::filesystem::path& dir) const;

 private:
  std::optional<std::filesystem::path> backing_;
  std::map<std::string, std::string> cache_;
  std::map<std::string, std::string> written_;
};

/// Runs one stage; errors are rethrown with the stage name in the message.
void run_stage(Stage stage, const PipelineConfig& config, Bundle& bundle);

/// All stages in order, in memory; files are written only if every stage succeeds.
void run_pipeline(const PipelineConfig& config);

/// Exit code for an error: 2 for usage and I/O, 3 for analysis failures.
int exit_code_for(const std::exception& error);

std::string read_file(const std::filesystem::path& path);

}  // namespace storychart::pipeline
