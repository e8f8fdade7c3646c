#include "storychart/error.hpp"
#include "storychart/pipeline.hpp"

namespace storychart::pipeline {

namespace {

using nlohmann::json;

template <typename T>
T field_as(const json& value, const std::string& name) {
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw Error(ErrorCode::ConfigError, "");
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!value.is_array()) throw Error(ErrorCode::ConfigError, "");
    } else {
      if (!value.is_number_unsigned()) throw Error(ErrorCode::ConfigError, "");
    }
    return value.get<T>();
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, "config field \"" + name + "\" has the wrong type");
  }
}

}  // namespace

PipelineConfig apply_config_json(PipelineConfig base, std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::ConfigError, "config file must hold a JSON object");

  for (const auto& [name, value] : root.items()) {
    if (name == "input_path") base.input_path = field_as<std::string>(value, name);
    else if (name == "output_dir") base.output_dir = field_as<std::string>(value, name);
    else if (name == "segment_count") base.segment_count = field_as<std::size_t>(value, name);
    else if (name == "stopword_path") base.stopword_path = field_as<std::string>(value, name);
    else if (name == "alias_map_path") base.alias_map_path = field_as<std::string>(value, name);
    else if (name == "mentions_path") base.mentions_path = field_as<std::string>(value, name);
    else if (name == "cooccurrence_unit") base.cooccurrence_unit = field_as<std::string>(value, name);
    else if (name == "min_refs") base.min_refs = field_as<std::size_t>(value, name);
    else if (name == "min_interactions") base.min_interactions = field_as<std::size_t>(value, name);
    else if (name == "top_n") base.top_n = field_as<std::size_t>(value, name);
    else if (name == "betweenness_mode") base.betweenness_mode = field_as<std::string>(value, name);
    else if (name == "pca_k") base.pca_k = field_as<std::size_t>(value, name);
    else if (name == "cluster_k") base.cluster_k = field_as<std::size_t>(value, name);
    else if (name == "seed") base.seed = field_as<std::uint64_t>(value, name);
    else if (name == "trend_terms") base.trend_terms = field_as<std::vector<std::string>>(value, name);
    else if (name == "top") base.top = field_as<std::size_t>(value, name);
    else if (name == "wordcloud_top") base.wordcloud_top = field_as<std::size_t>(value, name);
    else throw Error(ErrorCode::ConfigError, "unknown config field \"" + name + "\"");
  }
  return base;
}

void validate(const PipelineConfig& config) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorCode::ConfigError, message);
  };
  require(!config.input_path.empty(), "input_path is required");
  require(!config.output_dir.empty(), "output_dir must not be empty");
  require(config.segment_count >= 1, "segment_count must be >= 1");
  require(config.top_n >= 1, "top_n must be >= 1");
  require(config.pca_k >= 1, "pca_k must be >= 1");
  require(config.cluster_k >= 1, "cluster_k must be >= 1");
  require(config.wordcloud_top >= 1, "wordcloud_top must be >= 1");
  require(config.betweenness_mode == "unweighted" || config.betweenness_mode == "weighted",
          "betweenness_mode must be \"unweighted\" or \"weighted\"");
  const auto& unit = config.cooccurrence_unit;
  require(unit == "sentence" || unit.starts_with("window:"),
          "cooccurrence_unit must be \"sentence\" or \"window:<W>\"");
}

nlohmann::json parameters_json(const PipelineConfig& config) {
  json j;
  j["input_path"] = config.input_path;
  j["segment_count"] = config.segment_count;
  j["stopword_path"] = config.stopword_path ? json(*config.stopword_path) : json(nullptr);
  j["alias_map_path"] = config.alias_map_path ? json(*config.alias_map_path) : json(nullptr);
  j["mentions_path"] = config.mentions_path ? json(*config.mentions_path) : json(nullptr);
  j["ner_source"] = config.mentions_path ? "import" : "heuristic";
  j["cooccurrence_unit"] = config.cooccurrence_unit;
  j["min_refs"] = config.min_refs;
  j["min_interactions"] = config.min_interactions;
  j["top_n"] = config.top_n;
  j["betweenness_mode"] = config.betweenness_mode;
  j["pca_k"] = config.pca_k;
  j["cluster_k"] = config.cluster_k;
  j["seed"] = config.seed;
  j["trend_terms"] = config.trend_terms;
  j["top"] = config.top;
  j["wordcloud_top"] = config.wordcloud_top;
  return j;
}

}  // namespace storychart::pipeline
