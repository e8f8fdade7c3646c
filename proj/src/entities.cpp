#include "storychart/entities.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "storychart/error.hpp"
#include "storychart/graph.hpp"
#include "storychart/unicode.hpp"

namespace storychart::entities {

using corpus::Token;
using corpus::TokenKind;

std::string_view to_string(EntityLabel label) {
  switch (label) {
    case EntityLabel::Per: return "PER";
    case EntityLabel::Org: return "ORG";
    case EntityLabel::Loc: return "LOC";
    case EntityLabel::Misc: return "MISC";
  }
  return "MISC";
}

std::string mention_key(std::string_view surface) {
  const std::u32string text = unicode::decode_utf8(surface);
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : text) {
    if (unicode::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return unicode::encode_utf8(out);
}

namespace {

constexpr std::array<std::string_view, 6> kConnectors = {"de", "da", "do", "das", "dos", "e"};

bool is_connector(const Token& t) {
  return t.kind == TokenKind::Word &&
         std::find(kConnectors.begin(), kConnectors.end(), t.surface) != kConnectors.end();
}

enum class Shape { Other, Capitalized, Acronym };

Shape shape_of(const Token& t) {
  if (t.kind != TokenKind::Word) return Shape::Other;
  const std::u32string s = unicode::decode_utf8(t.surface);
  std::size_t letters = 0;
  bool all_upper = true;
  bool rest_lower = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!unicode::is_letter(s[i])) continue;
    ++letters;
    if (!unicode::is_upper(s[i])) all_upper = false;
    if (i > 0 && !unicode::is_lower(s[i])) rest_lower = false;
  }
  if (letters == 0 || !unicode::is_upper(s.front())) return Shape::Other;
  if (letters >= 2 && all_upper) return Shape::Acronym;
  if (rest_lower) return Shape::Capitalized;
  return Shape::Other;
}

// Index of the first word token of each sentence.
std::vector<std::size_t> sentence_initial_tokens(const Document& doc) {
  std::vector<std::size_t> initial(doc.sentences().size(), doc.tokens().size());
  const auto& tokens = doc.tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto& slot = initial[tokens[i].sentence_index];
    if (slot == tokens.size() && tokens[i].kind == TokenKind::Word) slot = i;
  }
  return initial;
}

bool gazetteer_accepts(const Gazetteer& gazetteer, const std::string& normalized) {
  if (gazetteer.contains(normalized)) return true;
  const std::string prefix = normalized + " ";
  auto it = gazetteer.lower_bound(prefix);
  return it != gazetteer.end() && it->starts_with(prefix);
}

}  // namespace

std::vector<EntityMention> detect_proper_nouns(const Document& doc, const Gazetteer& gazetteer) {
  const auto& tokens = doc.tokens();
  const auto initial = sentence_initial_tokens(doc);

  Gazetteer normalized_gazetteer;
  for (const auto& name : gazetteer) normalized_gazetteer.insert(unicode::normalize(mention_key(name)));

  std::vector<Shape> shapes(tokens.size());
  std::unordered_set<std::string> capitalized_elsewhere;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    shapes[i] = shape_of(tokens[i]);
    if (shapes[i] == Shape::Capitalized && initial[tokens[i].sentence_index] != i) {
      capitalized_elsewhere.insert(tokens[i].normalized);
    }
  }

  auto is_name = [&](std::size_t i) {
    switch (shapes[i]) {
      case Shape::Acronym:
        return true;
      case Shape::Capitalized:
        if (initial[tokens[i].sentence_index] != i) return true;
        return capitalized_elsewhere.contains(tokens[i].normalized) ||
               gazetteer_accepts(normalized_gazetteer, tokens[i].normalized);
      case Shape::Other:
        break;
    }
    return false;
  };

  std::vector<EntityMention> mentions;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!is_name(i)) {
      ++i;
      continue;
    }
    const std::size_t sentence = tokens[i].sentence_index;
    std::size_t last = i;
    while (true) {
      const std::size_t next = last + 1;
      if (next < tokens.size() && tokens[next].sentence_index == sentence && is_name(next)) {
        last = next;
      } else if (next + 1 < tokens.size() && tokens[next + 1].sentence_index == sentence &&
                 is_connector(tokens[next]) && is_name(next + 1)) {
        last = next + 1;
      } else {
        break;
      }
    }
    EntityMention m;
    m.span = {tokens[i].span.start, tokens[last].span.end};
    m.surface = doc.slice(m.span);
    m.sentence_index = sentence;
    mentions.push_back(std::move(m));
    i = last + 1;
  }
  return mentions;
}

namespace {

EntityLabel parse_label(const std::string& label) {
  const std::string upper = [&] {
    std::string s = label;
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
  }();
  if (upper == "PER" || upper == "PESSOA" || upper == "PERSON") return EntityLabel::Per;
  if (upper == "ORG" || upper == "ORGANIZACAO" || upper == "ORGANIZAÇÃO") return EntityLabel::Org;
  if (upper == "LOC" || upper == "LOCAL") return EntityLabel::Loc;
  return EntityLabel::Misc;
}

}  // namespace

std::vector<EntityMention> import_mentions(std::string_view json_bytes, const Document& doc) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("mention file is not valid JSON: ") + e.what());
  }
  if (!root.is_array()) {
    throw Error(ErrorCode::SchemaError, "mention file must be a JSON array");
  }
  std::vector<EntityMention> mentions;
  mentions.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto& rec = root[i];
    const std::string where = "mention record " + std::to_string(i);
    if (!rec.is_object()) throw Error(ErrorCode::SchemaError, where + " is not an object");
    if (!rec.contains("surface") || !rec["surface"].is_string()) {
      throw Error(ErrorCode::SchemaError, where + ": \"surface\" must be a string");
    }
    for (const char* field : {"start", "end"}) {
      if (!rec.contains(field) || !rec[field].is_number_integer()) {
        throw Error(ErrorCode::SchemaError,
                    where + ": \"" + field + "\" must be an integer");
      }
    }
    if (rec.contains("label") && !rec["label"].is_string() && !rec["label"].is_null()) {
      throw Error(ErrorCode::SchemaError, where + ": \"label\" must be a string");
    }
    if (rec.contains("canonical") && !rec["canonical"].is_string() && !rec["canonical"].is_null()) {
      throw Error(ErrorCode::SchemaError, where + ": \"canonical\" must be a string");
    }

    const auto start = rec["start"].get<long long>();
    const auto end = rec["end"].get<long long>();
    if (start < 0 || end <= start || static_cast<std::size_t>(end) > doc.text().size()) {
      throw Error(ErrorCode::OutOfBounds, where + ": span [" + std::to_string(start) + ", " +
                                              std::to_string(end) + ") is outside the document");
    }
    EntityMention m;
    m.span = {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
    m.surface = rec["surface"].get<std::string>();
    if (doc.slice(m.span) != m.surface) {
      throw Error(ErrorCode::SpanMismatch, where + ": surface \"" + m.surface +
                                               "\" differs from text \"" + doc.slice(m.span) + "\"");
    }
    const auto sentence = doc.sentence_containing(m.span);
    if (!sentence) {
      throw Error(ErrorCode::SpanMismatch, where + ": span is not inside a single sentence");
    }
    m.sentence_index = *sentence;
    if (rec.contains("label") && rec["label"].is_string()) {
      m.label = parse_label(rec["label"].get<std::string>());
    }
    if (rec.contains("canonical") && rec["canonical"].is_string()) {
      m.canonical = rec["canonical"].get<std::string>();
    }
    mentions.push_back(std::move(m));
  }
  std::stable_sort(mentions.begin(), mentions.end(),
                   [](const auto& a, const auto& b) { return a.span < b.span; });
  return mentions;
}

std::vector<EntityMention> merge_mentions(std::span<const EntityMention> first,
                                          std::span<const EntityMention> second) {
  std::vector<EntityMention> all(first.begin(), first.end());
  all.insert(all.end(), second.begin(), second.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.span < b.span; });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const auto& a, const auto& b) { return a.span == b.span; }),
            all.end());
  return all;
}

AliasPairs parse_alias_map(std::string_view json_bytes) {
  AliasPairs pairs;
  std::optional<std::string> pending_key;
  bool top_is_object = false;
  auto callback = [&](int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    using Event = nlohmann::json::parse_event_t;
    if (depth == 0 && event == Event::object_start) top_is_object = true;
    if (depth == 1 && event == Event::key) {
      pending_key = parsed.get<std::string>();
    } else if (depth == 1 && event == Event::value && pending_key) {
      if (!parsed.is_string()) {
        throw Error(ErrorCode::SchemaError,
                    "alias map value for \"" + *pending_key + "\" must be a string");
      }
      pairs.emplace_back(mention_key(*pending_key), mention_key(parsed.get<std::string>()));
      pending_key.reset();
    } else if (depth == 1 && (event == Event::object_start || event == Event::array_start)) {
      throw Error(ErrorCode::SchemaError, "alias map values must be strings");
    }
    return true;
  };
  try {
    [[maybe_unused]] const auto parsed = nlohmann::json::parse(json_bytes, callback);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("alias map is not valid JSON: ") + e.what());
  }
  if (!top_is_object) throw Error(ErrorCode::SchemaError, "alias map must be a JSON object");
  return pairs;
}

std::vector<Entity> resolve_aliases(std::span<const EntityMention> mentions,
                                    const AliasPairs& alias_map, const ResolveOptions& options) {
  std::map<std::string, std::string> canonical_of;
  auto bind = [&](const std::string& alias, const std::string& canonical) {
    auto [it, inserted] = canonical_of.emplace(alias, canonical);
    if (!inserted && it->second != canonical) {
      throw Error(ErrorCode::ConflictingAlias, "alias \"" + alias + "\" maps to both \"" +
                                                   it->second + "\" and \"" + canonical + "\"");
    }
  };
  for (const auto& [alias, canonical] : alias_map) bind(mention_key(alias), mention_key(canonical));
  for (const auto& m : mentions) {
    if (m.canonical) bind(mention_key(m.surface), mention_key(*m.canonical));
  }
  for (const auto& [alias, canonical] : canonical_of) {
    auto it = canonical_of.find(canonical);
    if (it != canonical_of.end() && it->second != canonical) {
      throw Error(ErrorCode::ConflictingAlias, "canonical \"" + canonical +
                                                   "\" is itself an alias of \"" + it->second +
                                                   "\"");
    }
  }

  std::map<std::string, Entity> by_canonical;
  for (const auto& m : mentions) {
    const std::string key = mention_key(m.surface);
    auto it = canonical_of.find(key);
    const std::string& canonical = it == canonical_of.end() ? key : it->second;
    Entity& e = by_canonical[canonical];
    e.canonical = canonical;
    e.aliases.insert(canonical);
    e.aliases.insert(key);
    e.mentions.push_back(m);
  }

  if (options.auto_merge_surnames) {
    std::vector<std::string> singles;
    for (const auto& [name, e] : by_canonical) {
      if (name.find(' ') == std::string::npos && !canonical_of.contains(name)) singles.push_back(name);
    }
    for (const auto& single : singles) {
      const std::string suffix = " " + single;
      std::string target;
      std::size_t candidates = 0;
      for (const auto& [name, e] : by_canonical) {
        if (name.size() > suffix.size() && name.ends_with(suffix)) {
          target = name;
          ++candidates;
        }
      }
      if (candidates != 1) continue;
      Entity& into = by_canonical[target];
      Entity& from = by_canonical[single];
      into.aliases.insert(from.aliases.begin(), from.aliases.end());
      into.mentions.insert(into.mentions.end(), from.mentions.begin(), from.mentions.end());
      by_canonical.erase(single);
    }
  }

  std::vector<Entity> entities;
  entities.reserve(by_canonical.size());
  for (auto& [name, e] : by_canonical) {
    std::stable_sort(e.mentions.begin(), e.mentions.end(),
                     [](const auto& a, const auto& b) { return a.span < b.span; });
    e.reference_count = e.mentions.size();
    entities.push_back(std::move(e));
  }
  return entities;
}

std::vector<Entity> select_entities(std::span<const Entity> entities,
                                    const graph::CooccurrenceGraph& preview,
                                    const SelectionCriteria& criteria) {
  if (preview.node_count() != entities.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "co-occurrence preview must have one node per candidate entity");
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (entities[i].reference_count >= criteria.min_refs &&
        preview.degree(i) >= criteria.min_interactions) {
      keep.push_back(i);
    }
  }
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
    if (entities[a].reference_count != entities[b].reference_count) {
      return entities[a].reference_count > entities[b].reference_count;
    }
    return entities[a].canonical < entities[b].canonical;
  });
  if (keep.size() > criteria.top_n) keep.resize(criteria.top_n);
  if (keep.empty()) {
    throw Error(ErrorCode::EmptySelection,
                "no entity has at least " + std::to_string(criteria.min_refs) + " references and " +
                    std::to_string(criteria.min_interactions) + " co-occurrence partners");
  }
  std::vector<Entity> selected;
  selected.reserve(keep.size());
  for (auto i : keep) selected.push_back(entities[i]);
  return selected;
}

}  // namespace storychart::entities
