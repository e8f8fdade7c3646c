#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "storychart/corpus.hpp"

namespace storychart::graph {
class CooccurrenceGraph;
}

namespace storychart::entities {

using corpus::Document;
using corpus::Span;

enum class EntityLabel { Per, Org, Loc, Misc };

std::string_view to_string(EntityLabel label);

struct EntityMention {
  std::string surface;
  Span span;
  std::size_t sentence_index = 0;
  std::optional<EntityLabel> label;
  // Canonical name supplied by an external recognizer, if any.
  std::optional<std::string> canonical;

  bool operator==(const EntityMention&) const = default;
};

struct Entity {
  std::string canonical;
  std::set<std::string> aliases;
  std::vector<EntityMention> mentions;
  std::size_t reference_count = 0;

  bool operator==(const Entity&) const = default;
};

/// Surface with every whitespace run collapsed to one space. Alias maps and
/// canonical names are keyed on this form.
std::string mention_key(std::string_view surface);

/// Normalized names; a sentence-initial capitalized token is accepted if it
/// matches an entry or the first word of a multi-word entry.
using Gazetteer = std::set<std::string>;

/// Proper-noun runs: capitalized words and acronyms (>= 2 letters, all caps),
/// optionally joined by one of the connectors de/da/do/das/dos/e. Sorted by span.
std::vector<EntityMention> detect_proper_nouns(const Document& doc,
                                               const Gazetteer& gazetteer = {});

/// Reads the mention-import JSON array and validates every record against `doc`.
/// Throws SchemaError, OutOfBounds or SpanMismatch (messages name the record index).
std::vector<EntityMention> import_mentions(std::string_view json_bytes, const Document& doc);

/// Concatenates two mention lists, ordered by span; exact-duplicate spans are
/// kept once, preferring the first list.
std::vector<EntityMention> merge_mentions(std::span<const EntityMention> first,
                                          std::span<const EntityMention> second);

/// alias -> canonical, duplicates allowed so conflicts can be reported.
using AliasPairs = std::vector<std::pair<std::string, std::string>>;

/// Parses a JSON object {"alias": "canonical", ...}. Duplicate keys are preserved.
AliasPairs parse_alias_map(std::string_view json_bytes);

struct ResolveOptions {
  // A single-word entity merges into the unique multi-word entity ending in it.
  bool auto_merge_surnames = false;
};

/// Groups mentions into entities ordered by canonical name.
/// Throws ConflictingAlias when one alias maps to two canonicals.
std::vector<Entity> resolve_aliases(std::span<const EntityMention> mentions,
                                    const AliasPairs& alias_map,
                                    const ResolveOptions& options = {});

struct SelectionCriteria {
  std::size_t min_refs = 3;
  std::size_t min_interactions = 1;
  std::size_t top_n = 40;
};

/// `preview` must have one node per entity, in the same order. Returns the
/// survivors sorted by descending reference count, ties by canonical name.
/// Throws EmptySelection.
std::vector<Entity> select_entities(std::span<const Entity> entities,
                                    const graph::CooccurrenceGraph& preview,
                                    const SelectionCriteria& criteria = {});

}  // namespace storychart::entities
