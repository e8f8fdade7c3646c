#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace storychart::corpus {

/// Half-open range of code-point offsets into a document's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  auto operator<=>(const Span&) const = default;
};

enum class TokenKind { Word, Punct };

struct Token {
  std::string surface;
  std::string normalized;
  Span span;
  std::size_t sentence_index = 0;
  std::size_t segment_index = 0;
  bool is_stopword = false;
  TokenKind kind = TokenKind::Word;

  bool operator==(const Token&) const = default;
};

/// Token-index range [begin, end).
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Segment&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;

class Document {
 public:
  const std::u32string& text() const { return text_; }
  const std::vector<Span>& sentences() const { return sentences_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t segment_count() const { return segments_.size(); }

  std::string slice(Span span) const;

  // Index of the first token ending after `offset`; tokens().size() if none.
  std::size_t token_at(std::size_t offset) const;
  // Index of the sentence containing [span.start, span.end), if exactly one does.
  std::optional<std::size_t> sentence_containing(Span span) const;

  bool operator==(const Document&) const = default;

 private:
  friend Document load_document(std::string_view, std::size_t, const StopwordSet&);

  std::u32string text_;
  std::vector<Span> sentences_;
  std::vector<Token> tokens_;
  std::vector<Segment> segments_;
};

/// Decodes, splits, tokenizes, marks stopwords and segments.
/// Throws InvalidEncoding, ControlCharacter, EmptyDocument, SegmentCountTooLarge.
Document load_document(std::string_view bytes, std::size_t segment_count,
                       const StopwordSet& stopwords = {});

std::vector<Span> split_sentences(std::u32string_view text);

std::vector<Token> tokenize(std::u32string_view text, std::span<const Span> sentences);

std::vector<Token> remove_stopwords(std::vector<Token> tokens, const StopwordSet& stopwords);

// Remainder goes to the earliest segments.
std::vector<Segment> segment_tokens(std::size_t token_count, std::size_t segment_count);

StopwordSet bundled_stopwords();
// One term per line, '#' starts a comment. Terms are normalized on load.
StopwordSet parse_stopwords(std::string_view file_contents);

struct TermFilter {
  bool include_stopwords = false;
  std::size_t min_length = 2;  // code points
};

bool counts_as_term(const Token& token, const TermFilter& filter);

struct FrequencyTable {
  std::map<std::string, std::size_t> entries;
  std::size_t total_tokens = 0;

  /// Descending count, ties by ascending term.
  std::vector<std::pair<std::string, std::size_t>> ranked() const;
};

FrequencyTable term_frequencies(const Document& doc, const TermFilter& filter = {});

struct TrendSeries {
  std::vector<std::string> terms;
  std::vector<std::vector<std::size_t>> counts;  // terms x segments
  std::size_t segment_count = 0;
  std::vector<std::string> warnings;

  std::size_t row_total(std::size_t term_index) const;
};

/// Terms are expected in normalized form. Terms with zero total count produce a
/// warning, not an error.
TrendSeries trend_series(const Document& doc, std::span<const std::string> terms,
                         const TermFilter& filter = {});

}  // namespace storychart::corpus
