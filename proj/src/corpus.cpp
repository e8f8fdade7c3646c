#include "storychart/corpus.hpp"

#include <algorithm>
#include <array>

#include "storychart/error.hpp"
#include "storychart/unicode.hpp"

namespace storychart::corpus {

namespace {

constexpr std::array<std::string_view, 9> kAbbreviations = {
    "sr", "sra", "dr", "dra", "prof", "eng", "exmo", "art", "pág"};

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool is_closer(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'»':
    case U'”': case U'’':
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U'(': case U'[': case U'«':
    case U'“': case U'‘': case U'—': case U'–': case U'-':
      return true;
    default:
      return false;
  }
}

bool is_joiner(char32_t c) {
  return c == U'-' || c == U'\'' || c == U'’' || c == U'‐';
}

bool is_control(char32_t c) {
  if (c == U'\n' || c == U'\t' || c == U'\r') return false;
  return c < 0x20 || (c >= 0x7F && c <= 0x9F);
}

// True when the word ending right before `dot` is a bundled abbreviation.
bool abbreviation_before(std::u32string_view text, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && unicode::is_word_char(text[begin - 1])) --begin;
  if (begin == dot) return false;
  const std::string word = unicode::normalize(text.substr(begin, dot - begin));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

}  // namespace

std::vector<Span> split_sentences(std::u32string_view text) {
  std::vector<Span> sentences;
  const std::size_t n = text.size();
  std::size_t i = 0;

  auto skip_space = [&](std::size_t p) {
    while (p < n && unicode::is_space(text[p])) ++p;
    return p;
  };

  while (true) {
    i = skip_space(i);
    if (i >= n) break;
    const std::size_t start = i;
    std::size_t end = n;
    bool closed = false;
    std::size_t j = start;
    while (j < n) {
      if (!is_terminator(text[j])) {
        ++j;
        continue;
      }
      std::size_t k = j;
      while (k < n && is_terminator(text[k])) ++k;
      const bool single_dot = (k - j == 1 && text[j] == U'.');
      if (single_dot && abbreviation_before(text, j)) {
        j = k;
        continue;
      }
      while (k < n && is_closer(text[k])) ++k;

      bool boundary = false;
      const std::size_t after = skip_space(k);
      if (after >= n) {
        boundary = true;
      } else if (after > k) {
        std::size_t p = after;
        while (p < n && is_opener(text[p])) {
          p = skip_space(p + 1);
        }
        boundary = p < n && unicode::is_upper(text[p]);
      }
      if (boundary) {
        end = k;
        closed = true;
        break;
      }
      j = k;
    }
    if (!closed) {
      end = n;
      while (end > start && unicode::is_space(text[end - 1])) --end;
    }
    sentences.push_back({start, end});
    i = end;
  }
  return sentences;
}

std::vector<Token> tokenize(std::u32string_view text, std::span<const Span> sentences) {
  std::vector<Token> tokens;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const Span sentence = sentences[s];
    std::size_t i = sentence.start;
    while (i < sentence.end) {
      const char32_t c = text[i];
      if (unicode::is_space(c)) {
        ++i;
        continue;
      }
      Token token;
      token.sentence_index = s;
      token.span.start = i;
      if (unicode::is_word_char(c)) {
        std::size_t j = i + 1;
        while (j < sentence.end) {
          if (unicode::is_word_char(text[j])) {
            ++j;
          } else if (is_joiner(text[j]) && j + 1 < sentence.end &&
                     unicode::is_word_char(text[j + 1])) {
            j += 2;
          } else {
            break;
          }
        }
        token.span.end = j;
        token.kind = TokenKind::Word;
      } else {
        token.span.end = i + 1;
        token.kind = TokenKind::Punct;
      }
      const auto piece = text.substr(token.span.start, token.span.size());
      token.surface = unicode::encode_utf8(piece);
      token.normalized = unicode::normalize(piece);
      tokens.push_back(std::move(token));
      i = tokens.back().span.end;
    }
  }
  return tokens;
}

std::vector<Token> remove_stopwords(std::vector<Token> tokens, const StopwordSet& stopwords) {
  for (auto& token : tokens) {
    token.is_stopword = stopwords.contains(token.normalized);
  }
  return tokens;
}

std::vector<Segment> segment_tokens(std::size_t token_count, std::size_t segment_count) {
  if (segment_count == 0) {
    throw Error(ErrorCode::InvalidArgument, "segment count must be at least 1");
  }
  if (segment_count > token_count) {
    throw Error(ErrorCode::SegmentCountTooLarge,
                "segment count " + std::to_string(segment_count) + " exceeds token count " +
                    std::to_string(token_count));
  }
  const std::size_t base = token_count / segment_count;
  const std::size_t extra = token_count % segment_count;
  std::vector<Segment> segments;
  segments.reserve(segment_count);
  std::size_t begin = 0;
  for (std::size_t s = 0; s < segment_count; ++s) {
    const std::size_t size = base + (s < extra ? 1 : 0);
    segments.push_back({begin, begin + size});
    begin += size;
  }
  return segments;
}

Document load_document(std::string_view bytes, std::size_t segment_count,
                       const StopwordSet& stopwords) {
  if (segment_count == 0) {
    throw Error(ErrorCode::InvalidArgument, "segment count must be at least 1");
  }
  Document doc;
  doc.text_ = unicode::decode_utf8(bytes);
  if (!doc.text_.empty() && doc.text_.front() == U'﻿') {
    doc.text_.erase(0, 1);
  }
  for (std::size_t i = 0; i < doc.text_.size(); ++i) {
    if (is_control(doc.text_[i])) {
      throw Error(ErrorCode::ControlCharacter,
                  "control character U+" + std::to_string(static_cast<unsigned>(doc.text_[i])) +
                      " at offset " + std::to_string(i));
    }
  }
  doc.sentences_ = split_sentences(doc.text_);
  doc.tokens_ = remove_stopwords(tokenize(doc.text_, doc.sentences_), stopwords);
  if (doc.tokens_.empty()) {
    throw Error(ErrorCode::EmptyDocument, "document contains no tokens");
  }
  doc.segments_ = segment_tokens(doc.tokens_.size(), segment_count);
  for (std::size_t s = 0; s < doc.segments_.size(); ++s) {
    for (std::size_t t = doc.segments_[s].begin; t < doc.segments_[s].end; ++t) {
      doc.tokens_[t].segment_index = s;
    }
  }
  return doc;
}

std::string Document::slice(Span span) const {
  return unicode::encode_utf8(std::u32string_view(text_).substr(span.start, span.size()));
}

std::size_t Document::token_at(std::size_t offset) const {
  auto it = std::partition_point(tokens_.begin(), tokens_.end(),
                                 [&](const Token& t) { return t.span.end <= offset; });
  return static_cast<std::size_t>(it - tokens_.begin());
}

std::optional<std::size_t> Document::sentence_containing(Span span) const {
  auto it = std::partition_point(sentences_.begin(), sentences_.end(),
                                 [&](const Span& s) { return s.end <= span.start; });
  if (it == sentences_.end() || !it->contains(span)) return std::nullopt;
  return static_cast<std::size_t>(it - sentences_.begin());
}

bool counts_as_term(const Token& token, const TermFilter& filter) {
  if (token.kind != TokenKind::Word) return false;
  if (token.is_stopword && !filter.include_stopwords) return false;
  return unicode::length(token.normalized) >= filter.min_length;
}

std::vector<std::pair<std::string, std::size_t>> FrequencyTable::ranked() const {
  std::vector<std::pair<std::string, std::size_t>> rows(entries.begin(), entries.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return rows;
}

FrequencyTable term_frequencies(const Document& doc, const TermFilter& filter) {
  FrequencyTable table;
  for (const auto& token : doc.tokens()) {
    if (token.kind == TokenKind::Word) ++table.total_tokens;
    if (counts_as_term(token, filter)) ++table.entries[token.normalized];
  }
  return table;
}

std::size_t TrendSeries::row_total(std::size_t term_index) const {
  std::size_t total = 0;
  for (auto c : counts.at(term_index)) total += c;
  return total;
}

TrendSeries trend_series(const Document& doc, std::span<const std::string> terms,
                         const TermFilter& filter) {
  if (terms.empty()) {
    throw Error(ErrorCode::InvalidArgument, "trend series needs at least one term");
  }
  TrendSeries series;
  series.terms.assign(terms.begin(), terms.end());
  series.segment_count = doc.segment_count();
  series.counts.assign(terms.size(), std::vector<std::size_t>(series.segment_count, 0));

  std::map<std::string_view, std::vector<std::size_t>> rows_by_term;
  for (std::size_t i = 0; i < terms.size(); ++i) rows_by_term[terms[i]].push_back(i);

  for (const auto& token : doc.tokens()) {
    if (!counts_as_term(token, filter)) continue;
    auto it = rows_by_term.find(token.normalized);
    if (it == rows_by_term.end()) continue;
    for (auto row : it->second) ++series.counts[row][token.segment_index];
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (series.row_total(i) == 0) {
      series.warnings.push_back("UnknownTermWarning: term '" + terms[i] +
                                "' does not occur in the document");
    }
  }
  return series;
}

}  // namespace storychart::corpus
