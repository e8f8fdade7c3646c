#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Thin wrappers over ICU. All offsets in this project are code-point offsets.
namespace storychart::unicode {

// Throws Error(InvalidEncoding) naming the byte offset of the first bad sequence.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);

/// Lowercase, then NFC. Diacritics are kept.
std::string normalize(std::u32string_view text);
std::string normalize(std::string_view utf8);

std::size_t length(std::string_view utf8);

bool is_letter(char32_t c);
bool is_word_char(char32_t c);  // letters, combining marks, digits
bool is_upper(char32_t c);      // uppercase or titlecase letter
bool is_lower(char32_t c);
bool is_space(char32_t c);

}  // namespace storychart::unicode
