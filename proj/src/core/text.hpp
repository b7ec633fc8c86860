#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bodyct {

/// A word token inside a larger string, with byte offsets into the source.
struct WordToken {
    std::string text;  // lowercased
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the last byte
};

std::string to_lower(std::string_view s);

/// Trims and collapses every whitespace run to a single space.
std::string collapse_whitespace(std::string_view s);

/// Removes every whitespace character.
std::string strip_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

bool is_word_char(char c);

/// Splits into maximal runs of [A-Za-z0-9], lowercased, with offsets.
std::vector<WordToken> word_tokens(std::string_view s);

/// Splits a keyword phrase into its lowercase word tokens ("bile duct" -> {"bile","duct"}).
std::vector<std::string> keyword_tokens(std::string_view phrase);

/// Case-insensitive substring search; returns npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0);

/// Fixed-precision, locale-independent decimal formatting ("%.*f" semantics).
std::string format_fixed(double value, int precision);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lexical YYYY-MM-DD check; empty strings are allowed (missing date sorts first).
bool is_iso_date(std::string_view s);

uint64_t fnv1a64(std::string_view s);
uint64_t splitmix64(uint64_t x);

}  // namespace bodyct
