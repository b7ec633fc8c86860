#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace bodyct {

struct Sentence {
    std::string text;         // trimmed
    std::size_t begin = 0;    // byte offsets of the trimmed span in the source
    std::size_t end = 0;
};

/// Splits findings text on sentence-terminal . ! ? followed by whitespace or
/// end of text. A period does not terminate a sentence when it closes a known
/// abbreviation ("dr", "cm", "e.g", ...) or a numbered-list marker at the
/// start of a sentence ("1."). Decimal points never split because they are
/// not followed by whitespace.
class SentenceTokenizer {
public:
    explicit SentenceTokenizer(const std::vector<std::string>& abbreviations);

    std::vector<Sentence> split(std::string_view text) const;

    static const std::vector<std::string>& default_abbreviations();

private:
    std::unordered_set<std::string> abbreviations_;  // lowercase, no trailing period
};

}  // namespace bodyct
