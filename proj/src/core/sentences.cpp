#include "core/sentences.hpp"

#include <cctype>

#include "core/text.hpp"

namespace bodyct {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

SentenceTokenizer::SentenceTokenizer(const std::vector<std::string>& abbreviations) {
    for (const auto& a : abbreviations) {
        std::string key = to_lower(a);
        while (!key.empty() && key.back() == '.') key.pop_back();
        if (!key.empty()) abbreviations_.insert(std::move(key));
    }
}

const std::vector<std::string>& SentenceTokenizer::default_abbreviations() {
    static const std::vector<std::string> kDefaults = {
        "dr",  "mr",  "mrs", "ms", "prof",   "st", "jr", "sr", "vs",
        "e.g", "i.e", "etc", "cf", "approx", "cm", "mm", "ml", "cc",
        "fig",
    };
    return kDefaults;
}

std::vector<Sentence> SentenceTokenizer::split(std::string_view text) const {
    std::vector<Sentence> out;
    std::size_t sent_start = 0;

    auto emit = [&](std::size_t end_excl) {
        std::string_view raw = text.substr(sent_start, end_excl - sent_start);
        std::string_view trimmed = trim(raw);
        if (!trimmed.empty()) {
            std::size_t b = sent_start + static_cast<std::size_t>(trimmed.data() - raw.data());
            out.push_back({std::string(trimmed), b, b + trimmed.size()});
        }
        sent_start = end_excl;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        bool terminal = (i + 1 == text.size()) || is_space(text[i + 1]);
        if (!terminal) continue;

        if (c == '.') {
            // token immediately before the period, dots allowed ("e.g").
            std::size_t tb = i;
            while (tb > 0 && (is_word_char(text[tb - 1]) || text[tb - 1] == '.')) --tb;
            std::string_view tok = text.substr(tb, i - tb);
            while (!tok.empty() && tok.front() == '.') tok.remove_prefix(1);

            if (all_digits(tok)) {
                // list marker: nothing but whitespace since the sentence began
                bool at_sentence_start = true;
                for (std::size_t k = sent_start; k < tb; ++k) {
                    if (!is_space(text[k])) {
                        at_sentence_start = false;
                        break;
                    }
                }
                if (at_sentence_start) continue;
            } else if (!tok.empty() && abbreviations_.contains(to_lower(tok))) {
                continue;
            }
        }
        emit(i + 1);
    }
    emit(text.size());
    return out;
}

}  // namespace bodyct
