#include "core/rba.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace bodyct {

std::string_view organ_status_name(OrganStatus s) {
    switch (s) {
        case OrganStatus::has_findings: return "has_findings";
        case OrganStatus::no_apparent_disease: return "no_apparent_disease";
        case OrganStatus::uncertain: return "uncertain";
    }
    return "uncertain";
}

OrganStatus parse_organ_status(std::string_view s) {
    if (s == "has_findings") return OrganStatus::has_findings;
    if (s == "no_apparent_disease") return OrganStatus::no_apparent_disease;
    if (s == "uncertain") return OrganStatus::uncertain;
    fail(ErrorCode::parse, "unknown organ status \"" + std::string(s) + "\"");
}

bool SystemLabels::any_positive() const {
    return std::any_of(decisions.begin(), decisions.end(),
                       [](const auto& d) { return d.second == Decision::positive; });
}

bool SystemLabels::usable() const {
    if (status == OrganStatus::uncertain) return false;
    if (status == OrganStatus::no_apparent_disease) return true;
    return any_positive();
}

RuleEngine::RuleEngine(RuleDictionary dict)
    : dict_(std::move(dict)), tokenizer_(dict_.abbreviations) {
    auto validation = validate_dictionary(dict_);
    if (!validation.ok()) {
        std::string msg = "invalid dictionary:";
        for (const auto& issue : validation.issues)
            if (issue.severity == DictionaryIssue::Severity::error) msg += "\n  " + issue.message;
        fail(ErrorCode::validation, msg);
    }

    auto add_entry = [](std::vector<MatchEntry>& entries,
                        std::map<std::string, std::vector<std::size_t>>& index, MatchEntry entry) {
        entry.tokens = keyword_tokens(entry.keyword);
        if (entry.tokens.empty()) return;
        index[entry.tokens.front()].push_back(entries.size());
        entries.push_back(std::move(entry));
    };

    for (const auto& sys : dict_.systems) {
        CompiledSystem compiled;
        compiled.rules = &sys;
        for (const auto& kw : sys.organ_keywords)
            add_entry(compiled.entries, compiled.by_first_token, {HitKind::organ, "", false, kw, {}});
        for (const auto& cls : sys.classes) {
            for (const auto& kw : cls.keywords)
                add_entry(compiled.entries, compiled.by_first_token,
                          {HitKind::disease, cls.id, false, kw, {}});
            for (const auto& kw : cls.organ_specific_keywords)
                add_entry(compiled.entries, compiled.by_first_token,
                          {HitKind::disease, cls.id, true, kw, {}});
        }
        for (const auto& kw : sys.blocklist)
            add_entry(compiled.entries, compiled.by_first_token, {HitKind::blocklist, "", false, kw, {}});
        for (const auto& kw : sys.blocklist_organ_specific)
            add_entry(compiled.entries, compiled.by_first_token, {HitKind::blocklist, "", true, kw, {}});
        systems_.push_back(std::move(compiled));
    }

    for (const auto& kw : dict_.negation_keywords)
        add_entry(shared_, shared_by_first_token_, {HitKind::negation, "", false, kw, {}});
    for (const auto& kw : dict_.uncertainty_keywords)
        add_entry(shared_, shared_by_first_token_, {HitKind::uncertainty, "", false, kw, {}});
}

const RuleEngine::CompiledSystem& RuleEngine::system(std::string_view id) const {
    for (const auto& s : systems_)
        if (s.rules->id == id) return s;
    fail(ErrorCode::invalid_argument, "organ system \"" + std::string(id) + "\" is not in the dictionary");
}

void RuleEngine::match_into(const std::vector<WordToken>& tokens, const std::vector<MatchEntry>& entries,
                            const std::map<std::string, std::vector<std::size_t>>& index,
                            SentenceMatch& out) {
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        auto it = index.find(tokens[pos].text);
        if (it == index.end()) continue;
        for (std::size_t entry_idx : it->second) {
            const MatchEntry& entry = entries[entry_idx];
            if (pos + entry.tokens.size() > tokens.size()) continue;
            bool match = true;
            for (std::size_t k = 1; k < entry.tokens.size(); ++k) {
                if (tokens[pos + k].text != entry.tokens[k]) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            KeywordHit hit{entry.kind,
                           entry.class_id,
                           entry.keyword,
                           pos,
                           entry.tokens.size(),
                           entry.organ_specific};
            switch (entry.kind) {
                case HitKind::organ: out.organ_hits.push_back(std::move(hit)); break;
                case HitKind::disease: out.disease_hits.push_back(std::move(hit)); break;
                case HitKind::negation: out.negation_hits.push_back(std::move(hit)); break;
                case HitKind::uncertainty: out.uncertainty_hits.push_back(std::move(hit)); break;
                case HitKind::blocklist: out.blocklist_hits.push_back(std::move(hit)); break;
            }
        }
    }
}

SentenceMatch RuleEngine::match_sentence(std::string_view sentence, std::size_t sentence_index,
                                         std::string_view system_id) const {
    const CompiledSystem& sys = system(system_id);
    SentenceMatch match;
    match.sentence_index = sentence_index;
    std::vector<WordToken> tokens = word_tokens(sentence);
    match_into(tokens, sys.entries, sys.by_first_token, match);
    match_into(tokens, shared_, shared_by_first_token_, match);
    return match;
}

std::map<std::string, SentenceVote> RuleEngine::decide_sentence(const SentenceMatch& match,
                                                                std::string_view system_id) const {
    const CompiledSystem& sys = system(system_id);
    std::map<std::string, SentenceVote> votes;
    for (const auto& cls : sys.rules->classes) votes[cls.id] = SentenceVote::absent;

    bool organ_present = !match.organ_hits.empty();
    bool negated = !match.negation_hits.empty();
    bool uncertain = !match.uncertainty_hits.empty();

    for (const auto& hit : match.disease_hits) {
        if (hit.class_id.empty()) continue;
        bool organ_ok = organ_present || hit.organ_specific;
        if (!organ_ok) continue;
        SentenceVote vote = negated    ? SentenceVote::negated
                            : uncertain ? SentenceVote::absent
                                        : SentenceVote::positive;
        SentenceVote& slot = votes[hit.class_id];
        // positive is the strongest claim a sentence can make
        if (vote == SentenceVote::positive || slot == SentenceVote::absent) slot = vote;
    }
    return votes;
}

SystemLabels RuleEngine::label_system(const std::vector<Sentence>& sentences,
                                      std::string_view system_id) const {
    system(system_id);  // unknown ids fail before any work
    SystemLabels out;
    out.system_id = std::string(system_id);

    const CanonicalSystem* canon = find_canonical_system(system_id);
    std::map<std::string, bool> positive;
    for (auto cls : canon->classes) positive[std::string(cls)] = false;

    for (std::size_t si = 0; si < sentences.size(); ++si) {
        const Sentence& sentence = sentences[si];
        SentenceMatch match = match_sentence(sentence.text, si, system_id);

        if (!match.organ_hits.empty() && !out.organ_mentioned) {
            out.organ_mentioned = true;
            out.audit.push_back({"", "organ_mention", si, match.organ_hits.front().keyword, sentence.text});
        }
        // organ-specific terms are self-localizing: they implicate the system
        // even when no organ keyword appears anywhere in the report
        for (const auto& hit : match.disease_hits) {
            if (hit.organ_specific && !out.organ_mentioned) {
                out.organ_mentioned = true;
                out.audit.push_back({"", "organ_mention", si, hit.keyword, sentence.text});
            }
        }

        bool organ_present = !match.organ_hits.empty();
        for (const auto& hit : match.blocklist_hits) {
            if (organ_present || hit.organ_specific) {
                if (hit.organ_specific && !out.organ_mentioned) {
                    out.organ_mentioned = true;
                    out.audit.push_back({"", "organ_mention", si, hit.keyword, sentence.text});
                }
                if (!out.blocklist_veto) {
                    out.blocklist_veto = true;
                    out.audit.push_back({"", "blocklist_veto", si, hit.keyword, sentence.text});
                }
            }
        }

        auto votes = decide_sentence(match, system_id);
        for (const auto& [class_id, vote] : votes) {
            if (vote == SentenceVote::positive) {
                if (!positive[class_id]) {
                    const KeywordHit* fired = nullptr;
                    for (const auto& h : match.disease_hits)
                        if (h.class_id == class_id) {
                            fired = &h;
                            break;
                        }
                    out.audit.push_back(
                        {class_id, "positive", si, fired ? fired->keyword : "", sentence.text});
                }
                positive[class_id] = true;
            } else if (vote == SentenceVote::negated) {
                const KeywordHit* fired = nullptr;
                for (const auto& h : match.disease_hits)
                    if (h.class_id == class_id) {
                        fired = &h;
                        break;
                    }
                out.audit.push_back({class_id, "negated", si, fired ? fired->keyword : "", sentence.text});
            }
        }
    }

    for (auto cls : canon->classes)
        out.decisions.emplace_back(std::string(cls),
                                   positive[std::string(cls)] ? Decision::positive : Decision::negative);

    if (!out.organ_mentioned) {
        out.status = OrganStatus::uncertain;
    } else if (out.any_positive() || out.blocklist_veto) {
        out.status = OrganStatus::has_findings;
    } else {
        out.status = OrganStatus::no_apparent_disease;
    }
    return out;
}

LabelSet RuleEngine::label_text(std::string_view findings,
                                const std::vector<std::string>& eligible_systems) const {
    LabelSet out;
    std::vector<Sentence> sentences = tokenizer_.split(findings);
    for (const auto& sys : dict_.systems) {
        if (!eligible_systems.empty() &&
            std::find(eligible_systems.begin(), eligible_systems.end(), sys.id) == eligible_systems.end())
            continue;
        out.systems.push_back(label_system(sentences, sys.id));
    }
    return out;
}

}  // namespace bodyct
