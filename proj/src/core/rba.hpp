#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "core/dictionary.hpp"
#include "core/sentences.hpp"
#include "core/text.hpp"

namespace bodyct {

enum class OrganStatus { has_findings, no_apparent_disease, uncertain };
enum class Decision { positive, negative };
enum class SentenceVote { positive, negated, absent };

std::string_view organ_status_name(OrganStatus s);
OrganStatus parse_organ_status(std::string_view s);

enum class HitKind { organ, disease, negation, uncertainty, blocklist };

struct KeywordHit {
    HitKind kind;
    std::string class_id;   // disease hits only
    std::string keyword;    // the dictionary entry that fired
    std::size_t token_begin = 0;
    std::size_t token_count = 0;
    bool organ_specific = false;
};

struct SentenceMatch {
    std::size_t sentence_index = 0;
    std::vector<KeywordHit> organ_hits;
    std::vector<KeywordHit> disease_hits;
    std::vector<KeywordHit> negation_hits;
    std::vector<KeywordHit> uncertainty_hits;
    std::vector<KeywordHit> blocklist_hits;
};

struct AuditEntry {
    std::string class_id;   // empty for organ-mention and blocklist events
    std::string event;      // positive | negated | suppressed_uncertain | blocklist_veto | organ_mention
    std::size_t sentence_index = 0;
    std::string keyword;
    std::string sentence;
};

struct SystemLabels {
    std::string system_id;
    OrganStatus status = OrganStatus::uncertain;
    std::vector<std::pair<std::string, Decision>> decisions;  // canonical class order
    bool organ_mentioned = false;
    bool blocklist_veto = false;
    std::vector<AuditEntry> audit;

    bool no_apparent_disease() const { return status == OrganStatus::no_apparent_disease; }
    bool any_positive() const;
    /// A report contributes to a system's dataset only when it is either
    /// positive for at least one class or cleanly normal.
    bool usable() const;
};

struct LabelSet {
    std::string report_id;
    std::string patient_id;
    std::vector<SystemLabels> systems;
};

/// Dictionary compiled for word-boundary, token-sequence matching.
/// Immutable after construction; safe to share across threads.
class RuleEngine {
public:
    explicit RuleEngine(RuleDictionary dict);

    const RuleDictionary& dictionary() const { return dict_; }
    const SentenceTokenizer& tokenizer() const { return tokenizer_; }

    SentenceMatch match_sentence(std::string_view sentence, std::size_t sentence_index,
                                 std::string_view system_id) const;

    /// Sentence-level votes for every class that had a disease hit.
    std::map<std::string, SentenceVote> decide_sentence(const SentenceMatch& match,
                                                        std::string_view system_id) const;

    SystemLabels label_system(const std::vector<Sentence>& sentences, std::string_view system_id) const;

    /// eligible_systems empty means "all systems in the dictionary".
    LabelSet label_text(std::string_view findings,
                        const std::vector<std::string>& eligible_systems = {}) const;

private:
    struct MatchEntry {
        HitKind kind;
        std::string class_id;  // disease hits
        bool organ_specific = false;
        std::string keyword;
        std::vector<std::string> tokens;
    };
    struct CompiledSystem {
        const SystemRules* rules = nullptr;
        std::vector<MatchEntry> entries;                       // organ/disease/blocklist
        std::map<std::string, std::vector<std::size_t>> by_first_token;
    };

    const CompiledSystem& system(std::string_view id) const;
    static void match_into(const std::vector<WordToken>& tokens, const std::vector<MatchEntry>& entries,
                           const std::map<std::string, std::vector<std::size_t>>& index,
                           SentenceMatch& out);

    RuleDictionary dict_;
    SentenceTokenizer tokenizer_;
    std::vector<CompiledSystem> systems_;
    std::vector<MatchEntry> shared_;  // negation + uncertainty
    std::map<std::string, std::vector<std::size_t>> shared_by_first_token_;
};

}  // namespace bodyct
