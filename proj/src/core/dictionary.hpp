#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bodyct {

inline constexpr int kDictionarySchemaVersion = 1;

inline constexpr std::string_view kLungsPleura = "lungs_pleura";
inline constexpr std::string_view kLiverGallbladder = "liver_gallbladder";
inline constexpr std::string_view kKidneysUreters = "kidneys_ureters";
inline constexpr std::string_view kNoApparentDisease = "no_apparent_disease";

struct CanonicalSystem {
    std::string_view id;
    std::array<std::string_view, 4> classes;
};

/// The three organ systems and their fixed four-disease menus, in report order.
const std::array<CanonicalSystem, 3>& canonical_systems();

const CanonicalSystem* find_canonical_system(std::string_view id);

/// All 15 label ids ("system:class" plus "system:no_apparent_disease"), in
/// canonical report order.
const std::vector<std::string>& canonical_label_ids();

std::string label_id(std::string_view system, std::string_view cls);

struct DiseaseClassRules {
    std::string id;
    std::vector<std::string> keywords;                // require an organ hit in the same sentence
    std::vector<std::string> organ_specific_keywords; // self-localizing terms, no organ hit needed
};

struct SystemRules {
    std::string id;
    std::vector<std::string> organ_keywords;
    std::vector<DiseaseClassRules> classes;
    std::vector<std::string> blocklist;                // abnormal terms that veto "no apparent disease"
    std::vector<std::string> blocklist_organ_specific;
};

struct RuleDictionary {
    int schema_version = kDictionarySchemaVersion;
    std::vector<std::string> negation_keywords;
    std::vector<std::string> uncertainty_keywords;
    std::vector<std::string> abbreviations;  // sentence tokenizer configuration
    std::vector<SystemRules> systems;

    const SystemRules* find_system(std::string_view id) const;

    static RuleDictionary from_json(const nlohmann::ordered_json& j);
    nlohmann::ordered_json to_json() const;

    static RuleDictionary load(const std::string& path);
    void save(const std::string& path) const;
};

struct DictionaryIssue {
    enum class Severity { error, warning };
    Severity severity;
    std::string message;
};

struct DictionaryStats {
    unsigned rules = 0;
    unsigned keywords = 0;
};

struct DictionaryValidation {
    std::vector<DictionaryIssue> issues;
    DictionaryStats stats;

    bool ok() const;
    nlohmann::ordered_json to_json() const;
};

/// Structural checks: canonical systems and menus, non-empty keyword groups,
/// cross-class collisions within a system, negation/disease collisions.
/// Warnings do not make the dictionary invalid.
DictionaryValidation validate_dictionary(const RuleDictionary& dict);

/// Rules per system: one positive and one negation rule per disease class,
/// plus the no-apparent-disease and uncertain rules.
DictionaryStats dictionary_stats(const RuleDictionary& dict);

}  // namespace bodyct
