#include "core/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "core/error.hpp"
#include "core/sentences.hpp"
#include "core/text.hpp"

namespace bodyct {

const std::array<CanonicalSystem, 3>& canonical_systems() {
    static const std::array<CanonicalSystem, 3> kSystems = {{
        {kLungsPleura, {"atelectasis", "nodule", "emphysema", "effusion"}},
        {kLiverGallbladder, {"hepatobiliary_calcification", "lesion", "dilation", "fatty"}},
        {kKidneysUreters, {"stone", "lesion", "atrophy", "cyst"}},
    }};
    return kSystems;
}

const CanonicalSystem* find_canonical_system(std::string_view id) {
    for (const auto& s : canonical_systems())
        if (s.id == id) return &s;
    return nullptr;
}

const std::vector<std::string>& canonical_label_ids() {
    static const std::vector<std::string> kLabels = [] {
        std::vector<std::string> out;
        for (const auto& s : canonical_systems()) {
            for (auto c : s.classes) out.push_back(label_id(s.id, c));
            out.push_back(label_id(s.id, kNoApparentDisease));
        }
        return out;
    }();
    return kLabels;
}

std::string label_id(std::string_view system, std::string_view cls) {
    std::string out(system);
    out += ':';
    out += cls;
    return out;
}

const SystemRules* RuleDictionary::find_system(std::string_view id) const {
    for (const auto& s : systems)
        if (s.id == id) return &s;
    return nullptr;
}

namespace {

std::vector<std::string> string_list(const nlohmann::ordered_json& j, const std::string& key,
                                     bool required, const std::string& where) {
    if (!j.contains(key)) {
        if (required) fail(ErrorCode::parse, "dictionary: missing \"" + key + "\" in " + where);
        return {};
    }
    const auto& v = j.at(key);
    if (!v.is_array()) fail(ErrorCode::parse, "dictionary: \"" + key + "\" must be an array in " + where);
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) fail(ErrorCode::parse, "dictionary: \"" + key + "\" entries must be strings in " + where);
        out.push_back(e.get<std::string>());
    }
    return out;
}

nlohmann::ordered_json list_json(const std::vector<std::string>& v) {
    auto j = nlohmann::ordered_json::array();
    for (const auto& s : v) j.push_back(s);
    return j;
}

}  // namespace

RuleDictionary RuleDictionary::from_json(const nlohmann::ordered_json& j) {
    RuleDictionary dict;
    if (!j.is_object()) fail(ErrorCode::parse, "dictionary: top level must be an object");
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer())
        fail(ErrorCode::parse, "dictionary: missing integer \"schema_version\"");
    dict.schema_version = j.at("schema_version").get<int>();
    if (dict.schema_version != kDictionarySchemaVersion)
        fail(ErrorCode::validation,
             "dictionary: schema_version " + std::to_string(dict.schema_version) +
                 " is not supported (expected " + std::to_string(kDictionarySchemaVersion) + ")");
    dict.negation_keywords = string_list(j, "negation", true, "top level");
    dict.uncertainty_keywords = string_list(j, "uncertainty", true, "top level");
    dict.abbreviations = j.contains("abbreviations")
                             ? string_list(j, "abbreviations", false, "top level")
                             : SentenceTokenizer::default_abbreviations();
    if (!j.contains("systems") || !j.at("systems").is_array())
        fail(ErrorCode::parse, "dictionary: missing \"systems\" array");
    for (const auto& js : j.at("systems")) {
        SystemRules sys;
        if (!js.contains("id") || !js.at("id").is_string())
            fail(ErrorCode::parse, "dictionary: system entry missing string \"id\"");
        sys.id = js.at("id").get<std::string>();
        sys.organ_keywords = string_list(js, "organ_keywords", true, "system " + sys.id);
        sys.blocklist = string_list(js, "blocklist", false, "system " + sys.id);
        sys.blocklist_organ_specific =
            string_list(js, "blocklist_organ_specific", false, "system " + sys.id);
        if (!js.contains("classes") || !js.at("classes").is_array())
            fail(ErrorCode::parse, "dictionary: system " + sys.id + " missing \"classes\" array");
        for (const auto& jc : js.at("classes")) {
            DiseaseClassRules cls;
            if (!jc.contains("id") || !jc.at("id").is_string())
                fail(ErrorCode::parse, "dictionary: class entry missing string \"id\" in system " + sys.id);
            cls.id = jc.at("id").get<std::string>();
            cls.keywords = string_list(jc, "keywords", false, "class " + sys.id + ":" + cls.id);
            cls.organ_specific_keywords =
                string_list(jc, "organ_specific_keywords", false, "class " + sys.id + ":" + cls.id);
            sys.classes.push_back(std::move(cls));
        }
        dict.systems.push_back(std::move(sys));
    }
    return dict;
}

nlohmann::ordered_json RuleDictionary::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = schema_version;
    j["negation"] = list_json(negation_keywords);
    j["uncertainty"] = list_json(uncertainty_keywords);
    j["abbreviations"] = list_json(abbreviations);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& sys : systems) {
        nlohmann::ordered_json js;
        js["id"] = sys.id;
        js["organ_keywords"] = list_json(sys.organ_keywords);
        auto classes = nlohmann::ordered_json::array();
        for (const auto& cls : sys.classes) {
            nlohmann::ordered_json jc;
            jc["id"] = cls.id;
            jc["keywords"] = list_json(cls.keywords);
            jc["organ_specific_keywords"] = list_json(cls.organ_specific_keywords);
            classes.push_back(std::move(jc));
        }
        js["classes"] = std::move(classes);
        js["blocklist"] = list_json(sys.blocklist);
        js["blocklist_organ_specific"] = list_json(sys.blocklist_organ_specific);
        arr.push_back(std::move(js));
    }
    j["systems"] = std::move(arr);
    return j;
}

RuleDictionary RuleDictionary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open dictionary file: " + path);
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse, "dictionary " + path + ": " + e.what());
    }
    return from_json(j);
}

void RuleDictionary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write dictionary file: " + path);
    out << to_json().dump(2) << '\n';
}

bool DictionaryValidation::ok() const {
    return std::none_of(issues.begin(), issues.end(), [](const DictionaryIssue& i) {
        return i.severity == DictionaryIssue::Severity::error;
    });
}

nlohmann::ordered_json DictionaryValidation::to_json() const {
    nlohmann::ordered_json j;
    j["valid"] = ok();
    j["rules"] = stats.rules;
    j["keywords"] = stats.keywords;
    auto errors = nlohmann::ordered_json::array();
    auto warnings = nlohmann::ordered_json::array();
    for (const auto& i : issues) {
        if (i.severity == DictionaryIssue::Severity::error) errors.push_back(i.message);
        else warnings.push_back(i.message);
    }
    j["errors"] = std::move(errors);
    j["warnings"] = std::move(warnings);
    return j;
}

DictionaryStats dictionary_stats(const RuleDictionary& dict) {
    DictionaryStats stats;
    for (const auto& sys : dict.systems) {
        // positive + negation rule per class, no-apparent-disease rule, uncertain rule
        stats.rules += 2 * static_cast<unsigned>(sys.classes.size()) + 2;
        stats.keywords += static_cast<unsigned>(sys.organ_keywords.size());
        stats.keywords += static_cast<unsigned>(sys.blocklist.size());
        stats.keywords += static_cast<unsigned>(sys.blocklist_organ_specific.size());
        for (const auto& cls : sys.classes) {
            stats.keywords += static_cast<unsigned>(cls.keywords.size());
            stats.keywords += static_cast<unsigned>(cls.organ_specific_keywords.size());
        }
    }
    stats.keywords += static_cast<unsigned>(dict.negation_keywords.size());
    stats.keywords += static_cast<unsigned>(dict.uncertainty_keywords.size());
    return stats;
}

namespace {

std::string normalize_keyword(const std::string& kw) {
    return join(keyword_tokens(kw), " ");
}

}  // namespace

DictionaryValidation validate_dictionary(const RuleDictionary& dict) {
    DictionaryValidation result;
    result.stats = dictionary_stats(dict);
    auto error = [&](std::string msg) {
        result.issues.push_back({DictionaryIssue::Severity::error, std::move(msg)});
    };
    auto warning = [&](std::string msg) {
        result.issues.push_back({DictionaryIssue::Severity::warning, std::move(msg)});
    };

    if (dict.systems.empty()) error("dictionary defines no organ systems");
    if (dict.negation_keywords.empty()) warning("negation keyword set is empty: negation detection disabled");
    if (dict.uncertainty_keywords.empty()) warning("uncertainty keyword set is empty");

    std::set<std::string> seen_systems;
    std::set<std::string> all_disease_keywords;

    for (const auto& sys : dict.systems) {
        const CanonicalSystem* canon = find_canonical_system(sys.id);
        if (canon == nullptr) {
            error("unknown organ system \"" + sys.id + "\"");
            continue;
        }
        if (!seen_systems.insert(sys.id).second) error("organ system \"" + sys.id + "\" appears twice");

        std::set<std::string> menu;
        for (const auto& cls : sys.classes) menu.insert(cls.id);
        std::set<std::string> expected(canon->classes.begin(), canon->classes.end());
        if (menu != expected) {
            error("system \"" + sys.id + "\" must carry exactly its four disease classes");
        }

        if (sys.organ_keywords.empty()) error("system \"" + sys.id + "\" has no organ keywords");

        // collisions across classes within this system
        std::map<std::string, std::string> owner;
        for (const auto& cls : sys.classes) {
            std::set<std::string> in_class;
            std::size_t total = cls.keywords.size() + cls.organ_specific_keywords.size();
            if (total == 0) error("class \"" + sys.id + ":" + cls.id + "\" has an empty keyword group");
            auto check = [&](const std::string& raw) {
                std::string norm = normalize_keyword(raw);
                if (norm.empty()) {
                    error("class \"" + sys.id + ":" + cls.id + "\" contains a blank keyword");
                    return;
                }
                if (!in_class.insert(norm).second)
                    warning("keyword \"" + raw + "\" is duplicated inside class " + sys.id + ":" + cls.id);
                auto [it, inserted] = owner.emplace(norm, cls.id);
                if (!inserted && it->second != cls.id)
                    error("keyword \"" + raw + "\" is mapped to both \"" + it->second + "\" and \"" +
                          cls.id + "\" in system " + sys.id);
                all_disease_keywords.insert(norm);
            };
            for (const auto& kw : cls.keywords) check(kw);
            for (const auto& kw : cls.organ_specific_keywords) check(kw);
        }

        std::set<std::string> block_seen;
        auto check_block = [&](const std::string& raw) {
            std::string norm = normalize_keyword(raw);
            if (norm.empty()) {
                error("system \"" + sys.id + "\" blocklist contains a blank keyword");
                return;
            }
            if (!block_seen.insert(norm).second)
                warning("blocklist keyword \"" + raw + "\" is duplicated in system " + sys.id);
            if (owner.contains(norm))
                warning("blocklist keyword \"" + raw + "\" also fires disease class " + sys.id + ":" +
                        owner.at(norm));
        };
        for (const auto& kw : sys.blocklist) check_block(kw);
        for (const auto& kw : sys.blocklist_organ_specific) check_block(kw);
    }

    for (const auto& raw : dict.negation_keywords) {
        std::string norm = normalize_keyword(raw);
        if (norm.empty()) {
            error("negation set contains a blank keyword");
        } else if (all_disease_keywords.contains(norm)) {
            error("negation keyword \"" + raw + "\" collides with a disease keyword");
        }
    }
    for (const auto& raw : dict.uncertainty_keywords) {
        std::string norm = normalize_keyword(raw);
        if (norm.empty()) error("uncertainty set contains a blank keyword");
        else if (all_disease_keywords.contains(norm))
            warning("uncertainty keyword \"" + raw + "\" collides with a disease keyword");
    }

    return result;
}

}  // namespace bodyct
