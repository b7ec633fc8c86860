#include "core/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "core/csv.hpp"
#include "core/dictionary.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace bodyct {

std::string_view protocol_name(Protocol p) {
    switch (p) {
        case Protocol::chest: return "chest";
        case Protocol::abdomen: return "abdomen";
        case Protocol::chest_abdomen: return "chest_abdomen";
        case Protocol::abdomen_pelvis: return "abdomen_pelvis";
        case Protocol::chest_abdomen_pelvis: return "chest_abdomen_pelvis";
        case Protocol::other: return "other";
    }
    return "other";
}

std::optional<Protocol> parse_protocol(std::string_view s) {
    std::string norm = to_lower(s);
    for (char& c : norm)
        if (c == '-' || c == ' ') c = '_';
    if (norm == "chest") return Protocol::chest;
    if (norm == "abdomen") return Protocol::abdomen;
    if (norm == "chest_abdomen") return Protocol::chest_abdomen;
    if (norm == "abdomen_pelvis") return Protocol::abdomen_pelvis;
    if (norm == "chest_abdomen_pelvis") return Protocol::chest_abdomen_pelvis;
    if (norm == "other") return Protocol::other;
    return std::nullopt;
}

std::string_view disposition_name(Disposition d) {
    switch (d) {
        case Disposition::kept: return "kept";
        case Disposition::excluded_incomplete: return "excluded_incomplete";
        case Disposition::excluded_duplicate: return "excluded_duplicate";
        case Disposition::excluded_nonbody: return "excluded_nonbody";
        case Disposition::excluded_protocol: return "excluded_protocol";
    }
    return "kept";
}

CorpusFormat parse_corpus_format(std::string_view s) {
    std::string norm = to_lower(s);
    if (norm.empty() || norm == "auto") return CorpusFormat::autodetect;
    if (norm == "jsonl" || norm == "ndjson") return CorpusFormat::jsonl;
    if (norm == "csv") return CorpusFormat::csv;
    fail(ErrorCode::invalid_argument, "unknown corpus format \"" + std::string(s) + "\"");
}

namespace {

const char* kRequiredKeys[] = {"report_id", "patient_id", "study_date", "protocol", "body", "text"};

struct FieldValues {
    std::string report_id, patient_id, study_date, protocol_raw, body_raw, text;
    bool body_is_bool = false;
    bool body_value = true;
};

/// Shared record assembly for both formats; returns error message or empty.
std::string make_report(const FieldValues& f, Report& out) {
    std::string who = f.report_id.empty() ? "record" : "record " + f.report_id;
    if (f.report_id.empty()) return who + ": missing field \"report_id\"";
    if (f.patient_id.empty()) return who + ": missing field \"patient_id\"";
    if (f.text.empty()) return who + ": missing field \"text\"";
    if (!is_iso_date(f.study_date)) return who + ": study_date \"" + f.study_date + "\" is not YYYY-MM-DD";
    auto protocol = parse_protocol(f.protocol_raw);
    if (!protocol) return who + ": unknown protocol \"" + f.protocol_raw + "\"";
    bool body = f.body_value;
    if (!f.body_is_bool) {
        std::string b = to_lower(f.body_raw);
        if (b == "true" || b == "1" || b == "yes") body = true;
        else if (b == "false" || b == "0" || b == "no") body = false;
        else return who + ": body \"" + f.body_raw + "\" is not a boolean";
    }
    out = Report{f.report_id, f.patient_id, f.study_date, *protocol, body, f.text, ""};
    return "";
}

ParsedCorpus parse_jsonl(std::istream& in) {
    ParsedCorpus out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            out.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
            continue;
        }
        if (!j.is_object()) {
            out.errors.push_back({line_no, "record is not a JSON object"});
            continue;
        }
        std::string missing;
        for (const char* key : kRequiredKeys)
            if (!j.contains(key)) missing = key;
        if (!missing.empty()) {
            std::string id = j.value("report_id", std::string("?"));
            out.errors.push_back({line_no, "record " + id + ": missing field \"" + missing + "\""});
            continue;
        }
        FieldValues f;
        try {
            f.report_id = j.at("report_id").get<std::string>();
            f.patient_id = j.at("patient_id").get<std::string>();
            f.study_date = j.at("study_date").get<std::string>();
            f.protocol_raw = j.at("protocol").get<std::string>();
            if (j.at("body").is_boolean()) {
                f.body_is_bool = true;
                f.body_value = j.at("body").get<bool>();
            } else {
                f.body_raw = j.at("body").dump();
            }
            f.text = j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            out.errors.push_back({line_no, std::string("bad field type: ") + e.what()});
            continue;
        }
        Report report;
        std::string err = make_report(f, report);
        if (!err.empty()) out.errors.push_back({line_no, err});
        else out.reports.push_back(std::move(report));
    }
    return out;
}

ParsedCorpus parse_csv_corpus(std::istream& in) {
    ParsedCorpus out;
    std::vector<std::string> row;
    std::size_t line_no = 0;
    if (!csv::read_row(in, row, line_no)) return out;
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < row.size(); ++i) columns[to_lower(std::string(trim(row[i])))] = i;
    for (const char* key : kRequiredKeys)
        if (!columns.contains(key))
            fail(ErrorCode::parse, std::string("corpus table header is missing column \"") + key + "\"");

    while (true) {
        std::size_t record_line = line_no + 1;
        if (!csv::read_row(in, row, line_no)) break;
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        auto get = [&](const char* key) -> std::string {
            std::size_t idx = columns.at(key);
            return idx < row.size() ? row[idx] : "";
        };
        FieldValues f;
        f.report_id = get("report_id");
        f.patient_id = get("patient_id");
        f.study_date = get("study_date");
        f.protocol_raw = get("protocol");
        f.body_raw = get("body");
        f.text = get("text");
        Report report;
        std::string err = make_report(f, report);
        if (!err.empty()) out.errors.push_back({record_line, err});
        else out.reports.push_back(std::move(report));
    }
    return out;
}

}  // namespace

ParsedCorpus parse_corpus(const std::string& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open corpus file: " + path);
    if (format == CorpusFormat::autodetect) {
        if (path.ends_with(".csv") || path.ends_with(".tsv")) format = CorpusFormat::csv;
        else if (path.ends_with(".jsonl") || path.ends_with(".ndjson") || path.ends_with(".json"))
            format = CorpusFormat::jsonl;
        else {
            int first = in.peek();
            format = (first == '{') ? CorpusFormat::jsonl : CorpusFormat::csv;
        }
    }
    ParsedCorpus parsed =
        format == CorpusFormat::jsonl ? parse_jsonl(in) : parse_csv_corpus(in);

    std::map<std::string, std::size_t> seen;
    for (const auto& r : parsed.reports) {
        auto [it, inserted] = seen.emplace(r.report_id, 1);
        if (!inserted && ++it->second == 2)
            parsed.errors.push_back({0, "report_id \"" + r.report_id + "\" is not unique in the corpus"});
    }
    return parsed;
}

bool extract_findings(Report& report, const FindingsConfig& config) {
    const std::string& text = report.raw_text;

    auto word_boundary_find = [&](const std::vector<std::string>& needles, std::size_t from,
                                  std::size_t& match_begin, std::size_t& match_end) -> bool {
        match_begin = std::string::npos;
        for (const auto& needle : needles) {
            if (needle.empty()) continue;
            std::size_t pos = from;
            while ((pos = ifind(text, needle, pos)) != std::string::npos) {
                bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
                std::size_t end = pos + needle.size();
                bool right_ok = end >= text.size() || !is_word_char(text[end]) ||
                                !is_word_char(needle.back());
                if (left_ok && right_ok) {
                    if (pos < match_begin || (pos == match_begin && end > match_end)) {
                        match_begin = pos;
                        match_end = end;
                    }
                    break;
                }
                ++pos;
            }
        }
        return match_begin != std::string::npos;
    };

    std::size_t hb = 0, he = 0;
    if (!word_boundary_find(config.headers, 0, hb, he)) {
        report.findings.clear();
        return false;
    }
    if (he < text.size() && text[he] == ':') ++he;

    std::size_t tb = 0, te = 0;
    std::size_t findings_end = text.size();
    if (word_boundary_find(config.terminators, he, tb, te)) findings_end = tb;

    report.findings = std::string(trim(std::string_view(text).substr(he, findings_end - he)));
    return true;
}

FilterOutcome protocol_filter(const Report& report, std::string_view system_id) {
    FilterOutcome out{report.report_id, report.patient_id, std::string(system_id), Disposition::kept, ""};
    if (!report.body_flag) {
        out.disposition = Disposition::excluded_nonbody;
        out.reason = "non-body report";
        return out;
    }
    bool abdominal = system_id == kLiverGallbladder || system_id == kKidneysUreters;
    if (abdominal && report.protocol == Protocol::chest) {
        out.disposition = Disposition::excluded_protocol;
        out.reason = "chest protocol excluded for abdominal organ system";
        return out;
    }
    out.reason = "admissible";
    return out;
}

void write_ingested_jsonl(std::ostream& os, const std::vector<IngestedReport>& reports) {
    for (const auto& entry : reports) {
        const Report& r = entry.report;
        nlohmann::ordered_json j;
        j["report_id"] = r.report_id;
        j["patient_id"] = r.patient_id;
        j["study_date"] = r.study_date;
        j["protocol"] = protocol_name(r.protocol);
        j["body"] = r.body_flag;
        j["text"] = r.raw_text;
        j["findings"] = r.findings;
        j["eligible_systems"] = entry.eligible_systems;
        os << j.dump() << '\n';
    }
}

std::vector<IngestedReport> read_ingested_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open reports file: " + path);
    std::vector<IngestedReport> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            IngestedReport entry;
            entry.report.report_id = j.at("report_id").get<std::string>();
            entry.report.patient_id = j.at("patient_id").get<std::string>();
            entry.report.study_date = j.value("study_date", std::string());
            auto protocol = parse_protocol(j.value("protocol", std::string("other")));
            entry.report.protocol = protocol.value_or(Protocol::other);
            entry.report.body_flag = j.value("body", true);
            entry.report.raw_text = j.value("text", std::string());
            entry.report.findings = j.at("findings").get<std::string>();
            entry.eligible_systems = j.at("eligible_systems").get<std::vector<std::string>>();
            out.push_back(std::move(entry));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

bool looks_like_ingested_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        return j.is_object() && j.contains("findings") && j.contains("eligible_systems");
    }
    return false;
}

void write_filter_audit_csv(std::ostream& os, const std::vector<FilterOutcome>& audit) {
    csv::write_row(os, {"report_id", "patient_id", "system", "disposition", "reason"});
    for (const auto& outcome : audit)
        csv::write_row(os, {outcome.report_id, outcome.patient_id, outcome.system,
                            std::string(disposition_name(outcome.disposition)), outcome.reason});
}

void write_record_errors_jsonl(std::ostream& os, const std::vector<RecordError>& errors) {
    for (const auto& err : errors) {
        nlohmann::ordered_json j;
        j["line"] = err.line;
        j["message"] = err.message;
        os << j.dump() << '\n';
    }
}

IngestResult run_ingest_filters(std::vector<Report> reports, const FindingsConfig& config) {
    IngestResult result;
    result.input_count = reports.size();

    std::vector<bool> complete(reports.size(), false);
    for (std::size_t i = 0; i < reports.size(); ++i)
        complete[i] = extract_findings(reports[i], config) && !reports[i].findings.empty();

    // duplicate key -> index of the winning report
    std::map<std::pair<std::string, std::string>, std::size_t> winners;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!complete[i]) continue;
        auto key = std::make_pair(reports[i].patient_id,
                                  to_lower(collapse_whitespace(reports[i].findings)));
        auto [it, inserted] = winners.emplace(key, i);
        if (!inserted) {
            const Report& held = reports[it->second];
            const Report& cand = reports[i];
            if (std::tie(cand.study_date, cand.report_id) < std::tie(held.study_date, held.report_id))
                it->second = i;
        }
    }
    std::vector<bool> duplicate(reports.size(), false);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!complete[i]) continue;
        auto key = std::make_pair(reports[i].patient_id,
                                  to_lower(collapse_whitespace(reports[i].findings)));
        duplicate[i] = winners.at(key) != i;
        if (duplicate[i]) ++result.duplicate_count;
    }

    for (std::size_t i = 0; i < reports.size(); ++i) {
        const Report& r = reports[i];
        if (!complete[i]) ++result.incomplete_count;
        std::vector<std::string> eligible;
        for (const auto& sys : canonical_systems()) {
            FilterOutcome outcome{r.report_id, r.patient_id, std::string(sys.id), Disposition::kept, ""};
            if (!complete[i]) {
                outcome.disposition = Disposition::excluded_incomplete;
                outcome.reason = "no findings section";
            } else if (duplicate[i]) {
                outcome.disposition = Disposition::excluded_duplicate;
                outcome.reason = "duplicate findings for patient";
            } else {
                outcome = protocol_filter(r, sys.id);
            }
            if (outcome.disposition == Disposition::kept) eligible.emplace_back(sys.id);
            result.audit.push_back(std::move(outcome));
        }
        if (!eligible.empty()) result.kept.push_back({std::move(reports[i]), std::move(eligible)});
    }
    return result;
}

}  // namespace bodyct
