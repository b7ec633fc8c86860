#include "core/labels_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace bodyct {

bool LabelRecord::positive_for(std::string_view cls) const {
    return std::find(positives.begin(), positives.end(), cls) != positives.end();
}

bool LabelRecord::usable() const {
    if (status == OrganStatus::uncertain) return false;
    if (status == OrganStatus::no_apparent_disease) return true;
    return !positives.empty();
}

std::vector<LabelRecord> to_label_records(const LabelSet& labels) {
    std::vector<LabelRecord> out;
    for (const auto& sys : labels.systems) {
        LabelRecord rec;
        rec.report_id = labels.report_id;
        rec.patient_id = labels.patient_id;
        rec.system = sys.system_id;
        rec.status = sys.status;
        for (const auto& [cls, decision] : sys.decisions) {
            if (decision == Decision::positive) rec.positives.push_back(cls);
            else rec.negatives.push_back(cls);
        }
        rec.no_apparent_disease = sys.no_apparent_disease();
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {
const std::vector<std::string> kLabelColumns = {
    "report_id", "patient_id", "system", "status", "positives", "negatives", "no_apparent_disease"};

void check_record(const LabelRecord& rec) {
    const CanonicalSystem* canon = find_canonical_system(rec.system);
    if (canon == nullptr) fail(ErrorCode::parse, "label record: unknown system \"" + rec.system + "\"");
    std::set<std::string> menu(canon->classes.begin(), canon->classes.end());
    for (const auto& c : rec.positives)
        if (!menu.contains(c))
            fail(ErrorCode::parse, "label record " + rec.report_id + ": class \"" + c +
                                       "\" is not in system " + rec.system);
    for (const auto& c : rec.negatives)
        if (!menu.contains(c))
            fail(ErrorCode::parse, "label record " + rec.report_id + ": class \"" + c +
                                       "\" is not in system " + rec.system);
}
}  // namespace

void write_labels_csv(std::ostream& os, const std::vector<LabelRecord>& records) {
    csv::write_row(os, kLabelColumns);
    for (const auto& rec : records) {
        csv::write_row(os, {rec.report_id, rec.patient_id, rec.system,
                            std::string(organ_status_name(rec.status)), join(rec.positives, ";"),
                            join(rec.negatives, ";"), rec.no_apparent_disease ? "1" : "0"});
    }
}

void write_labels_jsonl(std::ostream& os, const std::vector<LabelRecord>& records) {
    for (const auto& rec : records) {
        nlohmann::ordered_json j;
        j["report_id"] = rec.report_id;
        j["patient_id"] = rec.patient_id;
        j["system"] = rec.system;
        j["status"] = organ_status_name(rec.status);
        j["positives"] = rec.positives;
        j["negatives"] = rec.negatives;
        j["no_apparent_disease"] = rec.no_apparent_disease;
        os << j.dump() << '\n';
    }
}

namespace {

std::vector<std::string> split_classes(const std::string& s) {
    std::vector<std::string> out;
    for (auto& piece : split(s, ';')) {
        std::string t(trim(piece));
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::vector<LabelRecord> read_labels_csv(std::istream& in, const std::string& path) {
    std::vector<std::string> row;
    std::size_t line_no = 0;
    if (!csv::read_row(in, row, line_no)) return {};
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < row.size(); ++i) columns[std::string(trim(row[i]))] = i;
    for (const auto& col : kLabelColumns)
        if (!columns.contains(col))
            fail(ErrorCode::parse, "label table " + path + " is missing column \"" + col + "\"");
    std::vector<LabelRecord> out;
    while (csv::read_row(in, row, line_no)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        auto get = [&](const std::string& key) {
            std::size_t idx = columns.at(key);
            return idx < row.size() ? row[idx] : std::string();
        };
        LabelRecord rec;
        rec.report_id = get("report_id");
        rec.patient_id = get("patient_id");
        rec.system = get("system");
        rec.status = parse_organ_status(get("status"));
        rec.positives = split_classes(get("positives"));
        rec.negatives = split_classes(get("negatives"));
        std::string napd = get("no_apparent_disease");
        rec.no_apparent_disease = napd == "1" || to_lower(napd) == "true";
        check_record(rec);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<LabelRecord> read_labels_jsonl(std::istream& in, const std::string& path) {
    std::vector<LabelRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        LabelRecord rec;
        try {
            rec.report_id = j.at("report_id").get<std::string>();
            rec.patient_id = j.value("patient_id", std::string());
            rec.system = j.at("system").get<std::string>();
            rec.status = parse_organ_status(j.at("status").get<std::string>());
            rec.positives = j.value("positives", std::vector<std::string>{});
            rec.negatives = j.value("negatives", std::vector<std::string>{});
            rec.no_apparent_disease = j.value("no_apparent_disease", false);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        check_record(rec);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

std::vector<LabelRecord> read_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open label file: " + path);
    if (path.ends_with(".jsonl") || path.ends_with(".ndjson") || in.peek() == '{')
        return read_labels_jsonl(in, path);
    return read_labels_csv(in, path);
}

void write_audit_jsonl(std::ostream& os, const std::vector<AuditRecord>& records) {
    for (const auto& rec : records) {
        nlohmann::ordered_json j;
        j["report_id"] = rec.report_id;
        j["system"] = rec.system;
        j["class"] = rec.entry.class_id;
        j["event"] = rec.entry.event;
        j["sentence_index"] = rec.entry.sentence_index;
        j["keyword"] = rec.entry.keyword;
        j["sentence"] = rec.entry.sentence;
        os << j.dump() << '\n';
    }
}

std::vector<PredictionRecord> read_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open predictions file: " + path);
    std::vector<std::string> row;
    std::size_t line_no = 0;
    if (!csv::read_row(in, row, line_no)) return {};
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < row.size(); ++i) columns[std::string(trim(row[i]))] = i;
    for (const char* col : {"volume_id", "label_id", "score"})
        if (!columns.contains(col))
            fail(ErrorCode::parse, "predictions table " + path + " is missing column \"" + col + "\"");
    std::vector<PredictionRecord> out;
    while (csv::read_row(in, row, line_no)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        PredictionRecord rec;
        rec.volume_id = row[columns.at("volume_id")];
        rec.label_id = row[columns.at("label_id")];
        const std::string& score_raw = row[columns.at("score")];
        try {
            rec.score = std::stod(score_raw);
        } catch (const std::exception&) {
            fail(ErrorCode::parse,
                 path + ":" + std::to_string(line_no) + ": score \"" + score_raw + "\" is not a number");
        }
        if (!std::isfinite(rec.score))
            fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": score must be finite");
        out.push_back(std::move(rec));
    }
    return out;
}

void write_predictions_csv(std::ostream& os, const std::vector<PredictionRecord>& records) {
    csv::write_row(os, {"volume_id", "label_id", "score"});
    for (const auto& rec : records)
        csv::write_row(os, {rec.volume_id, rec.label_id, format_fixed(rec.score, 6)});
}

}  // namespace bodyct
