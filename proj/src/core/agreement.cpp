#include "core/agreement.hpp"

#include <map>
#include <ostream>
#include <set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace bodyct {

std::vector<LabelAgreement> agreement(const std::vector<LabelRecord>& predicted,
                                      const std::vector<LabelRecord>& reference) {
    using Key = std::pair<std::string, std::string>;  // (report_id, system)
    auto index = [](const std::vector<LabelRecord>& records, const char* what) {
        std::map<Key, const LabelRecord*> out;
        for (const auto& rec : records) {
            if (!out.emplace(Key{rec.report_id, rec.system}, &rec).second)
                fail(ErrorCode::parse, std::string(what) + " labels contain (" + rec.report_id + ", " +
                                           rec.system + ") twice");
        }
        return out;
    };
    auto lhs = index(predicted, "predicted");
    auto rhs = index(reference, "reference");

    std::vector<std::string> only_lhs, only_rhs;
    for (const auto& [key, rec] : lhs)
        if (!rhs.contains(key)) only_lhs.push_back("(" + key.first + ", " + key.second + ")");
    for (const auto& [key, rec] : rhs)
        if (!lhs.contains(key)) only_rhs.push_back("(" + key.first + ", " + key.second + ")");
    if (!only_lhs.empty() || !only_rhs.empty()) {
        auto preview = [](const std::vector<std::string>& v) {
            std::string out;
            for (std::size_t i = 0; i < v.size() && i < 10; ++i) out += " " + v[i];
            if (v.size() > 10) out += " ...";
            return out;
        };
        fail(ErrorCode::invalid_argument,
             "label sets cover different (report, system) pairs; only in predicted:" +
                 preview(only_lhs) + "; only in reference:" + preview(only_rhs));
    }

    std::set<std::string> systems;
    for (const auto& [key, rec] : rhs) systems.insert(key.second);

    std::vector<LabelAgreement> rows;
    for (const auto& sys : canonical_systems()) {
        if (!systems.contains(std::string(sys.id))) continue;
        std::vector<std::string> labels;
        for (auto cls : sys.classes) labels.emplace_back(cls);
        labels.emplace_back(kNoApparentDisease);

        for (const auto& cls : labels) {
            LabelAgreement row;
            row.label_id = label_id(sys.id, cls);
            for (const auto& [key, ref] : rhs) {
                if (key.second != sys.id) continue;
                const LabelRecord* pred = lhs.at(key);
                if (ref->status == OrganStatus::uncertain || pred->status == OrganStatus::uncertain)
                    continue;
                bool ref_pos = cls == kNoApparentDisease ? ref->no_apparent_disease
                                                         : ref->positive_for(cls);
                bool pred_pos = cls == kNoApparentDisease ? pred->no_apparent_disease
                                                          : pred->positive_for(cls);
                if (ref_pos) ++row.n_positive_reference;
                if (pred_pos && ref_pos) ++row.tp;
                else if (pred_pos && !ref_pos) ++row.fp;
                else if (!pred_pos && ref_pos) ++row.fn;
                else ++row.tn;
            }
            std::size_t total = row.tp + row.fp + row.fn + row.tn;
            row.accuracy = total ? static_cast<double>(row.tp + row.tn) / static_cast<double>(total)
                                 : 1.0;
            std::size_t f_denominator = 2 * row.tp + row.fp + row.fn;
            if (f_denominator == 0) {
                row.f_score = 1.0;
                row.degenerate = true;
            } else {
                row.f_score = 2.0 * static_cast<double>(row.tp) / static_cast<double>(f_denominator);
            }
            if (total == 0) row.degenerate = true;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_agreement_csv(std::ostream& os, const std::vector<LabelAgreement>& rows) {
    csv::write_row(os, {"label", "n_positive_reference", "accuracy", "f_score", "tp", "fp", "fn", "tn",
                        "flag"});
    for (const auto& row : rows) {
        csv::write_row(os, {row.label_id, std::to_string(row.n_positive_reference),
                            format_fixed(row.accuracy, 4), format_fixed(row.f_score, 4),
                            std::to_string(row.tp), std::to_string(row.fp), std::to_string(row.fn),
                            std::to_string(row.tn), row.degenerate ? "degenerate" : ""});
    }
}

}  // namespace bodyct
