#include "core/stats.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace bodyct {

PrevalenceTable prevalence_table(const std::vector<LabelRecord>& records, const SplitAssignment& split) {
    PrevalenceTable table;
    for (const auto& sys : canonical_systems()) {
        // label -> subset -> patients/volumes
        std::map<std::string, std::map<int, std::set<std::string>>> patients;
        std::map<std::string, std::map<int, std::size_t>> volumes;

        std::vector<std::string> labels;
        labels.emplace_back("all");
        for (auto cls : sys.classes) labels.emplace_back(cls);
        labels.emplace_back(kNoApparentDisease);

        for (const auto& rec : records) {
            if (rec.system != sys.id || !rec.usable()) continue;
            int subset = static_cast<int>(split.at(rec.patient_id));  // throws when missing
            auto tally = [&](const std::string& label) {
                patients[label][subset].insert(rec.patient_id);
                patients[label][-1].insert(rec.patient_id);
                ++volumes[label][subset];
                ++volumes[label][-1];
            };
            tally("all");
            for (const auto& cls : rec.positives) tally(cls);
            if (rec.no_apparent_disease) tally(std::string(kNoApparentDisease));
        }

        for (const auto& label : labels) {
            PrevalenceRow row;
            row.system = sys.id;
            row.label = label;
            auto cell = [&](int subset) {
                PrevalenceCell c;
                c.patients = patients[label][subset].size();
                c.volumes = volumes[label][subset];
                return c;
            };
            row.all = cell(-1);
            row.train = cell(static_cast<int>(Subset::train));
            row.validation = cell(static_cast<int>(Subset::validation));
            row.test = cell(static_cast<int>(Subset::test));
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

void write_prevalence_csv(std::ostream& os, const PrevalenceTable& table) {
    csv::write_row(os, {"system", "label", "all_patients", "all_volumes", "train_patients",
                        "train_volumes", "validation_patients", "validation_volumes", "test_patients",
                        "test_volumes"});
    for (const auto& row : table.rows) {
        csv::write_row(os, {row.system, row.label, std::to_string(row.all.patients),
                            std::to_string(row.all.volumes), std::to_string(row.train.patients),
                            std::to_string(row.train.volumes), std::to_string(row.validation.patients),
                            std::to_string(row.validation.volumes), std::to_string(row.test.patients),
                            std::to_string(row.test.volumes)});
    }
}

CooccurrenceTable cooccurrence(const std::vector<LabelRecord>& records, std::string_view system) {
    const CanonicalSystem* canon = find_canonical_system(system);
    if (canon == nullptr)
        fail(ErrorCode::invalid_argument, "unknown organ system \"" + std::string(system) + "\"");

    // patient -> union of positive classes over usable volumes
    std::map<std::string, std::set<std::string>> by_patient;
    for (const auto& rec : records) {
        if (rec.system != system || !rec.usable()) continue;
        auto& combo = by_patient[rec.patient_id];
        for (const auto& cls : rec.positives) combo.insert(cls);
    }

    std::map<std::vector<std::string>, std::size_t> counts;
    for (const auto& [patient, combo_set] : by_patient) {
        std::vector<std::string> combo;
        for (auto cls : canon->classes)
            if (combo_set.contains(std::string(cls))) combo.emplace_back(cls);
        ++counts[combo];
    }

    CooccurrenceTable table;
    table.system = std::string(system);
    table.n_patients = by_patient.size();
    for (const auto& [combo, n] : counts) {
        CooccurrenceCell cell;
        cell.n_abnormalities = combo.size();
        cell.combination = combo;
        cell.patients = n;
        cell.percent = table.n_patients ? 100.0 * static_cast<double>(n) /
                                              static_cast<double>(table.n_patients)
                                        : 0.0;
        table.cells.push_back(std::move(cell));
    }
    // column grouping by abnormality count, then menu order inside a column
    auto menu_rank = [&](const std::vector<std::string>& combo) {
        std::vector<std::size_t> ranks;
        for (const auto& cls : combo)
            for (std::size_t i = 0; i < canon->classes.size(); ++i)
                if (canon->classes[i] == cls) ranks.push_back(i);
        return ranks;
    };
    std::sort(table.cells.begin(), table.cells.end(), [&](const auto& a, const auto& b) {
        if (a.n_abnormalities != b.n_abnormalities) return a.n_abnormalities < b.n_abnormalities;
        return menu_rank(a.combination) < menu_rank(b.combination);
    });
    return table;
}

void write_cooccurrence_csv(std::ostream& os, const CooccurrenceTable& table) {
    csv::write_row(os, {"system", "n_abnormalities", "combination", "patients", "percent"});
    for (const auto& cell : table.cells) {
        std::string combo = cell.combination.empty() ? "none" : join(cell.combination, "+");
        csv::write_row(os, {table.system, std::to_string(cell.n_abnormalities), combo,
                            std::to_string(cell.patients), format_fixed(cell.percent, 2)});
    }
}

}  // namespace bodyct
