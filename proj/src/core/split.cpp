#include "core/split.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace bodyct {

std::string_view subset_name(Subset s) {
    switch (s) {
        case Subset::train: return "train";
        case Subset::validation: return "validation";
        case Subset::test: return "test";
    }
    return "train";
}

Subset parse_subset(std::string_view s) {
    if (s == "train") return Subset::train;
    if (s == "validation") return Subset::validation;
    if (s == "test") return Subset::test;
    fail(ErrorCode::parse, "unknown subset \"" + std::string(s) + "\"");
}

void SplitRatios::validate() const {
    if (!(train > 0.0) || !(validation > 0.0) || !(test > 0.0))
        fail(ErrorCode::invalid_argument, "split ratios must be positive");
    if (std::abs(train + validation + test - 1.0) > 1e-9)
        fail(ErrorCode::invalid_argument, "split ratios must sum to 1");
}

Subset assign_subset(std::string_view patient_id, uint64_t seed, const SplitRatios& ratios) {
    uint64_t h = splitmix64(fnv1a64(patient_id) ^ seed);
    double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    if (u < ratios.train) return Subset::train;
    if (u < ratios.train + ratios.validation) return Subset::validation;
    return Subset::test;
}

Subset SplitAssignment::at(const std::string& patient_id) const {
    auto it = by_patient.find(patient_id);
    if (it == by_patient.end())
        fail(ErrorCode::invalid_argument, "patient \"" + patient_id + "\" is missing from the split");
    return it->second;
}

SplitAssignment split_by_patient(const std::vector<LabelRecord>& records, uint64_t seed,
                                 const SplitRatios& ratios) {
    ratios.validate();
    SplitAssignment out;
    out.seed = seed;
    out.ratios = ratios;
    for (const auto& rec : records)
        out.by_patient.emplace(rec.patient_id, assign_subset(rec.patient_id, seed, ratios));
    return out;
}

void write_split_csv(std::ostream& os, const SplitAssignment& split) {
    csv::write_row(os, {"patient_id", "subset", "seed"});
    for (const auto& [patient, subset] : split.by_patient)
        csv::write_row(os, {patient, std::string(subset_name(subset)), std::to_string(split.seed)});
}

SplitAssignment read_split(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open split file: " + path);
    std::vector<std::string> row;
    std::size_t line_no = 0;
    if (!csv::read_row(in, row, line_no)) fail(ErrorCode::parse, "split file " + path + " is empty");
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < row.size(); ++i) columns[std::string(trim(row[i]))] = i;
    for (const char* col : {"patient_id", "subset", "seed"})
        if (!columns.contains(col))
            fail(ErrorCode::parse, "split file " + path + " is missing column \"" + col + "\"");
    SplitAssignment out;
    bool have_seed = false;
    while (csv::read_row(in, row, line_no)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        const std::string& patient = row[columns.at("patient_id")];
        out.by_patient[patient] = parse_subset(row[columns.at("subset")]);
        if (!have_seed) {
            out.seed = std::stoull(row[columns.at("seed")]);
            have_seed = true;
        }
    }
    return out;
}

}  // namespace bodyct
