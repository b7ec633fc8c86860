#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/labels_io.hpp"
#include "core/split.hpp"

namespace bodyct {

struct PrevalenceCell {
    std::size_t patients = 0;
    std::size_t volumes = 0;
};

struct PrevalenceRow {
    std::string system;
    std::string label;  // "all", a disease class, or "no_apparent_disease"
    PrevalenceCell all, train, validation, test;
};

struct PrevalenceTable {
    std::vector<PrevalenceRow> rows;
};

/// Patients (volumes) per label and subset, over usable records only.
/// "all" rows count every patient/volume usable for the system. No class
/// rebalancing is applied anywhere.
PrevalenceTable prevalence_table(const std::vector<LabelRecord>& records, const SplitAssignment& split);

void write_prevalence_csv(std::ostream& os, const PrevalenceTable& table);

struct CooccurrenceCell {
    std::size_t n_abnormalities = 0;        // 0..4
    std::vector<std::string> combination;   // canonical class order; empty = none
    std::size_t patients = 0;
    double percent = 0.0;
};

struct CooccurrenceTable {
    std::string system;
    std::size_t n_patients = 0;  // distinct usable patients
    std::vector<CooccurrenceCell> cells;
};

/// Groups distinct patients by the exact set of diseases they are positive
/// for in a system; a patient with several volumes contributes the union of
/// positives. Percentages are over distinct usable patients.
CooccurrenceTable cooccurrence(const std::vector<LabelRecord>& records, std::string_view system);

void write_cooccurrence_csv(std::ostream& os, const CooccurrenceTable& table);

}  // namespace bodyct
