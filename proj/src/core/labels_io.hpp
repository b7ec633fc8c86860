#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/rba.hpp"

namespace bodyct {

/// One (report, organ system) row of the label table.
struct LabelRecord {
    std::string report_id;
    std::string patient_id;
    std::string system;
    OrganStatus status = OrganStatus::uncertain;
    std::vector<std::string> positives;  // canonical class order
    std::vector<std::string> negatives;
    bool no_apparent_disease = false;

    bool positive_for(std::string_view cls) const;
    bool usable() const;
};

std::vector<LabelRecord> to_label_records(const LabelSet& labels);

/// Writers are deterministic: same records, same bytes.
void write_labels_csv(std::ostream& os, const std::vector<LabelRecord>& records);
void write_labels_jsonl(std::ostream& os, const std::vector<LabelRecord>& records);

std::vector<LabelRecord> read_labels(const std::string& path);

struct AuditRecord {
    std::string report_id;
    std::string system;
    AuditEntry entry;
};

void write_audit_jsonl(std::ostream& os, const std::vector<AuditRecord>& records);

struct PredictionRecord {
    std::string volume_id;
    std::string label_id;  // "system:class" or "system:no_apparent_disease"
    double score = 0.0;
};

std::vector<PredictionRecord> read_predictions(const std::string& path);
void write_predictions_csv(std::ostream& os, const std::vector<PredictionRecord>& records);

}  // namespace bodyct
