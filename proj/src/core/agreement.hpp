#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/labels_io.hpp"

namespace bodyct {

struct LabelAgreement {
    std::string label_id;
    std::size_t n_positive_reference = 0;
    double accuracy = 0.0;
    double f_score = 0.0;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    bool degenerate = false;  // no positives anywhere: F-score 1.0 by convention
};

/// Per-label confusion counts of predicted vs reference labels, binary per
/// label. Pairs uncertain on either side are excluded. The (report, system)
/// pair sets must match; a mismatch reports the symmetric difference.
std::vector<LabelAgreement> agreement(const std::vector<LabelRecord>& predicted,
                                      const std::vector<LabelRecord>& reference);

void write_agreement_csv(std::ostream& os, const std::vector<LabelAgreement>& rows);

}  // namespace bodyct
