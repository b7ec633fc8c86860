#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/labels_io.hpp"

namespace bodyct {

enum class Subset { train, validation, test };

std::string_view subset_name(Subset s);
Subset parse_subset(std::string_view s);

struct SplitRatios {
    double train = 0.70;
    double validation = 0.15;
    double test = 0.15;

    void validate() const;  // positive, summing to 1 within 1e-9
};

/// Pure function of (patient_id, seed, ratios): the id is hashed, mixed with
/// the seed, mapped to [0,1) and bucketed by cumulative ratios. Adding
/// patients never reassigns existing ones.
Subset assign_subset(std::string_view patient_id, uint64_t seed, const SplitRatios& ratios);

struct SplitAssignment {
    uint64_t seed = 0;
    SplitRatios ratios;
    std::map<std::string, Subset> by_patient;

    Subset at(const std::string& patient_id) const;  // throws when missing
};

SplitAssignment split_by_patient(const std::vector<LabelRecord>& records, uint64_t seed,
                                 const SplitRatios& ratios = {});

void write_split_csv(std::ostream& os, const SplitAssignment& split);
SplitAssignment read_split(const std::string& path);

}  // namespace bodyct
