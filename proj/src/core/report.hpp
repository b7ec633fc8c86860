#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bodyct {

enum class Protocol { chest, abdomen, chest_abdomen, abdomen_pelvis, chest_abdomen_pelvis, other };

std::string_view protocol_name(Protocol p);

/// Tolerant parse: case-insensitive, '-' and ' ' treated as '_'.
std::optional<Protocol> parse_protocol(std::string_view s);

struct Report {
    std::string report_id;
    std::string patient_id;
    std::string study_date;  // ISO-8601 "YYYY-MM-DD", possibly empty
    Protocol protocol = Protocol::other;
    bool body_flag = true;
    std::string raw_text;
    std::string findings;  // derived; empty until extracted
};

enum class Disposition {
    kept,
    excluded_incomplete,
    excluded_duplicate,
    excluded_nonbody,
    excluded_protocol,
};

std::string_view disposition_name(Disposition d);

struct FilterOutcome {
    std::string report_id;
    std::string patient_id;
    std::string system;
    Disposition disposition = Disposition::kept;
    std::string reason;
};

}  // namespace bodyct
