#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "core/report.hpp"

namespace bodyct {

enum class CorpusFormat { autodetect, jsonl, csv };

CorpusFormat parse_corpus_format(std::string_view s);

struct RecordError {
    std::size_t line = 0;
    std::string message;
};

struct ParsedCorpus {
    std::vector<Report> reports;
    std::vector<RecordError> errors;
};

/// Reads newline-delimited JSON objects or a delimited table with a header
/// row. Required keys: report_id, patient_id, study_date, protocol, body,
/// text. Malformed records are collected as per-record errors, never dropped
/// silently.
ParsedCorpus parse_corpus(const std::string& path, CorpusFormat format = CorpusFormat::autodetect);

struct FindingsConfig {
    std::vector<std::string> headers{"findings", "findings:"};
    std::vector<std::string> terminators{"impression", "impression:"};
};

/// Sets report.findings to the text between the findings header and the next
/// section header (or end of text). Returns false when no header is present.
bool extract_findings(Report& report, const FindingsConfig& config = {});

/// One labelable report plus the organ systems it is admissible for.
struct IngestedReport {
    Report report;
    std::vector<std::string> eligible_systems;
};

struct IngestResult {
    std::vector<IngestedReport> kept;       // reports with at least one eligible system
    std::vector<FilterOutcome> audit;       // one row per (input report, organ system)
    std::size_t input_count = 0;
    std::size_t incomplete_count = 0;
    std::size_t duplicate_count = 0;
};

/// Exclusion cascade: incomplete (no findings) -> duplicate -> per-system
/// non-body and protocol filters. Two reports are duplicates when they share
/// patient_id and whitespace-collapsed lowercase findings; the earliest study
/// date wins, ties broken by report_id.
IngestResult run_ingest_filters(std::vector<Report> reports, const FindingsConfig& config = {});

/// Per-system admission decision for an already-complete report.
FilterOutcome protocol_filter(const Report& report, std::string_view system_id);

/// Ingest artifacts: one JSON object per kept report (original fields plus
/// findings and eligible_systems), and the per-(report, system) filter audit.
void write_ingested_jsonl(std::ostream& os, const std::vector<IngestedReport>& reports);
std::vector<IngestedReport> read_ingested_jsonl(const std::string& path);
bool looks_like_ingested_corpus(const std::string& path);

void write_filter_audit_csv(std::ostream& os, const std::vector<FilterOutcome>& audit);
void write_record_errors_jsonl(std::ostream& os, const std::vector<RecordError>& errors);

}  // namespace bodyct
