#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/corpus.hpp"
#include "core/patch.hpp"
#include "core/roc.hpp"
#include "core/split.hpp"

namespace bodyct {

/// Batch steps behind the CLI and the C API. Every step writes its outputs
/// plus a config.resolved.json manifest into the output directory, and the
/// same inputs always produce byte-identical data artifacts.
namespace pipeline {

struct IngestOptions {
    std::string corpus_path;
    std::string format = "auto";
    FindingsConfig findings;
    std::string out_dir;
};

struct IngestSummary {
    std::size_t input = 0;
    std::size_t kept = 0;
    std::size_t incomplete = 0;
    std::size_t duplicate = 0;
    std::size_t record_errors = 0;
};

IngestSummary run_ingest(const IngestOptions& options);

struct LabelOptions {
    std::string input_path;  // raw corpus or ingested reports.jsonl (auto-detected)
    std::string format = "auto";
    std::string dictionary_path;
    FindingsConfig findings;  // used when the input is a raw corpus
    int threads = 1;
    bool with_audit = true;
    std::string out_dir;
};

struct LabelSummary {
    std::size_t reports = 0;
    std::size_t records = 0;
    std::size_t usable_records = 0;
    std::size_t record_errors = 0;
};

LabelSummary run_label(const LabelOptions& options);

struct SplitOptions {
    std::string labels_path;
    uint64_t seed = 0;
    SplitRatios ratios;
    std::string out_dir;
};

struct SplitSummary {
    std::size_t patients = 0;
    std::size_t train = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};

SplitSummary run_split(const SplitOptions& options);

struct PrevalenceOptions {
    std::string labels_path;
    std::string split_path;
    std::string out_dir;
};

void run_stats_prevalence(const PrevalenceOptions& options);

struct CooccurrenceOptions {
    std::string labels_path;
    std::string system;
    std::string out_dir;
};

void run_stats_cooccurrence(const CooccurrenceOptions& options);

struct EvalLabelsOptions {
    std::string labels_path;
    std::string reference_path;
    std::string out_dir;
};

void run_eval_labels(const EvalLabelsOptions& options);

struct EvalRocOptions {
    std::string predictions_path;
    std::string reference_path;
    std::string method = "delong";
    double alpha = 0.05;
    std::size_t resamples = 2000;
    uint64_t seed = 0;
    std::string out_dir;
};

void run_eval_roc(const EvalRocOptions& options);

struct PrepOptions {
    std::string volume_path;
    std::string mask_path;
    std::string system;
    int spline_order = 3;
    std::string kidney_offset = "auto";  // "auto" | "none" | "<mm>"
    double body_threshold_hu = -500.0;
    std::string out_path;  // patch metadata path (.json)
    std::string dtype = "float32";
};

struct PrepSummary {
    PatchSpec spec;
    bool degenerate = false;
};

PrepSummary run_prep(const PrepOptions& options);

}  // namespace pipeline

}  // namespace bodyct
