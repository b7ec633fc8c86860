#include "core/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <thread>

#include "core/agreement.hpp"
#include "core/error.hpp"
#include "core/labels_io.hpp"
#include "core/resample.hpp"
#include "core/stats.hpp"
#include "core/text.hpp"

namespace bodyct::pipeline {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + path.string());
    return out;
}

void write_resolved_config(const std::string& out_dir, const std::string& subcommand,
                           nlohmann::ordered_json options) {
    nlohmann::ordered_json j;
    j["tool"] = "bodyct";
    j["subcommand"] = subcommand;
    j["options"] = std::move(options);
    auto out = open_out(fs::path(out_dir) / "config.resolved.json");
    out << j.dump(2) << '\n';
}

nlohmann::ordered_json findings_json(const FindingsConfig& f) {
    nlohmann::ordered_json j;
    j["headers"] = f.headers;
    j["terminators"] = f.terminators;
    return j;
}

}  // namespace

IngestSummary run_ingest(const IngestOptions& options) {
    ensure_dir(options.out_dir);
    ParsedCorpus parsed = parse_corpus(options.corpus_path, parse_corpus_format(options.format));
    IngestResult result = run_ingest_filters(std::move(parsed.reports), options.findings);

    {
        auto out = open_out(fs::path(options.out_dir) / "reports.jsonl");
        write_ingested_jsonl(out, result.kept);
    }
    {
        auto out = open_out(fs::path(options.out_dir) / "filter_audit.csv");
        write_filter_audit_csv(out, result.audit);
    }
    {
        auto out = open_out(fs::path(options.out_dir) / "errors.jsonl");
        write_record_errors_jsonl(out, parsed.errors);
    }

    nlohmann::ordered_json opts;
    opts["corpus"] = options.corpus_path;
    opts["format"] = options.format;
    opts["findings"] = findings_json(options.findings);
    write_resolved_config(options.out_dir, "ingest", std::move(opts));

    IngestSummary summary;
    summary.input = result.input_count;
    summary.kept = result.kept.size();
    summary.incomplete = result.incomplete_count;
    summary.duplicate = result.duplicate_count;
    summary.record_errors = parsed.errors.size();
    return summary;
}

LabelSummary run_label(const LabelOptions& options) {
    ensure_dir(options.out_dir);
    RuleEngine engine(RuleDictionary::load(options.dictionary_path));

    std::vector<IngestedReport> reports;
    std::vector<RecordError> errors;
    std::vector<FilterOutcome> audit;
    bool ingested = looks_like_ingested_corpus(options.input_path);
    if (ingested) {
        reports = read_ingested_jsonl(options.input_path);
    } else {
        ParsedCorpus parsed = parse_corpus(options.input_path, parse_corpus_format(options.format));
        errors = std::move(parsed.errors);
        IngestResult result = run_ingest_filters(std::move(parsed.reports), options.findings);
        reports = std::move(result.kept);
        audit = std::move(result.audit);
        auto out = open_out(fs::path(options.out_dir) / "filter_audit.csv");
        write_filter_audit_csv(out, audit);
    }

    // reports are labeled independently; slots keep the output in input order
    std::vector<LabelSet> labelsets(reports.size());
    int threads = std::max(1, options.threads);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            labelsets[i] = engine.label_text(reports[i].report.findings, reports[i].eligible_systems);
            labelsets[i].report_id = reports[i].report.report_id;
            labelsets[i].patient_id = reports[i].report.patient_id;
        }
    };
    if (threads == 1 || reports.size() < 2) {
        work(0, reports.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (reports.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t begin = static_cast<std::size_t>(t) * chunk;
            std::size_t end = std::min(reports.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<LabelRecord> records;
    std::vector<AuditRecord> audit_trail;
    for (const auto& labels : labelsets) {
        for (auto& rec : to_label_records(labels)) records.push_back(std::move(rec));
        for (const auto& sys : labels.systems)
            for (const auto& entry : sys.audit)
                audit_trail.push_back({labels.report_id, sys.system_id, entry});
    }

    {
        auto out = open_out(fs::path(options.out_dir) / "labels.csv");
        write_labels_csv(out, records);
    }
    {
        auto out = open_out(fs::path(options.out_dir) / "labels.jsonl");
        write_labels_jsonl(out, records);
    }
    if (options.with_audit) {
        auto out = open_out(fs::path(options.out_dir) / "label_audit.jsonl");
        write_audit_jsonl(out, audit_trail);
    }
    if (!ingested) {
        auto out = open_out(fs::path(options.out_dir) / "errors.jsonl");
        write_record_errors_jsonl(out, errors);
    }

    nlohmann::ordered_json opts;
    opts["input"] = options.input_path;
    opts["input_kind"] = ingested ? "ingested" : "raw_corpus";
    opts["dictionary"] = options.dictionary_path;
    opts["threads"] = options.threads;
    opts["with_audit"] = options.with_audit;
    if (!ingested) opts["findings"] = findings_json(options.findings);
    write_resolved_config(options.out_dir, "label", std::move(opts));

    LabelSummary summary;
    summary.reports = reports.size();
    summary.records = records.size();
    for (const auto& rec : records)
        if (rec.usable()) ++summary.usable_records;
    summary.record_errors = errors.size();
    return summary;
}

SplitSummary run_split(const SplitOptions& options) {
    ensure_dir(options.out_dir);
    std::vector<LabelRecord> records = read_labels(options.labels_path);
    SplitAssignment split = split_by_patient(records, options.seed, options.ratios);
    {
        auto out = open_out(fs::path(options.out_dir) / "split.csv");
        write_split_csv(out, split);
    }

    nlohmann::ordered_json opts;
    opts["labels"] = options.labels_path;
    opts["seed"] = options.seed;
    opts["ratios"] = {options.ratios.train, options.ratios.validation, options.ratios.test};
    write_resolved_config(options.out_dir, "split", std::move(opts));

    SplitSummary summary;
    summary.patients = split.by_patient.size();
    for (const auto& [patient, subset] : split.by_patient) {
        if (subset == Subset::train) ++summary.train;
        else if (subset == Subset::validation) ++summary.validation;
        else ++summary.test;
    }
    return summary;
}

void run_stats_prevalence(const PrevalenceOptions& options) {
    ensure_dir(options.out_dir);
    std::vector<LabelRecord> records = read_labels(options.labels_path);
    SplitAssignment split = read_split(options.split_path);
    PrevalenceTable table = prevalence_table(records, split);
    auto out = open_out(fs::path(options.out_dir) / "prevalence.csv");
    write_prevalence_csv(out, table);

    nlohmann::ordered_json opts;
    opts["labels"] = options.labels_path;
    opts["split"] = options.split_path;
    write_resolved_config(options.out_dir, "stats prevalence", std::move(opts));
}

void run_stats_cooccurrence(const CooccurrenceOptions& options) {
    ensure_dir(options.out_dir);
    std::vector<LabelRecord> records = read_labels(options.labels_path);
    CooccurrenceTable table = cooccurrence(records, options.system);
    auto out = open_out(fs::path(options.out_dir) / ("cooccurrence_" + options.system + ".csv"));
    write_cooccurrence_csv(out, table);

    nlohmann::ordered_json opts;
    opts["labels"] = options.labels_path;
    opts["system"] = options.system;
    write_resolved_config(options.out_dir, "stats cooccurrence", std::move(opts));
}

void run_eval_labels(const EvalLabelsOptions& options) {
    ensure_dir(options.out_dir);
    std::vector<LabelRecord> predicted = read_labels(options.labels_path);
    std::vector<LabelRecord> reference = read_labels(options.reference_path);
    std::vector<LabelAgreement> rows = agreement(predicted, reference);
    auto out = open_out(fs::path(options.out_dir) / "agreement.csv");
    write_agreement_csv(out, rows);

    nlohmann::ordered_json opts;
    opts["labels"] = options.labels_path;
    opts["reference"] = options.reference_path;
    write_resolved_config(options.out_dir, "eval labels", std::move(opts));
}

void run_eval_roc(const EvalRocOptions& options) {
    ensure_dir(options.out_dir);
    std::vector<PredictionRecord> predictions = read_predictions(options.predictions_path);
    std::vector<LabelRecord> reference = read_labels(options.reference_path);
    EvalOptions eval;
    eval.method = parse_ci_method(options.method);
    eval.alpha = options.alpha;
    eval.resamples = options.resamples;
    eval.seed = options.seed;
    std::vector<RocResult> results = evaluate_predictions(predictions, reference, eval);
    auto out = open_out(fs::path(options.out_dir) / "roc.csv");
    write_roc_csv(out, results);

    nlohmann::ordered_json opts;
    opts["predictions"] = options.predictions_path;
    opts["reference"] = options.reference_path;
    opts["method"] = options.method;
    opts["alpha"] = options.alpha;
    opts["resamples"] = options.resamples;
    opts["seed"] = options.seed;
    write_resolved_config(options.out_dir, "eval roc", std::move(opts));
}

PrepSummary run_prep(const PrepOptions& options) {
    VolumeGrid volume = load_volume(options.volume_path);
    VolumeGrid mask = load_volume(options.mask_path);

    VolumeGrid volume_2mm = resample(volume, {2.0, 2.0, 2.0}, options.spline_order);
    VolumeGrid mask_2mm = resample(mask, {2.0, 2.0, 2.0}, 0);  // nearest keeps the mask binary

    PlaceOptions place;
    place.body_threshold_hu = options.body_threshold_hu;
    if (options.kidney_offset == "auto" || options.kidney_offset == "none") {
        place.kidney_offset = options.kidney_offset;
    } else {
        place.kidney_offset = "fixed";
        try {
            place.kidney_offset_mm = std::stod(options.kidney_offset);
        } catch (const std::exception&) {
            fail(ErrorCode::invalid_argument,
                 "kidney offset must be \"auto\", \"none\" or millimetres, got \"" +
                     options.kidney_offset + "\"");
        }
    }

    IntensityPolicy policy = intensity_policy_for(options.system);
    PatchSpec spec = place_patch(mask_2mm, options.system, volume_2mm, place);
    ExtractedPatch patch = extract_patch(volume_2mm, spec, policy);

    fs::path out_path(options.out_path);
    if (out_path.has_parent_path()) ensure_dir(out_path.parent_path().string());

    nlohmann::ordered_json meta;
    meta["system"] = options.system;
    meta["clip_range"] = {policy.clip_min, policy.clip_max};
    meta["normalized"] = true;
    meta["degenerate"] = patch.normalization.degenerate;
    meta["center"] = spec.center;
    meta["start"] = spec.start;
    meta["offset_rule"] = spec.offset_rule;
    meta["kidney_shift_voxels"] = spec.kidney_shift_voxels;
    meta["padded"] = {spec.padded[0], spec.padded[1], spec.padded[2]};
    meta["spline_order"] = options.spline_order;
    save_volume(patch.grid, options.out_path, options.dtype, meta);

    nlohmann::ordered_json opts;
    opts["volume"] = options.volume_path;
    opts["mask"] = options.mask_path;
    opts["system"] = options.system;
    opts["spline_order"] = options.spline_order;
    opts["kidney_offset"] = options.kidney_offset;
    opts["body_threshold_hu"] = options.body_threshold_hu;
    opts["out"] = options.out_path;
    opts["dtype"] = options.dtype;
    std::string dir = out_path.has_parent_path() ? out_path.parent_path().string() : ".";
    write_resolved_config(dir, "prep", std::move(opts));

    PrepSummary summary;
    summary.spec = spec;
    summary.degenerate = patch.normalization.degenerate;
    return summary;
}

}  // namespace bodyct::pipeline
