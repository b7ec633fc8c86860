#include "bodyct.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "core/dictionary.hpp"
#include "core/error.hpp"
#include "core/patch.hpp"
#include "core/pipeline.hpp"
#include "core/rba.hpp"
#include "core/resample.hpp"
#include "core/roc.hpp"
#include "core/split.hpp"
#include "core/volume.hpp"

namespace {

thread_local std::string t_last_error;

bodyct_status set_error(bodyct::ErrorCode code, const std::string& message) {
    t_last_error = message;
    switch (code) {
        case bodyct::ErrorCode::invalid_argument: return BODYCT_ERROR_INVALID_ARGUMENT;
        case bodyct::ErrorCode::io: return BODYCT_ERROR_IO;
        case bodyct::ErrorCode::parse: return BODYCT_ERROR_PARSE;
        case bodyct::ErrorCode::validation: return BODYCT_ERROR_VALIDATION;
        case bodyct::ErrorCode::undefined: return BODYCT_ERROR_UNDEFINED;
        case bodyct::ErrorCode::internal: return BODYCT_ERROR_INTERNAL;
    }
    return BODYCT_ERROR_INTERNAL;
}

template <typename Fn>
bodyct_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return BODYCT_OK;
    } catch (const bodyct::Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::exception& e) {
        return set_error(bodyct::ErrorCode::internal, e.what());
    } catch (...) {
        return set_error(bodyct::ErrorCode::internal, "unknown error");
    }
}

bodyct_status require(bool condition, const char* message) {
    if (condition) return BODYCT_OK;
    t_last_error = message;
    return BODYCT_ERROR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct bodyct_dict {
    bodyct::RuleEngine engine;
};

struct bodyct_volume {
    bodyct::VolumeGrid grid;
};

extern "C" {

const char* bodyct_version(void) { return "0.1.0"; }

const char* bodyct_status_name(bodyct_status status) {
    switch (status) {
        case BODYCT_OK: return "ok";
        case BODYCT_ERROR_INVALID_ARGUMENT: return "invalid_argument";
        case BODYCT_ERROR_IO: return "io";
        case BODYCT_ERROR_PARSE: return "parse";
        case BODYCT_ERROR_VALIDATION: return "validation";
        case BODYCT_ERROR_UNDEFINED: return "undefined";
        case BODYCT_ERROR_INTERNAL: return "internal";
    }
    return "internal";
}

const char* bodyct_last_error(void) { return t_last_error.c_str(); }

void bodyct_string_free(char* s) { delete[] s; }

/* ---- dictionary -------------------------------------------------------- */

bodyct_status bodyct_dict_open(const char* path, bodyct_dict** out) {
    if (auto st = require(path && out, "path and out must not be null")) return st;
    return guarded([&] {
        auto dict = bodyct::RuleDictionary::load(path);
        *out = new bodyct_dict{bodyct::RuleEngine(std::move(dict))};
    });
}

void bodyct_dict_close(bodyct_dict* dict) { delete dict; }

bodyct_status bodyct_dict_save(const bodyct_dict* dict, const char* path) {
    if (auto st = require(dict && path, "dict and path must not be null")) return st;
    return guarded([&] { dict->engine.dictionary().save(path); });
}

bodyct_status bodyct_dict_stats(const bodyct_dict* dict, uint32_t* rules, uint32_t* keywords) {
    if (auto st = require(dict && rules && keywords, "dict, rules and keywords must not be null"))
        return st;
    return guarded([&] {
        auto stats = bodyct::dictionary_stats(dict->engine.dictionary());
        *rules = stats.rules;
        *keywords = stats.keywords;
    });
}

bodyct_status bodyct_dict_validate(const bodyct_dict* dict, char** report_json) {
    if (auto st = require(dict && report_json, "dict and report_json must not be null")) return st;
    bool valid = true;
    auto status = guarded([&] {
        auto report = bodyct::validate_dictionary(dict->engine.dictionary());
        valid = report.ok();
        *report_json = copy_string(report.to_json().dump(2));
    });
    if (status != BODYCT_OK) return status;
    if (!valid) {
        t_last_error = "dictionary is invalid";
        return BODYCT_ERROR_VALIDATION;
    }
    return BODYCT_OK;
}

bodyct_status bodyct_label_text(const bodyct_dict* dict, const char* findings_text,
                                char** labelset_json) {
    if (auto st = require(dict && findings_text && labelset_json,
                          "dict, findings_text and labelset_json must not be null"))
        return st;
    return guarded([&] {
        bodyct::LabelSet labels = dict->engine.label_text(findings_text);
        nlohmann::ordered_json j;
        for (const auto& sys : labels.systems) {
            nlohmann::ordered_json js;
            js["status"] = bodyct::organ_status_name(sys.status);
            nlohmann::ordered_json decisions;
            for (const auto& [cls, decision] : sys.decisions)
                decisions[cls] = decision == bodyct::Decision::positive ? "positive" : "negative";
            js["decisions"] = std::move(decisions);
            js["no_apparent_disease"] = sys.no_apparent_disease();
            js["usable"] = sys.usable();
            auto audit = nlohmann::ordered_json::array();
            for (const auto& entry : sys.audit) {
                nlohmann::ordered_json ja;
                ja["class"] = entry.class_id;
                ja["event"] = entry.event;
                ja["sentence_index"] = entry.sentence_index;
                ja["keyword"] = entry.keyword;
                ja["sentence"] = entry.sentence;
                audit.push_back(std::move(ja));
            }
            js["audit"] = std::move(audit);
            j[sys.system_id] = std::move(js);
        }
        *labelset_json = copy_string(j.dump(2));
    });
}

/* ---- metrics ------------------------------------------------------------ */

namespace {

void fill_result(const bodyct::RocResult& r, bodyct_roc_result* out) {
    out->auc = r.auc;
    out->variance = r.variance;
    out->ci_low = r.ci_low;
    out->ci_high = r.ci_high;
    out->n_pos = r.n_pos;
    out->n_neg = r.n_neg;
    out->degenerate = r.degenerate ? 1 : 0;
}

}  // namespace

bodyct_status bodyct_auc(const double* scores, const int32_t* labels, size_t n, double* out_auc) {
    if (auto st = require(scores && labels && out_auc && n > 0,
                          "scores, labels and out_auc must not be null and n > 0"))
        return st;
    return guarded([&] {
        std::vector<int> lab(labels, labels + n);
        *out_auc = bodyct::auc({scores, n}, lab);
    });
}

bodyct_status bodyct_delong_ci(const double* scores, const int32_t* labels, size_t n, double alpha,
                               bodyct_roc_result* out) {
    if (auto st = require(scores && labels && out && n > 0,
                          "scores, labels and out must not be null and n > 0"))
        return st;
    return guarded([&] {
        std::vector<int> lab(labels, labels + n);
        fill_result(bodyct::delong_ci({scores, n}, lab, alpha), out);
    });
}

bodyct_status bodyct_bootstrap_ci(const double* scores, const int32_t* labels, size_t n,
                                  uint32_t resamples, double alpha, uint64_t seed,
                                  bodyct_roc_result* out) {
    if (auto st = require(scores && labels && out && n > 0,
                          "scores, labels and out must not be null and n > 0"))
        return st;
    return guarded([&] {
        std::vector<int> lab(labels, labels + n);
        fill_result(bodyct::bootstrap_ci({scores, n}, lab, resamples, alpha, seed), out);
    });
}

/* ---- split --------------------------------------------------------------- */

bodyct_status bodyct_split_assign(const char* patient_id, uint64_t seed, const double ratios[3],
                                  int32_t* out_subset) {
    if (auto st = require(patient_id && ratios && out_subset,
                          "patient_id, ratios and out_subset must not be null"))
        return st;
    return guarded([&] {
        bodyct::SplitRatios r{ratios[0], ratios[1], ratios[2]};
        r.validate();
        *out_subset = static_cast<int32_t>(bodyct::assign_subset(patient_id, seed, r));
    });
}

/* ---- volumes -------------------------------------------------------------- */

bodyct_status bodyct_volume_open(const char* meta_path, bodyct_volume** out) {
    if (auto st = require(meta_path && out, "meta_path and out must not be null")) return st;
    return guarded([&] { *out = new bodyct_volume{bodyct::load_volume(meta_path)}; });
}

bodyct_status bodyct_volume_create(const int64_t size[3], const double spacing[3],
                                   const double origin[3], const double* voxels,
                                   bodyct_volume** out) {
    if (auto st = require(size && spacing && origin && out,
                          "size, spacing, origin and out must not be null"))
        return st;
    return guarded([&] {
        bodyct::VolumeGrid grid;
        std::copy(size, size + 3, grid.size.begin());
        std::copy(spacing, spacing + 3, grid.spacing.begin());
        std::copy(origin, origin + 3, grid.origin.begin());
        if (grid.size[0] <= 0 || grid.size[1] <= 0 || grid.size[2] <= 0)
            bodyct::fail(bodyct::ErrorCode::invalid_argument, "volume size must be positive");
        grid.voxels.assign(static_cast<std::size_t>(grid.count()), 0.0);
        if (voxels)
            std::copy(voxels, voxels + grid.count(), grid.voxels.begin());
        grid.validate();
        *out = new bodyct_volume{std::move(grid)};
    });
}

void bodyct_volume_close(bodyct_volume* volume) { delete volume; }

bodyct_status bodyct_volume_info(const bodyct_volume* volume, int64_t size[3], double spacing[3],
                                 double origin[3]) {
    if (auto st = require(volume != nullptr, "volume must not be null")) return st;
    if (size) std::copy(volume->grid.size.begin(), volume->grid.size.end(), size);
    if (spacing) std::copy(volume->grid.spacing.begin(), volume->grid.spacing.end(), spacing);
    if (origin) std::copy(volume->grid.origin.begin(), volume->grid.origin.end(), origin);
    return BODYCT_OK;
}

const double* bodyct_volume_data(const bodyct_volume* volume) {
    return volume ? volume->grid.voxels.data() : nullptr;
}

bodyct_status bodyct_volume_save(const bodyct_volume* volume, const char* meta_path,
                                 const char* dtype) {
    if (auto st = require(volume && meta_path, "volume and meta_path must not be null")) return st;
    return guarded([&] {
        bodyct::save_volume(volume->grid, meta_path, dtype ? dtype : "float64");
    });
}

bodyct_status bodyct_volume_resample(const bodyct_volume* volume, const double spacing[3],
                                     int32_t spline_order, bodyct_volume** out) {
    if (auto st = require(volume && spacing && out, "volume, spacing and out must not be null"))
        return st;
    return guarded([&] {
        *out = new bodyct_volume{
            bodyct::resample(volume->grid, {spacing[0], spacing[1], spacing[2]}, spline_order)};
    });
}

bodyct_status bodyct_prep_patch(const bodyct_volume* volume, const bodyct_volume* mask,
                                const char* system, const char* kidney_offset,
                                double body_threshold_hu, bodyct_volume** out_patch,
                                char** out_meta_json) {
    if (auto st = require(volume && mask && system && out_patch,
                          "volume, mask, system and out_patch must not be null"))
        return st;
    return guarded([&] {
        bodyct::PlaceOptions place;
        place.body_threshold_hu = body_threshold_hu;
        std::string offset = kidney_offset ? kidney_offset : "auto";
        if (offset == "auto" || offset == "none") {
            place.kidney_offset = offset;
        } else {
            place.kidney_offset = "fixed";
            place.kidney_offset_mm = std::stod(offset);
        }
        bodyct::IntensityPolicy policy = bodyct::intensity_policy_for(system);
        bodyct::PatchSpec spec = bodyct::place_patch(mask->grid, system, volume->grid, place);
        bodyct::ExtractedPatch patch = bodyct::extract_patch(volume->grid, spec, policy);
        if (out_meta_json) {
            nlohmann::ordered_json meta;
            meta["system"] = spec.system;
            meta["clip_range"] = {policy.clip_min, policy.clip_max};
            meta["degenerate"] = patch.normalization.degenerate;
            meta["center"] = spec.center;
            meta["start"] = spec.start;
            meta["offset_rule"] = spec.offset_rule;
            meta["kidney_shift_voxels"] = spec.kidney_shift_voxels;
            meta["padded"] = {spec.padded[0], spec.padded[1], spec.padded[2]};
            *out_meta_json = copy_string(meta.dump(2));
        }
        *out_patch = new bodyct_volume{std::move(patch.grid)};
    });
}

/* ---- pipeline -------------------------------------------------------------- */

namespace {

nlohmann::json parse_options(const char* options_json) {
    if (options_json == nullptr || *options_json == '\0') return nlohmann::json::object();
    nlohmann::json j = nlohmann::json::parse(options_json, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        bodyct::fail(bodyct::ErrorCode::invalid_argument, "options_json must be a JSON object");
    return j;
}

void apply_findings(const nlohmann::json& opts, bodyct::FindingsConfig& findings) {
    if (opts.contains("findings_headers"))
        findings.headers = opts.at("findings_headers").get<std::vector<std::string>>();
    if (opts.contains("findings_terminators"))
        findings.terminators = opts.at("findings_terminators").get<std::vector<std::string>>();
}

}  // namespace

bodyct_status bodyct_run_ingest(const char* corpus_path, const char* options_json,
                                const char* out_dir) {
    if (auto st = require(corpus_path && out_dir, "corpus_path and out_dir must not be null"))
        return st;
    return guarded([&] {
        nlohmann::json opts = parse_options(options_json);
        bodyct::pipeline::IngestOptions o;
        o.corpus_path = corpus_path;
        o.format = opts.value("format", std::string("auto"));
        apply_findings(opts, o.findings);
        o.out_dir = out_dir;
        bodyct::pipeline::run_ingest(o);
    });
}

bodyct_status bodyct_run_label(const char* input_path, const char* dictionary_path,
                               const char* options_json, const char* out_dir) {
    if (auto st = require(input_path && dictionary_path && out_dir,
                          "input_path, dictionary_path and out_dir must not be null"))
        return st;
    return guarded([&] {
        nlohmann::json opts = parse_options(options_json);
        bodyct::pipeline::LabelOptions o;
        o.input_path = input_path;
        o.dictionary_path = dictionary_path;
        o.format = opts.value("format", std::string("auto"));
        o.threads = opts.value("threads", 1);
        o.with_audit = opts.value("with_audit", true);
        apply_findings(opts, o.findings);
        o.out_dir = out_dir;
        bodyct::pipeline::run_label(o);
    });
}

bodyct_status bodyct_run_split(const char* labels_path, uint64_t seed, const double ratios[3],
                               const char* out_dir) {
    if (auto st = require(labels_path && out_dir, "labels_path and out_dir must not be null"))
        return st;
    return guarded([&] {
        bodyct::pipeline::SplitOptions o;
        o.labels_path = labels_path;
        o.seed = seed;
        if (ratios) o.ratios = {ratios[0], ratios[1], ratios[2]};
        o.out_dir = out_dir;
        bodyct::pipeline::run_split(o);
    });
}

bodyct_status bodyct_run_stats_prevalence(const char* labels_path, const char* split_path,
                                          const char* out_dir) {
    if (auto st = require(labels_path && split_path && out_dir,
                          "labels_path, split_path and out_dir must not be null"))
        return st;
    return guarded([&] {
        bodyct::pipeline::run_stats_prevalence({labels_path, split_path, out_dir});
    });
}

bodyct_status bodyct_run_stats_cooccurrence(const char* labels_path, const char* system,
                                            const char* out_dir) {
    if (auto st = require(labels_path && system && out_dir,
                          "labels_path, system and out_dir must not be null"))
        return st;
    return guarded([&] {
        bodyct::pipeline::run_stats_cooccurrence({labels_path, system, out_dir});
    });
}

bodyct_status bodyct_run_eval_labels(const char* labels_path, const char* reference_path,
                                     const char* out_dir) {
    if (auto st = require(labels_path && reference_path && out_dir,
                          "labels_path, reference_path and out_dir must not be null"))
        return st;
    return guarded([&] {
        bodyct::pipeline::run_eval_labels({labels_path, reference_path, out_dir});
    });
}

bodyct_status bodyct_run_eval_roc(const char* predictions_path, const char* reference_path,
                                  const char* method, double alpha, uint32_t resamples,
                                  uint64_t seed, const char* out_dir) {
    if (auto st = require(predictions_path && reference_path && out_dir,
                          "predictions_path, reference_path and out_dir must not be null"))
        return st;
    return guarded([&] {
        bodyct::pipeline::EvalRocOptions o;
        o.predictions_path = predictions_path;
        o.reference_path = reference_path;
        o.method = method ? method : "delong";
        o.alpha = alpha;
        o.resamples = resamples;
        o.seed = seed;
        o.out_dir = out_dir;
        bodyct::pipeline::run_eval_roc(o);
    });
}

bodyct_status bodyct_run_prep(const char* volume_path, const char* mask_path, const char* system,
                              int32_t spline_order, const char* kidney_offset,
                              double body_threshold_hu, const char* dtype, const char* out_path) {
    if (auto st = require(volume_path && mask_path && system && out_path,
                          "volume_path, mask_path, system and out_path must not be null"))
        return st;
    return guarded([&] {
        bodyct::pipeline::PrepOptions o;
        o.volume_path = volume_path;
        o.mask_path = mask_path;
        o.system = system;
        o.spline_order = spline_order;
        o.kidney_offset = kidney_offset ? kidney_offset : "auto";
        o.body_threshold_hu = body_threshold_hu;
        o.dtype = dtype ? dtype : "float32";
        o.out_path = out_path;
        bodyct::pipeline::run_prep(o);
    });
}

}  // extern "C"
