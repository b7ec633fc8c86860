/* bodyct — weak labels for body CT: rule-based report labeling, patient-level
 * dataset splits, ROC/DeLong evaluation, and organ-patch preprocessing.
 *
 * C API of the shared library. All functions return bodyct_status; on any
 * failure bodyct_last_error() holds a message for the calling thread. Objects
 * are opaque handles released with their _close function; strings returned
 * through char** are owned by the caller and released with
 * bodyct_string_free().
 */
#ifndef BODYCT_H
#define BODYCT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bodyct_status {
    BODYCT_OK = 0,
    BODYCT_ERROR_INVALID_ARGUMENT = 1,
    BODYCT_ERROR_IO = 2,
    BODYCT_ERROR_PARSE = 3,
    BODYCT_ERROR_VALIDATION = 4,
    BODYCT_ERROR_UNDEFINED = 5,
    BODYCT_ERROR_INTERNAL = 6
} bodyct_status;

const char* bodyct_version(void);
const char* bodyct_status_name(bodyct_status status);

/* Message for the most recent failure on this thread; empty when none. */
const char* bodyct_last_error(void);

void bodyct_string_free(char* s);

/* ---- rule dictionary -------------------------------------------------- */

typedef struct bodyct_dict bodyct_dict;

bodyct_status bodyct_dict_open(const char* path, bodyct_dict** out);
void bodyct_dict_close(bodyct_dict* dict);
bodyct_status bodyct_dict_save(const bodyct_dict* dict, const char* path);
bodyct_status bodyct_dict_stats(const bodyct_dict* dict, uint32_t* rules, uint32_t* keywords);

/* Validation report as JSON ({"valid":..., "errors":[...], ...}). Returns
 * BODYCT_ERROR_VALIDATION when the dictionary is invalid; the report is
 * still produced. */
bodyct_status bodyct_dict_validate(const bodyct_dict* dict, char** report_json);

/* Labels one findings text against every system in the dictionary. The
 * result is a JSON object with one entry per organ system (status, the four
 * class decisions, the no-apparent-disease flag, and the audit trail). */
bodyct_status bodyct_label_text(const bodyct_dict* dict, const char* findings_text,
                                char** labelset_json);

/* ---- metrics on raw arrays -------------------------------------------- */

typedef struct bodyct_roc_result {
    double auc;
    double variance;
    double ci_low;
    double ci_high;
    uint64_t n_pos;
    uint64_t n_neg;
    int degenerate; /* zero-variance / point interval */
} bodyct_roc_result;

/* Mann-Whitney AUC with half credit for ties. labels are 0/1. */
bodyct_status bodyct_auc(const double* scores, const int32_t* labels, size_t n, double* out_auc);

bodyct_status bodyct_delong_ci(const double* scores, const int32_t* labels, size_t n, double alpha,
                               bodyct_roc_result* out);

bodyct_status bodyct_bootstrap_ci(const double* scores, const int32_t* labels, size_t n,
                                  uint32_t resamples, double alpha, uint64_t seed,
                                  bodyct_roc_result* out);

/* ---- patient-level split ---------------------------------------------- */

/* Deterministic subset for one patient id: 0 train, 1 validation, 2 test.
 * ratios are (train, validation, test), positive, summing to 1. */
bodyct_status bodyct_split_assign(const char* patient_id, uint64_t seed, const double ratios[3],
                                  int32_t* out_subset);

/* ---- volumes ----------------------------------------------------------- */

typedef struct bodyct_volume bodyct_volume;

bodyct_status bodyct_volume_open(const char* meta_path, bodyct_volume** out);
bodyct_status bodyct_volume_create(const int64_t size[3], const double spacing[3],
                                   const double origin[3], const double* voxels,
                                   bodyct_volume** out);
void bodyct_volume_close(bodyct_volume* volume);
bodyct_status bodyct_volume_info(const bodyct_volume* volume, int64_t size[3], double spacing[3],
                                 double origin[3]);
/* Pointer into the handle's voxel buffer (z-major), valid until close. */
const double* bodyct_volume_data(const bodyct_volume* volume);
bodyct_status bodyct_volume_save(const bodyct_volume* volume, const char* meta_path,
                                 const char* dtype);

/* B-spline resampling onto a new spacing; order 0..3. */
bodyct_status bodyct_volume_resample(const bodyct_volume* volume, const double spacing[3],
                                     int32_t spline_order, bodyct_volume** out);

/* Places and extracts the organ patch for `system` from a volume and its
 * mask (both already on the 2 mm grid). kidney_offset is "auto", "none" or
 * a millimetre amount. out_meta_json receives the patch metadata. */
bodyct_status bodyct_prep_patch(const bodyct_volume* volume, const bodyct_volume* mask,
                                const char* system, const char* kidney_offset,
                                double body_threshold_hu, bodyct_volume** out_patch,
                                char** out_meta_json);

/* ---- pipeline steps (paths in, artifact files out) --------------------- */

/* options_json for ingest/label (NULL for defaults):
 *   {"format": "auto|jsonl|csv",
 *    "findings_headers": [...], "findings_terminators": [...],
 *    "threads": 1, "with_audit": true}
 */
bodyct_status bodyct_run_ingest(const char* corpus_path, const char* options_json,
                                const char* out_dir);

bodyct_status bodyct_run_label(const char* input_path, const char* dictionary_path,
                               const char* options_json, const char* out_dir);

bodyct_status bodyct_run_split(const char* labels_path, uint64_t seed, const double ratios[3],
                               const char* out_dir);

bodyct_status bodyct_run_stats_prevalence(const char* labels_path, const char* split_path,
                                          const char* out_dir);

bodyct_status bodyct_run_stats_cooccurrence(const char* labels_path, const char* system,
                                            const char* out_dir);

bodyct_status bodyct_run_eval_labels(const char* labels_path, const char* reference_path,
                                     const char* out_dir);

bodyct_status bodyct_run_eval_roc(const char* predictions_path, const char* reference_path,
                                  const char* method, double alpha, uint32_t resamples,
                                  uint64_t seed, const char* out_dir);

bodyct_status bodyct_run_prep(const char* volume_path, const char* mask_path, const char* system,
                              int32_t spline_order, const char* kidney_offset,
                              double body_threshold_hu, const char* dtype, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* BODYCT_H */
