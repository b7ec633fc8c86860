#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/labels_io.hpp"

namespace bodyct {

struct RocResult {
    std::string label_id;
    double auc = 0.0;
    double variance = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::string method;      // "delong" | "bootstrap"
    bool degenerate = false; // zero-variance / point interval
    bool defined = true;     // false when the reference has a single class
    std::string note;
};

/// Standard normal quantile, accurate to ~1e-15 over (0,1).
double normal_quantile(double p);

/// 1-based tie-averaged ranks.
std::vector<double> midranks(std::span<const double> values);

/// Mann-Whitney AUC: mean over (positive, negative) pairs of
/// [s_pos > s_neg] + 0.5 [s_pos == s_neg]. Throws when one class is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

/// DeLong structural-component variance and normal-approximation CI,
/// midrank-based so tied scores are handled. Requires >= 2 of each class.
RocResult delong_ci(std::span<const double> scores, std::span<const int> labels, double alpha = 0.05);

/// Stratified percentile bootstrap: positives and negatives are resampled
/// independently, preserving class counts. Fixed seed => identical CI.
RocResult bootstrap_ci(std::span<const double> scores, std::span<const int> labels,
                       std::size_t resamples = 2000, double alpha = 0.05, uint64_t seed = 0);

enum class CiMethod { delong, bootstrap };
CiMethod parse_ci_method(std::string_view s);

struct EvalOptions {
    CiMethod method = CiMethod::delong;
    double alpha = 0.05;
    std::size_t resamples = 2000;
    uint64_t seed = 0;
};

/// One RocResult per label, in canonical label order, over usable reference
/// rows. Labels with a single reference class are reported as undefined
/// rather than dropped. Missing predictions are an error that enumerates the
/// absent (volume, label) pairs.
std::vector<RocResult> evaluate_predictions(const std::vector<PredictionRecord>& predictions,
                                            const std::vector<LabelRecord>& reference,
                                            const EvalOptions& options);

void write_roc_csv(std::ostream& os, const std::vector<RocResult>& results);

}  // namespace bodyct
