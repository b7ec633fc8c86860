#include "core/roc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "core/csv.hpp"
#include "core/dictionary.hpp"
#include "core/error.hpp"
#include "core/text.hpp"

namespace bodyct {

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::invalid_argument, "normal quantile needs p in (0,1)");

    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

std::vector<double> midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double mid = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

namespace {

struct SplitScores {
    std::vector<double> pos;
    std::vector<double> neg;
};

SplitScores split_scores(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        fail(ErrorCode::invalid_argument, "scores and labels must have equal length");
    SplitScores out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i]))
            fail(ErrorCode::invalid_argument, "scores must be finite");
        if (labels[i] == 1) out.pos.push_back(scores[i]);
        else if (labels[i] == 0) out.neg.push_back(scores[i]);
        else fail(ErrorCode::invalid_argument, "labels must be 0 or 1");
    }
    return out;
}

double auc_from_split(const std::vector<double>& pos, const std::vector<double>& neg) {
    const std::size_t m = pos.size(), n = neg.size();
    std::vector<double> all;
    all.reserve(m + n);
    all.insert(all.end(), pos.begin(), pos.end());
    all.insert(all.end(), neg.begin(), neg.end());
    std::vector<double> ranks = midranks(all);
    double sum_pos = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum_pos += ranks[i];
    double md = static_cast<double>(m);
    return (sum_pos - md * (md + 1.0) / 2.0) / (md * static_cast<double>(n));
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
    SplitScores s = split_scores(scores, labels);
    if (s.pos.empty() || s.neg.empty())
        fail(ErrorCode::undefined, "AUC undefined: needs at least one positive and one negative");
    return auc_from_split(s.pos, s.neg);
}

RocResult delong_ci(std::span<const double> scores, std::span<const int> labels, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::invalid_argument, "alpha must be in (0,1)");
    SplitScores s = split_scores(scores, labels);
    const std::size_t m = s.pos.size(), n = s.neg.size();
    if (m < 2 || n < 2)
        fail(ErrorCode::invalid_argument, "DeLong CI needs at least two scores per class");

    std::vector<double> all;
    all.reserve(m + n);
    all.insert(all.end(), s.pos.begin(), s.pos.end());
    all.insert(all.end(), s.neg.begin(), s.neg.end());
    std::vector<double> tz = midranks(all);
    std::vector<double> tx = midranks(s.pos);
    std::vector<double> ty = midranks(s.neg);

    const double md = static_cast<double>(m), nd = static_cast<double>(n);
    double sum_pos = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum_pos += tz[i];
    double estimate = (sum_pos - md * (md + 1.0) / 2.0) / (md * nd);

    // structural components
    double s10 = 0.0, s01 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double v10 = (tz[i] - tx[i]) / nd;
        s10 += (v10 - estimate) * (v10 - estimate);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double v01 = 1.0 - (tz[m + j] - ty[j]) / md;
        s01 += (v01 - estimate) * (v01 - estimate);
    }
    s10 /= (md - 1.0);
    s01 /= (nd - 1.0);
    double variance = s10 / md + s01 / nd;
    if (variance < 0.0) variance = 0.0;

    double z = normal_quantile(1.0 - alpha / 2.0);
    double half = z * std::sqrt(variance);

    RocResult out;
    out.auc = estimate;
    out.variance = variance;
    out.ci_low = std::clamp(estimate - half, 0.0, 1.0);
    out.ci_high = std::clamp(estimate + half, 0.0, 1.0);
    out.n_pos = m;
    out.n_neg = n;
    out.method = "delong";
    out.degenerate = variance == 0.0;
    if (out.degenerate) out.note = "zero variance: CI collapses to a point";
    return out;
}

RocResult bootstrap_ci(std::span<const double> scores, std::span<const int> labels,
                       std::size_t resamples, double alpha, uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::invalid_argument, "alpha must be in (0,1)");
    if (resamples < 2) fail(ErrorCode::invalid_argument, "bootstrap needs at least 2 resamples");
    SplitScores s = split_scores(scores, labels);
    const std::size_t m = s.pos.size(), n = s.neg.size();
    if (m == 0 || n == 0)
        fail(ErrorCode::undefined, "AUC undefined: needs at least one positive and one negative");

    std::mt19937_64 rng(seed);
    std::vector<double> pos(m), neg(n), aucs;
    aucs.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < m; ++i) pos[i] = s.pos[rng() % m];
        for (std::size_t j = 0; j < n; ++j) neg[j] = s.neg[rng() % n];
        aucs.push_back(auc_from_split(pos, neg));
    }
    std::sort(aucs.begin(), aucs.end());

    auto quantile = [&](double p) {
        double h = (static_cast<double>(aucs.size()) - 1.0) * p;
        std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 >= aucs.size()) return aucs.back();
        double frac = h - static_cast<double>(lo);
        return aucs[lo] + frac * (aucs[lo + 1] - aucs[lo]);
    };

    double mean = std::accumulate(aucs.begin(), aucs.end(), 0.0) / static_cast<double>(aucs.size());
    double var = 0.0;
    for (double a : aucs) var += (a - mean) * (a - mean);
    var /= static_cast<double>(aucs.size() - 1);

    RocResult out;
    out.auc = auc_from_split(s.pos, s.neg);
    out.variance = var;
    out.ci_low = std::clamp(quantile(alpha / 2.0), 0.0, 1.0);
    out.ci_high = std::clamp(quantile(1.0 - alpha / 2.0), 0.0, 1.0);
    out.n_pos = m;
    out.n_neg = n;
    out.method = "bootstrap";
    out.degenerate = out.ci_low == out.ci_high;
    if (out.degenerate) out.note = "point interval";
    return out;
}

CiMethod parse_ci_method(std::string_view s) {
    std::string norm = to_lower(s);
    if (norm == "delong") return CiMethod::delong;
    if (norm == "bootstrap") return CiMethod::bootstrap;
    fail(ErrorCode::invalid_argument, "unknown CI method \"" + std::string(s) + "\"");
}

std::vector<RocResult> evaluate_predictions(const std::vector<PredictionRecord>& predictions,
                                            const std::vector<LabelRecord>& reference,
                                            const EvalOptions& options) {
    std::map<std::pair<std::string, std::string>, double> scores;
    for (const auto& pred : predictions) {
        auto key = std::make_pair(pred.volume_id, pred.label_id);
        if (!scores.emplace(key, pred.score).second)
            fail(ErrorCode::parse,
                 "duplicate prediction for (" + pred.volume_id + ", " + pred.label_id + ")");
    }

    std::map<std::string, std::vector<const LabelRecord*>> usable_by_system;
    for (const auto& rec : reference)
        if (rec.usable()) usable_by_system[rec.system].push_back(&rec);

    std::vector<std::string> missing;
    std::vector<RocResult> results;
    for (const auto& label : canonical_label_ids()) {
        auto colon = label.find(':');
        std::string system = label.substr(0, colon);
        std::string cls = label.substr(colon + 1);
        auto it = usable_by_system.find(system);
        if (it == usable_by_system.end()) continue;

        std::vector<double> label_scores;
        std::vector<int> truth;
        for (const LabelRecord* rec : it->second) {
            auto sit = scores.find(std::make_pair(rec->report_id, label));
            if (sit == scores.end()) {
                missing.push_back("(" + rec->report_id + ", " + label + ")");
                continue;
            }
            label_scores.push_back(sit->second);
            bool pos = cls == kNoApparentDisease ? rec->no_apparent_disease : rec->positive_for(cls);
            truth.push_back(pos ? 1 : 0);
        }
        if (!missing.empty()) continue;

        std::size_t n_pos = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), 1));
        std::size_t n_neg = truth.size() - n_pos;
        if (n_pos == 0 || n_neg == 0 || (options.method == CiMethod::delong && (n_pos < 2 || n_neg < 2))) {
            RocResult r;
            r.label_id = label;
            r.n_pos = n_pos;
            r.n_neg = n_neg;
            r.defined = false;
            r.method = options.method == CiMethod::delong ? "delong" : "bootstrap";
            r.note = n_pos == 0 || n_neg == 0 ? "single-class reference" : "too few per class";
            results.push_back(std::move(r));
            continue;
        }
        RocResult r = options.method == CiMethod::delong
                          ? delong_ci(label_scores, truth, options.alpha)
                          : bootstrap_ci(label_scores, truth, options.resamples, options.alpha,
                                         splitmix64(options.seed ^ fnv1a64(label)));
        r.label_id = label;
        results.push_back(std::move(r));
    }

    if (!missing.empty()) {
        std::string msg = "missing predictions for " + std::to_string(missing.size()) + " pairs:";
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
        if (missing.size() > 20) msg += " ...";
        fail(ErrorCode::invalid_argument, msg);
    }
    return results;
}

void write_roc_csv(std::ostream& os, const std::vector<RocResult>& results) {
    csv::write_row(os, {"label", "n_pos", "n_neg", "auc", "ci_low", "ci_high", "method", "flag"});
    for (const auto& r : results) {
        std::string flag = !r.defined ? "undefined" : (r.degenerate ? "degenerate" : "");
        if (!r.defined) {
            csv::write_row(os, {r.label_id, std::to_string(r.n_pos), std::to_string(r.n_neg), "", "",
                                "", r.method, flag});
        } else {
            csv::write_row(os, {r.label_id, std::to_string(r.n_pos), std::to_string(r.n_neg),
                                format_fixed(r.auc, 6), format_fixed(r.ci_low, 6),
                                format_fixed(r.ci_high, 6), r.method, flag});
        }
    }
}

}  // namespace bodyct
