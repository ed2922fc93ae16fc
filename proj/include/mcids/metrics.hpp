#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mcids/core.hpp"
#include "mcids/rulebook.hpp"

namespace mcids {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// Binary per-record tally: a record is positive iff its set is non-empty.
/// Throws EvalError on a length mismatch.
ConfusionMatrix confusion(std::span<const LabelSet> truth, std::span<const LabelSet> predicted);

struct MetricsReport {
    double tpr = 0;
    double fpr = 0;
    double fnr = 0;
    double tnr = 0;
    double precision = 0;
    double npv = 0;
    double accuracy = 0;
    double f1 = 0;
    double markedness = 0;
    double informedness = 0;
    double mcc = 0;
};

/// Rates with a zero denominator are 0; MCC with any zero margin is 0.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

struct LevelDelta {
    TrainingLevel from;
    TrainingLevel to;
    double accuracy_pp;  // signed percentage points
};

/// Accuracy change between consecutive levels present in `reports`, in
/// Without < Partial < Full order, rounded to 1e-6 pp. Throws EvalError
/// with fewer than two levels.
std::vector<LevelDelta> level_comparison(const std::map<TrainingLevel, MetricsReport>& reports);
std::vector<LevelDelta> level_comparison(const std::map<TrainingLevel, double>& accuracies);

/// Per-label diagnostic: for each label, tally records whose truth contains
/// it against records whose prediction contains it.
std::map<AnomalyLabel, ConfusionMatrix> per_label_confusion(std::span<const LabelSet> truth,
                                                            std::span<const LabelSet> predicted);

}  // namespace mcids
