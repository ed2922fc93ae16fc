#include "mcids/metrics.hpp"

#include <cmath>

#include "mcids/error.hpp"

namespace mcids {

namespace {

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw EvalError("truth has " + std::to_string(a) + " records but predictions have " + std::to_string(b));
    }
}

}  // namespace

ConfusionMatrix confusion(std::span<const LabelSet> truth, std::span<const LabelSet> predicted) {
    require_same_length(truth.size(), predicted.size());
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = !truth[i].empty();
        const bool p = !predicted[i].empty();
        if (t && p) ++cm.tp;
        else if (t) ++cm.fn;
        else if (p) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
    const auto tp = static_cast<double>(cm.tp);
    const auto tn = static_cast<double>(cm.tn);
    const auto fp = static_cast<double>(cm.fp);
    const auto fn = static_cast<double>(cm.fn);

    MetricsReport r;
    r.tpr = ratio(tp, tp + fn);
    r.fnr = ratio(fn, tp + fn);
    r.fpr = ratio(fp, fp + tn);
    r.tnr = ratio(tn, fp + tn);
    r.precision = ratio(tp, tp + fp);
    r.npv = ratio(tn, tn + fn);
    r.accuracy = ratio(tp + tn, tp + tn + fp + fn);
    r.f1 = ratio(2 * tp, 2 * tp + fp + fn);
    r.markedness = r.precision + r.npv - 1;
    r.informedness = r.tpr + r.tnr - 1;
    const double margins = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    r.mcc = margins == 0 ? 0.0 : (tp * tn - fp * fn) / std::sqrt(margins);
    return r;
}

std::vector<LevelDelta> level_comparison(const std::map<TrainingLevel, double>& accuracies) {
    if (accuracies.size() < 2) throw EvalError("level comparison needs at least two training levels");
    std::vector<LevelDelta> out;
    auto prev = accuracies.begin();
    for (auto it = std::next(prev); it != accuracies.end(); prev = it++) {
        const double pp = (it->second - prev->second) * 100.0;
        out.push_back({prev->first, it->first, std::round(pp * 1e6) / 1e6});
    }
    return out;
}

std::vector<LevelDelta> level_comparison(const std::map<TrainingLevel, MetricsReport>& reports) {
    std::map<TrainingLevel, double> acc;
    for (const auto& [level, report] : reports) acc[level] = report.accuracy;
    return level_comparison(acc);
}

std::map<AnomalyLabel, ConfusionMatrix> per_label_confusion(std::span<const LabelSet> truth,
                                                            std::span<const LabelSet> predicted) {
    require_same_length(truth.size(), predicted.size());
    std::map<AnomalyLabel, ConfusionMatrix> out;
    LabelSet seen;
    for (std::size_t i = 0; i < truth.size(); ++i) seen |= truth[i] | predicted[i];
    for (auto label : seen.to_vector()) {
        auto& cm = out[label];
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool t = truth[i].contains(label);
            const bool p = predicted[i].contains(label);
            if (t && p) ++cm.tp;
            else if (t) ++cm.fn;
            else if (p) ++cm.fp;
            else ++cm.tn;
        }
    }
    return out;
}

}  // namespace mcids
