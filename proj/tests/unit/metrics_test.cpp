#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mcids/error.hpp"
#include "mcids/metrics.hpp"

using namespace mcids;

namespace {

// Independent evaluation of the table formulas from the raw counts.
struct Expected {
    double tpr, fpr, precision, accuracy, f1, markedness, informedness, mcc;
};

Expected by_hand(double tp, double tn, double fp, double fn) {
    Expected e{};
    e.tpr = tp / (tp + fn);
    e.fpr = fp / (fp + tn);
    e.precision = tp / (tp + fp);
    e.accuracy = (tp + tn) / (tp + tn + fp + fn);
    e.f1 = 2 * e.precision * e.tpr / (e.precision + e.tpr);
    e.markedness = e.precision + tn / (tn + fn) - 1;
    e.informedness = e.tpr + tn / (tn + fp) - 1;
    e.mcc = (tp * tn - fp * fn) / std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
    return e;
}

}  // namespace

TEST(Confusion, Examples) {
    std::vector<LabelSet> empty(6);
    EXPECT_EQ(confusion(empty, empty), (ConfusionMatrix{0, 6, 0, 0}));
    std::vector<LabelSet> t(10), p(10);
    t[3].insert(AnomalyLabel::DataGapAnomaly);
    p[5].insert(AnomalyLabel::SqnumAnomaly);
    EXPECT_EQ(confusion(t, p), (ConfusionMatrix{0, 8, 1, 1}));
    // label identity does not matter
    p[3].insert(AnomalyLabel::SqnumAnomaly);
    EXPECT_EQ(confusion(t, p), (ConfusionMatrix{1, 8, 1, 0}));
    EXPECT_EQ(confusion(t, t), (ConfusionMatrix{1, 9, 0, 0}));
    std::vector<LabelSet> shorter(9);
    EXPECT_THROW(confusion(t, shorter), EvalError);
}

TEST(Metrics, SvFullColumnMatrix) {
    auto r = compute_metrics({49, 29, 1, 1});
    auto e = by_hand(49, 29, 1, 1);
    EXPECT_DOUBLE_EQ(r.tpr, e.tpr);
    EXPECT_DOUBLE_EQ(r.fpr, e.fpr);
    EXPECT_DOUBLE_EQ(r.precision, e.precision);
    EXPECT_DOUBLE_EQ(r.accuracy, e.accuracy);
    EXPECT_NEAR(r.f1, e.f1, 1e-15);
    EXPECT_NEAR(r.markedness, e.markedness, 1e-15);
    EXPECT_NEAR(r.informedness, e.informedness, 1e-15);
    EXPECT_NEAR(r.mcc, e.mcc, 1e-15);
    // exact rationals: 49/50, 1/30, 39/40, 1420/1500
    EXPECT_DOUBLE_EQ(r.tpr, 49.0 / 50);
    EXPECT_DOUBLE_EQ(r.fpr, 1.0 / 30);
    EXPECT_DOUBLE_EQ(r.accuracy, 39.0 / 40);
    EXPECT_NEAR(r.mcc, 1420.0 / 1500, 1e-15);
    EXPECT_NEAR(r.f1, 0.98, 1e-15);
}

TEST(Metrics, GooseFullColumnMatrix) {
    auto r = compute_metrics({44, 34, 1, 1});
    EXPECT_NEAR(r.tpr, 44.0 / 45, 1e-15);
    EXPECT_NEAR(r.fpr, 1.0 / 35, 1e-15);
    EXPECT_NEAR(r.accuracy, 0.975, 1e-15);
    EXPECT_NEAR(r.mcc, 1495.0 / 1575, 1e-15);
}

TEST(Metrics, PerfectAndChance) {
    auto p = compute_metrics({10, 10, 0, 0});
    for (double v : {p.tpr, p.precision, p.accuracy, p.f1, p.markedness, p.informedness, p.mcc}) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(p.fpr, 0.0);
    auto c = compute_metrics({5, 5, 5, 5});
    EXPECT_EQ(c.mcc, 0.0);
    EXPECT_EQ(c.informedness, 0.0);
    EXPECT_EQ(c.markedness, 0.0);
}

TEST(Metrics, ZeroDenominators) {
    auto z = compute_metrics({0, 0, 0, 0});
    for (double v : {z.tpr, z.fpr, z.fnr, z.precision, z.accuracy, z.f1, z.mcc}) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(compute_metrics({0, 10, 0, 0}).mcc, 0.0);
    EXPECT_EQ(compute_metrics({3, 0, 2, 0}).mcc, 0.0);
}

TEST(Metrics, Properties) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20000; ++i) {
        ConfusionMatrix cm{rng() % 60, rng() % 60, rng() % 60, rng() % 60};
        auto r = compute_metrics(cm);
        if (cm.tp + cm.fn > 0) EXPECT_NEAR(r.tpr + r.fnr, 1.0, 1e-12);
        if (cm.tn + cm.fp > 0) EXPECT_NEAR(r.fpr + r.tnr, 1.0, 1e-12);
        EXPECT_NEAR(r.informedness, r.tpr + r.tnr - 1, 1e-12);
        for (double v : {r.mcc, r.markedness, r.informedness}) {
            EXPECT_GE(v, -1.0 - 1e-12);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
        if (r.precision + r.tpr > 0 && cm.tp + cm.fp > 0 && cm.tp + cm.fn > 0) {
            EXPECT_NEAR(r.f1, 2 * r.precision * r.tpr / (r.precision + r.tpr), 1e-12);
        }
        if (cm.tp + cm.fp > 0 && cm.tp + cm.fn > 0 && cm.tn + cm.fp > 0 && cm.tn + cm.fn > 0) {
            EXPECT_LE(r.mcc * r.mcc, r.markedness * r.informedness + 1e-12);
        }
        auto s = compute_metrics({cm.tn, cm.tp, cm.fn, cm.fp});
        EXPECT_EQ(s.mcc, r.mcc);
        EXPECT_EQ(s.accuracy, r.accuracy);
        EXPECT_EQ(s.precision, r.npv);
        EXPECT_EQ(s.npv, r.precision);
    }
}

TEST(LevelComparison, Examples) {
    auto d = level_comparison(std::map<TrainingLevel, double>{
        {TrainingLevel::Without, 0.9125}, {TrainingLevel::Partial, 0.95}, {TrainingLevel::Full, 0.975}});
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0].accuracy_pp, 3.75);
    EXPECT_EQ(d[1].accuracy_pp, 2.5);
    EXPECT_EQ(d[0].from, TrainingLevel::Without);
    EXPECT_EQ(d[1].to, TrainingLevel::Full);

    auto e = level_comparison(std::map<TrainingLevel, double>{
        {TrainingLevel::Without, 0.50}, {TrainingLevel::Partial, 0.725}, {TrainingLevel::Full, 0.9125}});
    EXPECT_EQ(e[0].accuracy_pp, 22.5);
    EXPECT_EQ(e[1].accuracy_pp, 18.75);

    auto same = compute_metrics({5, 5, 1, 1});
    auto z = level_comparison(std::map<TrainingLevel, MetricsReport>{{TrainingLevel::Partial, same}, {TrainingLevel::Full, same}});
    ASSERT_EQ(z.size(), 1u);
    EXPECT_EQ(z[0].accuracy_pp, 0.0);

    EXPECT_THROW(level_comparison(std::map<TrainingLevel, double>{{TrainingLevel::Full, 1.0}}), EvalError);
}

TEST(PerLabel, Breakdown) {
    std::vector<LabelSet> t(3), p(3);
    t[0] = {AnomalyLabel::SqnumAnomaly, AnomalyLabel::DataChangeAnomaly};
    p[0] = {AnomalyLabel::SqnumAnomaly};
    p[1] = {AnomalyLabel::DataChangeAnomaly};
    auto m = per_label_confusion(t, p);
    EXPECT_EQ(m[AnomalyLabel::SqnumAnomaly], (ConfusionMatrix{1, 2, 0, 0}));
    EXPECT_EQ(m[AnomalyLabel::DataChangeAnomaly], (ConfusionMatrix{0, 1, 1, 1}));
}
