#include <gtest/gtest.h>

#include "mcids/rulebook.hpp"

using namespace mcids;

TEST(RuleId, ParseAndRender) {
    EXPECT_EQ(RuleId::parse("GR3")->to_string(), "GR3");
    EXPECT_EQ(RuleId::parse("sr8")->to_string(), "SR8");
    EXPECT_FALSE(RuleId::parse("GR9"));
    EXPECT_FALSE(RuleId::parse("GR0"));
    EXPECT_FALSE(RuleId::parse("XR1"));
    EXPECT_THROW(RuleId(Protocol::Sv, 9), std::out_of_range);
    EXPECT_EQ(all_rules().size(), 16u);
}

TEST(Levels, Membership) {
    EXPECT_EQ(rules_for_level(TrainingLevel::Full, Protocol::Goose), RuleSet(Protocol::Goose, {1, 2, 3, 4, 5, 6, 7, 8}));
    EXPECT_TRUE(rules_for_level(TrainingLevel::Without, Protocol::Sv).empty());
    EXPECT_EQ(rules_for_level(TrainingLevel::Partial, Protocol::Sv), RuleSet(Protocol::Sv, {1, 2, 3, 4, 5}));
}

TEST(Levels, StrictlyNested) {
    for (auto p : {Protocol::Goose, Protocol::Sv}) {
        auto w = rules_for_level(TrainingLevel::Without, p);
        auto pt = rules_for_level(TrainingLevel::Partial, p);
        auto f = rules_for_level(TrainingLevel::Full, p);
        EXPECT_TRUE(pt.includes(w));
        EXPECT_TRUE(f.includes(pt));
        EXPECT_LT(w.size(), pt.size());
        EXPECT_LT(pt.size(), f.size());
    }
}

TEST(Levels, ParseNames) {
    EXPECT_EQ(parse_training_level("partial"), TrainingLevel::Partial);
    EXPECT_EQ(parse_training_level("FT"), TrainingLevel::Full);
    EXPECT_EQ(parse_training_level("WT"), TrainingLevel::Without);
    EXPECT_FALSE(parse_training_level("half"));
}

TEST(RuleSet, RejectsOtherProtocol) {
    RuleSet s(Protocol::Goose);
    EXPECT_THROW(s.insert(RuleId(Protocol::Sv, 1)), std::invalid_argument);
}

TEST(Catalog, LabelMapping) {
    EXPECT_EQ(label_for(RuleId(Protocol::Sv, 8)), AnomalyLabel::SmpCntIncreaseAnomaly);
    EXPECT_EQ(label_for(RuleId(Protocol::Sv, 2)), AnomalyLabel::SmpCntIncreaseAnomaly);
    EXPECT_NE(label_for(RuleId(Protocol::Goose, 5)), label_for(RuleId(Protocol::Sv, 5)));
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        auto rules = rules_for_label(static_cast<AnomalyLabel>(i));
        EXPECT_FALSE(rules.empty());
        for (auto r : rules) EXPECT_EQ(label_for(r), static_cast<AnomalyLabel>(i));
    }
    EXPECT_EQ(enabled_labels(RuleSet(Protocol::Sv, {8})), LabelSet{AnomalyLabel::SmpCntIncreaseAnomaly});
}

TEST(Catalog, Descriptions) {
    EXPECT_EQ(describe_rule(RuleId(Protocol::Goose, 6)).to_string(),
              "more than 10 packets within 10 µs → high data rate anomaly");
    EXPECT_EQ(describe_rule(RuleId(Protocol::Sv, 1)).to_string(), "SmpCnt outside [0,4799] → SmpCnt range anomaly");
    EXPECT_EQ(describe_rule(RuleId(Protocol::Goose, 5)).condition, "time column format HH:MM:SS.ssssss");
    Thresholds t;
    t.goose_burst_count = 20;
    EXPECT_EQ(describe_rule(RuleId(Protocol::Goose, 6), t).condition, "more than 20 packets within 10 µs");
}

TEST(Rulebook, Overrides) {
    Rulebook book;
    EXPECT_EQ(book.level(TrainingLevel::Partial, Protocol::Goose), rules_for_level(TrainingLevel::Partial, Protocol::Goose));
    book.set_level(TrainingLevel::Partial, RuleSet(Protocol::Goose, {1, 6, 7}));
    EXPECT_EQ(book.level(TrainingLevel::Partial, Protocol::Goose), RuleSet(Protocol::Goose, {1, 6, 7}));
    EXPECT_EQ(book.level(TrainingLevel::Partial, Protocol::Sv), rules_for_level(TrainingLevel::Partial, Protocol::Sv));
}
