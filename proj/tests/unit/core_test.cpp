#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mcids/core.hpp"

using namespace mcids;

TEST(MacAddress, RendersLowercaseColonHex) {
    auto m = MacAddress::parse("01:0C:CD:04:00:01");
    ASSERT_TRUE(m);
    EXPECT_EQ(m->to_string(), "01:0c:cd:04:00:01");
    EXPECT_EQ(MacAddress::parse("01-00-03-00-00-01")->to_string(), "01:00:03:00:00:01");
    EXPECT_EQ(MacAddress::parse("27 34 31 00 00 02")->to_string(), "27:34:31:00:00:02");
}

TEST(MacAddress, RejectsMalformed) {
    for (const char* bad : {"", "01:00:03:00:00", "01:00:03:00:00:01:02", "0g:00:03:00:00:01", "1:00:03:00:00:01",
                            "01:00-03:00:00:01"}) {
        EXPECT_FALSE(MacAddress::parse(bad)) << bad;
    }
}

TEST(MacAddress, ParseRenderRoundTrip) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        MacAddress m;
        for (auto& o : m.octets) o = static_cast<std::uint8_t>(rng());
        EXPECT_EQ(MacAddress::parse(m.to_string()), m);
    }
}

TEST(TimeFormat, Examples) {
    EXPECT_TRUE(validate_time_format("13:45:07.000123"));
    EXPECT_TRUE(validate_time_format("00:00:00.000000"));
    EXPECT_TRUE(validate_time_format("23:59:59.999999"));
    EXPECT_FALSE(validate_time_format("13:45:07.12"));
    EXPECT_FALSE(validate_time_format("24:00:00.000000"));
    EXPECT_FALSE(validate_time_format("12:60:00.000000"));
    EXPECT_FALSE(validate_time_format("12:00:60.000000"));
    EXPECT_FALSE(validate_time_format("12:00:00,000000"));
    EXPECT_FALSE(validate_time_format("12:00:00.0000000"));
    EXPECT_FALSE(validate_time_format("2:00:00.000000"));
    EXPECT_FALSE(validate_time_format(" 12:00:00.000000"));
    EXPECT_FALSE(validate_time_format(""));
}

TEST(TimeFormat, TrueExactlyOnCanonicalRenderings) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5000; ++i) {
        auto t = MicroTimestamp::from_micros_of_day(static_cast<std::int64_t>(rng() % MicroTimestamp::kMicrosPerDay));
        auto s = t.to_string();
        EXPECT_TRUE(validate_time_format(s)) << s;
        auto parsed = MicroTimestamp::parse_strict(s);
        ASSERT_TRUE(parsed);
        EXPECT_EQ(*parsed, t);
        // any single-character mutation that still validates must render back identically
        auto m = s;
        m[rng() % m.size()] = static_cast<char>('0' + rng() % 11);
        if (validate_time_format(m)) EXPECT_EQ(MicroTimestamp::parse_strict(m)->to_string(), m);
    }
}

TEST(MicroTimestamp, Bounds) {
    EXPECT_THROW(MicroTimestamp(86400, 0), std::out_of_range);
    EXPECT_THROW(MicroTimestamp(0, 1'000'000), std::out_of_range);
    EXPECT_THROW(MicroTimestamp::from_micros_of_day(-1), std::out_of_range);
    EXPECT_THROW(MicroTimestamp::from_micros_of_day(MicroTimestamp::kMicrosPerDay), std::out_of_range);
    EXPECT_EQ(MicroTimestamp(86399, 999999).to_string(), "23:59:59.999999");
}

TEST(MicroTimestamp, LenientParse) {
    EXPECT_EQ(MicroTimestamp::parse_lenient("10:00:00.0002080")->micros_of_day(), 36'000'000'208);
    EXPECT_EQ(MicroTimestamp::parse_lenient("10:00:00,000208")->micros_of_day(), 36'000'000'208);
    EXPECT_EQ(MicroTimestamp::parse_lenient("10:00:00.000208999")->micros_of_day(), 36'000'000'208);
    EXPECT_EQ(MicroTimestamp::parse_lenient("9:00:00.5")->micros_of_day(), 32'400'500'000);
    EXPECT_EQ(MicroTimestamp::parse_lenient("10:00:01")->micros_of_day(), 36'001'000'000);
    EXPECT_FALSE(MicroTimestamp::parse_lenient("garbage"));
    EXPECT_FALSE(MicroTimestamp::parse_lenient("25:00:00.000000"));
    EXPECT_FALSE(MicroTimestamp::parse_lenient("10:00:00."));
}

TEST(TimestampDiff, Examples) {
    auto a = *MicroTimestamp::parse_strict("10:00:00.000215");
    auto b = *MicroTimestamp::parse_strict("10:00:00.000000");
    EXPECT_EQ(timestamp_diff_micros(a, b), 215);
    EXPECT_EQ(timestamp_diff_micros(a, a), 0);
    auto lo = *MicroTimestamp::parse_strict("00:00:00.000000");
    auto hi = *MicroTimestamp::parse_strict("23:59:59.999999");
    EXPECT_EQ(timestamp_diff_micros(lo, hi), -(86'400LL * 1'000'000 - 1));
}

TEST(TimestampDiff, Antisymmetric) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 5000; ++i) {
        auto a = MicroTimestamp::from_micros_of_day(static_cast<std::int64_t>(rng() % MicroTimestamp::kMicrosPerDay));
        auto b = MicroTimestamp::from_micros_of_day(static_cast<std::int64_t>(rng() % MicroTimestamp::kMicrosPerDay));
        EXPECT_EQ(timestamp_diff_micros(a, b) + timestamp_diff_micros(b, a), 0);
    }
}

TEST(AnomalyLabel, VerbatimStrings) {
    EXPECT_EQ(to_string(AnomalyLabel::SqnumAnomaly), "sqnum anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::StnumSqnumResetAnomaly), "stnum/sqnum reset anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::StnumDecreaseAnomaly), "stnum decrease anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::AttributeChangeAnomaly), "attribute change anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::GooseTimeFormatAnomaly), "time format anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::HighDataRateAnomaly), "high data rate anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::DataGapAnomaly), "data gap anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::DataChangeAnomaly), "data change anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::SmpCntRangeAnomaly), "SmpCnt range anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::SmpCntIncreaseAnomaly), "SmpCnt increase anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::SmpCntDecreaseAnomaly), "SmpCnt decrease anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::FieldConsistencyAnomaly), "Field consistency anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::SvTimeFormatAnomaly), "Time format anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::TimeIntervalAnomaly), "Time interval anomaly");
    EXPECT_EQ(to_string(AnomalyLabel::DataRateAnomaly), "Data rate anomaly");
}

TEST(AnomalyLabel, InjectiveAndParseable) {
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        auto l = static_cast<AnomalyLabel>(i);
        EXPECT_TRUE(seen.insert(to_string(l)).second);
        EXPECT_EQ(parse_label(to_string(l)), l);
        EXPECT_EQ(protocol_of(l), i < 8 ? Protocol::Goose : Protocol::Sv);
    }
    EXPECT_FALSE(parse_label("Sqnum anomaly"));
}

TEST(LabelSet, Operations) {
    LabelSet a{AnomalyLabel::SqnumAnomaly, AnomalyLabel::DataChangeAnomaly};
    EXPECT_EQ(a.size(), 2u);
    EXPECT_TRUE(a.contains(AnomalyLabel::SqnumAnomaly));
    EXPECT_FALSE(a.contains(AnomalyLabel::DataGapAnomaly));
    LabelSet b{AnomalyLabel::SqnumAnomaly};
    EXPECT_TRUE(a.includes(b));
    EXPECT_FALSE(b.includes(a));
    EXPECT_EQ((a & b), b);
    EXPECT_EQ((b | LabelSet{AnomalyLabel::DataChangeAnomaly}), a);
    a.erase(AnomalyLabel::SqnumAnomaly);
    EXPECT_EQ(a.to_strings(), std::vector<std::string>{"data change anomaly"});
    EXPECT_TRUE(LabelSet{}.empty());
}
