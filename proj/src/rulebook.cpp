#include "mcids/rulebook.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace mcids {

RuleId::RuleId(Protocol protocol, int ordinal) : protocol_(protocol), ordinal_(ordinal) {
    if (ordinal < 1 || ordinal > 8) throw std::out_of_range("rule ordinal must be 1..8");
}

std::optional<RuleId> RuleId::parse(std::string_view text) {
    if (text.size() != 3) return std::nullopt;
    char p = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    char r = static_cast<char>(std::toupper(static_cast<unsigned char>(text[1])));
    if (r != 'R' || (p != 'G' && p != 'S')) return std::nullopt;
    if (text[2] < '1' || text[2] > '8') return std::nullopt;
    return RuleId(p == 'G' ? Protocol::Goose : Protocol::Sv, text[2] - '0');
}

std::string RuleId::to_string() const {
    return std::string(protocol_ == Protocol::Goose ? "GR" : "SR") + std::to_string(ordinal_);
}

const std::vector<RuleId>& all_rules() {
    static const std::vector<RuleId> ids = [] {
        std::vector<RuleId> v;
        for (auto p : {Protocol::Goose, Protocol::Sv}) {
            for (int i = 1; i <= 8; ++i) v.emplace_back(p, i);
        }
        return v;
    }();
    return ids;
}

std::string_view to_string(TrainingLevel level) {
    switch (level) {
        case TrainingLevel::Without: return "without";
        case TrainingLevel::Partial: return "partial";
        case TrainingLevel::Full: return "full";
    }
    return "?";
}

std::optional<TrainingLevel> parse_training_level(std::string_view text) {
    if (text == "without" || text == "WT") return TrainingLevel::Without;
    if (text == "partial" || text == "PT") return TrainingLevel::Partial;
    if (text == "full" || text == "FT") return TrainingLevel::Full;
    return std::nullopt;
}

RuleSet::RuleSet(Protocol protocol, std::initializer_list<int> ordinals) : protocol_(protocol) {
    for (int o : ordinals) insert(RuleId(protocol, o));
}

RuleSet RuleSet::all(Protocol protocol) {
    return RuleSet(protocol, {1, 2, 3, 4, 5, 6, 7, 8});
}

void RuleSet::insert(RuleId id) {
    if (id.protocol() != protocol_) {
        throw std::invalid_argument("rule " + id.to_string() + " does not match the set's protocol");
    }
    mask_ = static_cast<std::uint8_t>(mask_ | (1u << (id.ordinal() - 1)));
}

void RuleSet::erase(RuleId id) {
    if (id.protocol() != protocol_) return;
    mask_ = static_cast<std::uint8_t>(mask_ & ~(1u << (id.ordinal() - 1)));
}

bool RuleSet::contains(RuleId id) const noexcept {
    return id.protocol() == protocol_ && contains(id.ordinal());
}

std::size_t RuleSet::size() const noexcept {
    return static_cast<std::size_t>(std::popcount(mask_));
}

std::vector<RuleId> RuleSet::ids() const {
    std::vector<RuleId> out;
    for (int i = 1; i <= 8; ++i) {
        if (contains(i)) out.emplace_back(protocol_, i);
    }
    return out;
}

RuleSet rules_for_level(TrainingLevel level, Protocol protocol) {
    switch (level) {
        case TrainingLevel::Without: return RuleSet(protocol);
        case TrainingLevel::Partial: return RuleSet(protocol, {1, 2, 3, 4, 5});
        case TrainingLevel::Full: return RuleSet::all(protocol);
    }
    return RuleSet(protocol);
}

AnomalyLabel label_for(RuleId id) {
    using L = AnomalyLabel;
    static constexpr std::array<L, 8> goose = {
        L::SqnumAnomaly,           L::StnumSqnumResetAnomaly, L::StnumDecreaseAnomaly,
        L::AttributeChangeAnomaly, L::GooseTimeFormatAnomaly, L::HighDataRateAnomaly,
        L::DataGapAnomaly,         L::DataChangeAnomaly,
    };
    static constexpr std::array<L, 8> sv = {
        L::SmpCntRangeAnomaly,      L::SmpCntIncreaseAnomaly, L::SmpCntDecreaseAnomaly,
        L::FieldConsistencyAnomaly, L::SvTimeFormatAnomaly,   L::TimeIntervalAnomaly,
        L::DataRateAnomaly,         L::SmpCntIncreaseAnomaly,
    };
    auto i = static_cast<std::size_t>(id.ordinal() - 1);
    return id.protocol() == Protocol::Goose ? goose[i] : sv[i];
}

std::vector<RuleId> rules_for_label(AnomalyLabel label) {
    std::vector<RuleId> out;
    for (const auto& id : all_rules()) {
        if (label_for(id) == label) out.push_back(id);
    }
    return out;
}

LabelSet enabled_labels(const RuleSet& rules) {
    LabelSet out;
    for (const auto& id : rules.ids()) out.insert(label_for(id));
    return out;
}

std::string RuleDescription::to_string() const {
    return condition + " → " + std::string(mcids::to_string(label));
}

RuleDescription describe_rule(RuleId id, const Thresholds& t) {
    auto label = label_for(id);
    auto n = [](auto v) { return std::to_string(v); };
    std::string condition;
    if (id.protocol() == Protocol::Goose) {
        switch (id.ordinal()) {
            case 1: condition = "same DM/SM and unchanged data: sqNum must grow by exactly 1"; break;
            case 2: condition = "data1/data2 changed: stNum must grow by 1 and sqNum reset to 0"; break;
            case 3: condition = "same DM/SM: stNum never decreases"; break;
            case 4: condition = "DM, SM, type, APPID, dataset and goID never change"; break;
            case 5: condition = "time column format HH:MM:SS.ssssss"; break;
            case 6:
                condition = "more than " + n(t.goose_burst_count) + " packets within " +
                            n(t.goose_burst_window_us) + " µs";
                break;
            case 7: {
                char buf[64];
                std::snprintf(buf, sizeof buf, "no packet for more than %g s",
                              static_cast<double>(t.goose_gap_us) / 1e6);
                condition = buf;
                break;
            }
            case 8: condition = "unchanged data: stNum stays and sqNum grows by exactly 1"; break;
        }
    } else {
        switch (id.ordinal()) {
            case 1: condition = "SmpCnt outside [0," + n(kSmpCntMax) + "]"; break;
            case 2: condition = "SmpCnt grows by 1 up to " + n(kSmpCntMax) + ", then wraps to 0"; break;
            case 3: condition = "SmpCnt never decreases before reaching " + n(kSmpCntMax); break;
            case 4: condition = "DM, SM, type, APPID and svID never change"; break;
            case 5: condition = "time column format HH:MM:SS.ssssss"; break;
            case 6:
                condition = "inter-arrival outside [" + n(t.sv_interval_min_us) + ", " +
                            n(t.sv_interval_max_us) + "] µs";
                break;
            case 7:
                condition = "more than " + n(t.sv_burst_count) + " packets within " +
                            n(t.sv_burst_window_us) + " µs";
                break;
            case 8: condition = "SmpCnt grows by exactly 1 each sample"; break;
        }
    }
    return RuleDescription{std::move(condition), label};
}

namespace {

std::size_t slot(TrainingLevel level, Protocol protocol) {
    return static_cast<std::size_t>(level) * 2 + (protocol == Protocol::Goose ? 0 : 1);
}

}  // namespace

Rulebook::Rulebook()
    : levels_{rules_for_level(TrainingLevel::Without, Protocol::Goose),
              rules_for_level(TrainingLevel::Without, Protocol::Sv),
              rules_for_level(TrainingLevel::Partial, Protocol::Goose),
              rules_for_level(TrainingLevel::Partial, Protocol::Sv),
              rules_for_level(TrainingLevel::Full, Protocol::Goose),
              rules_for_level(TrainingLevel::Full, Protocol::Sv)} {}

const RuleSet& Rulebook::level(TrainingLevel level, Protocol protocol) const {
    return levels_[slot(level, protocol)];
}

void Rulebook::set_level(TrainingLevel level, RuleSet rules) {
    levels_[slot(level, rules.protocol())] = rules;
}

}  // namespace mcids
