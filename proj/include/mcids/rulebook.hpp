#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcids/core.hpp"

namespace mcids {

/// One catalog recommendation: GR1-GR8 for GOOSE, SR1-SR8 for SV.
class RuleId {
public:
    /// Throws std::out_of_range unless 1 <= ordinal <= 8.
    RuleId(Protocol protocol, int ordinal);

    /// "GR3", "sr8", ... Case-insensitive.
    static std::optional<RuleId> parse(std::string_view text);

    Protocol protocol() const noexcept { return protocol_; }
    int ordinal() const noexcept { return ordinal_; }
    std::string to_string() const;

    auto operator<=>(const RuleId&) const = default;

private:
    Protocol protocol_;
    int ordinal_;
};

/// All sixteen catalog ids, GOOSE first, in ordinal order.
const std::vector<RuleId>& all_rules();

enum class TrainingLevel : std::uint8_t { Without, Partial, Full };

std::string_view to_string(TrainingLevel level);
std::optional<TrainingLevel> parse_training_level(std::string_view text);

/// Set of active rules for one protocol.
class RuleSet {
public:
    explicit RuleSet(Protocol protocol) : protocol_(protocol) {}

    /// Throws std::invalid_argument if an id belongs to another protocol.
    RuleSet(Protocol protocol, std::initializer_list<int> ordinals);

    static RuleSet all(Protocol protocol);

    /// Throws std::invalid_argument on a protocol mismatch.
    void insert(RuleId id);
    void erase(RuleId id);
    bool contains(RuleId id) const noexcept;
    bool contains(int ordinal) const noexcept {
        return ordinal >= 1 && ordinal <= 8 && (mask_ & (1u << (ordinal - 1))) != 0;
    }

    Protocol protocol() const noexcept { return protocol_; }
    bool empty() const noexcept { return mask_ == 0; }
    std::size_t size() const noexcept;
    std::vector<RuleId> ids() const;

    /// True when every member of other is a member of this set.
    bool includes(const RuleSet& other) const noexcept {
        return protocol_ == other.protocol_ && (mask_ & other.mask_) == other.mask_;
    }

    bool operator==(const RuleSet&) const = default;

private:
    Protocol protocol_;
    std::uint8_t mask_ = 0;
};

/// Default membership: Without is empty, Partial holds ordinals 1-5, Full all 8.
RuleSet rules_for_level(TrainingLevel level, Protocol protocol);

/// Label a rule emits. SR2 and SR8 share "SmpCnt increase anomaly".
AnomalyLabel label_for(RuleId id);

/// Rules whose activity controls the label.
std::vector<RuleId> rules_for_label(AnomalyLabel label);

/// Labels reachable under the rule set.
LabelSet enabled_labels(const RuleSet& rules);

/// Numeric constants behind the time-based rules. Defaults are the catalog values.
struct Thresholds {
    std::uint32_t goose_burst_count = 10;        // more than this many ...
    std::int64_t goose_burst_window_us = 10;     // ... within this many µs
    std::int64_t goose_gap_us = 10'000'000;      // strictly longer gap is anomalous
    std::int64_t sv_interval_min_us = 200;       // inclusive
    std::int64_t sv_interval_max_us = 215;       // inclusive
    std::uint32_t sv_burst_count = 12;
    std::int64_t sv_burst_window_us = 2083;

    bool operator==(const Thresholds&) const = default;
};

struct RuleDescription {
    std::string condition;
    AnomalyLabel label;

    /// "<condition> → <label>"
    std::string to_string() const;
};

RuleDescription describe_rule(RuleId id, const Thresholds& thresholds = {});

/// Level membership table. Starts at the defaults of rules_for_level and can
/// be overridden per (protocol, level).
class Rulebook {
public:
    Rulebook();

    const RuleSet& level(TrainingLevel level, Protocol protocol) const;
    void set_level(TrainingLevel level, RuleSet rules);

private:
    std::array<RuleSet, 6> levels_;
};

}  // namespace mcids
