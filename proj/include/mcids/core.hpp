#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcids {

enum class Protocol : std::uint8_t { Goose, Sv };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view text);

inline constexpr std::uint16_t kGooseEtherType = 0x88B8;
inline constexpr std::uint16_t kSvEtherType = 0x88BA;

/// Largest compliant SV sample counter; the counter wraps to 0 after it.
inline constexpr std::uint16_t kSmpCntMax = 4799;

struct MacAddress {
    std::array<std::uint8_t, 6> octets{};

    /// Accepts colon-, dash- or space-separated hex octets, any case.
    static std::optional<MacAddress> parse(std::string_view text);

    /// Lowercase colon-separated hex, e.g. "01:0c:cd:01:00:03".
    std::string to_string() const;

    auto operator<=>(const MacAddress&) const = default;
};

/// Wall-clock time of day at microsecond resolution. No calendar date.
class MicroTimestamp {
public:
    static constexpr std::int64_t kMicrosPerSecond = 1'000'000;
    static constexpr std::int64_t kSecondsPerDay = 86'400;
    static constexpr std::int64_t kMicrosPerDay = kSecondsPerDay * kMicrosPerSecond;

    constexpr MicroTimestamp() = default;

    /// Throws std::out_of_range unless seconds < 86400 and micros < 1e6.
    MicroTimestamp(std::uint32_t seconds_of_day, std::uint32_t microseconds);

    /// Throws std::out_of_range outside [0, kMicrosPerDay).
    static MicroTimestamp from_micros_of_day(std::int64_t micros);

    /// Exactly HH:MM:SS.ssssss.
    static std::optional<MicroTimestamp> parse_strict(std::string_view text);

    /// H:MM:SS with an optional '.' or ',' fraction of any width. Digits past
    /// the sixth fractional place are truncated.
    static std::optional<MicroTimestamp> parse_lenient(std::string_view text);

    constexpr std::uint32_t seconds_of_day() const noexcept { return seconds_; }
    constexpr std::uint32_t microseconds() const noexcept { return micros_; }
    constexpr std::int64_t micros_of_day() const noexcept {
        return std::int64_t{seconds_} * kMicrosPerSecond + micros_;
    }

    /// Canonical HH:MM:SS.ssssss rendering.
    std::string to_string() const;

    auto operator<=>(const MicroTimestamp&) const = default;

private:
    std::uint32_t seconds_ = 0;
    std::uint32_t micros_ = 0;
};

/// a - b in microseconds.
constexpr std::int64_t timestamp_diff_micros(MicroTimestamp a, MicroTimestamp b) noexcept {
    return a.micros_of_day() - b.micros_of_day();
}

/// True iff raw is HH:MM:SS.ssssss with HH 00-23, MM and SS 00-59.
bool validate_time_format(std::string_view raw) noexcept;

struct GooseRecord {
    MicroTimestamp time;
    MacAddress dm;
    MacAddress sm;
    std::uint16_t ethertype = kGooseEtherType;
    std::uint16_t appid = 0;
    std::string dataset;
    std::string goid;
    std::uint32_t stnum = 0;
    std::uint32_t sqnum = 0;
    bool data1 = false;
    bool data2 = false;

    bool operator==(const GooseRecord&) const = default;
};

struct SvRecord {
    MicroTimestamp time;
    MacAddress dm;
    MacAddress sm;
    std::uint16_t ethertype = kSvEtherType;
    std::uint16_t appid = 0;
    std::string svid;
    std::uint16_t smpcnt = 0;

    bool operator==(const SvRecord&) const = default;
};

/// A record as it appeared in a log: the parsed fields plus the original
/// time text. When the text could not be read as a time of day at all,
/// time_known is false and record.time holds 00:00:00.000000.
template <class Record>
struct Entry {
    Record record;
    std::string raw_time;
    bool time_known = true;

    bool operator==(const Entry&) const = default;
};

using GooseEntry = Entry<GooseRecord>;
using SvEntry = Entry<SvRecord>;

/// Wraps a record with its canonical time text.
template <class Record>
Entry<Record> make_entry(Record record) {
    auto text = record.time.to_string();
    return Entry<Record>{std::move(record), std::move(text), true};
}

enum class AnomalyLabel : std::uint8_t {
    // GOOSE
    SqnumAnomaly,
    StnumSqnumResetAnomaly,
    StnumDecreaseAnomaly,
    AttributeChangeAnomaly,
    GooseTimeFormatAnomaly,
    HighDataRateAnomaly,
    DataGapAnomaly,
    DataChangeAnomaly,
    // SV
    SmpCntRangeAnomaly,
    SmpCntIncreaseAnomaly,
    SmpCntDecreaseAnomaly,
    FieldConsistencyAnomaly,
    SvTimeFormatAnomaly,
    TimeIntervalAnomaly,
    DataRateAnomaly,
};

inline constexpr std::size_t kLabelCount = 15;

std::string_view to_string(AnomalyLabel label);
std::optional<AnomalyLabel> parse_label(std::string_view text);
Protocol protocol_of(AnomalyLabel label);

/// Small value set of AnomalyLabel; iterates in enumeration order.
class LabelSet {
public:
    constexpr LabelSet() = default;
    constexpr LabelSet(std::initializer_list<AnomalyLabel> labels) {
        for (auto l : labels) insert(l);
    }

    constexpr void insert(AnomalyLabel l) noexcept { bits_ |= bit(l); }
    constexpr void erase(AnomalyLabel l) noexcept { bits_ &= static_cast<std::uint16_t>(~bit(l)); }
    constexpr bool contains(AnomalyLabel l) const noexcept { return (bits_ & bit(l)) != 0; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    std::size_t size() const noexcept;

    /// True when every label of other is also in this set.
    constexpr bool includes(LabelSet other) const noexcept {
        return (bits_ & other.bits_) == other.bits_;
    }

    constexpr LabelSet& operator|=(LabelSet o) noexcept {
        bits_ |= o.bits_;
        return *this;
    }
    friend constexpr LabelSet operator|(LabelSet a, LabelSet b) noexcept { return a |= b; }
    friend constexpr LabelSet operator&(LabelSet a, LabelSet b) noexcept {
        LabelSet r;
        r.bits_ = a.bits_ & b.bits_;
        return r;
    }

    std::vector<AnomalyLabel> to_vector() const;
    std::vector<std::string> to_strings() const;

    constexpr std::uint16_t bits() const noexcept { return bits_; }
    bool operator==(const LabelSet&) const = default;

private:
    static constexpr std::uint16_t bit(AnomalyLabel l) noexcept {
        return static_cast<std::uint16_t>(1u << static_cast<unsigned>(l));
    }
    std::uint16_t bits_ = 0;
};

/// Publisher identity used to key per-stream state and reports.
struct StreamKey {
    MacAddress sm;
    MacAddress dm;
    std::uint16_t appid = 0;

    auto operator<=>(const StreamKey&) const = default;
};

StreamKey stream_key(const GooseRecord& r);
StreamKey stream_key(const SvRecord& r);

struct Finding {
    std::size_t index = 0;
    LabelSet labels;
    StreamKey stream;

    bool operator==(const Finding&) const = default;
};

}  // namespace mcids
