#include "mcids/core.hpp"

#include <bit>
#include <cstdio>
#include <stdexcept>

namespace mcids {

std::string_view to_string(Protocol p) {
    return p == Protocol::Goose ? "goose" : "sv";
}

std::optional<Protocol> parse_protocol(std::string_view text) {
    if (text == "goose" || text == "GOOSE") return Protocol::Goose;
    if (text == "sv" || text == "SV") return Protocol::Sv;
    return std::nullopt;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads exactly n decimal digits at text[pos].
std::optional<std::uint32_t> read_digits(std::string_view text, std::size_t pos, std::size_t n) {
    if (pos + n > text.size()) return std::nullopt;
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char c = text[pos + i];
        if (!is_digit(c)) return std::nullopt;
        v = v * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return v;
}

}  // namespace

std::optional<MacAddress> MacAddress::parse(std::string_view text) {
    MacAddress mac;
    std::size_t pos = 0;
    char first_sep = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        if (i > 0) {
            if (pos >= text.size()) return std::nullopt;
            char sep = text[pos];
            if (sep != ':' && sep != '-' && sep != ' ') return std::nullopt;
            if (first_sep == 0) first_sep = sep;
            if (sep != first_sep) return std::nullopt;
            ++pos;
        }
        if (pos + 2 > text.size()) return std::nullopt;
        int hi = hex_value(text[pos]);
        int lo = hex_value(text[pos + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        mac.octets[i] = static_cast<std::uint8_t>(hi * 16 + lo);
        pos += 2;
    }
    if (pos != text.size()) return std::nullopt;
    return mac;
}

std::string MacAddress::to_string() const {
    char buf[18];
    std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1],
                  octets[2], octets[3], octets[4], octets[5]);
    return buf;
}

MicroTimestamp::MicroTimestamp(std::uint32_t seconds_of_day, std::uint32_t microseconds)
    : seconds_(seconds_of_day), micros_(microseconds) {
    if (seconds_of_day >= kSecondsPerDay) throw std::out_of_range("seconds-of-day >= 86400");
    if (microseconds >= kMicrosPerSecond) throw std::out_of_range("microseconds >= 1000000");
}

MicroTimestamp MicroTimestamp::from_micros_of_day(std::int64_t micros) {
    if (micros < 0 || micros >= kMicrosPerDay) throw std::out_of_range("time outside one day");
    return MicroTimestamp(static_cast<std::uint32_t>(micros / kMicrosPerSecond),
                          static_cast<std::uint32_t>(micros % kMicrosPerSecond));
}

std::optional<MicroTimestamp> MicroTimestamp::parse_strict(std::string_view text) {
    if (text.size() != 15 || text[2] != ':' || text[5] != ':' || text[8] != '.') {
        return std::nullopt;
    }
    auto h = read_digits(text, 0, 2);
    auto m = read_digits(text, 3, 2);
    auto s = read_digits(text, 6, 2);
    auto us = read_digits(text, 9, 6);
    if (!h || !m || !s || !us || *h > 23 || *m > 59 || *s > 59) return std::nullopt;
    return MicroTimestamp(*h * 3600 + *m * 60 + *s, *us);
}

std::optional<MicroTimestamp> MicroTimestamp::parse_lenient(std::string_view text) {
    std::size_t hour_digits = 0;
    while (hour_digits < text.size() && is_digit(text[hour_digits])) ++hour_digits;
    if (hour_digits < 1 || hour_digits > 2) return std::nullopt;
    auto h = read_digits(text, 0, hour_digits);
    std::size_t pos = hour_digits;
    if (pos >= text.size() || text[pos] != ':') return std::nullopt;
    auto m = read_digits(text, pos + 1, 2);
    pos += 3;
    if (pos >= text.size() || text[pos] != ':') return std::nullopt;
    auto s = read_digits(text, pos + 1, 2);
    pos += 3;
    if (!h || !m || !s || *h > 23 || *m > 59 || *s > 59) return std::nullopt;

    std::uint32_t micros = 0;
    if (pos < text.size()) {
        if (text[pos] != '.' && text[pos] != ',') return std::nullopt;
        ++pos;
        if (pos == text.size()) return std::nullopt;
        std::uint32_t scale = 100'000;
        for (; pos < text.size(); ++pos) {
            if (!is_digit(text[pos])) return std::nullopt;
            micros += static_cast<std::uint32_t>(text[pos] - '0') * scale;
            scale /= 10;
        }
    }
    return MicroTimestamp(*h * 3600 + *m * 60 + *s, micros);
}

std::string MicroTimestamp::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02u:%02u:%02u.%06u", seconds_ / 3600, (seconds_ / 60) % 60,
                  seconds_ % 60, micros_);
    return buf;
}

bool validate_time_format(std::string_view raw) noexcept {
    return MicroTimestamp::parse_strict(raw).has_value();
}

namespace {

constexpr std::array<std::string_view, kLabelCount> kLabelText = {
    "sqnum anomaly",
    "stnum/sqnum reset anomaly",
    "stnum decrease anomaly",
    "attribute change anomaly",
    "time format anomaly",
    "high data rate anomaly",
    "data gap anomaly",
    "data change anomaly",
    "SmpCnt range anomaly",
    "SmpCnt increase anomaly",
    "SmpCnt decrease anomaly",
    "Field consistency anomaly",
    "Time format anomaly",
    "Time interval anomaly",
    "Data rate anomaly",
};

}  // namespace

std::string_view to_string(AnomalyLabel label) {
    return kLabelText[static_cast<std::size_t>(label)];
}

std::optional<AnomalyLabel> parse_label(std::string_view text) {
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        if (kLabelText[i] == text) return static_cast<AnomalyLabel>(i);
    }
    return std::nullopt;
}

Protocol protocol_of(AnomalyLabel label) {
    return label <= AnomalyLabel::DataChangeAnomaly ? Protocol::Goose : Protocol::Sv;
}

std::size_t LabelSet::size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<AnomalyLabel> LabelSet::to_vector() const {
    std::vector<AnomalyLabel> out;
    for (std::size_t i = 0; i < kLabelCount; ++i) {
        auto l = static_cast<AnomalyLabel>(i);
        if (contains(l)) out.push_back(l);
    }
    return out;
}

std::vector<std::string> LabelSet::to_strings() const {
    std::vector<std::string> out;
    for (auto l : to_vector()) out.emplace_back(to_string(l));
    return out;
}

StreamKey stream_key(const GooseRecord& r) { return StreamKey{r.sm, r.dm, r.appid}; }
StreamKey stream_key(const SvRecord& r) { return StreamKey{r.sm, r.dm, r.appid}; }

}  // namespace mcids
