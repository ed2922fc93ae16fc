#pragma once

#include <optional>
#include <string_view>

#include "mcids/rulebook.hpp"

namespace mcids {

enum class DetectorMode : std::uint8_t {
    /// Compare each record with the record right before it in the capture.
    Strict,
    /// GOOSE: keep separate state per (SM, DM, APPID) publisher.
    /// SV: check field consistency against the first record of the stream.
    PerStream,
};

std::string_view to_string(DetectorMode mode);
std::optional<DetectorMode> parse_detector_mode(std::string_view text);

struct DetectorOptions {
    RuleSet rules;
    Thresholds thresholds{};
    DetectorMode mode = DetectorMode::Strict;
    /// GOOSE only: evaluate the data-change rule on records whose data
    /// changed, instead of on retransmissions.
    bool gr8_literal = false;

    explicit DetectorOptions(RuleSet r) : rules(r) {}
};

}  // namespace mcids
