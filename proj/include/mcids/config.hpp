#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcids/detector.hpp"
#include "mcids/rulebook.hpp"

namespace mcids {

/// Settings read from a run configuration file. Only keys present in the
/// file are set; the caller layers them over its own defaults.
///
///   # comment
///   seed = 7
///   detector.mode = "per-stream"
///   detector.gr8_literal = true
///   goose.partial = [1, 2, 3, 4, 5]      # or ["GR1", "GR2", ...]
///   sv.full = [1, 2, 3, 4, 5, 6, 7, 8]
///   thresholds.goose_gap_us = 10000000
///
/// Threshold keys are the Thresholds member names.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<DetectorMode> mode;
    std::optional<bool> gr8_literal;
    std::vector<RuleSet> levels[3];  // at most one per protocol, indexed by TrainingLevel
    Thresholds thresholds;
    std::vector<std::string> threshold_keys;

    /// Copies every present level override into `book`.
    void apply(Rulebook& book) const;
    /// Copies every present threshold key into `t`.
    void apply(Thresholds& t) const;
};

/// Throws ConfigError with the line number on any malformed line or unknown key.
ConfigOverrides parse_config(std::string_view text);
ConfigOverrides load_config(const std::string& path);

/// key=value rendering of the thresholds, one per line, for metadata echo.
std::vector<std::pair<std::string, std::int64_t>> threshold_items(const Thresholds& t);

}  // namespace mcids
