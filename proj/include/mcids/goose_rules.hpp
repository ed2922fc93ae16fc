#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mcids/core.hpp"
#include "mcids/detector.hpp"

namespace mcids {

/// Streaming GOOSE checker for one publisher stream. Feed records in
/// capture order. Not thread-safe; one instance per stream.
class GooseDetector {
public:
    /// Throws std::invalid_argument if options.rules is not a GOOSE rule set.
    explicit GooseDetector(DetectorOptions options);

    /// Labels the record against the state and then advances the state.
    /// Throws OrderError when the time is earlier than the last known time.
    LabelSet process(const GooseEntry& entry);
    LabelSet process(const GooseRecord& record, std::string_view raw_time, bool time_known = true);

    /// Records processed so far.
    std::size_t processed() const noexcept { return processed_; }
    const DetectorOptions& options() const noexcept { return options_; }

private:
    DetectorOptions options_;
    std::optional<GooseRecord> prev_;
    bool prev_time_known_ = false;
    std::optional<std::int64_t> last_known_us_;
    std::deque<std::int64_t> window_;
    std::size_t processed_ = 0;
};

/// Runs a detector over the whole list. One Finding per record with a
/// non-empty label set, in record order. OrderError carries the list index.
std::vector<Finding> detect_goose_stream(std::span<const GooseEntry> entries,
                                         const DetectorOptions& options);

/// Per-record label sets instead of sparse findings.
std::vector<LabelSet> label_goose_stream(std::span<const GooseEntry> entries,
                                         const DetectorOptions& options);

}  // namespace mcids
